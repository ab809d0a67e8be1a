import json
import os

# Set test environment
os.environ["ENVIRONMENT"] = "test"
os.environ["HYPERGLUE_LOG_LEVEL"] = "DEBUG"

import pytest  # noqa: E402

from services.linf2.domain.geometry import HalfPlane  # noqa: E402
from services.linf2.domain.plane import LinfPlane  # noqa: E402
from services.s5_example.domain.example import s5_space  # noqa: E402
from services.s5_example.domain.models import S5Config  # noqa: E402
from shared.schemas import Tolerance, TrialConfig  # noqa: E402


@pytest.fixture
def tolerance():
    """Default two-tier tolerance."""
    return Tolerance()


@pytest.fixture
def plane():
    """The whole l-infinity plane."""
    return LinfPlane()


@pytest.fixture
def upper_plane():
    """The half-plane {xi_2 >= 0}."""
    return LinfPlane(HalfPlane.above_line(0.0))


@pytest.fixture
def diagonal_plane():
    """The half-plane {xi_2 >= xi_1}."""
    return LinfPlane(HalfPlane.above_line(1.0))


@pytest.fixture
def split_space():
    """Half-plane gluing with a=0, b=1, same orientation (not hyperconvex)."""
    return s5_space(S5Config(a=0.0, b=1.0))


@pytest.fixture
def flat_space():
    """Half-plane gluing with a=b=0.5, same orientation (isometric to the plane)."""
    return s5_space(S5Config(a=0.5, b=0.5))


@pytest.fixture
def reflected_diagonal_space():
    """Reflected gluing with a=b=1: both gluing lines are strongly convex."""
    return s5_space(S5Config(a=1.0, b=1.0, reflected=True))


@pytest.fixture
def quick_trials():
    """Small deterministic trial budget."""
    return TrialConfig(trials=20, seed=42)


@pytest.fixture
def write_config(tmp_path):
    """Write a RunConfig document and return its path."""

    def _write(data: dict, name: str = "run.json"):
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return path

    return _write

"""Random tight admissible ball families."""

import logging
import math
from typing import Optional

import numpy as np

from services.metric_core.domain.predicates import admissibility_scale
from services.metric_core.domain.spaces import BallFamily, MetricSpace
from shared.config import settings
from shared.schemas import Tolerance, TrialConfig

logger = logging.getLogger(__name__)


def sample_admissible_family(space: MetricSpace, cfg: TrialConfig, rng: np.random.Generator) -> BallFamily:
    """
    Random centers in the sampling box with radii rescaled so that the
    family is admissible and at least one pair is tight.
    """
    size = int(rng.integers(2, cfg.max_family_size + 1))
    centers = [space.sample_point(rng, cfg.box_half_width) for _ in range(size)]
    radii = rng.uniform(0.0, space.family_scale(cfg.box_half_width), size=size)
    family = BallFamily.of(centers, radii.tolist())

    scale = admissibility_scale(space, family)
    if scale > 0 and math.isfinite(scale):
        family = family.scaled(scale)
    return family


def repair_for_set(
    space: MetricSpace,
    target_set,
    family: BallFamily,
    tolerance: Optional[Tolerance] = None,
    rounds: Optional[int] = None,
) -> Optional[BallFamily]:
    """
    Adjust radii so that d(x_i, A) <= r_i while staying admissible and tight.

    Each round inflates deficient radii to d(x_i, A) and then shrinks all
    radii by the admissibility scale. Returns None when no fixpoint is
    reached within `rounds`.
    """
    eps = (tolerance or space.tolerance).eps_eq
    rounds = settings.repair_rounds if rounds is None else rounds
    needed = [target_set.distance(c) for c in family.centers]
    radii = list(family.radii)

    for round_index in range(rounds):
        radii = [max(r, d) for r, d in zip(radii, needed)]
        scale = admissibility_scale(space, family.with_radii(radii))
        if scale == 0.0 or scale >= 1.0 - eps:
            return family.with_radii(radii)

        shrunk = [r * scale for r in radii]
        if all(r >= d - eps for r, d in zip(shrunk, needed)):
            return family.with_radii([max(r, d) for r, d in zip(shrunk, needed)])
        radii = shrunk
        logger.debug(f"Radius repair round {round_index} shrank by {scale:.6f}")

    return None


def family_certificate(space: MetricSpace, family: BallFamily) -> dict:
    return {
        "centers": [space.encode_point(c) for c in family.centers],
        "radii": list(family.radii),
    }


def decode_family(space: MetricSpace, data: dict) -> BallFamily:
    return BallFamily.of([space.decode_point(c) for c in data["centers"]], data["radii"])

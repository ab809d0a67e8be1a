from .property_checks import (
    check_externally_hyperconvex,
    check_gated,
    check_hyperconvex,
    check_proximinal,
    check_strongly_convex,
    recheck_counterexample,
)
from .sampling import sample_admissible_family

__all__ = [
    "check_externally_hyperconvex",
    "check_gated",
    "check_hyperconvex",
    "check_proximinal",
    "check_strongly_convex",
    "recheck_counterexample",
    "sample_admissible_family",
]

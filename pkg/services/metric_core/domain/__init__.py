from .predicates import check_metric_axioms, interval_contains, pairwise_admissible
from .spaces import Ball, BallFamily, FiniteMetricSpace, FiniteSubset, MetricSpace

__all__ = [
    "check_metric_axioms",
    "interval_contains",
    "pairwise_admissible",
    "Ball",
    "BallFamily",
    "FiniteMetricSpace",
    "FiniteSubset",
    "MetricSpace",
]

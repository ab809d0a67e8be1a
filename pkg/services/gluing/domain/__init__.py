from .glued_metric import exact_distance_witness, gate, glued_dist, gated_dist_shortcut
from .model import GluedPoint, GluingChart, SheetSpec, Side
from .space import GluedSpace2, GluingSet
from .traces import TraceMethod, ball_trace, glued_family_feasible

__all__ = [
    "exact_distance_witness",
    "gate",
    "glued_dist",
    "gated_dist_shortcut",
    "GluedPoint",
    "GluingChart",
    "SheetSpec",
    "Side",
    "GluedSpace2",
    "GluingSet",
    "TraceMethod",
    "ball_trace",
    "glued_family_feasible",
]

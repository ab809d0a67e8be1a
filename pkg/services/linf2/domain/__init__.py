from .geometry import HalfPlane, Vec2, Window, linf_dist
from .piecewise import PiecewiseLinear, pl_minimize, pl_sublevel
from .plane import ConvexSet, LinfPlane
from .polygon import ConvexPolygon, ball_polygon, polygon_intersection, polygon_witness

__all__ = [
    "HalfPlane",
    "Vec2",
    "Window",
    "linf_dist",
    "PiecewiseLinear",
    "pl_minimize",
    "pl_sublevel",
    "ConvexSet",
    "LinfPlane",
    "ConvexPolygon",
    "ball_polygon",
    "polygon_intersection",
    "polygon_witness",
]

"""
Two half-planes of the l-infinity plane glued along their boundary lines,
and the three unit balls that decide whether the result is hyperconvex.
"""

import logging
from typing import Iterable, Optional

from services.checkers.domain.property_checks import check_hyperconvex
from services.gluing.domain.model import GluedPoint, SheetSpec, Side
from services.gluing.domain.space import GluedSpace2
from services.gluing.domain.traces import ball_trace
from services.linf2.domain.geometry import HalfPlane, Vec2, Window
from services.linf2.domain.polygon import ConvexPolygon, clip_all, hausdorff_estimate
from services.metric_core.domain.spaces import BallFamily
from services.s5_example.domain.models import PairWitness, S5Config, S5Report, S5TraceFormula, SweepRow
from shared.config import settings
from shared.errors import DomainError
from shared.schemas import Tolerance, TrialConfig
from shared.seeding import derive_seed

logger = logging.getLogger(__name__)

SOURCE_SHEET = 0
TARGET_SHEET = 1


def s5_space(cfg: S5Config, window: Optional[Window] = None, tolerance: Optional[Tolerance] = None) -> GluedSpace2:
    """Sheet 0 is H1, sheet 1 is H2."""
    sheets = [
        SheetSpec(slope=cfg.a, side=Side.ABOVE, reflected=cfg.reflected),
        SheetSpec(slope=cfg.b, side=Side.BELOW),
    ]
    return GluedSpace2(sheets, window, tolerance)


def s5_centers(cfg: S5Config) -> tuple[GluedPoint, GluedPoint, GluedPoint]:
    a, b = cfg.a, cfg.b
    if cfg.reflected:
        second = Vec2(0.0, S5TraceFormula.for_config(cfg).l - 1.0)
    else:
        second = Vec2(0.0, -b - 1.0)
    return (
        GluedPoint(SOURCE_SHEET, Vec2(0.0, 1.0 - a)),
        GluedPoint(TARGET_SHEET, second),
        GluedPoint(TARGET_SHEET, Vec2(2.0, b - 1.0)),
    )


def s5_family(cfg: S5Config) -> BallFamily:
    return BallFamily.of(list(s5_centers(cfg)), [1.0, 1.0, 1.0])


def s5_trace_formula(cfg: S5Config, space: Optional[GluedSpace2] = None) -> ConvexPolygon:
    """
    B(x1, 1) on H2 from the closed-form inequalities, clipped to H2 and the
    window. The reflected formula is singular at a = 1, where the engine
    trace is returned instead.
    """
    X = space or s5_space(cfg)
    formula = S5TraceFormula.for_config(cfg)
    if formula.singular:
        logger.debug("Reflected trace formula is singular at a = 1, using the engine trace")
        return ball_trace(X, s5_centers(cfg)[0], 1.0, TARGET_SHEET)

    planes = [HalfPlane.x_at_least(-1.0), HalfPlane.x_at_most(1.0)]
    if formula.reflected:
        planes += [HalfPlane.above_line(0.0, formula.l), HalfPlane.above_line(formula.m, -formula.q)]
    else:
        planes.append(HalfPlane.above_line(formula.slope, formula.intercept))
    return clip_all(X.sheet_polygon(TARGET_SHEET), planes)


def _pair_witness(X: GluedSpace2, family: BallFamily, i: int, j: int, tol: Tolerance) -> PairWitness:
    pair = BallFamily.of([family.centers[i], family.centers[j]], [family.radii[i], family.radii[j]])
    point = X.family_witness(pair, tol)
    if point is not None and any(X.distance(point, c) > r + tol.eps_feas for c, r in zip(pair.centers, pair.radii)):
        logger.warning(f"Pair witness {point} for balls {i}, {j} fails verification")
        point = None
    return PairWitness(first=i, second=j, point=None if point is None else point.encode())


def s5_counterexample(cfg: S5Config, tolerance: Optional[Tolerance] = None) -> S5Report:
    """
    Pairwise and triple intersections of the three unit balls, compared
    with the predicted phase: same orientation is hyperconvex iff a = b,
    reflected iff a = b is 0 or 1.
    """
    X = s5_space(cfg, tolerance=tolerance)
    tol = X.tolerance
    family = s5_family(cfg)
    X.window.check_data(*(c.coords for c in family.centers), radii=family.radii)

    pairwise = [_pair_witness(X, family, i, j, tol) for i, j in ((0, 1), (0, 2), (1, 2))]
    triple = X.family_witness(family, tol)

    formula = s5_trace_formula(cfg, X)
    engine = ball_trace(X, family.centers[0], 1.0, TARGET_SHEET)
    discrepancy = hausdorff_estimate(formula, engine)

    report = S5Report(
        config=cfg,
        centers=[c.encode() for c in family.centers],
        pairwise=pairwise,
        triple_empty=triple is None,
        triple_witness=None if triple is None else triple.encode(),
        predicted_hyperconvex=cfg.predicted_hyperconvex,
        observed_hyperconvex=triple is not None,
        trace_discrepancy=discrepancy,
        formula_fallback=S5TraceFormula.for_config(cfg).singular,
    )

    if report.formula_fallback:
        report.notes.append("reflected formula singular at a = 1; engine trace used")
    if discrepancy > tol.eps_feas:
        logger.warning(f"Trace formula differs from the engine trace by {discrepancy:.3e}")
        report.notes.append(f"trace discrepancy {discrepancy!r} above eps_feas")
    if not report.consistent:
        logger.warning(
            f"Observed hyperconvexity {report.observed_hyperconvex} disagrees with prediction "
            f"for a={cfg.a}, b={cfg.b}, {cfg.orientation}",
            extra={"a": cfg.a, "b": cfg.b, "orientation": cfg.orientation},
        )
        report.notes.append("mismatch with predicted phase")
    return report


def sweep_grid(step: float) -> list[float]:
    if not step > 0:
        raise DomainError(f"Sweep step must be positive, got {step}")
    count = int(round(1.0 / step))
    return [round(min(1.0, i * step), 10) for i in range(count + 1)]


def s5_phase_sweep(
    step: Optional[float] = None,
    trials: Optional[int] = None,
    seed: int = 0,
    orientations: Iterable[bool] = (False, True),
    tolerance: Optional[Tolerance] = None,
) -> list[SweepRow]:
    """
    Every grid cell with a <= b, in both orientations.

    A cell is observed hyperconvex when the three unit balls meet and
    check_hyperconvex (with the three balls injected as a candidate) finds
    no counterexample in `trials` sampled families.
    """
    step = settings.sweep_step if step is None else step
    trials = settings.sweep_trials if trials is None else trials
    grid = sweep_grid(step)
    rows = []

    for reflected in orientations:
        for i, a in enumerate(grid):
            for b in grid[i:]:
                cfg = S5Config(a=a, b=b, reflected=reflected)
                report = s5_counterexample(cfg, tolerance)
                trial_cfg = TrialConfig(trials=trials, seed=derive_seed(seed, "sweep", cfg.orientation, a, b))
                check = check_hyperconvex(s5_space(cfg, tolerance=tolerance), trial_cfg, candidates=[s5_family(cfg)])
                observed = report.observed_hyperconvex and check.passed
                consistent = report.pairwise_ok and observed == cfg.predicted_hyperconvex
                if not consistent:
                    logger.warning(f"Sweep mismatch at a={a}, b={b}, {cfg.orientation}")
                rows.append(
                    SweepRow(
                        a=a,
                        b=b,
                        orientation=cfg.orientation,
                        pairwise_ok=report.pairwise_ok,
                        triple_empty=report.triple_empty,
                        predicted=cfg.predicted_hyperconvex,
                        consistent=consistent,
                    )
                )

    mismatches = sum(not row.consistent for row in rows)
    logger.info(f"Phase sweep of {len(rows)} cells finished with {mismatches} mismatches")
    return rows

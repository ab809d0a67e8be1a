"""
Randomized falsifiers for hyperconvexity, strong convexity, gatedness,
external hyperconvexity and proximinality.

A PASS verdict only means that no counterexample turned up in the trials
that were run. A FALSIFIED verdict carries a certificate from which
recheck_counterexample reproduces the failure without any randomness.
"""

import logging
from typing import Iterable, Optional

import numpy as np

from services.checkers.domain.sampling import (
    decode_family,
    family_certificate,
    repair_for_set,
    sample_admissible_family,
)
from services.gluing.domain.glued_metric import gate
from services.gluing.domain.space import GluingSet
from services.linf2.domain.geometry import to_rotated
from services.linf2.domain.plane import LinfPlane
from services.metric_core.domain.predicates import gate_residual, interval_contains, pairwise_admissible
from services.metric_core.domain.spaces import BallFamily, FiniteMetricSpace, MetricSpace
from shared.config import settings
from shared.errors import DomainError, NoGateError
from shared.schemas import PropertyReport, Tolerance, TrialConfig, Verdict
from shared.seeding import trial_rng

logger = logging.getLogger(__name__)

PASS_NOTE = "pass means no counterexample in the trials run, not a proof"
PROPOSAL_BATCH = 2000


def _falsified(
    name: str,
    cfg: TrialConfig,
    trials_run: int,
    skipped: int,
    counterexample: dict,
    statistics: Optional[dict] = None,
) -> PropertyReport:
    logger.info(
        f"{name}: falsified after {trials_run} trials",
        extra={"property": name, "verdict": Verdict.FALSIFIED.value, "seed": cfg.seed},
    )
    return PropertyReport(
        property_name=name,
        verdict=Verdict.FALSIFIED,
        trials_run=trials_run,
        trials_skipped=skipped,
        seed=cfg.seed,
        counterexample=counterexample,
        statistics=statistics or {},
    )


def _passed(
    name: str,
    cfg: TrialConfig,
    trials_run: int,
    skipped: int,
    statistics: Optional[dict] = None,
) -> PropertyReport:
    logger.info(
        f"{name}: no counterexample in {trials_run} trials ({skipped} skipped)",
        extra={"property": name, "verdict": Verdict.PASS.value, "seed": cfg.seed},
    )
    if skipped:
        logger.warning(f"{name}: {skipped} of {trials_run} trials were skipped")
    return PropertyReport(
        property_name=name,
        verdict=Verdict.PASS,
        trials_run=trials_run,
        trials_skipped=skipped,
        seed=cfg.seed,
        statistics=statistics or {},
        notes=[PASS_NOTE],
    )


def check_hyperconvex(
    space: MetricSpace,
    cfg: Optional[TrialConfig] = None,
    candidates: Iterable[BallFamily] = (),
    tolerance: Optional[Tolerance] = None,
) -> PropertyReport:
    """
    Look for an admissible ball family without a common point.

    Candidate families are tested first, then cfg.trials sampled tight
    families of size 2..cfg.max_family_size.
    """
    cfg = cfg or TrialConfig()
    tol = tolerance or space.tolerance
    name = "hyperconvex"
    trials_run, skipped = 0, 0
    sizes = []

    for index, family in enumerate(candidates):
        family = space.validate_family(family)
        trials_run += 1
        if not pairwise_admissible(space, family, tol):
            logger.warning(f"Candidate family {index} is not admissible, skipping")
            skipped += 1
            continue
        if space.family_witness(family, tol) is None:
            return _falsified(name, cfg, trials_run, skipped, {
                "source": "candidate",
                "index": index,
                "space": space.describe(),
                "family": family_certificate(space, family),
            })

    for trial in range(cfg.trials):
        rng = trial_rng(cfg.seed, name, trial)
        family = sample_admissible_family(space, cfg, rng)
        sizes.append(len(family))
        trials_run += 1
        if space.family_witness(family, tol) is None:
            return _falsified(name, cfg, trials_run, skipped, {
                "source": "sampled",
                "trial": trial,
                "space": space.describe(),
                "family": family_certificate(space, family),
            })
        logger.debug(f"Trial {trial}: family of {len(family)} balls has a common point")

    statistics = {"mean_family_size": float(np.mean(sizes)) if sizes else 0.0}
    return _passed(name, cfg, trials_run, skipped, statistics)


def _interval_point(space: MetricSpace, x, y, rng: np.random.Generator, budget: int, tol: Tolerance, half_width: float):
    """
    A random point of I(x, y), or None when the proposal budget runs out.

    The plane samples its intervals exactly as boxes in the rotated frame,
    clipped to the region and the window. Other spaces use rejection
    sampling.
    """
    d = space.distance(x, y)
    if d == 0.0:
        return x

    if isinstance(space, LinfPlane):
        ends = np.array([to_rotated(x), to_rotated(y)])
        lo, hi = ends.min(axis=0), ends.max(axis=0)
        used = 0
        while used < budget:
            count = min(PROPOSAL_BATCH, budget - used)
            used += count
            uv = rng.uniform(lo, hi, size=(count, 2))
            z = np.column_stack([uv[:, 0] + uv[:, 1], uv[:, 0] - uv[:, 1]])
            z = z[np.max(np.abs(z), axis=1) <= space.window.radius]
            if space.region is not None:
                slack = tol.eps_feas * space.region.normal_length
                z = z[z @ np.array(space.region.u) <= space.region.c + slack]
            if len(z):
                return space.validate_point(z[0])
        return None

    if isinstance(space, FiniteMetricSpace):
        row = space.dist[x] + space.dist[:, y]
        hits = np.flatnonzero(np.abs(row - d) <= tol.eps_eq)
        return int(hits[rng.integers(hits.size)])

    for _ in range(budget):
        z = space.sample_point(rng, half_width)
        if interval_contains(space, x, y, z, tol):
            return z
    return None


def check_strongly_convex(
    space: MetricSpace,
    target_set,
    cfg: Optional[TrialConfig] = None,
    tolerance: Optional[Tolerance] = None,
) -> PropertyReport:
    """Look for x, y in A and z in I(x, y) with z outside A."""
    cfg = cfg or TrialConfig()
    tol = tolerance or space.tolerance
    name = "strongly_convex"
    skipped = 0

    for trial in range(cfg.trials):
        rng = trial_rng(cfg.seed, name, trial)
        x = target_set.sample(rng, cfg.box_half_width)
        y = target_set.sample(rng, cfg.box_half_width)
        z = _interval_point(space, x, y, rng, settings.rejection_budget, tol, cfg.box_half_width)
        if z is None:
            skipped += 1
            logger.debug(f"Trial {trial}: no interval point found within the proposal budget")
            continue
        if not target_set.contains(z, tol.eps_feas):
            return _falsified(name, cfg, trial + 1, skipped, {
                "trial": trial,
                "space": space.describe(),
                "set": target_set.descriptor(),
                "x": space.encode_point(x),
                "y": space.encode_point(y),
                "z": space.encode_point(z),
            })

    return _passed(name, cfg, cfg.trials, skipped, {"skip_rate": skipped / cfg.trials})


def check_externally_hyperconvex(
    space: MetricSpace,
    target_set,
    cfg: Optional[TrialConfig] = None,
    tolerance: Optional[Tolerance] = None,
) -> PropertyReport:
    """Look for an admissible family reaching A whose balls have no common point in A."""
    cfg = cfg or TrialConfig()
    tol = tolerance or space.tolerance
    name = "externally_hyperconvex"
    skipped = 0

    for trial in range(cfg.trials):
        rng = trial_rng(cfg.seed, name, trial)
        family = repair_for_set(space, target_set, sample_admissible_family(space, cfg, rng), tol)
        if family is None:
            skipped += 1
            logger.debug(f"Trial {trial}: radius repair did not settle")
            continue
        if target_set.family_point(family, tol) is None:
            return _falsified(name, cfg, trial + 1, skipped, {
                "trial": trial,
                "space": space.describe(),
                "set": target_set.descriptor(),
                "family": family_certificate(space, family),
            })

    return _passed(name, cfg, cfg.trials, skipped, {"skip_rate": skipped / cfg.trials})


def _gate_failure(space: MetricSpace, target_set, x, rng: np.random.Generator, cfg: TrialConfig, tol: Tolerance):
    """Encoded candidate, sample and residual when the nearest point of A to x is not a gate, else None."""
    if isinstance(target_set, GluingSet):
        try:
            gate(target_set.space, x, seed=int(rng.integers(2**31)))
        except NoGateError as e:
            return {"candidate": e.witness["candidate"], "a": e.witness["sample"], "residual": e.witness["residual"]}
        return None

    candidate = target_set.nearest(x)
    for _ in range(settings.gate_samples):
        a = target_set.sample(rng, cfg.box_half_width)
        residual = gate_residual(space, x, candidate, a)
        if abs(residual) > tol.eps_eq:
            return {"candidate": space.encode_point(candidate), "a": space.encode_point(a), "residual": residual}
    return None


def check_gated(
    space: MetricSpace,
    target_set,
    cfg: Optional[TrialConfig] = None,
    tolerance: Optional[Tolerance] = None,
    cross_check: bool = True,
) -> PropertyReport:
    """
    Look for a point whose nearest point in A is not a gate.

    With cross_check the verdict is compared with check_strongly_convex on
    the same set, since a closed set is gated iff it is strongly convex;
    disagreement is recorded as an inconsistency. The gluing set of a glued
    space goes through gate(), which widens its sample on borderline
    residuals.
    """
    cfg = cfg or TrialConfig()
    tol = tolerance or space.tolerance
    name = "gated"
    report = None

    for trial in range(cfg.trials):
        rng = trial_rng(cfg.seed, name, trial)
        x = space.sample_point(rng, cfg.box_half_width)
        failure = _gate_failure(space, target_set, x, rng, cfg, tol)
        if failure is not None:
            report = _falsified(name, cfg, trial + 1, 0, {
                "trial": trial,
                "space": space.describe(),
                "set": target_set.descriptor(),
                "x": space.encode_point(x),
                **failure,
            })
            break

    if report is None:
        report = _passed(name, cfg, cfg.trials, 0)

    if cross_check:
        convex = check_strongly_convex(space, target_set, cfg, tol)
        consistent = convex.verdict == report.verdict
        report.statistics["consistent_with_strong_convexity"] = 1.0 if consistent else 0.0
        if not consistent:
            logger.warning(
                f"Gatedness verdict {report.verdict.value} disagrees with strong convexity verdict "
                f"{convex.verdict.value}",
                extra={"property": name, "seed": cfg.seed},
            )
            report.notes.append(
                f"inconsistent: strong convexity check returned {convex.verdict.value}"
            )

    return report


def check_proximinal(
    space: MetricSpace,
    target_set,
    cfg: Optional[TrialConfig] = None,
    tolerance: Optional[Tolerance] = None,
) -> PropertyReport:
    """Look for a point whose distance to A is not attained in A."""
    cfg = cfg or TrialConfig()
    tol = tolerance or space.tolerance
    name = "proximinal"

    for trial in range(cfg.trials):
        rng = trial_rng(cfg.seed, name, trial)
        x = space.sample_point(rng, cfg.box_half_width)
        if not _attains_distance(space, target_set, x, tol):
            return _falsified(name, cfg, trial + 1, 0, {
                "trial": trial,
                "space": space.describe(),
                "set": target_set.descriptor(),
                "x": space.encode_point(x),
                "nearest": space.encode_point(target_set.nearest(x)),
                "distance": target_set.distance(x),
            })

    return _passed(name, cfg, cfg.trials, 0)


def _attains_distance(space: MetricSpace, target_set, x, tol: Tolerance) -> bool:
    s = target_set.distance(x)
    p = target_set.nearest(x)
    return target_set.contains(p, tol.eps_feas) and abs(space.distance(x, p) - s) <= tol.eps_feas


def recheck_counterexample(
    space: MetricSpace,
    report: PropertyReport,
    target_set=None,
    tolerance: Optional[Tolerance] = None,
) -> bool:
    """
    Re-verify a falsified report from its certificate alone.

    Raises:
        DomainError: If the report passed, or a set-based certificate is
            rechecked without its set
    """
    if report.passed or report.counterexample is None:
        raise DomainError("Only falsified reports carry a certificate")
    tol = tolerance or space.tolerance
    cert = report.counterexample
    name = report.property_name

    if name == "hyperconvex":
        family = decode_family(space, cert["family"])
        return pairwise_admissible(space, family, tol) and space.family_witness(family, tol) is None

    if target_set is None:
        raise DomainError(f"Rechecking a {name} certificate needs the set it was found for")

    if name == "externally_hyperconvex":
        family = decode_family(space, cert["family"])
        reaches = all(target_set.distance(b.center) <= b.radius + tol.eps_feas for b in family)
        return (
            pairwise_admissible(space, family, tol)
            and reaches
            and target_set.family_point(family, tol) is None
        )

    if name == "strongly_convex":
        x, y, z = (space.decode_point(cert[k]) for k in ("x", "y", "z"))
        return (
            target_set.contains(x, tol.eps_feas)
            and target_set.contains(y, tol.eps_feas)
            and interval_contains(space, x, y, z, tol)
            and not target_set.contains(z, tol.eps_feas)
        )

    if name == "gated":
        x, candidate, a = (space.decode_point(cert[k]) for k in ("x", "candidate", "a"))
        nearest = abs(space.distance(x, candidate) - target_set.distance(x)) <= tol.eps_feas
        return nearest and abs(gate_residual(space, x, candidate, a)) > tol.eps_eq

    if name == "proximinal":
        return not _attains_distance(space, target_set, space.decode_point(cert["x"]), tol)

    raise DomainError(f"Unknown property {name!r}")

"""Command handlers. Each returns the process exit code."""

import json
import logging
from pathlib import Path
from typing import Optional

from services.checkers.domain.property_checks import (
    check_externally_hyperconvex,
    check_gated,
    check_hyperconvex,
    check_proximinal,
    check_strongly_convex,
    recheck_counterexample,
)
from services.cli.api.schemas import RunConfig
from services.gluing.domain.glued_metric import gate, gated_dist_shortcut, glued_dist_with_parameter
from services.gluing.domain.model import GluedPoint
from services.gluing.domain.space import GluedSpace2
from services.s5_example.domain.example import s5_counterexample, s5_family, s5_phase_sweep
from services.s5_example.domain.figures import emit_svg, s5_scene
from services.s5_example.domain.models import SWEEP_HEADER, S5Config, SweepRow
from shared.errors import ConfigError, NoGateError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FALSIFIED = 1
EXIT_INPUT = 2


def _write(out: Path, name: str, text: str) -> Path:
    out.mkdir(parents=True, exist_ok=True)
    path = out / name
    path.write_text(text, encoding="utf-8")
    logger.debug(f"Wrote {path}")
    return path


def _dump(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def cmd_glue_dist(run: RunConfig, x_text: Optional[str], y_text: Optional[str], out: Optional[Path] = None) -> int:
    """
    Print d(x, y) in the configured glued space with the minimizing chart
    parameter, and gate data for both points when the gates exist.

    Args:
        run: Run configuration with a glued or s5 model
        x_text: First point as SHEET:X,Y (falls back to the points block)
        y_text: Second point as SHEET:X,Y

    Returns:
        Exit code
    """
    if x_text is None or y_text is None:
        if run.points is None:
            raise ConfigError("glue-dist needs --x and --y or a points block")
        x_text = x_text or run.points.x
        y_text = y_text or run.points.y

    X = run.model.build(run.tolerance)
    if not isinstance(X, GluedSpace2):
        raise ConfigError("glue-dist needs a glued or s5 model")
    x, y = X.validate_point(GluedPoint.parse(x_text)), X.validate_point(GluedPoint.parse(y_text))
    X.window.check_data(x.coords, y.coords)

    distance, parameter = glued_dist_with_parameter(X, x, y)
    lines = [
        f"x={x}",
        f"y={y}",
        f"distance={distance!r}",
        f"parameter={'' if parameter is None else repr(parameter)}",
    ]
    gated = True
    for label, p in (("x", x), ("y", y)):
        try:
            info = gate(X, p)
        except NoGateError as e:
            gated = False
            lines.append(f"gate.{label}=none")
            logger.info(f"{label} has no gate: {e}")
            continue
        lines.append(f"gate.{label}={info.gate} dist={info.dist_to_gate!r}")
    if gated and x.sheet != y.sheet:
        lines.append(f"shortcut={gated_dist_shortcut(X, x, y)!r}")

    text = "\n".join(lines) + "\n"
    print(text, end="")
    if out is not None:
        _write(out, "glue_dist.txt", text)
    return EXIT_OK


def _run_checker(run: RunConfig, seed: int, trials: Optional[int]):
    if run.property is None:
        raise ConfigError("check needs a property")
    space = run.model.build(run.tolerance)
    cfg = run.trial_config(seed, trials)
    tol = run.tolerance

    if run.property == "hyperconvex":
        candidates = [s5_family(run.model.s5_config)] if run.model.kind == "s5" else []
        return space, None, check_hyperconvex(space, cfg, candidates, tol)

    if run.set is None:
        raise ConfigError(f"Property {run.property} needs a set descriptor")
    target = run.set.build(space)
    checker = {
        "strongly_convex": check_strongly_convex,
        "externally_hyperconvex": check_externally_hyperconvex,
        "gated": check_gated,
        "proximinal": check_proximinal,
    }[run.property]
    return space, target, checker(space, target, cfg, tol)


def cmd_check(run: RunConfig, out: Path, trials: Optional[int] = None) -> int:
    """
    Run one property checker and write report.txt and report.json, plus
    certificate.json when the property is falsified.
    """
    seed = run.require_seed("check")
    space, target, report = _run_checker(run, seed, trials)

    _write(out, "report.txt", report.to_text())
    _write(out, "report.json", _dump(report.model_dump(mode="json")))
    if report.passed:
        return EXIT_OK

    reproduced = recheck_counterexample(space, report, target, run.tolerance)
    if not reproduced:
        logger.error(f"Certificate for {report.property_name} does not reproduce")
    _write(out, "certificate.json", _dump({"reproduced": reproduced, **report.counterexample}))
    return EXIT_FALSIFIED


def _sweep_rows(run: RunConfig, seed: int, trials: Optional[int]) -> list[SweepRow]:
    return s5_phase_sweep(
        step=run.sweep.step,
        trials=trials if trials is not None else run.sweep.trials,
        seed=seed,
        tolerance=run.tolerance,
    )


def _sweep_csv(rows: list[SweepRow]) -> str:
    return "\n".join([SWEEP_HEADER, *(row.csv_line() for row in rows)]) + "\n"


def _figures(out: Path, cfg: S5Config, report=None) -> Path:
    name = f"s5_{cfg.orientation}_a{cfg.a:.2f}_b{cfg.b:.2f}.svg"
    return _write(out, name, emit_svg(s5_scene(cfg, report)))


def cmd_repro_s5(run: RunConfig, out: Path, trials: Optional[int] = None) -> int:
    """
    Reproduce the half-plane example: the three-ball report for the
    configured cell, the phase sweep and the figures.
    """
    seed = run.require_seed("repro-s5")
    cfg = run.model.s5_config
    report = s5_counterexample(cfg, run.tolerance)
    rows = _sweep_rows(run, seed, trials)

    _write(out, "report.txt", report.to_text())
    _write(out, "report.json", _dump(report.model_dump(mode="json")))
    _write(out, "sweep.csv", _sweep_csv(rows))
    _figures(out, cfg, report)

    mismatches = [row for row in rows if not row.consistent]
    if mismatches or not report.consistent:
        logger.warning(f"{len(mismatches)} sweep cells disagree with the predicted phase")
        return EXIT_FALSIFIED
    return EXIT_OK


def cmd_sweep(run: RunConfig, out: Path, trials: Optional[int] = None) -> int:
    seed = run.require_seed("sweep")
    rows = _sweep_rows(run, seed, trials)
    _write(out, "sweep.csv", _sweep_csv(rows))
    return EXIT_OK if all(row.consistent for row in rows) else EXIT_FALSIFIED


def cmd_plot(run: RunConfig, out: Path) -> int:
    """SVG panels of the configured cell, same orientation and reflected."""
    cfg = run.model.s5_config
    for reflected in (False, True):
        variant = S5Config(a=cfg.a, b=cfg.b, reflected=reflected)
        _figures(out, variant, s5_counterexample(variant, run.tolerance))
    return EXIT_OK


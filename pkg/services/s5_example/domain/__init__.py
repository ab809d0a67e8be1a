from .example import s5_centers, s5_counterexample, s5_family, s5_phase_sweep, s5_space, s5_trace_formula
from .figures import Scene, emit_svg, s5_scene
from .models import SWEEP_HEADER, S5Config, S5Report, S5TraceFormula, SweepRow

__all__ = [
    "s5_centers",
    "s5_counterexample",
    "s5_family",
    "s5_phase_sweep",
    "s5_space",
    "s5_trace_formula",
    "Scene",
    "emit_svg",
    "s5_scene",
    "SWEEP_HEADER",
    "S5Config",
    "S5Report",
    "S5TraceFormula",
    "SweepRow",
]

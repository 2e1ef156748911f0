"""dmpkit: movement primitives you can fit, roll out, and correct.

Fit a dynamical movement primitive to a demonstrated trajectory, generate
motion from it, and when a generated motion turns out wrong at the end,
merge a corrective demonstration into it: the trusted prefix is kept,
reshaped just enough to meet the retained part of the correction with
matching position and direction, and a fresh primitive is fit to the result.
"""

from .blend import BlendConfig, BlendResult, blend, blend_dense, second_diff_operator
from .correction import (
    CorrectionDiagnostics,
    CorrectionOutcome,
    CorrectionRequest,
    correct,
    junction_metrics,
)
from .dmp import (
    DmpParams,
    basis_activations,
    basis_layout,
    fit,
    forcing_term,
    phase_samples,
    rollout,
    set_goal,
    set_tau,
)
from .errors import (
    DegenerateDemonstrationError,
    DegeneratePhaseError,
    InstabilityError,
    ParseError,
    PrefixTooShortError,
    SolverError,
)
from .trajectory import (
    DerivedSignals,
    SplitResult,
    Trajectory,
    concat,
    finite_diff,
    nearest_sample,
    resample_uniform,
    take_prefix,
    take_suffix,
)

__version__ = "0.1.0"

__all__ = [
    "Trajectory",
    "DerivedSignals",
    "SplitResult",
    "resample_uniform",
    "finite_diff",
    "nearest_sample",
    "take_prefix",
    "take_suffix",
    "concat",
    "DmpParams",
    "basis_activations",
    "basis_layout",
    "forcing_term",
    "phase_samples",
    "fit",
    "rollout",
    "set_goal",
    "set_tau",
    "BlendConfig",
    "BlendResult",
    "blend",
    "blend_dense",
    "second_diff_operator",
    "CorrectionRequest",
    "CorrectionOutcome",
    "CorrectionDiagnostics",
    "correct",
    "junction_metrics",
    "ParseError",
    "DegenerateDemonstrationError",
    "DegeneratePhaseError",
    "PrefixTooShortError",
    "InstabilityError",
    "SolverError",
    "__version__",
]

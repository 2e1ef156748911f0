"""Merge a corrective demonstration into a deficient trajectory.

The pipeline: keep the corrective suffix from the operator's cut, find the
deficient sample nearest its first point, keep the deficient prefix up to
that sample, reshape the prefix so it meets the corrective suffix with
matching position and direction (:mod:`dmpkit.blend`), join the two, and fit
a fresh primitive to the result.

The corrective suffix is carried into the merged trajectory verbatim; only
the deficient prefix is modified. The direction constraint makes the second
difference vanish at the junction sample, so the merged signal has no seam.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import dmp
from .blend import BlendConfig, blend
from .errors import PrefixTooShortError
from .trajectory import SplitResult, Trajectory, nearest_sample, resample_uniform, take_prefix, take_suffix

__all__ = [
    "CorrectionRequest",
    "CorrectionDiagnostics",
    "CorrectionOutcome",
    "correct",
    "junction_metrics",
]


@dataclass(frozen=True, eq=False)
class CorrectionRequest:
    """Inputs for one correction cycle.

    ``corrective_cut`` is the 0-based index of the first retained corrective
    sample (the operator's split marker); at least two samples must remain
    after it so the junction direction is defined.
    """

    deficient: Trajectory
    corrective: Trajectory
    corrective_cut: int
    blend: BlendConfig = field(default_factory=BlendConfig)
    n_basis: int = dmp.DEFAULT_N_BASIS
    alpha_z: float = dmp.DEFAULT_ALPHA_Z
    beta_z: float = dmp.DEFAULT_BETA_Z
    alpha_x: float = dmp.DEFAULT_ALPHA_X

    def __post_init__(self) -> None:
        if self.deficient.dims != self.corrective.dims:
            raise ValueError(
                f"dimension mismatch: deficient has {self.deficient.dims}, "
                f"corrective has {self.corrective.dims}"
            )
        if not 0 <= self.corrective_cut <= self.corrective.n_samples - 2:
            raise ValueError(
                f"corrective_cut must leave at least 2 samples, got cut "
                f"{self.corrective_cut} of {self.corrective.n_samples}"
            )


@dataclass(frozen=True)
class CorrectionDiagnostics:
    """How clean the merge came out.

    ``junction_index`` is the 0-based merged index where the corrective part
    begins; the step and second-difference figures come from
    :func:`junction_metrics`; the blend figures echo :class:`BlendResult`.
    """

    junction_index: int
    max_step: float
    junction_max_second_diff: float
    blend_objective: float
    blend_position_residual: float
    blend_direction_residual: float
    blend_solve_seconds: float


@dataclass(frozen=True, eq=False)
class CorrectionOutcome:
    merged: Trajectory
    modified_dmp: dmp.DmpParams
    split: SplitResult
    diagnostics: CorrectionDiagnostics


def correct(req: CorrectionRequest) -> CorrectionOutcome:
    """Run the full correction cycle and fit the modified primitive.

    The modified primitive's time constant is the merged duration and its
    goal is the corrective trajectory's final sample. Raises
    :class:`PrefixTooShortError` when the nearest deficient sample leaves
    fewer than 3 prefix samples, which means the operator cut the corrective
    demonstration too early for anything of the deficient motion to survive.
    """
    retained = take_suffix(req.corrective, req.corrective_cut)
    if retained.dt != req.deficient.dt:
        # Recordings at different rates: bring the suffix onto the deficient
        # grid. Endpoints survive bitwise; the residual period mismatch after
        # snapping is below half a sample and is absorbed into the label.
        retained = resample_uniform(retained, req.deficient.dt)
        retained = Trajectory(retained.samples, req.deficient.dt)

    index, distance = nearest_sample(req.deficient, retained.samples[0])
    prefix_len = index + 1
    if prefix_len < 3:
        raise PrefixTooShortError(
            f"only {prefix_len} deficient sample(s) precede the corrective start; "
            "the operator cut too early to retain any of the deficient motion"
        )
    prefix = take_prefix(req.deficient, prefix_len)
    blended = blend(prefix, retained.samples[:2], req.blend)

    merged_samples = np.vstack([blended.trajectory.samples, retained.samples[1:]])
    merged = Trajectory(merged_samples, req.deficient.dt)
    junction = prefix_len - 1

    modified = dmp.fit(
        merged,
        n_basis=req.n_basis,
        tau=merged.duration,
        alpha_z=req.alpha_z,
        beta_z=req.beta_z,
        alpha_x=req.alpha_x,
    )

    max_step, window_second_diff = junction_metrics(merged, junction)
    diagnostics = CorrectionDiagnostics(
        junction_index=junction,
        max_step=max_step,
        junction_max_second_diff=window_second_diff,
        blend_objective=blended.objective,
        blend_position_residual=float(np.max(np.abs(blended.position_residual))),
        blend_direction_residual=float(np.max(np.abs(blended.direction_residual))),
        blend_solve_seconds=blended.solve_seconds,
    )
    split = SplitResult(
        deficient_cut=index,
        corrective_cut=req.corrective_cut,
        min_distance=distance,
    )
    return CorrectionOutcome(
        merged=merged,
        modified_dmp=modified,
        split=split,
        diagnostics=diagnostics,
    )


def junction_metrics(merged: Trajectory, junction: int | None = None) -> tuple[float, float]:
    """Quantify how visible a junction is in a merged trajectory.

    Returns ``(max_step, junction_max_second_diff)``: the largest Euclidean
    step between consecutive samples anywhere, and the largest Euclidean
    second difference within 2 samples of ``junction`` (everywhere when
    ``junction`` is None).
    """
    steps = np.linalg.norm(np.diff(merged.samples, axis=0), axis=1)
    max_step = float(steps.max())
    second = np.linalg.norm(np.diff(merged.samples, n=2, axis=0), axis=1)
    if second.size == 0:
        return max_step, 0.0
    if junction is None:
        return max_step, float(second.max())
    if not 0 <= junction < merged.n_samples:
        raise ValueError(f"junction index {junction} outside trajectory of {merged.n_samples}")
    # second[j] is centered on sample j+1; take centers within +/-2 of the junction
    lo = max(0, junction - 3)
    hi = min(second.size, junction + 2)
    window = second[lo:hi] if hi > lo else second[:0]
    window_max = float(window.max()) if window.size else 0.0
    return max_step, window_max

"""Uniformly sampled trajectories and the search/split primitives built on them.

All operations are pure functions over immutable :class:`Trajectory` values,
so shared instances are safe to use from concurrent code. Indices in this
module are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

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
]


@dataclass(frozen=True, eq=False)
class Trajectory:
    """A d-dimensional signal sampled at a fixed period.

    ``samples`` is an (n, d) float array, one row per sample; ``dt`` is the
    sample period in seconds. 1-D input is promoted to a single column.
    """

    samples: np.ndarray
    dt: float

    def __post_init__(self) -> None:
        samples = np.array(self.samples, dtype=float)
        if samples.ndim == 1:
            samples = samples[:, None]
        if samples.ndim != 2:
            raise ValueError(f"samples must be 1-D or 2-D, got shape {samples.shape}")
        n, d = samples.shape
        if n < 2:
            raise ValueError(f"a trajectory needs at least 2 samples, got {n}")
        if d < 1:
            raise ValueError("a trajectory needs at least 1 dimension")
        if not np.all(np.isfinite(samples)):
            raise ValueError("trajectory samples must all be finite")
        dt = float(self.dt)
        if not np.isfinite(dt) or dt <= 0.0:
            raise ValueError(f"dt must be a positive finite number, got {dt}")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "dt", dt)

    @property
    def n_samples(self) -> int:
        return self.samples.shape[0]

    @property
    def dims(self) -> int:
        return self.samples.shape[1]

    @property
    def duration(self) -> float:
        """Time spanned from the first sample to the last."""
        return (self.n_samples - 1) * self.dt

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.n_samples) * self.dt

    def __repr__(self) -> str:
        return f"Trajectory(n_samples={self.n_samples}, dims={self.dims}, dt={self.dt})"


@dataclass(frozen=True, eq=False)
class DerivedSignals:
    """Velocity and acceleration estimates aligned with a source trajectory."""

    velocity: np.ndarray
    acceleration: np.ndarray


@dataclass(frozen=True)
class SplitResult:
    """Where a corrective demonstration attaches to a deficient trajectory.

    ``deficient_cut`` is the 0-based index of the last retained deficient
    sample (the one nearest the first retained corrective sample);
    ``corrective_cut`` is the 0-based index of the first retained corrective
    sample within the full corrective recording; ``min_distance`` is the
    Euclidean distance between those two samples.
    """

    deficient_cut: int
    corrective_cut: int
    min_distance: float


def resample_uniform(traj: Trajectory, dt_target: float) -> Trajectory:
    """Linearly interpolate ``traj`` onto a uniform grid near ``dt_target``.

    The returned trajectory spans exactly the same time interval, with the
    first and last samples preserved bitwise. When the duration is not an
    integer multiple of ``dt_target`` the period is snapped to the nearest
    value that divides the duration evenly, so the deviation from the
    requested rate is at most half a sample over the whole signal.
    """
    if not np.isfinite(dt_target) or dt_target <= 0.0:
        raise ValueError(f"dt_target must be positive and finite, got {dt_target}")
    duration = traj.duration
    n_intervals = max(1, round(duration / dt_target))
    dt_actual = duration / n_intervals
    t_src = traj.times
    t_new = np.linspace(0.0, duration, n_intervals + 1)
    out = np.empty((n_intervals + 1, traj.dims))
    for j in range(traj.dims):
        out[:, j] = np.interp(t_new, t_src, traj.samples[:, j])
    out[0] = traj.samples[0]
    out[-1] = traj.samples[-1]
    return Trajectory(out, dt_actual)


def finite_diff(traj: Trajectory) -> DerivedSignals:
    """Estimate velocity and acceleration by second-order finite differences.

    Interior samples use central differences; the endpoints use one-sided
    three-point stencils of the same order. Acceleration applies the same
    scheme to the velocity estimate, so both are exact on affine signals.
    """
    if traj.n_samples < 3:
        raise ValueError(f"finite differences need at least 3 samples, got {traj.n_samples}")
    velocity = _diff_once(traj.samples, traj.dt)
    acceleration = _diff_once(velocity, traj.dt)
    return DerivedSignals(velocity=velocity, acceleration=acceleration)


def _diff_once(y: np.ndarray, dt: float) -> np.ndarray:
    d = np.empty_like(y)
    d[1:-1] = (y[2:] - y[:-2]) / (2.0 * dt)
    d[0] = (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * dt)
    d[-1] = (3.0 * y[-1] - 4.0 * y[-2] + y[-3]) / (2.0 * dt)
    return d


def nearest_sample(traj: Trajectory, point: np.ndarray) -> tuple[int, float]:
    """Index of the sample of ``traj`` closest to ``point`` in Euclidean norm.

    Returns ``(index, distance)``; ties resolve to the smallest index.
    """
    point = np.asarray(point, dtype=float).reshape(-1)
    if point.shape[0] != traj.dims:
        raise ValueError(f"point has {point.shape[0]} components, trajectory has {traj.dims}")
    if not np.all(np.isfinite(point)):
        raise ValueError("point must be finite")
    dist = np.linalg.norm(traj.samples - point, axis=1)
    index = int(np.argmin(dist))
    return index, float(dist[index])


def take_prefix(traj: Trajectory, count: int) -> Trajectory:
    """First ``count`` samples of ``traj``, values untouched."""
    if not 2 <= count <= traj.n_samples:
        raise ValueError(
            f"prefix length must be in [2, {traj.n_samples}], got {count}"
        )
    return Trajectory(traj.samples[:count], traj.dt)


def take_suffix(traj: Trajectory, start: int) -> Trajectory:
    """Samples of ``traj`` from index ``start`` onward, values untouched."""
    if not 0 <= start <= traj.n_samples - 2:
        raise ValueError(
            f"suffix start must be in [0, {traj.n_samples - 2}], got {start}"
        )
    return Trajectory(traj.samples[start:], traj.dt)


def concat(first: Trajectory, second: Trajectory) -> Trajectory:
    """Join two trajectories sampled at the same rate end to end."""
    if first.dims != second.dims:
        raise ValueError(f"dimension mismatch: {first.dims} vs {second.dims}")
    if first.dt != second.dt:
        raise ValueError(f"sample period mismatch: {first.dt} vs {second.dt}")
    return Trajectory(np.vstack([first.samples, second.samples]), first.dt)

"""Dynamical movement primitives: representation, fitting, and rollout.

A primitive encodes one point-to-point movement as a critically damped
attractor toward a goal, shaped by a learned forcing term. The forcing term
is a normalized mixture of Gaussian basis functions of a scalar phase that
decays from 1 toward 0, shared across dimensions, so the whole movement can
be retimed with one parameter (``tau``) or retargeted by replacing the goal.

Fitting solves one locally weighted linear regression per basis function and
dimension; rollout integrates the transformation and phase systems with
explicit Euler at the sample rate.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import DegenerateDemonstrationError, DegeneratePhaseError, InstabilityError
from .trajectory import Trajectory, finite_diff

__all__ = [
    "DmpParams",
    "DEFAULT_ALPHA_Z",
    "DEFAULT_BETA_Z",
    "DEFAULT_ALPHA_X",
    "DEFAULT_N_BASIS",
    "DEFAULT_DT",
    "basis_activations",
    "forcing_term",
    "fit",
    "rollout",
    "set_goal",
    "set_tau",
    "phase_samples",
    "basis_layout",
]

DEFAULT_ALPHA_Z = 25.0
DEFAULT_BETA_Z = DEFAULT_ALPHA_Z / 4.0  # critical damping
DEFAULT_ALPHA_X = 1.0
DEFAULT_N_BASIS = 50
DEFAULT_DT = 0.004  # 250 Hz controller cadence

# Below this activation sum the forcing term has no basis support; treated as
# zero during rollout, rejected in the public forcing_term.
ACTIVATION_FLOOR = 1e-12
# Dimensions whose start-to-goal span is below this carry no forcing and get
# zero weights instead of a near-singular regression.
SPAN_FLOOR = 1e-9


@dataclass(frozen=True, eq=False)
class DmpParams:
    """Everything defining one d-dimensional movement primitive.

    ``weights`` has one row per dimension and one column per basis function.
    ``centers`` lie in (0, 1], strictly decreasing (phase order); ``widths``
    are the matching standard deviations. ``metadata`` is free-form text
    describing where the primitive came from.
    """

    tau: float
    alpha_z: float
    beta_z: float
    alpha_x: float
    weights: np.ndarray
    centers: np.ndarray
    widths: np.ndarray
    goal: np.ndarray
    start: np.ndarray
    metadata: str = ""

    def __post_init__(self) -> None:
        for name in ("tau", "alpha_z", "beta_z", "alpha_x"):
            value = float(getattr(self, name))
            if not np.isfinite(value) or value <= 0.0:
                raise ValueError(f"{name} must be positive and finite, got {value}")
            object.__setattr__(self, name, value)
        weights = np.array(self.weights, dtype=float)
        centers = np.array(self.centers, dtype=float).reshape(-1)
        widths = np.array(self.widths, dtype=float).reshape(-1)
        goal = np.array(self.goal, dtype=float).reshape(-1)
        start = np.array(self.start, dtype=float).reshape(-1)
        if weights.ndim != 2:
            raise ValueError(f"weights must be 2-D (dims x n_basis), got shape {weights.shape}")
        d, n_basis = weights.shape
        if d < 1 or n_basis < 1:
            raise ValueError(f"weights shape must be at least (1, 1), got {weights.shape}")
        if centers.shape != (n_basis,) or widths.shape != (n_basis,):
            raise ValueError("centers and widths must match the weight column count")
        if goal.shape != (d,) or start.shape != (d,):
            raise ValueError("goal and start must match the weight row count")
        for name, arr in (("weights", weights), ("centers", centers),
                          ("widths", widths), ("goal", goal), ("start", start)):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} must be finite")
        if np.any(centers <= 0.0) or np.any(centers > 1.0):
            raise ValueError("centers must lie in (0, 1]")
        if n_basis > 1 and not np.all(np.diff(centers) < 0.0):
            raise ValueError("centers must be strictly decreasing")
        if np.any(widths <= 0.0):
            raise ValueError("widths must be positive")
        for name, arr in (("weights", weights), ("centers", centers),
                          ("widths", widths), ("goal", goal), ("start", start)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "metadata", str(self.metadata))

    @property
    def dims(self) -> int:
        return self.weights.shape[0]

    @property
    def n_basis(self) -> int:
        return self.weights.shape[1]

    def __repr__(self) -> str:
        return (
            f"DmpParams(dims={self.dims}, n_basis={self.n_basis}, tau={self.tau}, "
            f"alpha_z={self.alpha_z}, beta_z={self.beta_z}, alpha_x={self.alpha_x})"
        )


def basis_activations(x: float, params: DmpParams) -> np.ndarray:
    """Gaussian activations exp(-(x - c_i)^2 / (2 s_i^2)) at phase ``x``."""
    if not 0.0 < x <= 1.0:
        raise ValueError(f"phase must lie in (0, 1], got {x}")
    arg = (x - params.centers) / params.widths
    return np.exp(-0.5 * arg * arg)


def forcing_term(x: float, params: DmpParams) -> np.ndarray:
    """Forcing vector at phase ``x``: normalized basis mixture scaled by
    ``x * (goal - start)`` per dimension.

    Raises :class:`DegeneratePhaseError` when the activation sum has decayed
    below the supported range of the basis layout.
    """
    psi = basis_activations(x, params)
    total = float(psi.sum())
    if total < ACTIVATION_FLOOR:
        raise DegeneratePhaseError(
            f"activation sum {total:.3e} at phase {x:.3e} is below {ACTIVATION_FLOOR:.0e}"
        )
    return (params.weights @ psi) / total * (x * (params.goal - params.start))


def phase_samples(n: int, dt: float, tau: float, alpha_x: float) -> np.ndarray:
    """Phase value at each of ``n`` samples under explicit Euler decay.

    Sample k holds (1 - alpha_x*dt/tau)**k, bit-identical to the sequence a
    rollout produces by repeated multiplication.
    """
    decay = 1.0 - alpha_x * dt / tau
    if not 0.0 < decay < 1.0:
        raise ValueError(
            f"unstable phase step: need alpha_x*dt < tau, got alpha_x*dt/tau = {alpha_x * dt / tau}"
        )
    return np.concatenate(([1.0], np.cumprod(np.full(n - 1, decay))))


def basis_layout(n_basis: int, duration: float, tau: float, alpha_x: float) -> tuple[np.ndarray, np.ndarray]:
    """Centers and widths for ``n_basis`` Gaussians uniform in time.

    Centers follow the phase decay at equally spaced times over ``duration``
    (so they are exponentially spaced in phase); each width is half the gap
    to the next center, the last one copying its neighbor. A single basis
    gets width 0.5, half the phase range.
    """
    if n_basis < 1:
        raise ValueError(f"n_basis must be at least 1, got {n_basis}")
    t = np.linspace(0.0, duration, n_basis)
    centers = np.exp(-alpha_x * t / tau)
    if n_basis == 1:
        widths = np.array([0.5])
    else:
        half_gaps = np.abs(np.diff(centers)) / 2.0
        widths = np.append(half_gaps, half_gaps[-1])
    return centers, widths


def fit(
    demo: Trajectory,
    *,
    n_basis: int = DEFAULT_N_BASIS,
    tau: float | None = None,
    alpha_z: float = DEFAULT_ALPHA_Z,
    beta_z: float = DEFAULT_BETA_Z,
    alpha_x: float = DEFAULT_ALPHA_X,
    metadata: str = "",
) -> DmpParams:
    """Fit a primitive to a demonstration by locally weighted regression.

    The goal is the demonstration's last sample and the start its first.
    The regression target is ``tau^2 * accel - alpha_z * (beta_z * (goal - y)
    - tau * vel)`` sampled along the demonstration, and each per-basis weight
    is the activation-weighted least-squares slope of that target against the
    scaling signal ``x_k * (goal - start)``.

    ``tau`` defaults to the demonstration duration. Dimensions whose
    start-to-goal span is negligible get zero weights; if every dimension is
    degenerate the regression has no information and
    :class:`DegenerateDemonstrationError` is raised.
    """
    if demo.n_samples < 3:
        raise ValueError(f"fitting needs at least 3 samples, got {demo.n_samples}")
    if tau is None:
        tau = demo.duration
    for name, value in (("tau", tau), ("alpha_z", alpha_z), ("beta_z", beta_z), ("alpha_x", alpha_x)):
        if not np.isfinite(value) or value <= 0.0:
            raise ValueError(f"{name} must be positive and finite, got {value}")

    goal = demo.samples[-1]
    start = demo.samples[0]
    span = goal - start
    live = np.abs(span) >= SPAN_FLOOR
    if not live.any():
        raise DegenerateDemonstrationError(
            "demonstration starts and ends at the same point in every dimension"
        )

    x = phase_samples(demo.n_samples, demo.dt, tau, alpha_x)
    centers, widths = basis_layout(n_basis, demo.duration, tau, alpha_x)
    psi = np.exp(-0.5 * ((x[:, None] - centers[None, :]) / widths[None, :]) ** 2)

    derived = finite_diff(demo)
    f_target = (
        tau * tau * derived.acceleration
        - alpha_z * (beta_z * (goal - demo.samples) - tau * derived.velocity)
    )

    s = x[:, None] * span[None, :]  # (n, d)
    numerator = psi.T @ (s * f_target)  # (n_basis, d)
    denominator = psi.T @ (s * s)
    ratio = np.zeros_like(numerator)
    np.divide(numerator, denominator, out=ratio, where=denominator > 0.0)
    weights = np.zeros((demo.dims, n_basis))
    weights[live, :] = ratio.T[live, :]

    return DmpParams(
        tau=tau, alpha_z=alpha_z, beta_z=beta_z, alpha_x=alpha_x,
        weights=weights, centers=centers, widths=widths,
        goal=goal, start=start, metadata=metadata,
    )


def rollout(
    params: DmpParams,
    y_start: np.ndarray | None = None,
    dt: float = DEFAULT_DT,
    duration: float | None = None,
) -> Trajectory:
    """Generate a trajectory by explicit Euler integration of the primitive.

    Integration starts at ``y_start`` (the stored start when omitted) with
    zero scaled velocity and phase 1, and runs for ``duration`` seconds
    (1.5 * tau when omitted) at period ``dt``. The forcing scale always uses
    the stored start, so rolling out from elsewhere still converges to the
    goal. Once the phase has decayed past the basis support the forcing term
    is treated as zero.

    Raises :class:`InstabilityError` if the state diverges.
    """
    if y_start is None:
        y_start = params.start
    y_start = np.asarray(y_start, dtype=float).reshape(-1)
    if y_start.shape != (params.dims,):
        raise ValueError(f"y_start must have {params.dims} components, got {y_start.shape}")
    if not np.all(np.isfinite(y_start)):
        raise ValueError("y_start must be finite")
    if not np.isfinite(dt) or dt <= 0.0:
        raise ValueError(f"dt must be positive and finite, got {dt}")
    if duration is None:
        duration = 1.5 * params.tau
    if not np.isfinite(duration) or duration < dt:
        raise ValueError(f"duration must be at least dt, got {duration}")
    decay = 1.0 - params.alpha_x * dt / params.tau
    if not 0.0 < decay < 1.0:
        raise ValueError(
            f"unstable phase step: need alpha_x*dt < tau, got alpha_x*dt/tau = {params.alpha_x * dt / params.tau}"
        )

    n_steps = round(duration / dt)
    goal = params.goal
    scale = goal - params.start
    guard = 1e9 * max(1.0, float(np.max(np.abs(goal))), float(np.max(np.abs(y_start))))

    out = np.empty((n_steps + 1, params.dims))
    y = y_start.copy()
    z = np.zeros(params.dims)
    x = 1.0
    out[0] = y
    for k in range(1, n_steps + 1):
        arg = (x - params.centers) / params.widths
        psi = np.exp(-0.5 * arg * arg)
        total = psi.sum()
        if total > ACTIVATION_FLOOR:
            f = (params.weights @ psi) / total * (x * scale)
        else:
            f = 0.0
        y_next = y + dt * z / params.tau
        z_next = z + dt * (params.alpha_z * (params.beta_z * (goal - y) - z) + f) / params.tau
        x *= decay
        y, z = y_next, z_next
        if np.any(np.abs(y) > guard):
            raise InstabilityError("rollout diverged", step=k)
        out[k] = y
    return Trajectory(out, dt)


def set_goal(params: DmpParams, g_new: np.ndarray) -> DmpParams:
    """Copy of ``params`` with the goal replaced."""
    g_new = np.asarray(g_new, dtype=float).reshape(-1)
    if g_new.shape != (params.dims,):
        raise ValueError(f"goal must have {params.dims} components, got {g_new.shape}")
    if not np.all(np.isfinite(g_new)):
        raise ValueError("goal must be finite")
    return replace(params, goal=g_new)


def set_tau(params: DmpParams, tau_new: float) -> DmpParams:
    """Copy of ``params`` with the time constant replaced."""
    if not np.isfinite(tau_new) or tau_new <= 0.0:
        raise ValueError(f"tau must be positive and finite, got {tau_new}")
    return replace(params, tau=float(tau_new))

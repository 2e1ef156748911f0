"""Constrained smoothing that reshapes a retained prefix to meet a correction.

Given the retained prefix ``y`` (M samples) and the first two samples
``(p0, p1)`` of the retained corrective part, each dimension solves

    minimize    ||y - m||^2 + lam * ||D m||^2
    subject to  m[M-1] = p0
                m[M-1] - m[M-2] = p1 - p0

where ``D`` is the (M-2) x M second-difference operator. The squared-norm
objective makes this an equality-constrained quadratic program with a unique
solution for every lam >= 0. The two constrained samples are fully determined,
so the production solver eliminates them and factors the remaining
pentadiagonal normal equations in O(M). :func:`blend_dense` solves the full
KKT system densely and exists as an independent cross-check.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import sparse
from scipy.linalg import cho_solve_banded, cholesky_banded

from .errors import PrefixTooShortError, SolverError
from .trajectory import Trajectory

__all__ = [
    "BlendConfig",
    "BlendResult",
    "second_diff_operator",
    "blend",
    "blend_dense",
]


@dataclass(frozen=True)
class BlendConfig:
    """Weight of the curvature penalty relative to prefix fidelity."""

    lam: float = 1.0

    def __post_init__(self) -> None:
        if not np.isfinite(self.lam) or self.lam < 0.0:
            raise ValueError(f"lam must be finite and >= 0, got {self.lam}")


@dataclass(frozen=True, eq=False)
class BlendResult:
    """Blended prefix plus solve diagnostics.

    ``position_residual`` and ``direction_residual`` are the per-dimension
    violations of the two junction constraints (both should be ~0).
    """

    trajectory: Trajectory
    objective: float
    position_residual: np.ndarray
    direction_residual: np.ndarray
    solve_seconds: float


def second_diff_operator(m: int) -> np.ndarray:
    """Dense (m-2) x m matrix with rows [..., 1, -2, 1, ...]."""
    if m < 3:
        raise ValueError(f"second differences need at least 3 samples, got {m}")
    op = np.zeros((m - 2, m))
    rows = np.arange(m - 2)
    op[rows, rows] = 1.0
    op[rows, rows + 1] = -2.0
    op[rows, rows + 2] = 1.0
    return op


def _check_inputs(y_dr: Trajectory, corrective_head: np.ndarray) -> np.ndarray:
    head = np.asarray(corrective_head, dtype=float)
    if head.shape != (2, y_dr.dims):
        raise ValueError(
            f"corrective head must have shape (2, {y_dr.dims}), got {head.shape}"
        )
    if not np.all(np.isfinite(head)):
        raise ValueError("corrective head must be finite")
    if y_dr.n_samples < 3:
        raise PrefixTooShortError(
            f"prefix has {y_dr.n_samples} samples; blending needs at least 3"
        )
    return head


@lru_cache(maxsize=64)
def _banded_factor(m: int, lam: float) -> np.ndarray:
    """Cholesky factor (upper banded storage) of I + lam * F^T F, where F is
    the second-difference operator restricted to the m-2 free samples."""
    n = m - 2
    ones = np.ones(n)
    full = sparse.diags([ones, -2.0 * ones, ones], offsets=[0, 1, 2], shape=(n, m), format="csc")
    gram = (full[:, :n].T @ full[:, :n]).todia()
    bandwidth = min(2, n - 1)
    ab = np.zeros((bandwidth + 1, n))
    ab[bandwidth] = 1.0 + lam * gram.diagonal(0)
    if bandwidth >= 1:
        ab[bandwidth - 1, 1:] = lam * gram.diagonal(1)
    if bandwidth >= 2:
        ab[bandwidth - 2, 2:] = lam * gram.diagonal(2)
    try:
        factor = cholesky_banded(ab, lower=False)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - SPD by construction
        raise SolverError(f"banded factorization failed for m={m}, lam={lam}") from exc
    factor.setflags(write=False)
    return factor


def blend(y_dr: Trajectory, corrective_head: np.ndarray, config: BlendConfig = BlendConfig()) -> BlendResult:
    """Solve the constrained smoothing problem with the banded solver.

    ``corrective_head`` is a (2, d) array holding the first two retained
    corrective samples. The last blended sample is pinned bitwise to the
    first of them.
    """
    head = _check_inputs(y_dr, corrective_head)
    start = time.perf_counter()
    m = y_dr.n_samples
    n = m - 2
    lam = config.lam
    p0, p1 = head[0], head[1]
    v = p1 - p0
    q = p0 - v  # second-to-last sample forced by the direction constraint

    # rhs = prefix - lam * F^T c, where c is the constant part of D m coming
    # from the two eliminated samples; F^T c has at most two nonzero rows.
    rhs = np.array(y_dr.samples[:n])
    if m >= 4:
        rhs[m - 4] -= lam * q
        rhs[m - 3] -= lam * (p0 - 4.0 * q)
    else:
        rhs[0] -= lam * (p0 - 2.0 * q)
    factor = _banded_factor(m, lam)
    u = cho_solve_banded((factor, False), rhs)

    samples = np.empty((m, y_dr.dims))
    samples[:n] = u
    samples[m - 2] = q
    samples[m - 1] = p0
    elapsed = time.perf_counter() - start
    return _package(y_dr, samples, head, lam, elapsed)


def blend_dense(y_dr: Trajectory, corrective_head: np.ndarray, config: BlendConfig = BlendConfig()) -> BlendResult:
    """Reference solver: factor the full dense KKT system per dimension.

    Independent of :func:`blend`; used to cross-check it.
    """
    head = _check_inputs(y_dr, corrective_head)
    start = time.perf_counter()
    m = y_dr.n_samples
    lam = config.lam
    p0, p1 = head[0], head[1]
    v = p1 - p0

    op = second_diff_operator(m)
    hessian = 2.0 * (np.eye(m) + lam * (op.T @ op))
    constraints = np.zeros((2, m))
    constraints[0, m - 1] = 1.0
    constraints[1, m - 2] = -1.0
    constraints[1, m - 1] = 1.0
    kkt = np.block([
        [hessian, constraints.T],
        [constraints, np.zeros((2, 2))],
    ])
    rhs = np.vstack([2.0 * y_dr.samples, p0[None, :], v[None, :]])
    try:
        solution = np.linalg.solve(kkt, rhs)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"dense KKT solve failed for m={m}, lam={lam}") from exc
    samples = solution[:m].copy()
    samples[m - 1] = p0  # pin bitwise, as in the production path
    elapsed = time.perf_counter() - start
    return _package(y_dr, samples, head, lam, elapsed)


def _package(
    y_dr: Trajectory,
    samples: np.ndarray,
    head: np.ndarray,
    lam: float,
    elapsed: float,
) -> BlendResult:
    second_diff = np.diff(samples, n=2, axis=0)
    objective = float(np.sum((y_dr.samples - samples) ** 2) + lam * np.sum(second_diff**2))
    position_residual = samples[-1] - head[0]
    direction_residual = (samples[-1] - samples[-2]) - (head[1] - head[0])
    return BlendResult(
        trajectory=Trajectory(samples, y_dr.dt),
        objective=objective,
        position_residual=position_residual,
        direction_residual=direction_residual,
        solve_seconds=elapsed,
    )

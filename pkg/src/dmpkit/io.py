"""Trajectory CSV and primitive JSON serialization, plus synthetic scenarios.

CSV layout: header ``t,q1,...,qd``, one row per sample, ``t`` uniformly
spaced and strictly increasing. Values are written with 17 significant
digits so a save/load round trip is lossless for IEEE-754 doubles.

Primitive JSON documents carry every numeric field of
:class:`~dmpkit.dmp.DmpParams` plus a ``metadata`` object with ``created_at``
and ``context`` strings; ``created_at`` defaults to empty so batch outputs
stay reproducible byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dmp import DmpParams
from .errors import ParseError
from .trajectory import Trajectory

__all__ = [
    "load_trajectory",
    "save_trajectory",
    "load_dmp",
    "save_dmp",
    "dmp_to_document",
    "dmp_from_document",
    "ScenarioSpec",
    "generate_scenario",
    "minimum_jerk",
]

_REL_TOL_DT = 1e-9


def save_trajectory(traj: Trajectory, path: str | Path) -> None:
    path = Path(path)
    header = "t," + ",".join(f"q{j + 1}" for j in range(traj.dims))
    lines = [header]
    for k in range(traj.n_samples):
        t = k * traj.dt
        row = ",".join(f"{value:.17g}" for value in traj.samples[k])
        lines.append(f"{t:.17g},{row}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_trajectory(path: str | Path) -> Trajectory:
    path = Path(path)
    with path.open("r", encoding="utf-8") as fh:
        raw_lines = fh.read().splitlines()
    if not raw_lines:
        raise ParseError("empty file", line=1)

    header = [name.strip() for name in raw_lines[0].split(",")]
    if len(header) < 2 or header[0] != "t":
        raise ParseError(f"header must be 't,q1,...,qd', got {raw_lines[0]!r}", line=1)
    expected = ["t"] + [f"q{j + 1}" for j in range(len(header) - 1)]
    if header != expected:
        raise ParseError(f"header must be 't,q1,...,qd', got {raw_lines[0]!r}", line=1)
    dims = len(header) - 1

    times: list[float] = []
    rows: list[list[float]] = []
    for lineno, line in enumerate(raw_lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.split(",")
        if len(fields) != dims + 1:
            raise ParseError(
                f"expected {dims + 1} columns, got {len(fields)}", line=lineno
            )
        try:
            values = [float(field) for field in fields]
        except ValueError:
            raise ParseError(f"non-numeric value in {line!r}", line=lineno) from None
        if not all(np.isfinite(values)):
            raise ParseError("non-finite value", line=lineno)
        if times and values[0] <= times[-1]:
            raise ParseError(
                f"t must be strictly increasing, got {values[0]!r} after {times[-1]!r}",
                line=lineno,
            )
        times.append(values[0])
        rows.append(values[1:])

    if len(rows) < 2:
        raise ParseError(f"need at least 2 samples, got {len(rows)}", line=len(raw_lines))
    t = np.array(times)
    dt = (t[-1] - t[0]) / (len(t) - 1)
    if dt <= 0.0:
        raise ParseError("sample times span no time", line=2)
    diffs = np.diff(t)
    bad = np.nonzero(np.abs(diffs - dt) > _REL_TOL_DT * dt)[0]
    if bad.size:
        raise ParseError(
            f"non-uniform sampling: step {diffs[bad[0]]!r} differs from {dt!r}",
            line=int(bad[0]) + 3,
        )
    return Trajectory(np.array(rows), float(dt))


def dmp_to_document(params: DmpParams, created_at: str = "") -> dict:
    """Plain-JSON view of a primitive."""
    return {
        "dims": params.dims,
        "tau": params.tau,
        "alpha_z": params.alpha_z,
        "beta_z": params.beta_z,
        "alpha_x": params.alpha_x,
        "n_basis": params.n_basis,
        "centers": params.centers.tolist(),
        "widths": params.widths.tolist(),
        "weights": params.weights.tolist(),
        "goal": params.goal.tolist(),
        "start": params.start.tolist(),
        "metadata": {"created_at": created_at, "context": params.metadata},
    }


_DOCUMENT_KEYS = {
    "dims", "tau", "alpha_z", "beta_z", "alpha_x", "n_basis",
    "centers", "widths", "weights", "goal", "start", "metadata",
}


def dmp_from_document(doc: dict) -> DmpParams:
    """Parse and validate a primitive document; unknown fields are rejected."""
    if not isinstance(doc, dict):
        raise ParseError(f"document must be an object, got {type(doc).__name__}")
    missing = _DOCUMENT_KEYS - doc.keys()
    if missing:
        raise ParseError(f"missing fields: {sorted(missing)}")
    unknown = doc.keys() - _DOCUMENT_KEYS
    if unknown:
        raise ParseError(f"unknown fields: {sorted(unknown)}")
    metadata = doc["metadata"]
    if not isinstance(metadata, dict) or metadata.keys() != {"created_at", "context"}:
        raise ParseError("metadata must be an object with created_at and context")
    if not isinstance(metadata["context"], str) or not isinstance(metadata["created_at"], str):
        raise ParseError("metadata fields must be strings")
    try:
        params = DmpParams(
            tau=doc["tau"],
            alpha_z=doc["alpha_z"],
            beta_z=doc["beta_z"],
            alpha_x=doc["alpha_x"],
            weights=np.array(doc["weights"], dtype=float),
            centers=np.array(doc["centers"], dtype=float),
            widths=np.array(doc["widths"], dtype=float),
            goal=np.array(doc["goal"], dtype=float),
            start=np.array(doc["start"], dtype=float),
            metadata=metadata["context"],
        )
    except (TypeError, ValueError) as exc:
        raise ParseError(f"invalid primitive document: {exc}") from exc
    if params.dims != doc["dims"]:
        raise ParseError(f"dims field says {doc['dims']}, arrays imply {params.dims}")
    if params.n_basis != doc["n_basis"]:
        raise ParseError(f"n_basis field says {doc['n_basis']}, arrays imply {params.n_basis}")
    return params


def save_dmp(params: DmpParams, path: str | Path, created_at: str = "") -> None:
    Path(path).write_text(
        json.dumps(dmp_to_document(params, created_at), indent=2) + "\n",
        encoding="utf-8",
    )


def load_dmp(path: str | Path) -> DmpParams:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}", line=exc.lineno) from exc
    return dmp_from_document(doc)


@dataclass(frozen=True)
class ScenarioSpec:
    """Shape of a synthetic deficient/corrective pair.

    ``kind`` is one of ``overshoot`` (the deficient motion runs past the
    goal), ``undershoot`` (it stops short), or ``obstacle-dip`` (it drops
    too early and the correction must arc higher). ``noise`` is the
    amplitude of the smooth perturbation layered onto every segment.
    """

    kind: str
    dims: int = 2
    duration: float = 2.0
    noise: float = 0.05

    def __post_init__(self) -> None:
        if self.kind not in ("overshoot", "undershoot", "obstacle-dip"):
            raise ValueError(f"unknown scenario kind {self.kind!r}")
        if self.dims < 1:
            raise ValueError("dims must be at least 1")
        if not np.isfinite(self.duration) or self.duration <= 0.0:
            raise ValueError("duration must be positive")
        if not np.isfinite(self.noise) or self.noise < 0.0:
            raise ValueError("noise must be >= 0")


def minimum_jerk(start: np.ndarray, goal: np.ndarray, duration: float, dt: float = 0.004) -> Trajectory:
    """Point-to-point minimum-jerk trajectory (zero end velocities)."""
    start = np.atleast_1d(np.asarray(start, dtype=float))
    goal = np.atleast_1d(np.asarray(goal, dtype=float))
    if start.shape != goal.shape:
        raise ValueError("start and goal must have the same shape")
    n = round(duration / dt)
    if n < 1:
        raise ValueError("duration must cover at least one step")
    u = np.linspace(0.0, 1.0, n + 1)
    s = 10.0 * u**3 - 15.0 * u**4 + 6.0 * u**5
    return Trajectory(start[None, :] + s[:, None] * (goal - start)[None, :], dt)


def _min_jerk_chain(waypoints: list[np.ndarray], counts: list[int]) -> np.ndarray:
    """Concatenate minimum-jerk segments; each stops at its waypoint."""
    parts = []
    for i, steps in enumerate(counts):
        u = np.linspace(0.0, 1.0, steps + 1)
        s = 10.0 * u**3 - 15.0 * u**4 + 6.0 * u**5
        seg = waypoints[i][None, :] + s[:, None] * (waypoints[i + 1] - waypoints[i])[None, :]
        parts.append(seg if i == 0 else seg[1:])
    return np.vstack(parts)


def _quintic_to_rest(
    p0: np.ndarray, v0: np.ndarray, a0: np.ndarray, p1: np.ndarray, steps: int, dt: float
) -> np.ndarray:
    """Quintic segment from state (p0, v0, a0) to rest at p1, per axis."""
    horizon = steps * dt
    system = np.array([
        [horizon**3, horizon**4, horizon**5],
        [3 * horizon**2, 4 * horizon**3, 5 * horizon**4],
        [6 * horizon, 12 * horizon**2, 20 * horizon**3],
    ])
    rhs = np.vstack([
        p1 - p0 - v0 * horizon - 0.5 * a0 * horizon**2,
        -(v0 + a0 * horizon),
        -a0,
    ])
    high = np.linalg.solve(system, rhs)  # rows c3, c4, c5, one column per axis
    t = np.linspace(0.0, horizon, steps + 1)[:, None]
    return (
        p0[None, :] + v0[None, :] * t + 0.5 * a0[None, :] * t**2
        + high[0][None, :] * t**3 + high[1][None, :] * t**4 + high[2][None, :] * t**5
    )


def _smooth_noise(rng: np.random.Generator, n: int, dims: int, amplitude: float) -> np.ndarray:
    """Low-frequency perturbation that vanishes at both ends."""
    if amplitude == 0.0:
        return np.zeros((n, dims))
    u = np.linspace(0.0, 1.0, n)
    out = np.zeros((n, dims))
    for j in range(dims):
        for freq in (1, 2, 3):
            out[:, j] += rng.uniform(-1.0, 1.0) / freq * np.sin(
                np.pi * freq * u + rng.uniform(0.0, 2.0 * np.pi)
            )
    return amplitude * np.sin(np.pi * u)[:, None] * out


def generate_scenario(spec: ScenarioSpec, seed: int) -> tuple[Trajectory, Trajectory, int]:
    """Deterministic deficient/corrective pair exhibiting ``spec.kind``.

    Returns ``(deficient, corrective, corrective_cut)``. The corrective
    trajectory starts where the deficient motion stopped, retraces backward
    along it (with a hand wobble) past the still-trusted stretch, replays
    that trusted stretch forward, and finally departs toward the corrected
    goal; ``corrective_cut`` points at a mid-flight sample of the replay, so
    the junction is crossed with velocity, the way a lead-through correction
    would be recorded. Every dimension sweeps an O(1) range so relative
    tolerances stay meaningful.
    """
    rng = np.random.default_rng(seed)
    dt = 0.004
    n = round(spec.duration / dt)
    d = spec.dims
    travel = 10.0

    start = np.zeros(d)
    goal = np.zeros(d)
    # secondary dimensions get an O(1) mid-motion arc so their spans are real
    mid_arc = np.zeros(d)
    if d >= 2:
        mid_arc[1:] = rng.uniform(1.5, 2.5, size=d - 1)

    height = d - 1  # height axis for the obstacle scenario (the only axis when d == 1)
    if spec.kind == "overshoot":
        goal[0] = travel
        bad_goal = goal.copy()
        bad_goal[0] += 0.1 * travel  # runs past the target
        mid = (start + bad_goal) / 2.0 + mid_arc
        deficient_samples = _min_jerk_chain([start, mid, bad_goal], [n // 2, n - n // 2])
        back_frac, cut_frac, reveal_frac = 0.55, 0.65, 0.78
    elif spec.kind == "undershoot":
        goal[0] = travel
        bad_goal = goal.copy()
        bad_goal[0] -= 0.1 * travel  # stops short
        mid = (start + bad_goal) / 2.0 + mid_arc
        deficient_samples = _min_jerk_chain([start, mid, bad_goal], [n // 2, n - n // 2])
        back_frac, cut_frac, reveal_frac = 0.70, 0.78, 0.88
    else:  # obstacle-dip: descends to the low approach too early
        start[height] = 2.0
        if d >= 2:
            goal[0] = travel
        early_low = np.zeros(d)
        if d >= 2:
            early_low[0] = 0.45 * travel
            early_low[1:height] = mid_arc[1:height]
        early_low[height] = 0.3
        deficient_samples = _min_jerk_chain([start, early_low, goal], [n // 2, n - n // 2])
        back_frac, cut_frac, reveal_frac = 0.18, 0.26, 0.34

    deficient_samples = deficient_samples + _smooth_noise(rng, len(deficient_samples), d, spec.noise)
    deficient = Trajectory(deficient_samples, dt)
    n_def = deficient.n_samples

    j_back = round(back_frac * (n_def - 1))
    j_cut = round(cut_frac * (n_def - 1))
    j_reveal = round(reveal_frac * (n_def - 1))

    # Backward retrace from the stop to the trusted region, wobbly in the
    # middle but anchored at both ends; it is discarded at the cut anyway.
    retrace = deficient.samples[n_def - 1 : j_back - 1 : -1].copy()
    retrace += _smooth_noise(rng, len(retrace), d, 0.5 * spec.noise)

    # Forward replay of the trusted stretch, verbatim: this is the part of
    # the motion the operator approves of and follows closely.
    replay = deficient.samples[j_back + 1 : j_reveal + 1]

    # Departure: leave the deficient path at the reveal point, matching its
    # velocity and acceleration so the recording stays smooth in flight.
    v0 = (deficient.samples[j_reveal + 1] - deficient.samples[j_reveal - 1]) / (2.0 * dt)
    a0 = (
        deficient.samples[j_reveal + 1]
        - 2.0 * deficient.samples[j_reveal]
        + deficient.samples[j_reveal - 1]
    ) / (dt * dt)
    reveal_point = deficient.samples[j_reveal]
    if spec.kind == "obstacle-dip":
        apex = np.zeros(d)
        if d >= 2:
            apex[0] = 0.7 * travel
            apex[1:height] = 0.5 * mid_arc[1:height]
        apex[height] = 4.0  # clear the obstacle: above anything the deficient did
        corrected_goal = goal.copy()
        corrected_goal[height] = -0.5  # finish the insertion below approach height
        up = _quintic_to_rest(reveal_point, v0, a0, apex, round(0.35 * n), dt)
        down = _min_jerk_chain([apex, corrected_goal], [round(0.35 * n)])
        departure = np.vstack([up, down[1:]])
    else:
        corrected_goal = goal
        departure = _quintic_to_rest(reveal_point, v0, a0, corrected_goal, round(0.45 * n), dt)

    corrective_samples = np.vstack([retrace, replay, departure[1:]])
    corrective = Trajectory(corrective_samples, dt)
    corrective_cut = len(retrace) + (j_cut - j_back - 1)
    return deficient, corrective, corrective_cut

"""Acceptance suite: one test per release criterion, with a printed verdict.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the PASS lines and
the measured figures behind them.
"""

import json
import time

import numpy as np
import pytest

from dmpkit import io as dio
from dmpkit.blend import BlendConfig, blend, blend_dense, second_diff_operator
from dmpkit.cli import main
from dmpkit.correction import CorrectionRequest, correct
from dmpkit.dmp import DmpParams, basis_layout, fit, rollout
from dmpkit.trajectory import Trajectory, nearest_sample


def report(n, text):
    print(f"PASS criterion {n}: {text}")


def test_criterion_1_fit_rollout_round_trip():
    """20 seeded minimum-jerk demos, d in {1, 3}, 1-3 s at 250 Hz, n_basis=50:
    fit-then-rollout RMS error <= 2% of the per-dimension span, under 5 s."""
    started = time.perf_counter()
    worst = 0.0
    for index in range(20):
        rng = np.random.default_rng(5000 + index)
        dims = 1 if index % 2 == 0 else 3
        duration = float(rng.uniform(1.0, 3.0))
        start = rng.uniform(-2.0, 2.0, size=dims)
        goal = start + rng.uniform(1.0, 5.0, size=dims) * rng.choice([-1.0, 1.0], size=dims)
        demo = dio.minimum_jerk(start, goal, duration, 0.004)
        params = fit(demo, n_basis=50)
        redo = rollout(params, dt=0.004, duration=demo.duration)
        span = demo.samples.max(axis=0) - demo.samples.min(axis=0)
        rms = np.sqrt(np.mean((redo.samples - demo.samples) ** 2, axis=0))
        worst = max(worst, float(np.max(rms / span)))
        assert np.all(rms <= 0.02 * span)
    elapsed = time.perf_counter() - started
    assert elapsed < 5.0
    report(1, f"round-trip worst RMS/span = {worst:.2e} (limit 2e-2), {elapsed:.2f} s total")


def test_criterion_2_goal_convergence():
    """100 random primitives with |w| <= 1000, rollout for 5*tau: final
    per-dimension error <= 1e-2 * max(1, |g - y0|).

    Layouts use 10..50 basis functions: below ~8 the kernels are so wide
    that their normalized mixture never loses support, leaving a forcing
    residual of order w * x(5*tau) that no attractor can out-run.
    """
    worst = 0.0
    for index in range(100):
        rng = np.random.default_rng(9000 + index)
        dims = int(rng.integers(1, 4))
        n_basis = int(rng.integers(10, 51))
        tau = float(rng.uniform(0.3, 1.0))
        centers, widths = basis_layout(n_basis, tau, tau, 1.0)
        params = DmpParams(
            tau=tau, alpha_z=25.0, beta_z=6.25, alpha_x=1.0,
            weights=rng.uniform(-1000.0, 1000.0, size=(dims, n_basis)),
            centers=centers, widths=widths,
            goal=rng.uniform(-5.0, 5.0, size=dims),
            start=rng.uniform(-5.0, 5.0, size=dims),
        )
        out = rollout(params, dt=0.004, duration=5.0 * tau)
        limit = 1e-2 * np.maximum(1.0, np.abs(params.goal - params.start))
        gap = np.abs(out.samples[-1] - params.goal)
        worst = max(worst, float(np.max(gap / limit)))
        assert np.all(gap <= limit)
    report(2, f"goal convergence worst error/limit = {worst:.2e} over 100 primitives")


def test_criterion_3_blend_correctness():
    """50 random instances (M <= 500, d <= 4): banded solution matches the
    dense KKT oracle within 1e-8 max-norm, junction residuals <= 1e-9, and
    the regularization path is monotone across {0, 0.1, 1, 10, 100}."""
    rng = np.random.default_rng(77)
    lam_grid = (0.0, 0.1, 1.0, 10.0, 100.0)
    worst_gap = 0.0
    for _ in range(50):
        m = int(rng.integers(3, 501))
        dims = int(rng.integers(1, 5))
        y_dr = Trajectory(np.cumsum(rng.normal(size=(m, dims)), axis=0) * 0.1, 0.004)
        head = rng.normal(size=(2, dims))
        op = second_diff_operator(m)
        smoothness, fidelity = [], []
        for lam in lam_grid:
            config = BlendConfig(lam=lam)
            fast = blend(y_dr, head, config)
            dense = blend_dense(y_dr, head, config)
            gap = float(np.abs(fast.trajectory.samples - dense.trajectory.samples).max())
            worst_gap = max(worst_gap, gap)
            assert gap <= 1e-8
            scale = max(1.0, float(np.abs(y_dr.samples).max()), float(np.abs(head).max()))
            assert np.abs(fast.position_residual).max() <= 1e-9 * scale
            assert np.abs(fast.direction_residual).max() <= 1e-9 * scale
            y_m = fast.trajectory.samples
            smoothness.append(np.linalg.norm(op @ y_m))
            fidelity.append(np.linalg.norm(y_dr.samples - y_m))
        for a, b in zip(smoothness, smoothness[1:]):
            assert b <= a + 1e-12
        for a, b in zip(fidelity, fidelity[1:]):
            assert b >= a - 1e-12
    report(3, f"banded vs dense worst gap = {worst_gap:.2e} (limit 1e-8), path monotone")


def test_criterion_4_blend_speed():
    """Median blend solve time for M=250, d=7 at or below 1 ms."""
    rng = np.random.default_rng(0)
    config = BlendConfig(lam=1.0)
    times = []
    for _ in range(300):
        y_dr = Trajectory(np.cumsum(rng.normal(size=(250, 7)), axis=0) * 0.01, 0.004)
        head = rng.normal(size=(2, 7))
        begin = time.perf_counter()
        blend(y_dr, head, config)
        times.append(time.perf_counter() - begin)
    p50 = float(np.percentile(times, 50)) * 1e3
    p95 = float(np.percentile(times, 95)) * 1e3
    assert p50 <= 1.0
    report(4, f"blend M=250 d=7: p50 = {p50:.3f} ms, p95 = {p95:.3f} ms (limit p50 <= 1 ms)")


def test_criterion_5_split_correctness():
    """nearest_sample agrees with an exhaustive scan on 1000 random pairs."""
    rng = np.random.default_rng(31)
    for _ in range(1000):
        n = int(rng.integers(2, 300))
        dims = int(rng.integers(1, 5))
        traj = Trajectory(rng.normal(size=(n, dims)), 0.004)
        point = rng.normal(size=dims)
        index, distance = nearest_sample(traj, point)

        best_index, best_dist = 0, float("inf")
        for k in range(n):
            delta = traj.samples[k] - point
            d = float(np.sqrt(np.dot(delta, delta)))
            if d < best_dist:
                best_index, best_dist = k, d
        assert index == best_index
        assert distance == pytest.approx(best_dist, rel=1e-12)
    report(5, "split index equals exhaustive-scan oracle on 1000 random pairs")


def test_criterion_6_end_to_end_scenarios():
    """Generated overshoot/undershoot/obstacle-dip scenarios, seeds 1-10:
    (a) rollout lands within 1e-2 * span of the corrective goal, (b) the
    corrective tail is preserved bitwise, (c) the junction second difference
    stays within 3x the 95th percentile of second differences elsewhere,
    (d) the obstacle-dip rollout clears the corrective peak height - 2% span."""
    worst_ratio = 0.0
    for kind in ("overshoot", "undershoot", "obstacle-dip"):
        for seed in range(1, 11):
            deficient, corrective, cut = dio.generate_scenario(dio.ScenarioSpec(kind=kind), seed)
            outcome = correct(CorrectionRequest(
                deficient=deficient, corrective=corrective, corrective_cut=cut))
            merged = outcome.merged
            junction = outcome.diagnostics.junction_index

            redo = rollout(outcome.modified_dmp, y_start=deficient.samples[0], dt=0.004)
            span = merged.samples.max(axis=0) - merged.samples.min(axis=0)
            goal = corrective.samples[-1]
            assert np.all(np.abs(redo.samples[-1] - goal) <= 1e-2 * span)  # (a)

            assert np.array_equal(merged.samples[junction:], corrective.samples[cut:])  # (b)

            second = np.linalg.norm(np.diff(merged.samples, n=2, axis=0), axis=1)
            lo, hi = max(0, junction - 3), min(second.size, junction + 2)
            elsewhere = np.concatenate([second[:lo], second[hi:]])
            p95 = float(np.percentile(elsewhere, 95))
            ratio = outcome.diagnostics.junction_max_second_diff / p95
            worst_ratio = max(worst_ratio, ratio)
            assert ratio <= 3.0  # (c)

            if kind == "obstacle-dip":
                h = deficient.dims - 1
                peak = float(corrective.samples[:, h].max())
                assert redo.samples[:, h].max() >= peak - 0.02 * span[h]  # (d)
    report(6, f"30 scenario corrections pass; worst junction ratio = {worst_ratio:.2f} (limit 3)")


def test_criterion_7_cli_pipeline_determinism(tmp_path):
    """generate -> correct -> rollout twice with the same seed produces
    byte-identical output files."""
    outputs = []
    for run in ("a", "b"):
        work = tmp_path / run
        assert main(["generate", "--scenario", "obstacle-dip", "--seed", "7",
                     "--out-dir", str(work)]) == 0
        manifest = json.loads((work / "scenario.json").read_text())
        assert main(["correct",
                     "--deficient", str(work / "deficient.csv"),
                     "--corrective", str(work / "corrective.csv"),
                     "--cut", str(manifest["corrective_cut"]),
                     "--out-dmp", str(work / "modified.json"),
                     "--out-merged", str(work / "merged.csv")]) == 0
        assert main(["rollout", "--dmp", str(work / "modified.json"),
                     "--out", str(work / "rollout.csv")]) == 0
        outputs.append({
            name: (work / name).read_bytes()
            for name in ("deficient.csv", "corrective.csv", "scenario.json",
                         "modified.json", "merged.csv", "rollout.csv")
        })
    assert outputs[0] == outputs[1]
    report(7, "two identical CLI pipelines produced byte-identical files")

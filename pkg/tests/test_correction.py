import numpy as np
import pytest

from dmpkit import io as dio
from dmpkit.blend import BlendConfig
from dmpkit.correction import CorrectionRequest, correct, junction_metrics
from dmpkit.dmp import fit, rollout
from dmpkit.errors import PrefixTooShortError
from dmpkit.trajectory import Trajectory


def simple_request(**overrides):
    deficient, corrective, cut = dio.generate_scenario(dio.ScenarioSpec(kind="overshoot"), 7)
    kwargs = dict(deficient=deficient, corrective=corrective, corrective_cut=cut)
    kwargs.update(overrides)
    return CorrectionRequest(**kwargs)


class TestRequestValidation:
    def test_dimension_mismatch(self):
        deficient = Trajectory(np.zeros((10, 2)) + np.arange(10)[:, None], 0.01)
        corrective = Trajectory(np.arange(10.0), 0.01)
        with pytest.raises(ValueError, match="dimension"):
            CorrectionRequest(deficient=deficient, corrective=corrective, corrective_cut=2)

    def test_cut_must_leave_two_samples(self):
        deficient, corrective, _ = dio.generate_scenario(dio.ScenarioSpec(kind="overshoot"), 1)
        with pytest.raises(ValueError, match="cut"):
            CorrectionRequest(deficient=deficient, corrective=corrective,
                              corrective_cut=corrective.n_samples - 1)

    def test_negative_cut(self):
        deficient, corrective, _ = dio.generate_scenario(dio.ScenarioSpec(kind="overshoot"), 1)
        with pytest.raises(ValueError, match="cut"):
            CorrectionRequest(deficient=deficient, corrective=corrective, corrective_cut=-1)


class TestCorrect:
    def test_identity_when_correction_lies_on_deficient(self):
        # deficient is a straight line; corrective retraces its tail and
        # replays it, so position and direction already match at the junction
        # and a zero-smoothing blend must leave everything untouched
        n = 40
        line = np.linspace(0.0, 2.0, n)[:, None] * np.array([[1.0, -0.5]])
        deficient = Trajectory(line, 0.01)
        j = 25
        retrace = line[n - 1 : j - 1 : -1]
        replay = line[j + 1 :]
        corrective = Trajectory(np.vstack([retrace, replay]), 0.01)
        cut = len(retrace)  # first replay sample, mid-flight at deficient[j+1]
        outcome = correct(CorrectionRequest(
            deficient=deficient, corrective=corrective, corrective_cut=cut,
            blend=BlendConfig(lam=0.0), n_basis=10,
        ))
        assert outcome.merged.n_samples == n
        assert np.abs(outcome.merged.samples - line).max() <= 1e-10

    def test_junction_invariants(self):
        outcome = correct(simple_request())
        merged = outcome.merged.samples
        j = outcome.diagnostics.junction_index
        retained = simple_request().corrective.samples[simple_request().corrective_cut :]

        # retained corrective part appears verbatim from the junction on
        assert np.array_equal(merged[j:], retained)
        # position and direction at the junction match the corrective head
        assert np.abs(merged[j] - retained[0]).max() <= 1e-9
        assert np.abs((merged[j] - merged[j - 1]) - (retained[1] - retained[0])).max() <= 1e-9

    def test_endpoints(self):
        request = simple_request()
        outcome = correct(request)
        # ends exactly where the corrective demonstration ended
        assert np.array_equal(outcome.merged.samples[-1], request.corrective.samples[-1])
        assert np.array_equal(outcome.modified_dmp.goal, request.corrective.samples[-1])
        # starts where the deficient motion started, up to the blend's reshaping
        span = request.deficient.samples.max(axis=0) - request.deficient.samples.min(axis=0)
        assert np.all(np.abs(outcome.merged.samples[0] - request.deficient.samples[0]) <= 0.02 * span)

    def test_outcome_is_deterministic(self):
        request = simple_request()
        first = correct(request)
        second = correct(request)
        assert np.array_equal(first.merged.samples, second.merged.samples)
        assert np.array_equal(first.modified_dmp.weights, second.modified_dmp.weights)
        assert first.split == second.split

    def test_cut_too_early_raises(self):
        # a corrective that starts right at the deficient start leaves no prefix
        deficient = Trajectory(np.linspace(0.0, 1.0, 50), 0.01)
        corrective = Trajectory(np.linspace(0.0, 1.0, 20) + 0.001, 0.01)
        with pytest.raises(PrefixTooShortError, match="too early"):
            correct(CorrectionRequest(deficient=deficient, corrective=corrective, corrective_cut=0))

    def test_corrective_at_other_rate_is_resampled(self):
        deficient, corrective, cut = dio.generate_scenario(dio.ScenarioSpec(kind="undershoot"), 3)
        slower = Trajectory(corrective.samples[::2], corrective.dt * 2.0)
        outcome = correct(CorrectionRequest(
            deficient=deficient, corrective=slower, corrective_cut=cut // 2))
        assert outcome.merged.dt == deficient.dt
        assert np.array_equal(outcome.merged.samples[-1], slower.samples[-1])

    def test_scenario_a_analogue_reaches_corrected_goal(self):
        # deficient: rollout of a primitive taught to overshoot a goal of 1.0
        # (it settles at 1.2); corrective: retrace to 0.9, then finish at 1.0
        dt = 0.004
        overshoot_demo = dio.minimum_jerk(np.array([0.0]), np.array([1.2]), 1.6, dt)
        bad = fit(overshoot_demo, n_basis=50)
        deficient = rollout(bad, dt=dt, duration=1.6)

        back = dio.minimum_jerk(np.array([1.2]), np.array([0.9]), 0.5, dt)
        forward = dio.minimum_jerk(np.array([0.9]), np.array([1.0]), 0.5, dt)
        corrective = Trajectory(np.vstack([back.samples, forward.samples[1:]]), dt)
        cut = back.n_samples - 1

        outcome = correct(CorrectionRequest(
            deficient=deficient, corrective=corrective, corrective_cut=cut))
        redo = rollout(outcome.modified_dmp, y_start=deficient.samples[0],
                       dt=dt, duration=2.0 * outcome.modified_dmp.tau)

        goal = 1.0
        tol = 1e-2 * max(1.0, abs(goal - deficient.samples[0, 0]))
        assert abs(redo.samples[-1, 0] - goal) <= tol

        # the first half of the motion still follows the first half of the
        # deficient rollout
        half = deficient.n_samples // 2
        span = float(deficient.samples.max() - deficient.samples.min())
        assert np.abs(redo.samples[:half] - deficient.samples[:half]).max() <= 0.05 * span


class TestJunctionMetrics:
    def test_uniform_ramp(self):
        traj = Trajectory(np.linspace(0.0, 1.0, 11), 0.1)
        max_step, window = junction_metrics(traj, junction=5)
        assert max_step == pytest.approx(0.1)
        assert window <= 1e-12

    def test_unblended_gap_is_visible(self):
        a = np.linspace(0.0, 1.0, 20)
        b = np.linspace(11.0, 12.0, 20)
        traj = Trajectory(np.concatenate([a, b]), 0.1)
        max_step, window = junction_metrics(traj, junction=19)
        assert max_step >= 10.0
        assert window >= 9.0

    def test_window_restricts_to_junction(self):
        # a sharp kink far from the junction must not contaminate the window
        y = np.concatenate([np.linspace(0.0, 1.0, 30), np.linspace(1.0, 0.0, 30)[1:]])
        traj = Trajectory(y, 0.1)
        _, window_at_kink = junction_metrics(traj, junction=29)
        _, window_elsewhere = junction_metrics(traj, junction=10)
        assert window_at_kink > 1e-3
        assert window_elsewhere <= 1e-12

    def test_whole_trajectory_when_no_junction_given(self):
        y = np.concatenate([np.linspace(0.0, 1.0, 30), np.linspace(1.0, 0.0, 30)[1:]])
        traj = Trajectory(y, 0.1)
        _, window = junction_metrics(traj)
        assert window > 1e-3

    def test_blended_junction_stays_smooth(self):
        outcome = correct(simple_request())
        merged = outcome.merged
        j = outcome.diagnostics.junction_index
        second = np.linalg.norm(np.diff(merged.samples, n=2, axis=0), axis=1)
        lo, hi = max(0, j - 3), min(second.size, j + 2)
        elsewhere = np.concatenate([second[:lo], second[hi:]])
        p95 = float(np.percentile(elsewhere, 95))
        assert outcome.diagnostics.junction_max_second_diff <= 3.0 * p95

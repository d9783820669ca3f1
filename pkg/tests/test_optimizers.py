import math

import numpy as np
import pytest

from hotuner.core import HtHyperParams, ParamSchedule
from hotuner.objectives import (
    CountingObjective,
    DiagonalQuadratic,
    LogSumExpObjective,
    SwitchingRegression,
    TimeVaryingObjective,
    fd_gradient,
)
from hotuner.optimizers import (
    AccumulatorState,
    DivergenceError,
    HtState,
    adagrad_step,
    adam_step,
    gd_step,
    ht_step,
    legacy_ht_step,
    nagd_hyper,
    nagd_schedule,
    tn_gd_step,
)


def fig_objective():
    return LogSumExpObjective(a=5.0, b=7.0, c=ParamSchedule.from_pairs([(0, 0.0), (50, 5.0)]))


class ConstantGradient(TimeVaryingObjective):
    """Linear objective with a fixed gradient; handy for accumulator math."""

    dim = 1

    def __init__(self, g):
        self.g = float(g)

    def value(self, t, x):
        return self.g * float(np.asarray(x).reshape(-1)[0])

    def grad(self, t, x):
        return np.array([self.g])

    def smoothness_bound(self, t):
        return 0.0


class TestHtStep:
    def test_fixed_point_at_optimum(self):
        obj = LogSumExpObjective(a=5.0, b=7.0, c=2.0)
        state = HtState.from_point([2.0])
        nxt, x, g = ht_step(state, 0, obj, HtHyperParams(1.5, 1.0, 0.5, 49.0))
        assert x[0] == 2.0 and g[0] == 0.0
        assert nxt.y[0] == 2.0 and nxt.z[0] == 2.0

    def test_hand_computed_step(self):
        obj = LogSumExpObjective(a=5.0, b=7.0, c=0.0)
        state = HtState(y=np.array([1.0]), z=np.array([2.0]))
        h = HtHyperParams(gamma=1.5, mu=1.0, beta=2.0 / 3.0, normalizer=49.0)
        nxt, x, g = ht_step(state, 0, obj, h)
        x_expect = (2.0 / 3.0) * 2.0 + (1.0 / 3.0) * 1.0
        assert x[0] == pytest.approx(x_expect, rel=1e-15)
        g_expect = 7.0 * math.tanh(7.0 * x_expect)
        assert g[0] == g_expect
        assert g[0] == pytest.approx(7.0, abs=1e-7)
        assert g[0] == pytest.approx(fd_gradient(obj, 0, x, h=1e-6)[0], abs=1e-6)
        assert nxt.y[0] == pytest.approx(x_expect - g_expect / 49.0, rel=1e-15)
        assert nxt.z[0] == pytest.approx(2.0 - 1.5 * g_expect / 49.0, rel=1e-15)
        assert nxt.y[0] == pytest.approx(1.5238095, abs=1e-7)
        assert nxt.z[0] == pytest.approx(1.7857143, abs=1e-7)

    def test_last_x_invariant(self):
        obj = fig_objective()
        state = HtState(y=np.array([3.0]), z=np.array([-1.0]))
        h = HtHyperParams(1.2, 0.9, 0.3, 49.0)
        _, x, _ = ht_step(state, 0, obj, h)
        assert x[0] == h.beta * state.z[0] + (1.0 - h.beta) * state.y[0]

    def test_gd_coincidence_bitwise(self):
        obj = fig_objective()
        h = HtHyperParams(gamma=1.0, mu=1.0, beta=1.0, normalizer=49.0)
        state = HtState.from_point([5.0])
        x_gd = np.array([5.0])
        for t in range(500):
            state, x_ht, _ = ht_step(state, t, obj, h)
            assert x_ht[0] == x_gd[0]
            x_gd = gd_step(x_gd, t, obj, 49.0)

    def test_single_gradient_evaluation(self):
        obj = CountingObjective(fig_objective())
        ht_step(HtState.from_point([5.0]), 0, obj, HtHyperParams(1.5, 1.0, 0.5, 49.0))
        assert obj.grad_times == [0]

    def test_divergence_error_carries_state(self):
        class BadGradient(TimeVaryingObjective):
            dim = 1

            def value(self, t, x):
                return 0.0

            def grad(self, t, x):
                return np.array([float("nan")])

            def smoothness_bound(self, t):
                return 1.0

        state = HtState.from_point([1.0])
        with pytest.raises(DivergenceError) as err:
            ht_step(state, 3, BadGradient(), HtHyperParams(1.0, 1.0, 0.5, 1.0))
        assert err.value.t == 3
        assert err.value.state is state

    def test_determinism(self):
        obj = fig_objective()
        h = HtHyperParams(1.5, 1.0, 2.0 / 3.0, 49.0)

        def run():
            s = HtState.from_point([5.0])
            out = []
            for t in range(200):
                s, x, _ = ht_step(s, t, obj, h)
                out.append(x[0])
            return out

        assert run() == run()


class TestLegacyHtStep:
    def test_collapses_to_single_gradient_form_when_time_invariant(self):
        obj = LogSumExpObjective(a=5.0, b=7.0, c=0.0)
        gamma, beta, nrm = 0.04, 0.5, 49.0
        legacy = HtState.from_point([4.0])
        modern = HtState.from_point([4.0])
        h = HtHyperParams(gamma=gamma, mu=gamma * beta, beta=beta, normalizer=nrm)
        for t in range(100):
            legacy, x_l = legacy_ht_step(legacy, t, obj, gamma, beta, nrm)
            modern, x_m, _ = ht_step(modern, t, obj, h)
            assert x_l[0] == x_m[0]
            assert legacy.y[0] == modern.y[0] and legacy.z[0] == modern.z[0]

    def test_fixed_point(self):
        obj = LogSumExpObjective(a=5.0, b=7.0, c=1.0)
        state = HtState.from_point([1.0])
        nxt, x = legacy_ht_step(state, 0, obj, 0.04, 0.5, 49.0)
        assert x[0] == 1.0
        assert nxt.y[0] == 1.0 and nxt.z[0] == 1.0

    def test_two_gradient_evaluations_at_adjacent_steps(self):
        obj = CountingObjective(fig_objective())
        legacy_ht_step(HtState.from_point([5.0]), 7, obj, 0.04, 0.5, 49.0)
        assert sorted(obj.grad_times) == [7, 8]


class TestGdStep:
    def test_fixed_point(self):
        obj = LogSumExpObjective(a=5.0, b=7.0, c=0.0)
        assert gd_step([0.0], 0, obj, 49.0)[0] == 0.0

    def test_one_step_convergence_at_exact_normalization(self):
        obj = DiagonalQuadratic([49.0])
        assert gd_step([1.0], 0, obj, 49.0)[0] == pytest.approx(0.0, abs=1e-15)

    def test_saturated_gradient_step(self):
        obj = LogSumExpObjective(a=5.0, b=7.0, c=0.0)
        out = gd_step([5.0], 0, obj, 49.0)[0]
        assert out == 5.0 - 7.0 * math.tanh(35.0) / 49.0
        assert out == pytest.approx(4.857142857142857, rel=1e-12)

    def test_tn_gd_tracks_smoothness(self):
        obj = LogSumExpObjective(a=5.0, b=ParamSchedule.from_pairs([(0, 7.0), (50, 21.0)]), c=0.0)
        x = np.array([1.0])
        assert tn_gd_step(x, 0, obj)[0] == gd_step(x, 0, obj, 49.0)[0]
        assert tn_gd_step(x, 50, obj)[0] == gd_step(x, 50, obj, 441.0)[0]


class TestNagdSchedule:
    def test_first_step(self):
        h = nagd_hyper(1, 49.0)
        assert (h.gamma, h.mu, h.beta) == (0.5, 1.0, 1.0)

    def test_third_step(self):
        h = nagd_hyper(3, 49.0)
        assert (h.gamma, h.beta) == (1.5, 0.5)

    def test_gamma_grows_without_bound(self):
        assert nagd_hyper(100, 1.0).gamma == 50.0
        sched = nagd_schedule(200, 1.0)
        assert sched[-1].gamma == 100.0

    def test_undefined_before_one(self):
        with pytest.raises(ValueError):
            nagd_hyper(0, 1.0)

    def test_acceleration_beats_gd_on_ill_conditioned_quadratic(self):
        obj = DiagonalQuadratic([1.0, 25.0])

        def first_hit_gd():
            x = np.array([5.0, 5.0])
            for t in range(5000):
                if obj.value(t, x) <= 1e-6:
                    return t
                x = gd_step(x, t, obj, 25.0)
            return None

        def first_hit_nagd():
            s = HtState.from_point([5.0, 5.0])
            for t in range(5000):
                s, x, _ = ht_step(s, t, obj, nagd_hyper(t + 1, 25.0))
                if obj.value(t, x) <= 1e-6:
                    return t
            return None

        gd_hit, nagd_hit = first_hit_gd(), first_hit_nagd()
        assert gd_hit is not None and nagd_hit is not None
        assert nagd_hit < gd_hit


class TestAdagrad:
    def test_first_step(self):
        s = AccumulatorState(x=[3.0])
        out = adagrad_step(s, 0, ConstantGradient(2.0), alpha=1.0, eps=1e-8)
        assert out.x[0] == pytest.approx(3.0 - 2.0 / (2.0 + 1e-8), rel=1e-15)
        assert out.grad_sq_sum[0] == 4.0

    def test_zero_gradient_keeps_state(self):
        s = AccumulatorState(x=[1.5])
        for t in range(10):
            s = adagrad_step(s, t, ConstantGradient(0.0), alpha=1.0)
        assert s.x[0] == 1.5

    def test_constant_gradient_decays_like_inverse_sqrt(self):
        g = 3.0
        s = AccumulatorState(x=[0.0])
        prev = 0.0
        for t in range(1, 200):
            s = adagrad_step(s, t - 1, ConstantGradient(g), alpha=1.0, eps=1e-12)
            step = abs(s.x[0] - prev)
            prev = s.x[0]
            assert step == pytest.approx(1.0 / math.sqrt(t), rel=1e-9)

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            adagrad_step(AccumulatorState(x=[0.0]), 0, ConstantGradient(1.0), alpha=0.0)


class TestAdam:
    def test_first_step_is_signed_alpha(self):
        for g in (0.3, -4.0):
            s = AccumulatorState(x=[1.0])
            out = adam_step(s, 0, ConstantGradient(g), alpha=0.25, eps=1e-12)
            assert out.x[0] == pytest.approx(1.0 - 0.25 * math.copysign(1.0, g), rel=1e-9)
            assert out.step_count == 1

    def test_zero_gradient_keeps_state(self):
        s = AccumulatorState(x=[2.0])
        for t in range(5):
            s = adam_step(s, t, ConstantGradient(0.0), alpha=1.0)
        assert s.x[0] == 2.0

    def test_constant_gradient_saturates_to_decayed_rate(self):
        s = AccumulatorState(x=[0.0])
        prev = 0.0
        for t in range(1, 4000):
            s = adam_step(s, t - 1, ConstantGradient(-2.0), alpha=1.0, eps=1e-12)
            step = s.x[0] - prev
            prev = s.x[0]
        assert step == pytest.approx(1.0 / math.sqrt(3999.0), rel=1e-3)

    def test_moment_validation(self):
        with pytest.raises(ValueError):
            adam_step(AccumulatorState(x=[0.0]), 0, ConstantGradient(1.0), alpha=1.0, beta1=1.0)


class TestSwitchingRegressionRuns:
    def test_second_coordinate_untouched_before_switch(self):
        obj = SwitchingRegression.two_phase(40)
        state = HtState.from_point([0.0, 0.0])
        h = HtHyperParams(1.5, 1.0, 2.0 / 3.0, 2.0)
        for t in range(40):
            state, x, _ = ht_step(state, t, obj, h)
            assert x[1] == 0.0
        state, x, _ = ht_step(state, 40, obj, h)
        assert state.y[1] != 0.0

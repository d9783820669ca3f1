import math

import numpy as np
import pytest

from hotuner.core import (
    AnalysisParams,
    HtHyperParams,
    InvalidHyperParamError,
    ParamSchedule,
    ScheduleError,
    derived_rates,
    schedule_at,
)


class TestParamSchedule:
    def test_single_segment(self):
        s = ParamSchedule.constant(7.0)
        assert schedule_at(s, 3) == 7.0
        assert s.at(0) == 7.0

    def test_switch_is_left_closed(self):
        # the 7 -> 21 switch pattern used by the smoothness-change study
        s = ParamSchedule.from_pairs([(0, 7.0), (50, 21.0)])
        assert s.at(49) == 7.0
        assert s.at(50) == 21.0
        assert s.at(1000) == 21.0

    def test_value_before_switch(self):
        s = ParamSchedule.from_pairs([(0, 0.0), (50, 5.0)])
        assert s.at(49) == 0.0

    def test_vector_values(self):
        s = ParamSchedule.from_pairs([(0, (1.0, 0.0)), (10, (0.0, 1.0))])
        assert s.at(9) == (1.0, 0.0)
        assert s.at(10) == (0.0, 1.0)

    def test_governing_segment_is_unique(self):
        s = ParamSchedule.from_pairs([(0, 1.0), (3, 2.0), (10, 3.0), (40, 4.0)])
        starts = [seg[0] for seg in s.segments]
        for t in range(0, 60):
            v = s.at(t)
            governing = [val for st, val in s.segments if st <= t]
            assert v == governing[-1]
            # idempotent and deterministic
            assert s.at(t) == v
        assert starts == sorted(starts)

    def test_array_materialization(self):
        s = ParamSchedule.from_pairs([(0, 1.5), (2, 2.5)])
        assert np.array_equal(s.array(4), [1.5, 1.5, 2.5, 2.5])

    @pytest.mark.parametrize(
        "segments",
        [(), ((1, 5.0),), ((0, 1.0), (5, 2.0), (5, 3.0)), ((0, 1.0), (4, 2.0), (2, 3.0))],
    )
    def test_invalid_segments(self, segments):
        with pytest.raises(ScheduleError):
            ParamSchedule(tuple(segments))

    def test_non_finite_value_rejected(self):
        with pytest.raises(ScheduleError):
            ParamSchedule.constant(float("inf"))

    def test_negative_step_rejected(self):
        with pytest.raises(ScheduleError):
            ParamSchedule.constant(1.0).at(-1)


class TestHyperParams:
    def test_rates_fig_settings(self):
        alpha, eta = derived_rates(HtHyperParams(1.5, 1.0, 2.0 / 3.0, 49.0))
        assert alpha == 1.0 / 49.0
        assert eta == 1.5 / 49.0
        assert math.isclose(alpha, 0.020408163, rel_tol=1e-6)
        assert math.isclose(eta, 0.030612245, rel_tol=1e-6)

    def test_rates_unit_normalizer(self):
        alpha, eta = derived_rates(HtHyperParams(0.5, 1.0, 0.5, 1.0))
        assert (alpha, eta) == (1.0, 0.5)

    def test_rates_large_normalizer(self):
        alpha, eta = derived_rates(HtHyperParams(1.0, 1.0, 0.5, 441.0))
        assert alpha == eta == 1.0 / 441.0
        assert math.isclose(alpha, 0.0022676, rel_tol=1e-4)

    def test_normalizer_scaling_is_homogeneous(self):
        h1 = HtHyperParams(1.3, 0.9, 0.4, 7.0)
        for k in (2.0, 10.0, 0.25):
            hk = HtHyperParams(1.3, 0.9, 0.4, 7.0 * k)
            a1, e1 = derived_rates(h1)
            ak, ek = derived_rates(hk)
            assert math.isclose(ak, a1 / k, rel_tol=1e-12)
            assert math.isclose(ek, e1 / k, rel_tol=1e-12)

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(gamma=0.0, mu=1.0, beta=0.5, normalizer=1.0),
            dict(gamma=1.0, mu=0.0, beta=0.5, normalizer=1.0),
            dict(gamma=1.0, mu=1.2, beta=0.5, normalizer=1.0),
            dict(gamma=1.0, mu=1.0, beta=-0.1, normalizer=1.0),
            dict(gamma=1.0, mu=1.0, beta=1.1, normalizer=1.0),
            dict(gamma=1.0, mu=1.0, beta=0.5, normalizer=0.0),
            dict(gamma=1.0, mu=1.0, beta=0.5, normalizer=-3.0),
        ],
    )
    def test_invalid_hyper_params(self, kwargs):
        with pytest.raises(InvalidHyperParamError):
            HtHyperParams(**kwargs)

    def test_derived_accessors(self):
        h = HtHyperParams(1.5, 0.8, 0.25, 4.0)
        assert h.beta_bar == 0.75
        assert math.isclose(h.mu_bar, 0.2)
        assert h.alpha == 0.2
        assert h.eta == 0.375


class TestAnalysisParams:
    def test_defaults_valid(self):
        p = AnalysisParams()
        assert p.lam == 1.0 and p.xi == 1.0

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(epsilon=0.0),
            dict(lam=0.995, epsilon=0.01),
            dict(xi=0.001, epsilon=0.01),
            dict(nu=0.999, epsilon=0.01),
            dict(nu=0.0, epsilon=0.01),
        ],
    )
    def test_invalid_ranges(self, kwargs):
        with pytest.raises(InvalidHyperParamError):
            AnalysisParams(**kwargs)

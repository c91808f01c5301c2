"""
Tests for engine/decay.py and engine/fitting.py.

Covers:
  - CenteredPowers: two-state TV oracle, deep powers in log space, caching
  - tv_mixing_time
  - fit_geometric_rate on geometric, stagnant, periodic and vanishing sequences
  - constant_for / excess
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from chain.core import stationary
from engine.decay import CenteredPowers, measure_tv, tv_mixing_time, tv_rows, tv_table, v_uniform_rows
from engine.fitting import DecaySeries, constant_for, excess, fit_geometric_rate
from errors import BadParameters, EmptyWindow


# ── Centered powers ────────────────────────────────────────────────────────────

class TestCenteredPowers:
    def test_tv_rows_two_state(self, two_state, two_state_pi):
        table = tv_table(CenteredPowers(two_state, two_state_pi, 16))
        ns = np.arange(1, 17)
        assert table[:, 0] == pytest.approx(0.6 * 0.5 ** ns, rel=1e-12)
        assert table[:, 1] == pytest.approx(0.4 * 0.5 ** ns, rel=1e-12)

    def test_logs_survive_underflow(self, two_state, two_state_pi):
        logs = CenteredPowers(two_state, two_state_pi, 2000).collect({"tv": tv_rows})["tv"]
        expected = math.log(0.6) + 2000 * math.log(0.5)
        assert logs[-1, 0] == pytest.approx(expected, rel=1e-12)
        assert np.all(np.isfinite(logs))

    def test_uncached_matches_cached(self, reversible10):
        pi = stationary(reversible10)
        cached = CenteredPowers(reversible10, pi, 40).collect({"tv": tv_rows})["tv"]
        streamed = CenteredPowers(reversible10, pi, 40, cache_floats=0).collect({"tv": tv_rows})["tv"]
        assert np.array_equal(cached, streamed)

    def test_exact_zero_is_minus_infinity(self, uniform4):
        logs = CenteredPowers(uniform4, stationary(uniform4), 8).collect({"tv": tv_rows})["tv"]
        assert np.all(logs == -math.inf)

    def test_measure_reducer_matches_point_mass_rows(self, two_state, two_state_pi):
        powers = CenteredPowers(two_state, two_state_pi, 10)
        logs = powers.collect({"rows": tv_rows, "mu": measure_tv(np.eye(2))})
        assert logs["mu"] == pytest.approx(logs["rows"], rel=1e-12)

    def test_v_uniform_with_unit_weight(self, two_state, two_state_pi):
        logs = CenteredPowers(two_state, two_state_pi, 4).collect({"v": v_uniform_rows(np.ones(2))})["v"]
        assert np.exp(logs[0]) == pytest.approx([0.6, 0.4])

    def test_rejects_empty_range(self, two_state, two_state_pi):
        with pytest.raises(BadParameters):
            CenteredPowers(two_state, two_state_pi, 0)


class TestMixingTime:
    def test_two_state(self, two_state, two_state_pi):
        assert tv_mixing_time(two_state, two_state_pi, 0.25, 64) == 2

    def test_uniform_mixes_in_one_step(self, uniform4):
        assert tv_mixing_time(uniform4, stationary(uniform4), 0.25, 8) == 1

    def test_periodic_never_mixes(self, flip):
        assert tv_mixing_time(flip, stationary(flip), 0.25, 64) is None

    def test_eps_range(self, two_state, two_state_pi):
        with pytest.raises(BadParameters):
            tv_mixing_time(two_state, two_state_pi, 1.0, 8)


# ── Rate fitting ───────────────────────────────────────────────────────────────

class TestFitGeometricRate:
    def test_pure_geometric(self):
        ns = np.arange(1, 65)
        fit = fit_geometric_rate(DecaySeries.from_values(ns, 0.6 * 0.5 ** ns))
        assert fit.rho == pytest.approx(0.5, abs=1e-9)
        assert fit.C == pytest.approx(0.6, rel=1e-6)
        assert fit.holds

    def test_constant_sequence_is_not_geometric(self):
        fit = fit_geometric_rate(DecaySeries.from_values(range(1, 33), np.ones(32)))
        assert fit.rho == pytest.approx(1.0)
        assert not fit.holds

    def test_periodic_sequence_pinned_at_one(self):
        values = np.where(np.arange(1, 65) % 2 == 0, 1.0, 0.1)
        fit = fit_geometric_rate(DecaySeries.from_values(range(1, 65), values))
        assert fit.rho >= 1.0 - 1e-6
        assert not fit.geometric

    def test_all_zero(self):
        fit = fit_geometric_rate(DecaySeries.from_values(range(1, 9), np.zeros(8)))
        assert (fit.rho, fit.C) == (0.0, 0.0)
        assert fit.holds

    def test_bound_covers_every_observation(self):
        ns = np.arange(1, 129)
        values = 0.3 * 0.7 ** ns + 0.2 * 0.5 ** ns
        series = DecaySeries.from_values(ns, values)
        fit = fit_geometric_rate(series)
        assert fit.rho == pytest.approx(0.7, abs=1e-6)
        assert np.all(values <= fit.C * fit.rho ** ns * (1 + 1e-12))

    def test_log_series_far_below_double_range(self):
        logs = math.log(2.0) + np.arange(1, 101) * math.log(1e-10)
        fit = fit_geometric_rate(DecaySeries.from_logs(logs))
        assert fit.rho == pytest.approx(1e-10, rel=1e-6)

    def test_empty_window(self):
        series = DecaySeries.from_values(range(1, 9), np.ones(8))
        with pytest.raises(EmptyWindow):
            fit_geometric_rate(series, window=(100, 200))

    def test_negative_values_rejected(self):
        with pytest.raises(ValueError):
            DecaySeries.from_values([1, 2], [0.5, -0.1])


class TestConstants:
    def test_constant_for(self):
        series = DecaySeries.from_values([1, 2, 3], [0.5, 0.25, 0.2])
        assert constant_for(series, 0.5) == pytest.approx(1.6)

    def test_excess_of_exact_constant(self):
        series = DecaySeries.from_values([1, 2, 3], [0.5, 0.25, 0.2])
        assert excess(series, 0.5, 1.6) == pytest.approx(0.0, abs=1e-15)
        assert excess(series, 0.5, 1.0) == pytest.approx(0.2 - 0.125)

    def test_constant_for_zero_series(self):
        assert constant_for(DecaySeries.from_values([1, 2], [0.0, 0.0]), 0.5) == 0.0

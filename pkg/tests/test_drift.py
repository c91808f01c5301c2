"""
Tests for drift/.

Covers:
  - minorization and small-set search, the default small set
  - taboo radius and the return-time MGF on the two-state chain
  - truncated MGF series against the closed form on every seeded chain with N <= 6
  - kappa* never decreases when the small set grows
  - drift synthesis, verification, refutation and the j-th root family
"""

from __future__ import annotations

import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chain.core import stationary, validate_chain
from drift.drift import (
    drift_holds,
    drift_power,
    drift_slack,
    pi_v_bound_holds,
    power_certificates,
    synthesize_drift,
    verify_drift,
)
from drift.return_time import brute_force_gap, return_time_mgf, taboo_kernel, taboo_radius, truncated_return_mgf
from drift.small_sets import default_small_set, find_small_set_m, minorization, normalize_set
from errors import BadParameters, EmptySet, KappaBeyondRadius, NotIrreducible, SNotSmall, VBelowOne
from schemas import DriftCert, DriftRefutation
from zoo.batch import seeded_batch
from zoo.registry import build_default_registry

RECIPES = build_default_registry()


# ── Small sets ─────────────────────────────────────────────────────────────────

class TestSmallSets:
    def test_minorization_whole_space(self, two_state):
        cert = minorization(two_state, [0, 1], 1)
        assert cert.nu == pytest.approx([0.2, 0.3])
        assert cert.volume == pytest.approx(0.5)
        assert cert.is_small

    def test_singleton_is_small_at_one_step(self, rotation3):
        cert = find_small_set_m(rotation3, [0])
        assert cert is not None and cert.m == 1
        assert cert.volume == pytest.approx(1.0)

    def test_periodic_whole_space_is_not_small(self, flip):
        assert find_small_set_m(flip, [0, 1]) is None

    def test_default_small_set_is_heaviest_state(self, two_state_pi):
        assert default_small_set(two_state_pi) == [1]

    def test_normalize_set(self, two_state):
        assert normalize_set(two_state, [1, 0, 1]) == [0, 1]
        with pytest.raises(EmptySet):
            normalize_set(two_state, [])
        with pytest.raises(BadParameters):
            normalize_set(two_state, [2])


# ── Return times ───────────────────────────────────────────────────────────────

class TestReturnTimes:
    def test_taboo_radius_two_state(self, two_state):
        Q, idx, out = taboo_kernel(two_state, [0])
        assert (idx, out) == ([0], [1])
        assert taboo_radius(Q) == pytest.approx(0.8, rel=1e-10)

    def test_taboo_radius_matches_eigenvalues(self, registry):
        chain = registry.get("random_dense").generate(N=8, seed=11)
        Q, _, _ = taboo_kernel(chain, [0, 3])
        expected = float(np.max(np.abs(np.linalg.eigvals(Q))))
        assert taboo_radius(Q) == pytest.approx(expected, rel=1e-9)

    def test_taboo_radius_survives_underflowing_iterate(self):
        # the second coordinate shrinks by 1/1.9 per step and would reach 0/0
        Q = np.array([[0.9, 0.0], [0.0, 0.0]])
        with warnings.catch_warnings():
            warnings.simplefilter("error", RuntimeWarning)
            radius = taboo_radius(Q, max_iter=2000)
        assert radius == pytest.approx(0.9, rel=1e-9)

    def test_two_state_oracle(self, two_state):
        cert = return_time_mgf(two_state, [0], kappa=1.1)
        assert cert.kappa_star == pytest.approx(1.25, rel=1e-10)
        assert cert.mgf == pytest.approx([1.375], rel=1e-10)
        assert cert.hitting_mgf == pytest.approx([11 / 6], rel=1e-10)

    def test_default_kappa_is_geometric_midpoint(self, two_state):
        cert = return_time_mgf(two_state, [0])
        assert cert.kappa == pytest.approx(math.sqrt(1.25), rel=1e-9)

    def test_kappa_at_or_beyond_radius(self, two_state):
        with pytest.raises(KappaBeyondRadius) as info:
            return_time_mgf(two_state, [0], kappa=1.3)
        assert info.value.kappa_star == pytest.approx(1.25)

    def test_kappa_must_exceed_one(self, two_state):
        with pytest.raises(BadParameters):
            return_time_mgf(two_state, [0], kappa=1.0)

    def test_deterministic_cycle(self, flip):
        cert = return_time_mgf(flip, [0])
        assert math.isinf(cert.kappa_star)
        assert cert.kappa == pytest.approx(2.0)
        assert cert.mgf == pytest.approx([4.0])

    def test_reducible_chain_refused(self):
        with pytest.raises(NotIrreducible):
            return_time_mgf(validate_chain(np.eye(2)), [0])

    @pytest.mark.parametrize("seed", range(6))
    def test_truncated_series_converges_to_closed_form(self, registry, seed):
        n = 2 + seed % 5
        chain = registry.get("random_dense").generate(N=n, seed=seed, sparsity=0.3)
        S = [0] if seed % 2 else [0, n - 1]
        cert = return_time_mgf(chain, S)
        ratio = math.sqrt(cert.taboo_radius)
        n_terms = 200 if ratio == 0 else max(200, math.ceil(math.log(1e-12) / math.log(ratio)))
        series = truncated_return_mgf(chain, S, cert.kappa, n_terms=n_terms)
        assert series == pytest.approx(cert.mgf, rel=1e-7)

    def test_brute_force_on_seeded_batch(self):
        for recipe, chain in seeded_batch(40, seed=2, max_states=6):
            S = default_small_set(stationary(chain))
            assert brute_force_gap(chain, S) <= 1e-6, (recipe.kind, recipe.params)

    @pytest.mark.slow
    def test_brute_force_on_large_seeded_batch(self):
        for recipe, chain in seeded_batch(500, seed=17, max_states=6):
            S = default_small_set(stationary(chain))
            assert brute_force_gap(chain, S) <= 1e-6, (recipe.kind, recipe.params)

    @settings(max_examples=60, deadline=None)
    @given(
        st.integers(min_value=2, max_value=7),
        st.integers(min_value=0, max_value=10_000),
        st.data(),
    )
    def test_kappa_star_never_decreases_on_supersets(self, n, seed, data):
        chain = RECIPES.get("random_dense").generate(N=n, seed=seed, sparsity=0.3)
        S = data.draw(st.sets(st.integers(0, n - 1), min_size=1, max_size=n - 1))
        extra = data.draw(st.sets(st.integers(0, n - 1), min_size=1))
        smaller = return_time_mgf(chain, sorted(S)).kappa_star
        larger = return_time_mgf(chain, sorted(S | extra)).kappa_star
        assert larger >= smaller * (1 - 1e-9)


# ── Drift ──────────────────────────────────────────────────────────────────────

class TestDrift:
    @pytest.fixture
    def synthesized(self, two_state, two_state_pi):
        return synthesize_drift(two_state, [0], kappa=1.1, pi=two_state_pi, j_set=[1, 2])

    def test_synthesized_oracle(self, synthesized):
        assert synthesized.V == pytest.approx([1.0, 11 / 6])
        assert synthesized.lambda_ == pytest.approx(1 / 1.1)
        assert synthesized.b == pytest.approx(0.340909, abs=1e-6)
        assert synthesized.small_set_m == 1

    def test_synthesized_drift_holds(self, two_state, synthesized):
        assert drift_holds(two_state, synthesized)
        assert drift_slack(two_state, synthesized) == pytest.approx(0.0, abs=1e-12)

    def test_stationary_mean_bound(self, two_state_pi, synthesized):
        assert synthesized.pi_V_moments[1] == pytest.approx(1.5)
        assert pi_v_bound_holds(synthesized, two_state_pi)

    def test_verify_recovers_synthesized_lambda(self, two_state, synthesized):
        cert = verify_drift(two_state, synthesized.V, [0])
        assert isinstance(cert, DriftCert)
        assert cert.lambda_ == pytest.approx(synthesized.lambda_, rel=1e-12)
        assert cert.b == pytest.approx(synthesized.b, rel=1e-9)

    def test_constant_weight_is_refuted(self, two_state):
        result = verify_drift(two_state, np.ones(2), [0])
        assert isinstance(result, DriftRefutation)
        assert result.lambda_ == pytest.approx(1.0)
        assert result.worst_state == 1

    def test_whole_space_uses_half(self, two_state):
        cert = verify_drift(two_state, np.ones(2), [0, 1])
        assert cert.lambda_ == pytest.approx(0.5)
        assert cert.b == pytest.approx(0.5)

    def test_periodic_whole_space_not_small(self, flip):
        with pytest.raises(SNotSmall):
            verify_drift(flip, np.ones(2), [0, 1])

    def test_synthesis_refuses_a_set_that_is_not_small(self, flip):
        with pytest.raises(SNotSmall):
            synthesize_drift(flip, [0, 1])

    def test_weight_below_one(self, two_state):
        with pytest.raises(VBelowOne):
            verify_drift(two_state, [0.5, 1.0], [0])

    def test_square_root_family(self, two_state, two_state_pi, synthesized):
        cert = drift_power(synthesized, 2, pi=two_state_pi, j_set=[2])
        assert cert.V[1] == pytest.approx(1.35401, abs=1e-5)
        assert cert.lambda_ == pytest.approx(0.95346, abs=1e-5)
        assert cert.b == pytest.approx(0.58388, abs=1e-5)
        assert drift_holds(two_state, cert)

    @pytest.mark.parametrize("seed", range(5))
    def test_every_root_is_a_drift(self, registry, seed):
        chain = registry.get("random_reversible").generate(N=7, seed=seed)
        pi = stationary(chain)
        base = synthesize_drift(chain, default_small_set(pi), pi=pi)
        for cert in power_certificates(base, [1, 2, 3, 5], pi=pi):
            assert drift_holds(chain, cert)
            assert pi_v_bound_holds(cert, pi)

    def test_power_needs_positive_j(self, synthesized):
        with pytest.raises(BadParameters):
            drift_power(synthesized, 0)

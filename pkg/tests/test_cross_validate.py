"""
Tests for engine/condition_runner.py and engine/cross_validate.py.

Covers:
  - context construction: default and user small sets, kappa fallback, refusals
  - the runner: ordering, condition selection, failing evaluators
  - full cross-validation on the two-state chain, rotations and a seeded
    reversible chain; witnesses and rate coherence
  - slow sweeps over seeded batches
"""

from __future__ import annotations

import math
import sys

import numpy as np
import pytest

from chain.core import stationary, validate_chain
from engine.condition_runner import EVALUATORS, Evaluator, build_context, run_evaluators
from engine.cross_validate import (
    analyze_chain,
    cross_validate,
    holder_bound_holds,
    summary_rates,
    unit_weight_rates,
)
from errors import NotIrreducible, SNotSmall
from schemas import ConditionId, EdgeStatus, RunConfig
from zoo.batch import seeded_batch

C = ConditionId
FAST = RunConfig(n_max=64, j_set=[1, 2])


@pytest.fixture(scope="module")
def two_state_run(two_state):
    return analyze_chain(two_state, FAST)


class TestBuildContext:
    def test_default_small_set(self, two_state):
        ctx = build_context(two_state, FAST)
        assert ctx.S == [1]
        assert ctx.battery.matrix.shape[0] == 2 + 1 + 4
        assert ctx.V.V.min() >= 1.0

    def test_user_small_set_and_kappa(self, two_state):
        ctx = build_context(two_state, FAST.model_copy(update={"small_set": [0], "kappa": 1.1}))
        assert ctx.S == [0]
        assert ctx.drift.lambda_ == pytest.approx(1 / 1.1)
        assert ctx.V.V == pytest.approx([1.0, 11 / 6])

    def test_kappa_beyond_radius_uses_default(self, two_state):
        ctx = build_context(two_state, FAST.model_copy(update={"small_set": [0], "kappa": 5.0}))
        assert ctx.drift.lambda_ == pytest.approx(1 / math.sqrt(1.25))

    def test_small_set_must_minorize(self, flip):
        with pytest.raises(SNotSmall):
            build_context(flip, FAST.model_copy(update={"small_set": [0, 1]}))

    def test_identity_refused(self):
        with pytest.raises(NotIrreducible):
            build_context(validate_chain(np.eye(3)), FAST)


class TestRunner:
    def test_all_conditions_in_order(self, two_state):
        verdicts, statuses = run_evaluators(build_context(two_state, FAST))
        assert [v.condition for v in verdicts] == list(ConditionId)
        assert [s.evaluator for s in statuses] == [e.name for e in EVALUATORS]
        assert all(s.success for s in statuses)

    def test_selected_conditions_only(self, two_state):
        config = FAST.model_copy(update={"conditions": [C.I, C.XV]})
        verdicts, statuses = run_evaluators(build_context(two_state, config))
        assert [v.condition for v in verdicts] == [C.I, C.XV]
        assert [s.evaluator for s in statuses] == ["pointwise_tv", "spectral"]

    def test_failing_evaluator_recorded(self, two_state):
        def explode(ctx):
            raise RuntimeError("boom")

        broken = [Evaluator("broken", (C.I, C.II), explode)]
        verdicts, statuses = run_evaluators(build_context(two_state, FAST), broken)
        assert not statuses[0].success
        assert "boom" in statuses[0].error
        assert all(not v.holds and v.diagnostics["evaluation_error"] == 1.0 for v in verdicts)


class TestTwoState:
    def test_everything_holds(self, two_state_run):
        _, report, _ = two_state_run
        assert len(report.verdicts) == 33
        assert all(v.holds for v in report.verdicts)
        assert report.violated_edges == []
        assert report.consistent

    def test_rates_match_eigenvalue(self, two_state_run):
        _, report, _ = two_state_run
        assert {c.source for c in report.rate_checks} == {"i", "ix_V1", "xxiii_V1", "xv_V1"}
        for check in report.rate_checks:
            assert check.oracle == pytest.approx(0.5, abs=1e-12)
            assert check.rate == pytest.approx(0.5, abs=1e-3)

    def test_witnesses_pass(self, two_state_run):
        _, report, _ = two_state_run
        witnessed = {(e.source, e.target): e.witness for e in report.edges if e.witness is not None}
        assert witnessed[(C.XI, C.I)] == "pass"
        assert witnessed[(C.XII, C.IV)] == "pass"
        assert witnessed[(C.VI, C.VII)] == "pass"
        assert witnessed[(C.VII, C.VIII)] == "pass"
        assert witnessed[(C.XXV, C.XXIII)] == "pass"
        assert report.witness_failures == []

    def test_summary_rates(self, two_state_run):
        ctx, report, _ = two_state_run
        rates = summary_rates(ctx, report)
        assert rates["pi_perp_norm"] == pytest.approx(0.5, abs=1e-9)
        assert rates["second_eigenvalue_modulus"] == pytest.approx(0.5, abs=1e-12)
        assert rates["rho_tv"] == pytest.approx(0.5, abs=1e-6)
        assert rates["kappa_star"] == pytest.approx(1 / 0.7, rel=1e-9)
        assert rates["mixing_time"] == 2.0

    def test_unit_weight_rates(self, two_state_run):
        _, report, _ = two_state_run
        rates = unit_weight_rates(report.weight_sweeps[0].verdicts)
        assert set(rates) == {"ix_V1", "xxiii_V1", "xv_V1"}
        for rate in rates.values():
            assert rate == pytest.approx(0.5, abs=1e-6)
        assert unit_weight_rates([]) == {}


class TestUnitWeightSweep:
    def test_two_state_sweep(self, two_state_run):
        _, report, _ = two_state_run
        (sweep,) = report.weight_sweeps
        assert sweep.weight == "V1"
        assert [v.condition.index for v in sweep.verdicts] == list(range(9, 27))
        assert all(v.holds for v in sweep.verdicts)
        assert sweep.violated_edges == []
        by_id = {v.condition: v for v in sweep.verdicts}
        assert by_id[C.IX].diagnostics["pi_V"] == pytest.approx(1.0)
        assert by_id[C.XV].certificate.radius == pytest.approx(0.5, abs=1e-6)

    def test_sweep_differs_from_drift_weight(self, two_state_run):
        _, report, _ = two_state_run
        assert report.verdict(C.IX).diagnostics["pi_V"] > 1.0

    def test_rotation_sweep_fails_everywhere(self, rotation3):
        report = cross_validate(rotation3, config=FAST)
        (sweep,) = report.weight_sweeps
        assert not any(v.holds for v in sweep.verdicts)
        assert sweep.violated_edges == []

    def test_follows_condition_selection(self, two_state):
        report = cross_validate(two_state, config=FAST.model_copy(update={"conditions": [C.I, C.XV]}))
        assert [v.condition for v in report.weight_sweeps[0].verdicts] == [C.XV]
        drift_only = cross_validate(two_state, config=FAST.model_copy(update={"conditions": [C.VII]}))
        assert drift_only.weight_sweeps == []

    def test_sweep_violations_reach_the_report(self, two_state, monkeypatch):
        def explode(ctx):
            raise RuntimeError("boom")

        broken = [Evaluator("v_uniform", tuple(c for c in C if 9 <= c.index <= 12), explode)]
        monkeypatch.setattr(sys.modules["engine.cross_validate"], "WEIGHTED_EVALUATORS", broken)
        report = cross_validate(two_state, config=FAST)
        assert report.weight_sweeps[0].violated_edges
        assert all(label.startswith("V1:") for label in report.violated_edges)
        assert not report.consistent


class TestRefutation:
    @pytest.mark.parametrize("n", [2, 3])
    def test_rotations_fail_everywhere_consistently(self, registry, n):
        chain = registry.get("cycle").generate(N=n)
        report = cross_validate(chain, config=FAST)
        applicable = [v for v in report.verdicts if v.applicable]
        assert applicable and not any(v.holds for v in applicable)
        assert report.violated_edges == []
        assert all(e.witness is None for e in report.edges)

    def test_period_three_skips_reversible_edges(self, rotation3):
        report = cross_validate(rotation3, config=FAST)
        skipped = [e for e in report.edges if e.status is EdgeStatus.SKIPPED]
        assert skipped and all(e.source.requires_reversible or e.target.requires_reversible for e in skipped)
        assert report.rate_checks == []

    def test_reducible_refused(self):
        with pytest.raises(NotIrreducible):
            cross_validate(validate_chain(np.eye(2)))


class TestSeededChains:
    def test_random_reversible(self, reversible10):
        report = cross_validate(reversible10, config=FAST)
        assert report.violated_edges == []
        assert all(v.holds for v in report.verdicts)

    def test_lazy_rotation_is_aperiodic(self, registry, rotation3):
        chain = registry.get("lazy").generate(chain=rotation3, epsilon=0.5)
        report = cross_validate(chain, config=FAST)
        assert report.verdict(C.VI).holds
        assert report.violated_edges == []

    def test_holder_bound_on_battery(self, reversible10):
        ctx = build_context(reversible10, FAST)
        for mu in ctx.battery.matrix:
            for j in (1, 2, 3, 5):
                assert holder_bound_holds(mu, ctx.V.V, ctx.pi, j)


@pytest.mark.slow
class TestSweeps:
    def test_thousand_chains_have_no_violated_edges(self):
        config = RunConfig(n_max=128, j_set=[1, 2])
        for recipe, chain in seeded_batch(1000, seed=11):
            report = cross_validate(chain, config=config)
            assert report.violated_edges == [], (recipe.kind, recipe.params)

    def test_rate_coherence_on_reversible_chains(self, registry):
        for seed in range(100):
            chain = registry.get("random_reversible").generate(N=2 + seed % 24, seed=seed)
            report = cross_validate(chain, stationary(chain), RunConfig(j_set=[1]))
            assert report.rate_violations == [], seed

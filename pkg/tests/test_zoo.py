"""
Tests for the zoo package.

Covers:
  - registry bookkeeping
  - each recipe: stationary law, structure, parameter validation
  - seeded determinism
  - degradation study on the heavy-tail family, monotonicity flag
  - seeded batches
"""

from __future__ import annotations

import logging

import numpy as np
import pandas as pd
import pytest

from chain.core import stationary, structure
from errors import BadParameters
from spectral.analysis import reversible_spectrum
from zoo.base_recipe import BaseRecipe
from zoo.batch import batch_recipe, seeded_batch
from zoo.degradation import COLUMNS, degradation_study
from zoo.recipes import TwoState
from zoo.registry import RecipeRegistry, ZooRecipe, generate


# ── Registry ───────────────────────────────────────────────────────────────────

class TestRegistry:
    def test_default_names(self, registry):
        assert registry.recipe_names == [
            "two_state",
            "cycle",
            "uniform",
            "random_dense",
            "random_reversible",
            "metropolis_grid",
            "truncated_heavy_tail",
            "lazy",
        ]
        assert len(registry) == 8
        assert "cycle" in registry

    def test_duplicate_registration(self):
        registry = RecipeRegistry()
        registry.register(TwoState())
        with pytest.raises(ValueError):
            registry.register(TwoState())

    def test_unknown_recipe(self, registry):
        with pytest.raises(KeyError):
            registry.get("ehrenfest")

    def test_list_recipes_has_descriptions(self, registry):
        assert all(entry["description"] for entry in registry.list_recipes())

    def test_generate_from_recipe_model(self):
        chain = generate(ZooRecipe(kind="cycle", params={"N": 4}))
        assert chain.n == 4

    def test_every_recipe_is_a_base_recipe(self, registry):
        assert all(isinstance(registry.get(name), BaseRecipe) for name in registry.recipe_names)


# ── Recipes ────────────────────────────────────────────────────────────────────

class TestRecipes:
    def test_two_state(self, two_state, two_state_pi):
        assert two_state.P == pytest.approx(np.array([[0.7, 0.3], [0.2, 0.8]]))
        assert two_state_pi.pi == pytest.approx([0.4, 0.6], abs=1e-12)

    @pytest.mark.parametrize("a, b", [(0.0, 0.5), (0.5, 1.5), (-0.1, 0.2)])
    def test_two_state_bad_parameters(self, registry, a, b):
        with pytest.raises(BadParameters):
            registry.get("two_state").generate(a=a, b=b)

    def test_cycle_period(self, registry):
        report = structure(registry.get("cycle").generate(N=5))
        assert report.period == 5
        assert not report.aperiodic

    @pytest.mark.parametrize("N", [0, 2.5, True])
    def test_bad_size(self, registry, N):
        with pytest.raises(BadParameters):
            registry.get("cycle").generate(N=N)

    def test_uniform_is_its_own_projector(self, uniform4):
        assert np.allclose(uniform4.P, stationary(uniform4).projector())

    def test_random_dense_seeded(self, registry):
        recipe = registry.get("random_dense")
        first = recipe.generate(N=6, seed=5)
        assert np.array_equal(first.P, recipe.generate(N=6, seed=5).P)
        assert not np.array_equal(first.P, recipe.generate(N=6, seed=6).P)

    def test_sparse_support_stays_irreducible(self, registry):
        chain = registry.get("random_dense").generate(N=12, seed=1, sparsity=0.8)
        assert np.count_nonzero(chain.P) < 144
        report = structure(chain)
        assert report.irreducible and report.aperiodic

    def test_sparsity_range(self, registry):
        with pytest.raises(BadParameters):
            registry.get("random_reversible").generate(N=4, sparsity=1.0)

    def test_random_reversible(self, reversible10):
        pi = stationary(reversible10)
        assert pi.residual < 1e-12
        report = structure(reversible10)
        assert report.reversible and report.aperiodic

    def test_metropolis_grid_targets_weights(self, registry):
        weights = np.arange(1.0, 10.0)
        chain = registry.get("metropolis_grid").generate(width=3, target_weights=weights)
        assert stationary(chain).pi == pytest.approx(weights / weights.sum(), abs=1e-12)
        assert structure(chain).reversible

    def test_metropolis_grid_rejects_bad_weights(self, registry):
        with pytest.raises(BadParameters):
            registry.get("metropolis_grid").generate(width=2, target_weights=[1.0, 2.0, 0.0, 1.0])

    def test_heavy_tail_stationary_law(self, registry):
        chain = registry.get("truncated_heavy_tail").generate(N=15, alpha=2.5)
        target = (np.arange(15) + 1.0) ** -2.5
        assert stationary(chain).pi == pytest.approx(target / target.sum(), rel=1e-9)
        assert structure(chain).reversible

    def test_heavy_tail_alpha_range(self, registry):
        with pytest.raises(BadParameters):
            registry.get("truncated_heavy_tail").generate(N=10, alpha=1.0)

    def test_lazy_rotation(self, registry, rotation3):
        chain = registry.get("lazy").generate(chain=rotation3, epsilon=0.5)
        report = structure(chain)
        assert report.aperiodic and not report.reversible
        assert stationary(chain).pi == pytest.approx([1 / 3] * 3, abs=1e-12)

    def test_lazy_flip_has_a_gap(self, registry, flip):
        chain = registry.get("lazy").generate(chain=flip, epsilon=0.5)
        assert reversible_spectrum(chain, stationary(chain)).gap > 0

    def test_lazy_needs_base_chain(self, registry):
        with pytest.raises(BadParameters):
            registry.get("lazy").generate(epsilon=0.5)

    @pytest.mark.parametrize("epsilon", [0.0, 1.0])
    def test_lazy_epsilon_range(self, registry, flip, epsilon):
        with pytest.raises(BadParameters):
            registry.get("lazy").generate(chain=flip, epsilon=epsilon)


# ── Degradation ────────────────────────────────────────────────────────────────

class TestDegradation:
    def test_heavy_tail_rates_degrade(self):
        table = degradation_study("truncated_heavy_tail", [10, 20, 40, 80], alpha=2.5)
        assert isinstance(table, pd.DataFrame)
        assert list(table.columns) == COLUMNS
        assert table["size"].tolist() == [10, 20, 40, 80]
        assert np.all(np.diff(table["gap"]) < 0)
        assert np.all(np.diff(table["kappa_star"] - 1.0) < 0)
        assert np.all(table["gap"] > 0)

    def test_sizes_sorted_and_deduplicated(self, registry):
        table = degradation_study(registry.get("cycle"), [4, 2, 4], n_max=16)
        assert table["size"].tolist() == [2, 4]

    def test_unsized_recipe_repeats_one_row(self):
        table = degradation_study("two_state", [2, 3, 5], n_max=32)
        values = table[["gap", "kappa_star", "fitted_rho"]].to_numpy()
        assert np.all(values == values[0])
        assert values[0, 0] == pytest.approx(0.5, abs=1e-12)

    def test_monotone_family_is_flagged(self):
        table = degradation_study("truncated_heavy_tail", [10, 20], alpha=2.5, n_max=64)
        assert table.attrs["monotone"] is True

    def test_growing_gap_warns(self, caplog):
        class Widening(TwoState):
            size_param = None

            def sized(self, size, **params):
                return self.generate(a=0.1 * size, b=0.1 * size)

        with caplog.at_level(logging.WARNING, logger="zoo.degradation"):
            table = degradation_study(Widening(), [1, 2, 3], n_max=32)
        assert table["gap"].tolist() == pytest.approx([0.2, 0.4, 0.6], abs=1e-9)
        assert table.attrs["monotone"] is False
        assert any(r.levelno == logging.WARNING and "two_state" in r.getMessage() for r in caplog.records)


# ── Batches ────────────────────────────────────────────────────────────────────

class TestBatch:
    def test_recipes_are_seeded(self):
        assert batch_recipe(3, 7) == batch_recipe(3, 7)
        assert [batch_recipe(k, 7) for k in range(10)] != [batch_recipe(k, 7) for k in range(1, 11)]

    def test_batch_chains_are_irreducible_and_aperiodic(self):
        for recipe, chain in seeded_batch(30, seed=3, max_states=8):
            report = structure(chain)
            assert report.irreducible, recipe
            assert report.aperiodic, recipe
            assert chain.n <= 8

    def test_reversible_share(self):
        reversible = sum(structure(chain).reversible for _, chain in seeded_batch(20, seed=5, max_states=10))
        assert reversible >= 8

    def test_same_seed_same_matrices(self):
        first = [chain.P for _, chain in seeded_batch(10, seed=9, max_states=6)]
        second = [chain.P for _, chain in seeded_batch(10, seed=9, max_states=6)]
        assert all(np.array_equal(a, b) for a, b in zip(first, second))

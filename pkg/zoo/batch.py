"""
Seeded batches of irreducible aperiodic chains for sweep runs.

The mix cycles through dense, sparse, reversible, grid, heavy-tail and lazy
cycle constructions; reversible constructions make up at least 40% of any
batch of ten or more.
"""

from __future__ import annotations

from typing import Iterator, Tuple

import numpy as np

from chain.core import ChainSpec
from config import CROSSVAL_MAX_STATES
from zoo.registry import ZooRecipe, build_default_registry

_KINDS = [
    "random_dense",
    "random_reversible",
    "random_dense_sparse",
    "random_reversible_sparse",
    "metropolis_grid",
    "random_dense",
    "random_reversible",
    "random_dense_sparse",
    "truncated_heavy_tail",
    "lazy_cycle",
]


def batch_recipe(k: int, seed: int, max_states: int = CROSSVAL_MAX_STATES) -> ZooRecipe:
    """The k-th recipe of the batch started at `seed`."""
    rng = np.random.default_rng([seed, k])
    kind = _KINDS[k % len(_KINDS)]
    n = int(rng.integers(2, max_states + 1))
    chain_seed = int(rng.integers(0, 2 ** 31))
    if kind in ("random_dense", "random_reversible"):
        return ZooRecipe(kind=kind, params={"N": n, "seed": chain_seed})
    if kind.endswith("_sparse"):
        return ZooRecipe(kind=kind[: -len("_sparse")],
                         params={"N": n, "seed": chain_seed, "sparsity": float(rng.uniform(0.3, 0.8))})
    if kind == "metropolis_grid":
        width = int(rng.integers(2, int(np.sqrt(max_states)) + 1))
        return ZooRecipe(kind=kind, params={"width": width, "seed": chain_seed})
    if kind == "truncated_heavy_tail":
        return ZooRecipe(kind=kind, params={"N": n, "alpha": float(rng.uniform(1.5, 4.0))})
    return ZooRecipe(kind="lazy", params={"N": n, "epsilon": float(rng.uniform(0.1, 0.9))})


def seeded_batch(count: int, seed: int, max_states: int = CROSSVAL_MAX_STATES) -> Iterator[Tuple[ZooRecipe, ChainSpec]]:
    registry = build_default_registry()
    for k in range(count):
        recipe = batch_recipe(k, seed, max_states)
        if recipe.kind == "lazy":
            base = registry.get("cycle").generate(N=recipe.params["N"])
            chain = registry.get("lazy").generate(chain=base, epsilon=recipe.params["epsilon"])
        else:
            chain = registry.generate(recipe)
        yield recipe, chain

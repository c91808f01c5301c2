"""
Concrete zoo recipes.

Seeded recipes draw from numpy's default_rng(seed), so a (recipe, params,
seed) triple always regenerates the same matrix bit for bit.
"""

from __future__ import annotations

import logging
from typing import Optional, Sequence

import numpy as np

from chain.core import ChainSpec, validate_chain
from config import ZOO_MIN_WEIGHT, ZOO_ROW_TOL
from errors import BadParameters
from zoo.base_recipe import BaseRecipe

logger = logging.getLogger(__name__)


def _positive_int(name: str, value, minimum: int = 1) -> int:
    if isinstance(value, bool) or int(value) != value or int(value) < minimum:
        raise BadParameters(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)


def _sparsity_mask(rng: np.random.Generator, n: int, sparsity: float, symmetric: bool) -> np.ndarray:
    """Random support that always keeps a spanning cycle (or path) and a loop at state 0."""
    if not 0.0 <= sparsity < 1.0:
        raise BadParameters(f"sparsity must lie in [0, 1), got {sparsity}")
    keep = rng.random((n, n)) >= sparsity
    if symmetric:
        keep = np.triu(keep) | np.triu(keep, 1).T
        idx = np.arange(n - 1)
        keep[idx, idx + 1] = True
        keep[idx + 1, idx] = True
    else:
        idx = np.arange(n)
        keep[idx, (idx + 1) % n] = True
    keep[0, 0] = True
    return keep


class TwoState(BaseRecipe):
    """P = [[1−a, a], [b, 1−b]]; π = (b, a)/(a + b), second eigenvalue 1 − a − b."""

    name = "two_state"
    description = "Two-state chain with switching probabilities a and b"

    def generate(self, a: float = 0.3, b: float = 0.2) -> ChainSpec:
        if not (0.0 < a <= 1.0 and 0.0 < b <= 1.0):
            raise BadParameters(f"two_state needs 0 < a, b <= 1, got a={a}, b={b}")
        return validate_chain([[1.0 - a, a], [b, 1.0 - b]], row_tol=ZOO_ROW_TOL)


class Cycle(BaseRecipe):
    name = "cycle"
    description = "Deterministic rotation x -> x+1 mod N (period N)"
    size_param = "N"

    def generate(self, N: int = 3) -> ChainSpec:
        n = _positive_int("N", N)
        P = np.zeros((n, n))
        P[np.arange(n), (np.arange(n) + 1) % n] = 1.0
        return validate_chain(P, row_tol=ZOO_ROW_TOL)


class Uniform(BaseRecipe):
    name = "uniform"
    description = "Every row equal to the uniform law (P = Pi)"
    size_param = "N"

    def generate(self, N: int = 4) -> ChainSpec:
        n = _positive_int("N", N)
        return validate_chain(np.full((n, n), 1.0 / n), row_tol=ZOO_ROW_TOL)


class RandomDense(BaseRecipe):
    name = "random_dense"
    description = "Seeded random kernel, optionally thinned around a spanning cycle"
    size_param = "N"

    def generate(self, N: int = 10, seed: int = 0, sparsity: float = 0.0) -> ChainSpec:
        n = _positive_int("N", N)
        rng = np.random.default_rng(seed)
        weights = rng.uniform(ZOO_MIN_WEIGHT, 1.0, size=(n, n))
        if sparsity > 0:
            weights *= _sparsity_mask(rng, n, sparsity, symmetric=False)
        return self.finish(weights)


class RandomReversible(BaseRecipe):
    """P = M / rowsum(M) for symmetric M ≥ 0, reversible with π ∝ rowsum(M)."""

    name = "random_reversible"
    description = "Seeded reversible kernel from a symmetric weight matrix"
    size_param = "N"

    def generate(self, N: int = 10, seed: int = 0, sparsity: float = 0.0) -> ChainSpec:
        n = _positive_int("N", N)
        rng = np.random.default_rng(seed)
        A = rng.uniform(ZOO_MIN_WEIGHT, 1.0, size=(n, n))
        M = A + A.T
        if sparsity > 0:
            M *= _sparsity_mask(rng, n, sparsity, symmetric=True)
        return self.finish(M)


class MetropolisGrid(BaseRecipe):
    """
    Metropolis chain on a width × width grid, states in row-major order.

    Each of the four nearest-neighbour moves is proposed with probability ¼;
    moves off the grid are rejected, a proposal to y is accepted with
    probability min(1, w(y)/w(x)).
    """

    name = "metropolis_grid"
    description = "Nearest-neighbour Metropolis chain on a square grid"
    size_param = "width"

    def generate(
        self,
        width: int = 4,
        target_weights: Optional[Sequence[float]] = None,
        seed: int = 0,
    ) -> ChainSpec:
        w = _positive_int("width", width)
        n = w * w
        if target_weights is None:
            target = np.random.default_rng(seed).uniform(ZOO_MIN_WEIGHT, 1.0, size=n)
        else:
            target = np.asarray(target_weights, dtype=float)
            if target.shape != (n,) or np.any(target <= 0) or not np.all(np.isfinite(target)):
                raise BadParameters(f"target_weights must be {n} positive finite numbers")

        P = np.zeros((n, n))
        for x in range(n):
            r, c = divmod(x, w)
            for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
                rr, cc = r + dr, c + dc
                if 0 <= rr < w and 0 <= cc < w:
                    y = rr * w + cc
                    P[x, y] = 0.25 * min(1.0, target[y] / target[x])
            P[x, x] = 1.0 - P[x].sum()
        return validate_chain(P, row_tol=ZOO_ROW_TOL)


class TruncatedHeavyTail(BaseRecipe):
    """
    Birth-death Metropolis chain on {0..N−1} targeting π(x) ∝ (x+1)^(−alpha).

    Up-moves are proposed with probability ½ and accepted with probability
    ((x+1)/(x+2))^alpha; down-moves with probability ½ always succeed.  The
    untruncated chain has polynomial tails and is not geometrically ergodic,
    so the spectral gap of the truncations shrinks as N grows.
    """

    name = "truncated_heavy_tail"
    description = "Truncated birth-death chain with polynomial stationary tails"
    size_param = "N"

    def generate(self, N: int = 20, alpha: float = 2.5) -> ChainSpec:
        n = _positive_int("N", N)
        if not alpha > 1.0:
            raise BadParameters(f"truncated_heavy_tail needs alpha > 1, got {alpha}")
        P = np.zeros((n, n))
        x = np.arange(n - 1)
        P[x, x + 1] = 0.5 * ((x + 1.0) / (x + 2.0)) ** alpha
        P[x + 1, x] = 0.5
        P[np.arange(n), np.arange(n)] = 1.0 - P.sum(axis=1)
        return validate_chain(P, row_tol=ZOO_ROW_TOL)


class Lazy(BaseRecipe):
    """(1 − ε)P + εI: same stationary law, eigenvalues (1 − ε)λ + ε, always aperiodic."""

    name = "lazy"
    description = "Lazy version of an existing chain"

    def generate(self, chain: Optional[ChainSpec] = None, epsilon: float = 0.5) -> ChainSpec:
        if chain is None:
            raise BadParameters("lazy needs a base chain")
        if not 0.0 < epsilon < 1.0:
            raise BadParameters(f"lazy needs 0 < epsilon < 1, got {epsilon}")
        P = (1.0 - epsilon) * chain.P + epsilon * np.eye(chain.n)
        return validate_chain(P, labels=chain.states, row_tol=ZOO_ROW_TOL)

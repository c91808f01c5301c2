"""
Centered power sequence (P − Π)ⁿ, n = 1..n_max, in rescaled form.

Each power is stored as D̃ₙ with max|entry| = 1 together with log sₙ such that
(P − Π)ⁿ = sₙ·D̃ₙ.  Since (P − Π)ⁿ = Pⁿ − Π exactly, every convergence
quantity of the chain is a positively homogeneous function of D̃ₙ plus log sₙ:

  TV from x          ½ Σ_y |D[x,y]|
  V-uniform          Σ_y |D[x,y]| V[y] / V[x]
  ‖Pⁿ‖ on V,0        op_norm_linf_v0(D, V, π)
  measure start μ    ½ Σ_y |(μD)[y]|, ‖μD‖_{L²(π)}, ...

None of these ever forms Pⁿ − Π by subtraction, so nothing cancels and
nothing underflows.
"""

from __future__ import annotations

import logging
import math
from typing import Callable, Dict, Iterator, List, Optional, Tuple

import numpy as np

from chain.core import ChainSpec, StationaryDist
from config import DECAY_CACHE_FLOATS, ROUNDOFF_CHOP
from errors import BadParameters

logger = logging.getLogger(__name__)

Reducer = Callable[[np.ndarray], np.ndarray]


def _chopped(values: np.ndarray, bound: np.ndarray) -> np.ndarray:
    """Zero the entries that are pure rounding noise relative to their bound."""
    cut = ROUNDOFF_CHOP * values.shape[0] * np.finfo(float).eps
    out = np.array(values, copy=True)
    out[np.abs(out) <= cut * bound] = 0.0
    return out


class CenteredPowers:
    """Iterable over (n, D̃ₙ, log sₙ); cached when it fits in DECAY_CACHE_FLOATS."""

    def __init__(self, chain: ChainSpec, pi: StationaryDist, n_max: int, cache_floats: int = DECAY_CACHE_FLOATS):
        if n_max < 1:
            raise BadParameters(f"n_max must be positive, got {n_max}")
        self.chain = chain
        self.pi = pi
        self.n_max = int(n_max)
        self.centered = _chopped(chain.P - pi.projector(), chain.P + pi.projector())
        self._abs_centered = np.abs(self.centered)
        self._cache: Optional[List[Tuple[np.ndarray, float]]] = None
        if self.n_max * chain.n * chain.n <= cache_floats:
            self._cache = list(self._generate())
        else:
            logger.debug("Centered powers not cached (n_max=%d, N=%d)", self.n_max, chain.n)

    def _generate(self) -> Iterator[Tuple[np.ndarray, float]]:
        D = self.centered.copy()
        log_scale = 0.0
        for _ in range(self.n_max):
            peak = float(np.max(np.abs(D)))
            if peak == 0.0 or not math.isfinite(log_scale):
                yield np.zeros_like(D), -math.inf
                D = np.zeros_like(D)
                log_scale = -math.inf
                continue
            D = D / peak
            log_scale += math.log(peak)
            D.setflags(write=False)
            yield D, log_scale
            D = _chopped(D @ self.centered, np.abs(D) @ self._abs_centered)

    def __iter__(self) -> Iterator[Tuple[int, np.ndarray, float]]:
        source = self._cache if self._cache is not None else self._generate()
        for n, (D, log_scale) in enumerate(source, start=1):
            yield n, D, log_scale

    @property
    def ns(self) -> np.ndarray:
        return np.arange(1, self.n_max + 1)

    def collect(self, reducers: Dict[str, Reducer]) -> Dict[str, np.ndarray]:
        """
        Apply each reducer to every D̃ₙ and return log values of shape (n_max, k).

        Reducers must be positively homogeneous of degree one in D and return
        nonnegative arrays (or scalars).
        """
        rows: Dict[str, List[np.ndarray]] = {name: [] for name in reducers}
        for _, D, log_scale in self:
            for name, reduce in reducers.items():
                value = np.atleast_1d(np.asarray(reduce(D), dtype=float))
                with np.errstate(divide="ignore"):
                    logs = np.log(value) + log_scale
                logs[value == 0.0] = -math.inf
                rows[name].append(logs)
        return {name: np.vstack(vals) for name, vals in rows.items()}


# ── Common reducers ────────────────────────────────────────────────────────────

def tv_rows(D: np.ndarray) -> np.ndarray:
    return 0.5 * np.abs(D).sum(axis=1)


def v_uniform_rows(V: np.ndarray) -> Reducer:
    return lambda D: (np.abs(D) @ V) / V


def measure_tv(battery: np.ndarray) -> Reducer:
    return lambda D: 0.5 * np.abs(battery @ D).sum(axis=1)


def measure_v_weighted(battery: np.ndarray, V: np.ndarray) -> Reducer:
    """Σ_y |(μD)[y]| V[y] / μ(V): the sup over |f| ≤ V of |μPⁿf − π(f)| per unit μ(V)."""
    mass = battery @ V
    return lambda D: (np.abs(battery @ D) @ V) / mass


def measure_l2(battery: np.ndarray, pi: np.ndarray) -> Reducer:
    return lambda D: np.sqrt(((battery @ D) ** 2 / pi).sum(axis=1))


def tv_table(powers: CenteredPowers) -> np.ndarray:
    """TV(Pⁿ(x,·), π) as plain values, shape (n_max, N)."""
    logs = powers.collect({"tv": tv_rows})["tv"]
    with np.errstate(over="ignore"):
        return np.exp(logs)


def tv_mixing_time(chain: ChainSpec, pi: StationaryDist, eps: float, n_max: int) -> Optional[int]:
    """First n with max_x TV(Pⁿ(x,·), π) ≤ eps, or None within n_max."""
    if not 0 < eps < 1:
        raise BadParameters(f"eps must lie in (0, 1), got {eps}")
    worst = tv_table(CenteredPowers(chain, pi, n_max)).max(axis=1)
    hits = np.flatnonzero(worst <= eps)
    return int(hits[0]) + 1 if hits.size else None

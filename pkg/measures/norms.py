"""
Measures, functions and the norms between them on a finite state space.

Measures act on the left (μK), functions on the right (Kf).  Every norm here
is exact: sums, maxima and one weighted-median per row, no iteration.

Infinite norms are returned as math.inf, never raised.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Union

import numpy as np
from scipy.linalg import eigvalsh

from config import PROBABILITY_TOL
from errors import BadParameters, EmptySet, NotProbability, VBelowOne, ZeroStationaryMass

logger = logging.getLogger(__name__)


# ── Vector types ───────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class SignedMeasureVec:
    """Mass per state; may be negative."""

    mu: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        arr = np.array(self.mu, dtype=float, copy=True)
        arr.setflags(write=False)
        object.__setattr__(self, "mu", arr)

    @property
    def positive(self) -> np.ndarray:
        return np.clip(self.mu, 0.0, None)

    @property
    def negative(self) -> np.ndarray:
        return np.clip(-self.mu, 0.0, None)

    @property
    def total_mass(self) -> float:
        return float(self.mu.sum())


@dataclass(frozen=True)
class FunctionVec:
    f: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        arr = np.array(self.f, dtype=float, copy=True)
        arr.setflags(write=False)
        object.__setattr__(self, "f", arr)


@dataclass(frozen=True)
class WeightFunction:
    """V: states → [1, ∞), finite everywhere."""

    V: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        arr = np.array(self.V, dtype=float, copy=True)
        if arr.ndim != 1 or arr.size == 0:
            raise VBelowOne("weight function must be a non-empty vector")
        if not np.all(np.isfinite(arr)):
            raise VBelowOne("weight function must be finite everywhere")
        if arr.min() < 1.0 - 1e-12:
            raise VBelowOne(f"weight function has min {arr.min():.6g} < 1")
        arr = np.maximum(arr, 1.0)
        arr.setflags(write=False)
        object.__setattr__(self, "V", arr)

    @classmethod
    def constant(cls, n: int) -> "WeightFunction":
        return cls(np.ones(n))

    def power(self, exponent: float) -> "WeightFunction":
        return WeightFunction(self.V ** exponent)


VectorLike = Union[np.ndarray, Iterable[float], SignedMeasureVec, FunctionVec, WeightFunction]


def as_array(x: VectorLike) -> np.ndarray:
    if isinstance(x, SignedMeasureVec):
        return x.mu
    if isinstance(x, FunctionVec):
        return x.f
    if isinstance(x, WeightFunction):
        return x.V
    if hasattr(x, "pi"):
        return np.asarray(x.pi, dtype=float)
    return np.asarray(x, dtype=float)


def _weights(V: VectorLike) -> np.ndarray:
    return V.V if isinstance(V, WeightFunction) else WeightFunction(as_array(V)).V


# ── Measure norms ──────────────────────────────────────────────────────────────

def check_probability(mu: VectorLike, tol: float = PROBABILITY_TOL) -> np.ndarray:
    arr = as_array(mu)
    if np.any(arr < -tol) or abs(arr.sum() - 1.0) > tol:
        raise NotProbability(f"vector with mass {arr.sum():.15g} and min {arr.min():.3g} is not a probability")
    return arr


def tv_distance(mu1: VectorLike, mu2: VectorLike, tol: float = PROBABILITY_TOL) -> float:
    """½ Σ|μ₁ − μ₂|, which equals the sup over events for probabilities."""
    a = check_probability(mu1, tol)
    b = check_probability(mu2, tol)
    if a.shape != b.shape:
        raise BadParameters(f"measures of different sizes {a.shape} and {b.shape}")
    return 0.5 * float(np.abs(a - b).sum())


def lp_norm(mu: VectorLike, pi: VectorLike, p: float) -> float:
    """
    ‖μ‖_{L^p(π)} = (Σ |dμ/dπ|^p π)^{1/p}.

    When μ charges a π-null state: p = 1 gives the total variation mass
    μ⁺(X) + μ⁻(X), p > 1 gives inf.
    """
    if p < 1:
        raise BadParameters(f"L^p needs p >= 1, got {p}")
    m = as_array(mu)
    w = as_array(pi)
    support = w > 0
    if np.any(m[~support] != 0):
        return float(np.abs(m).sum()) if p == 1 else math.inf
    density = np.abs(m[support] / w[support])
    if p == 1:
        return float((density * w[support]).sum())
    return float(((density ** p) * w[support]).sum() ** (1.0 / p))


def conditional_measure(pi: VectorLike, S: Iterable[int]) -> np.ndarray:
    """π_S(A) = π(S ∩ A) / π(S)."""
    w = as_array(pi)
    idx = np.asarray(sorted(set(int(s) for s in S)), dtype=int)
    if idx.size == 0:
        raise EmptySet("conditional measure on an empty set")
    out = np.zeros_like(w)
    mass = w[idx].sum()
    if mass <= 0:
        raise ZeroStationaryMass(f"pi(S) = 0 for S = {idx.tolist()}")
    out[idx] = w[idx] / mass
    return out


def measure_of(mu: VectorLike, f: VectorLike) -> float:
    """μ(f) = Σ μ[x] f[x]."""
    return float(as_array(mu) @ as_array(f))


# ── Function and operator norms ────────────────────────────────────────────────

def v_norm_fn(f: VectorLike, V: VectorLike) -> float:
    """|f|_V = max |f| / V."""
    return float(np.max(np.abs(as_array(f)) / _weights(V)))


def op_norm_linf_v(K: np.ndarray, V: VectorLike) -> float:
    """max_x Σ_y |K[x,y]| V[y] / V[x]; the sup is attained at f = ±V."""
    w = _weights(V)
    K = np.asarray(K, dtype=float)
    return float(np.max((np.abs(K) @ w) / w))


def _row_offsets(K: np.ndarray, V: np.ndarray, pi: np.ndarray) -> np.ndarray:
    """Per row, the c minimizing Σ_y |K[x,y] − c π[y]| V[y] (weighted median)."""
    pos = np.flatnonzero(pi > 0)
    ratios = K[:, pos] / pi[pos]
    weights = pi[pos] * V[pos]
    order = np.argsort(ratios, axis=1, kind="stable")
    sorted_ratios = np.take_along_axis(ratios, order, axis=1)
    cum = np.cumsum(weights[order], axis=1)
    half = 0.5 * cum[:, -1]
    idx = np.argmax(cum >= half[:, None], axis=1)
    return sorted_ratios[np.arange(K.shape[0]), idx]


def op_norm_linf_v0(K: np.ndarray, V: VectorLike, pi: VectorLike) -> float:
    """
    ‖K‖ on zero-π-mean functions bounded by V, computed through its dual:
    max_x min_c Σ_y |K[x,y] − c π[y]| V[y] / V[x].
    """
    w = _weights(V)
    p = as_array(pi)
    K = np.asarray(K, dtype=float)
    if not np.any(p > 0):
        raise ZeroStationaryMass("pi has no positive entry")
    c = _row_offsets(K, w, p)
    residual = np.abs(K - c[:, None] * p[None, :]) @ w
    return float(np.max(residual / w))


def l2_measure_norm_of_operator(K: np.ndarray, pi: VectorLike) -> float:
    """
    ‖K‖ acting on measures in L²(π): largest singular value of D^{1/2} K D^{-1/2}.

    With u = μ D^{-1/2}, ‖μK‖_{L²(π)} = ‖u D^{1/2} K D^{-1/2}‖₂ and ‖μ‖ = ‖u‖₂.
    """
    p = as_array(pi)
    if np.any(p <= 0):
        raise ZeroStationaryMass("L2(pi) operator norm needs pi > 0 everywhere")
    root = np.sqrt(p)
    M = root[:, None] * np.asarray(K, dtype=float) / root[None, :]
    top = float(eigvalsh(M.T @ M)[-1])
    return math.sqrt(max(top, 0.0))

"""
Return times to a set S through the taboo kernel Q = P restricted to S^c.

For y ∉ S the hitting MGF h(y) = E_y[κ^{σ_S}] solves (I − κQ)h = κ r with
r(y) = P(y, S); it is finite iff κ r(Q) < 1, so κ* = 1 / r(Q).
"""

from __future__ import annotations

import logging
import math
from typing import Iterable, Optional, Tuple

import numpy as np
from scipy.linalg import solve

from chain.core import ChainSpec, require_irreducible
from config import (
    DEFAULT_KAPPA_WHEN_UNBOUNDED,
    POWER_ITERATION_MAX_ITER,
    POWER_ITERATION_TOL,
    TRUNCATED_MGF_TERMS,
)
from drift.small_sets import complement, normalize_set
from errors import BadParameters, KappaBeyondRadius
from measures.norms import WeightFunction
from schemas import ReturnTimeCert
from spectral.analysis import LinfV, gelfand_radius

logger = logging.getLogger(__name__)

_X_FLOOR = np.finfo(float).tiny


def taboo_kernel(chain: ChainSpec, S: Iterable[int]) -> Tuple[np.ndarray, list, list]:
    idx = normalize_set(chain, S)
    out = complement(chain, idx)
    Q = chain.P[np.ix_(out, out)]
    return Q, idx, out


def taboo_radius(
    Q: np.ndarray,
    tol: float = POWER_ITERATION_TOL,
    max_iter: int = POWER_ITERATION_MAX_ITER,
) -> float:
    """
    Perron root of a nonnegative matrix.

    Power iteration on Q + I keeps the iterate strictly positive, so the
    Collatz–Wielandt ratios bracket r(Q) + 1 at every step.  If the bracket
    does not close (reducible or defective Q), the upper bound is combined
    with a Gelfand estimate.
    """
    if Q.size == 0:
        return 0.0
    n = Q.shape[0]
    shifted = Q + np.eye(n)
    x = np.ones(n)
    lo, hi = 0.0, math.inf
    for it in range(max_iter):
        y = shifted @ x
        ratios = y / x
        lo = max(lo, float(np.nanmin(ratios)) - 1.0)
        hi = min(hi, float(np.nanmax(ratios)) - 1.0)
        if hi - lo <= tol * max(hi, 1e-300):
            logger.debug("Taboo radius %.12g after %d power iterations", hi, it + 1)
            return max(0.5 * (lo + hi), 0.0)
        # any strictly positive iterate keeps the bracket valid
        x = np.maximum(y / y.max(), _X_FLOOR)

    report = gelfand_radius(Q, LinfV(WeightFunction.constant(n)))
    radius = max(min(hi, report.radius), lo, 0.0)
    logger.warning(
        "Power iteration bracket [%.6g, %.6g] did not close in %d steps; Gelfand fallback gives %.6g",
        lo, hi, max_iter, radius,
    )
    return radius


def kappa_star_of(radius: float) -> float:
    return 1.0 / radius if radius > 0 else math.inf


def default_kappa(kappa_star: float) -> float:
    """Geometric midpoint √κ* of (1, κ*), or 2 when κ* is infinite."""
    return math.sqrt(kappa_star) if math.isfinite(kappa_star) else DEFAULT_KAPPA_WHEN_UNBOUNDED


def return_time_mgf(
    chain: ChainSpec,
    S: Iterable[int],
    kappa: Optional[float] = None,
) -> ReturnTimeCert:
    """
    E_x[κ^{τ_S}] for x ∈ S and E_y[κ^{σ_S}] for y ∉ S.

    Raises:
        NotIrreducible: chain has more than one communicating class.
        KappaBeyondRadius: κ ≥ κ*, the MGF diverges.
    """
    require_irreducible(chain)
    Q, idx, out = taboo_kernel(chain, S)
    radius = taboo_radius(Q)
    kappa_star = kappa_star_of(radius)
    if kappa is None:
        kappa = default_kappa(kappa_star)
    if kappa <= 1.0:
        raise BadParameters(f"kappa must exceed 1, got {kappa}")
    if kappa >= kappa_star:
        raise KappaBeyondRadius(kappa, kappa_star)

    P = chain.P
    to_S = P[np.ix_(idx, idx)].sum(axis=1)
    if out:
        r = P[np.ix_(out, idx)].sum(axis=1)
        h = solve(np.eye(len(out)) - kappa * Q, kappa * r)
        mgf = kappa * (to_S + P[np.ix_(idx, out)] @ h)
    else:
        h = np.zeros(0)
        mgf = kappa * to_S

    logger.debug("Return MGF on S=%s: kappa=%.6g kappa*=%.6g sup=%.6g", idx, kappa, kappa_star, mgf.max())
    return ReturnTimeCert(
        S=idx,
        kappa_star=kappa_star,
        kappa=float(kappa),
        taboo_radius=radius,
        mgf=mgf.tolist(),
        hitting_mgf=h.tolist(),
    )


def truncated_return_mgf(
    chain: ChainSpec,
    S: Iterable[int],
    kappa: float,
    n_terms: int = TRUNCATED_MGF_TERMS,
) -> np.ndarray:
    """Σ_{n ≤ n_terms} κⁿ P_x(τ_S = n) for x ∈ S, by forward dynamic programming."""
    if n_terms < 1:
        raise BadParameters("n_terms must be positive")
    Q, idx, out = taboo_kernel(chain, S)
    P = chain.P
    total = kappa * P[np.ix_(idx, idx)].sum(axis=1)
    if not out:
        return total
    r = P[np.ix_(out, idx)].sum(axis=1)
    # running[x, y] = κ^{n−1} P_x(X_1..X_{n−1} ∉ S, X_{n−1} = y)
    running = kappa * P[np.ix_(idx, out)]
    for _ in range(2, n_terms + 1):
        total = total + kappa * (running @ r)
        running = kappa * (running @ Q)
    return total


def brute_force_gap(chain: ChainSpec, S: Iterable[int], tol: float = 1e-12) -> float:
    """
    Largest relative difference between the linear-solve MGF at κ = √κ* and
    the truncated sum, with enough terms that the dropped tail is below tol.

    The tail of a defective taboo kernel decays like n^(d-1)·ratioⁿ with d up
    to the kernel size, so the term count covers n^d·ratioⁿ ≤ tol.
    """
    cert = return_time_mgf(chain, S)
    ratio = cert.kappa * cert.taboo_radius
    n_terms = TRUNCATED_MGF_TERMS
    if 0.0 < ratio < 1.0:
        degree = chain.n - len(cert.S)
        n_terms = max(n_terms, math.ceil(math.log(tol) / math.log(ratio)))
        while degree * math.log(n_terms) + n_terms * math.log(ratio) > math.log(tol):
            n_terms = math.ceil(1.25 * n_terms)
    series = truncated_return_mgf(chain, cert.S, cert.kappa, n_terms=n_terms)
    exact = np.asarray(cert.mgf)
    return float(np.max(np.abs(series - exact) / np.maximum(1.0, np.abs(exact))))

"""
Spectral radii, eigenvalue-1 multiplicity and the reversible L²(π) spectrum.

Radii in weighted sup norms come from the Gelfand formula
r(K) = inf_n ‖Kⁿ‖^{1/n}, evaluated along n = 2^k by repeated squaring.
Each square is rescaled by its largest entry and the scale is carried in
log space, so neither contracting nor expanding powers leave double range.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Union

import numpy as np
from scipy.linalg import qr

from chain.core import ChainSpec, StationaryDist, detailed_balance_residual
from config import (
    EIGEN_TOL,
    GELFAND_N_MAX,
    GELFAND_TOL,
    RANK_THRESHOLD_FACTOR,
    REVERSIBILITY_TOL,
)
from errors import NormEvaluation, NotReversible
from measures.norms import (
    WeightFunction,
    as_array,
    l2_measure_norm_of_operator,
    op_norm_linf_v,
    op_norm_linf_v0,
)
from schemas import GelfandIterate, NormSpace, ReversibleSpectrum, SpectralReport
from spectral.jacobi import symmetric_eigh

logger = logging.getLogger(__name__)


# ── Norm choices for the Gelfand iteration ─────────────────────────────────────

@dataclass(frozen=True)
class LinfV:
    V: WeightFunction
    space: NormSpace = field(default=NormSpace.LINF_V, init=False)

    def prepare(self, K: np.ndarray) -> np.ndarray:
        return K

    def __call__(self, K: np.ndarray) -> float:
        return op_norm_linf_v(K, self.V)


@dataclass(frozen=True)
class LinfV0:
    """Sup norm over zero-π-mean functions; K must satisfy πK ∝ π."""

    V: WeightFunction
    pi: StationaryDist
    space: NormSpace = field(default=NormSpace.LINF_V0, init=False)

    def prepare(self, K: np.ndarray) -> np.ndarray:
        pi = self.pi.pi
        row = pi @ K
        alpha = float(row.sum())
        scale = max(float(np.max(np.abs(K))), 1.0)
        if np.max(np.abs(row - alpha * pi)) > 1e-9 * scale:
            raise NormEvaluation("zero-mean functions are not invariant under K (pi K is not proportional to pi)")
        # identical to K on zero-mean functions, and kills constants
        return K - np.outer(K.sum(axis=1), pi)

    def __call__(self, K: np.ndarray) -> float:
        return op_norm_linf_v0(K, self.V, self.pi)


@dataclass(frozen=True)
class L2pi:
    pi: StationaryDist
    space: NormSpace = field(default=NormSpace.L2_PI, init=False)

    def prepare(self, K: np.ndarray) -> np.ndarray:
        return K

    def __call__(self, K: np.ndarray) -> float:
        return l2_measure_norm_of_operator(K, self.pi)


OperatorNorm = Union[LinfV, LinfV0, L2pi]


def gelfand_radius(
    K: np.ndarray,
    norm: OperatorNorm,
    n_max: int = GELFAND_N_MAX,
    tol: float = GELFAND_TOL,
) -> SpectralReport:
    """
    Spectral radius of K in the given operator norm.

    Stops when successive estimates ‖K^{2^k}‖^{2^-k} differ by less than tol or
    when 2^{k+1} would exceed n_max; in the second case converged=False and the
    last (smallest) estimate is reported.

    Raises:
        NormEvaluation: a weighted norm needs pi > 0 and pi has a zero.
    """
    pi = getattr(norm, "pi", None)
    if pi is not None and np.any(as_array(pi) <= 0):
        raise NormEvaluation(f"{norm.space.value} norm needs pi > 0 everywhere")

    A = norm.prepare(np.asarray(K, dtype=float))
    iterates: List[GelfandIterate] = []

    scale = float(np.max(np.abs(A))) if A.size else 0.0
    value = norm(A / scale) if scale > 0 else 0.0
    if value == 0.0:
        return SpectralReport(
            radius=0.0, norm_space=norm.space,
            gelfand_iterates=[GelfandIterate(n=1, estimate=0.0)], converged=True,
        )
    A = A / scale
    log_scale = math.log(scale)
    n = 1
    estimate = math.exp(math.log(value) + log_scale)
    iterates.append(GelfandIterate(n=n, estimate=estimate))
    converged = False

    while 2 * n <= n_max:
        A = A @ A
        log_scale *= 2.0
        n *= 2
        peak = float(np.max(np.abs(A)))
        if peak == 0.0:
            # nilpotent: every later power vanishes
            iterates.append(GelfandIterate(n=n, estimate=0.0))
            converged = True
            break
        A = A / peak
        log_scale += math.log(peak)
        value = norm(A)
        if value <= 0.0:
            iterates.append(GelfandIterate(n=n, estimate=0.0))
            converged = True
            break
        previous = estimate
        estimate = math.exp((math.log(value) + log_scale) / n)
        iterates.append(GelfandIterate(n=n, estimate=estimate))
        if abs(estimate - previous) < tol:
            converged = True
            break

    radius = min(it.estimate for it in iterates)
    if not converged:
        gap = abs(iterates[-1].estimate - iterates[-2].estimate) if len(iterates) > 1 else math.inf
        level = logging.WARNING if gap > 1e-6 else logging.DEBUG
        logger.log(level, "Gelfand iteration (%s) not converged at n=%d: last step %.2e", norm.space.value, n, gap)
    return SpectralReport(
        radius=radius,
        norm_space=norm.space,
        gelfand_iterates=iterates,
        converged=converged,
    )


# ── Eigenvalue 1 ───────────────────────────────────────────────────────────────

def eigenvalue_one_multiplicity(chain: ChainSpec, pi: Optional[StationaryDist] = None) -> int:
    """Geometric multiplicity N − rank(P − I), rank from pivoted QR."""
    n = chain.n
    A = chain.P - np.eye(n)
    peak = float(np.max(np.abs(A)))
    if peak == 0.0:
        return n
    R = qr(A, mode="r", pivoting=True)[0]
    threshold = RANK_THRESHOLD_FACTOR * n * peak
    rank = int(np.sum(np.abs(np.diag(R)) > threshold))
    return max(n - rank, 1)


# ── Reversible spectrum ────────────────────────────────────────────────────────

def _check_reversible(chain: ChainSpec, pi: StationaryDist, tol: float = REVERSIBILITY_TOL) -> None:
    residual = detailed_balance_residual(chain, pi)
    scale = max(float(np.max(pi.pi[:, None] * chain.P)), np.finfo(float).tiny)
    if residual > tol * scale:
        raise NotReversible(residual)


def symmetrized_kernel(chain: ChainSpec, pi: StationaryDist) -> np.ndarray:
    """A = D^{1/2} P D^{-1/2}, symmetric under detailed balance."""
    if np.any(pi.pi <= 0):
        raise NormEvaluation("symmetrization needs pi > 0 everywhere")
    root = np.sqrt(pi.pi)
    A = root[:, None] * chain.P / root[None, :]
    return 0.5 * (A + A.T)


def reversible_spectrum(chain: ChainSpec, pi: StationaryDist) -> ReversibleSpectrum:
    """
    Real spectrum of a reversible P on L²(π), largest eigenvalue first.

    Raises:
        NotReversible: detailed balance fails; the residual is attached.
    """
    _check_reversible(chain, pi)
    values, _ = symmetric_eigh(symmetrized_kernel(chain, pi))
    values = np.clip(values[::-1], -1.0, 1.0)

    top_multiplicity = int(np.sum(np.abs(values - 1.0) <= EIGEN_TOL))
    rest = np.abs(values[1:])
    second = float(rest.max()) if rest.size else 0.0
    spectrum = ReversibleSpectrum(
        eigenvalues=values.tolist(),
        gap=1.0 - second,
        top_multiplicity=top_multiplicity,
        second_largest_modulus=second,
    )
    logger.debug("Reversible spectrum: gap=%.6g top multiplicity=%d", spectrum.gap, top_multiplicity)
    return spectrum


def pi_perp_norm(chain: ChainSpec, pi: StationaryDist) -> float:
    """‖P‖ on zero-mass measures in L²(π): deflate √π and take the largest |λ|."""
    _check_reversible(chain, pi)
    root = np.sqrt(pi.pi)
    deflated = symmetrized_kernel(chain, pi) - np.outer(root, root)
    values, _ = symmetric_eigh(deflated)
    return float(np.max(np.abs(values))) if values.size else 0.0

"""
Finite Markov chains: validation, stationary distribution, structure.

A chain is an immutable (labels, P) pair. Everything downstream takes a
ChainSpec plus, where needed, its StationaryDist; nothing mutates either.

Structure is read off the support digraph of P:
  - irreducibility  → strongly connected components
  - period          → gcd of level differences along edges (BFS levels)
  - reversibility   → detailed-balance residual against the stationary vector
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Hashable, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import lstsq, lu_factor, lu_solve
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from config import REVERSIBILITY_TOL, ROW_TOL, STATIONARY_RESIDUAL_FACTOR
from errors import (
    BadParameters,
    ChainValidationError,
    DimensionMismatch,
    DuplicateLabel,
    NegativeEntry,
    NotIrreducible,
    NotProbability,
    RowSumOutOfTolerance,
    StationaryNotConverged,
)
from schemas import StructureReport

logger = logging.getLogger(__name__)


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=float, copy=True)
    arr.setflags(write=False)
    return arr


# ── Types ──────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class ChainSpec:
    """Labelled finite state space with a row-stochastic kernel P."""

    states: Tuple[Hashable, ...]
    P: np.ndarray = field(repr=False)
    row_tol: float = ROW_TOL

    @property
    def n(self) -> int:
        return self.P.shape[0]

    def index_of(self, label: Hashable) -> int:
        return self.states.index(label)

    def __repr__(self) -> str:
        return f"<ChainSpec: {self.n} states>"


@dataclass(frozen=True)
class StationaryDist:
    """Probability vector fixed by P; Pi = 1 ⊗ pi is the rank-one projector."""

    pi: np.ndarray = field(repr=False)
    residual: float = 0.0

    @property
    def n(self) -> int:
        return self.pi.shape[0]

    def projector(self) -> np.ndarray:
        return np.tile(self.pi, (self.n, 1))

    def mean(self, f: np.ndarray) -> float:
        return float(self.pi @ np.asarray(f, dtype=float))


# ── Operations ─────────────────────────────────────────────────────────────────

def validate_chain(
    raw_matrix: Sequence[Sequence[float]] | np.ndarray,
    labels: Optional[Sequence[Hashable]] = None,
    row_tol: float = ROW_TOL,
) -> ChainSpec:
    """
    Validate a raw matrix and return a ChainSpec with rows renormalized to 1.

    Raises:
        DimensionMismatch: matrix not square, empty, or labels of wrong length.
        NegativeEntry: first negative entry in row-major order.
        RowSumOutOfTolerance: first row whose sum misses 1 by more than row_tol.
        DuplicateLabel: repeated state label.
    """
    try:
        P = np.array(raw_matrix, dtype=float)
    except (TypeError, ValueError) as exc:
        raise DimensionMismatch(f"transition matrix is not a rectangular numeric array: {exc}") from exc

    if P.ndim != 2 or P.shape[0] != P.shape[1] or P.shape[0] == 0:
        raise DimensionMismatch(f"transition matrix must be square and non-empty, got shape {P.shape}")
    n = P.shape[0]

    if labels is None:
        labels = tuple(range(n))
    labels = tuple(labels)
    if len(labels) != n:
        raise DimensionMismatch(f"{len(labels)} labels for a {n}x{n} matrix")
    if len(set(labels)) != n:
        seen = set()
        dup = next(lab for lab in labels if lab in seen or seen.add(lab))
        raise DuplicateLabel(f"state label {dup!r} appears more than once")

    if not np.all(np.isfinite(P)):
        raise ChainValidationError("transition matrix contains non-finite entries")
    if row_tol < 0:
        raise ChainValidationError(f"row_tol must be nonnegative, got {row_tol}")

    negative = np.argwhere(P < 0)
    if negative.size:
        r, c = (int(i) for i in negative[0])
        raise NegativeEntry(r, c, float(P[r, c]))

    sums = P.sum(axis=1)
    bad = np.flatnonzero(np.abs(sums - 1.0) > row_tol)
    if bad.size:
        r = int(bad[0])
        raise RowSumOutOfTolerance(r, float(sums[r]), row_tol)

    return ChainSpec(states=labels, P=_frozen(P / sums[:, None]), row_tol=row_tol)


def _support_graph(P: np.ndarray) -> csr_matrix:
    return csr_matrix((P > 0).astype(np.int8))


def strong_components(chain: ChainSpec) -> Tuple[int, np.ndarray]:
    return connected_components(_support_graph(chain.P), directed=True, connection="strong")


def is_irreducible(chain: ChainSpec) -> bool:
    n_comp, _ = strong_components(chain)
    return n_comp == 1


def require_irreducible(chain: ChainSpec) -> None:
    n_comp, _ = strong_components(chain)
    if n_comp != 1:
        raise NotIrreducible(n_comp)


def _normalized(pi: np.ndarray) -> np.ndarray:
    # round-off can leave -1e-17 on tiny masses
    pi = np.clip(pi, 0.0, None)
    return pi / pi.sum()


def _residual(chain: ChainSpec, pi: np.ndarray) -> float:
    return float(np.max(np.abs(pi @ chain.P - pi)))


def stationary(chain: ChainSpec) -> StationaryDist:
    """
    Solve (Pᵀ − I)π = 0 with the last equation replaced by Σπ = 1.

    One step of iterative refinement on the same LU factors brings the
    residual ‖πP − π‖_∞ down to round-off.  Above STATIONARY_RESIDUAL_FACTOR·N
    the system is re-solved by pivoted QR least squares.

    Raises:
        NotIrreducible: the stationary law is not unique.
        StationaryNotConverged: neither solve reaches the residual bound.
    """
    require_irreducible(chain)
    n = chain.n
    A = chain.P.T - np.eye(n)
    A[-1, :] = 1.0
    rhs = np.zeros(n)
    rhs[-1] = 1.0

    lu = lu_factor(A)
    pi = lu_solve(lu, rhs)
    pi = _normalized(pi + lu_solve(lu, rhs - A @ pi))
    residual = _residual(chain, pi)
    bound = STATIONARY_RESIDUAL_FACTOR * n

    if residual > bound:
        logger.warning("Stationary LU residual %.3e exceeds %.3e (N=%d), retrying with QR", residual, bound, n)
        retry = _normalized(lstsq(A, rhs, lapack_driver="gelsy")[0])
        retry_residual = _residual(chain, retry)
        if retry_residual < residual:
            pi, residual = retry, retry_residual
        if residual > bound:
            raise StationaryNotConverged(residual, bound)
    logger.debug("Stationary residual %.3e (N=%d)", residual, n)
    return StationaryDist(pi=_frozen(pi), residual=residual)


def stationary_from_vector(chain: ChainSpec, pi: Sequence[float], tol: float = 1e-9) -> StationaryDist:
    """Accept a caller-supplied π after checking it is a fixed probability vector."""
    vec = np.asarray(pi, dtype=float)
    if vec.shape != (chain.n,):
        raise DimensionMismatch(f"pi has shape {vec.shape}, expected ({chain.n},)")
    if np.any(vec < 0) or abs(vec.sum() - 1.0) > tol:
        raise NotProbability("supplied pi is not a probability vector")
    residual = float(np.max(np.abs(vec @ chain.P - vec)))
    if residual > tol:
        raise NotProbability(f"supplied pi is not stationary: residual {residual:.3e}")
    return StationaryDist(pi=_frozen(vec), residual=residual)


def period_of_class(P: np.ndarray, members: np.ndarray, ref: int) -> int:
    """gcd of level(u) + 1 − level(v) over edges inside the class of ``ref``."""
    sub = P[np.ix_(members, members)]
    graph = _support_graph(sub)
    start = int(np.flatnonzero(members == ref)[0])
    levels = shortest_path(graph, directed=True, unweighted=True, indices=start)
    rows, cols = graph.nonzero()
    if rows.size == 0:
        # a lone transient state: no closed walk through it
        return 1
    diffs = np.abs(levels[rows] + 1 - levels[cols]).astype(np.int64)
    g = int(np.gcd.reduce(diffs))
    return g if g > 0 else 1


def detailed_balance_residual(chain: ChainSpec, pi: StationaryDist) -> float:
    flux = pi.pi[:, None] * chain.P
    return float(np.max(np.abs(flux - flux.T)))


def structure(chain: ChainSpec, tol: float = REVERSIBILITY_TOL) -> StructureReport:
    """Irreducibility, period (class of state 0), recurrent classes, reversibility."""
    n_comp, labels = strong_components(chain)
    irreducible = n_comp == 1

    # a class is recurrent iff no edge leaves it
    rows, cols = _support_graph(chain.P).nonzero()
    leaving = labels[rows] != labels[cols]
    open_classes = set(labels[rows[leaving]].tolist())
    num_recurrent = n_comp - len(open_classes)

    members = np.flatnonzero(labels == labels[0])
    period = period_of_class(chain.P, members, 0)

    reversible = False
    residual: Optional[float] = None
    if irreducible:
        pi = stationary(chain)
        residual = detailed_balance_residual(chain, pi)
        scale = max(float(np.max(pi.pi[:, None] * chain.P)), np.finfo(float).tiny)
        reversible = residual <= tol * scale

    report = StructureReport(
        irreducible=irreducible,
        period=period,
        aperiodic=period == 1,
        reversible=reversible,
        num_recurrent_classes=max(num_recurrent, 1),
        num_classes=n_comp,
        detailed_balance_residual=residual,
    )
    logger.debug(
        "Structure: irreducible=%s period=%d reversible=%s classes=%d",
        report.irreducible, report.period, report.reversible, report.num_classes,
    )
    return report


def kernel_power(chain: ChainSpec | np.ndarray, n: int) -> np.ndarray:
    """Pⁿ by repeated squaring."""
    if int(n) != n or n < 1:
        raise BadParameters(f"kernel_power needs a positive integer n, got {n!r}")
    P = chain.P if isinstance(chain, ChainSpec) else np.asarray(chain, dtype=float)
    return np.linalg.matrix_power(P, int(n))

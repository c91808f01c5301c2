"""
Implication graph between the equivalent conditions.

Every edge carries a short tag naming the argument behind it.  An edge A→B is
violated when both ends are applicable, A holds and B fails; an edge with a
not-applicable end is skipped.
"""

from __future__ import annotations

import logging
from typing import Dict, Iterable, List, Mapping, NamedTuple, Set

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order, connected_components

from schemas import ConditionId, EdgeResult, EdgeStatus, Verdict

logger = logging.getLogger(__name__)

C = ConditionId


class Edge(NamedTuple):
    source: ConditionId
    target: ConditionId
    proof: str

    @property
    def label(self) -> str:
        return f"{self.source.value}->{self.target.value}"


def _both(a: ConditionId, b: ConditionId, proof: str) -> List[Edge]:
    return [Edge(a, b, proof), Edge(b, a, proof)]


EDGES: List[Edge] = [
    # geometric convergence in total variation
    Edge(C.IV, C.III, "lp-specialization"),
    Edge(C.III, C.V, "pi_S-in-l2"),
    Edge(C.V, C.I, "regeneration-from-S"),
    Edge(C.I, C.II, "restriction"),
    Edge(C.II, C.V, "small-set-hitting"),
    Edge(C.V, C.VI, "return-time-tail"),
    # return times and drift
    Edge(C.VI, C.VII, "hitting-mgf-drift"),
    Edge(C.VII, C.VIII, "jensen-powers"),
    Edge(C.VIII, C.X, "drift-to-v-uniform"),
    # V-uniform ergodicity
    Edge(C.IX, C.XI, "integrate-against-mu"),
    Edge(C.X, C.XII, "integrate-against-mu"),
    Edge(C.XII, C.IV, "holder"),
    Edge(C.XI, C.I, "v-dominates-tv"),
    Edge(C.X, C.XXIV, "operator-norm-form"),
    Edge(C.XXIII, C.IX, "operator-norm-form"),
    # spectral and operator norm conditions
    *_both(C.XIII, C.XVII, "gap-vs-zero-mean-radius"),
    *_both(C.XIV, C.XVIII, "gap-vs-zero-mean-radius"),
    *_both(C.XVII, C.XXI, "gelfand-formula"),
    *_both(C.XVIII, C.XXII, "gelfand-formula"),
    *_both(C.XIX, C.XV, "gelfand-formula"),
    *_both(C.XX, C.XVI, "gelfand-formula"),
    Edge(C.XXI, C.XIX, "norm-equivalence"),
    Edge(C.XXII, C.XX, "norm-equivalence"),
    Edge(C.XXIII, C.XXI, "eventual-contraction"),
    Edge(C.XXIV, C.XXII, "eventual-contraction"),
    *_both(C.XXV, C.XXIII, "norm-equivalence"),
    *_both(C.XXVI, C.XXIV, "norm-equivalence"),
    Edge(C.XXIV, C.XXIII, "specialize-j1"),
    Edge(C.XIX, C.XXIII, "submultiplicativity"),
    Edge(C.XX, C.XXIV, "submultiplicativity"),
    # reversible chains
    Edge(C.XXXI, C.XXVIII, "l2-contraction"),
    Edge(C.XXVIII, C.XXVII, "weaken-constant"),
    Edge(C.XXVII, C.III, "cauchy-schwarz"),
    Edge(C.IV, C.XXXII, "reversible-tv-to-l2"),
    Edge(C.XXXII, C.XXXI, "centered-norm-identity"),
    *_both(C.XXXI, C.XXX, "self-adjoint-radius"),
    *_both(C.XXXIII, C.XXIX, "spectral-theorem"),
    *_both(C.XXXIII, C.XXXII, "spectral-theorem"),
]


def edge_status(edge: Edge, verdicts: Mapping[ConditionId, Verdict]) -> EdgeStatus:
    src = verdicts.get(edge.source)
    dst = verdicts.get(edge.target)
    if src is None or dst is None or not src.applicable or not dst.applicable:
        return EdgeStatus.SKIPPED
    if src.holds and not dst.holds:
        return EdgeStatus.VIOLATED
    return EdgeStatus.OK


def check_edges(verdicts: Iterable[Verdict], edges: Iterable[Edge] = EDGES) -> List[EdgeResult]:
    by_id: Dict[ConditionId, Verdict] = {v.condition: v for v in verdicts}
    results = []
    for edge in edges:
        status = edge_status(edge, by_id)
        if status is EdgeStatus.VIOLATED:
            logger.warning("Implication %s violated (%s)", edge.label, edge.proof)
        results.append(EdgeResult(source=edge.source, target=edge.target, proof=edge.proof, status=status))
    return results


# ── Graph structure ────────────────────────────────────────────────────────────

def adjacency(edges: Iterable[Edge] = EDGES) -> csr_matrix:
    edges = list(edges)
    n = len(ConditionId)
    rows = [e.source.index - 1 for e in edges]
    cols = [e.target.index - 1 for e in edges]
    return csr_matrix((np.ones(len(edges)), (rows, cols)), shape=(n, n))


def equivalence_classes(edges: Iterable[Edge] = EDGES) -> int:
    """Number of strongly connected components; 1 when every condition implies every other."""
    count, _ = connected_components(adjacency(edges), directed=True, connection="strong")
    return int(count)


def implied_by(condition: ConditionId, edges: Iterable[Edge] = EDGES) -> Set[ConditionId]:
    """Every condition reachable from `condition` along implication edges."""
    order = breadth_first_order(adjacency(edges), condition.index - 1, directed=True, return_predecessors=False)
    members = list(ConditionId)
    return {members[int(k)] for k in order}

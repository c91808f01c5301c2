"""
Tests for engine/implication_graph.py.

Covers:
  - the edge list makes all 33 conditions one equivalence class
  - edge_status: ok, violated, skipped
  - check_edges logs a warning per violation
"""

from __future__ import annotations

import logging

from engine.implication_graph import (
    EDGES,
    Edge,
    adjacency,
    check_edges,
    edge_status,
    equivalence_classes,
    implied_by,
)
from schemas import ConditionId, EdgeStatus, GeometricRate, Verdict

C = ConditionId


def holding(cid: ConditionId) -> Verdict:
    return Verdict(condition=cid, holds=True, certificate=GeometricRate(rho=0.5, C=1.0))


def failing(cid: ConditionId) -> Verdict:
    return Verdict(condition=cid, holds=False)


def skipped(cid: ConditionId) -> Verdict:
    return Verdict(condition=cid, holds=False, applicable=False)


class TestGraphShape:
    def test_single_equivalence_class(self):
        assert equivalence_classes() == 1

    def test_every_condition_reaches_every_other(self):
        for cid in ConditionId:
            assert implied_by(cid) == set(ConditionId)

    def test_no_self_loops_or_duplicates(self):
        pairs = [(e.source, e.target) for e in EDGES]
        assert all(a != b for a, b in pairs)
        assert len(pairs) == len(set(pairs))

    def test_every_edge_has_a_proof_tag(self):
        assert all(e.proof for e in EDGES)

    def test_adjacency_shape(self):
        assert adjacency().shape == (33, 33)
        assert adjacency().nnz == len(EDGES)

    def test_removing_reversible_edges_splits_graph(self):
        general = [e for e in EDGES if not (e.source.requires_reversible or e.target.requires_reversible)]
        assert equivalence_classes(general) > 1


class TestEdgeStatus:
    edge = Edge(C.I, C.II, "restriction")

    def test_ok_when_both_hold(self):
        verdicts = {C.I: holding(C.I), C.II: holding(C.II)}
        assert edge_status(self.edge, verdicts) is EdgeStatus.OK

    def test_ok_when_source_fails(self):
        verdicts = {C.I: failing(C.I), C.II: holding(C.II)}
        assert edge_status(self.edge, verdicts) is EdgeStatus.OK

    def test_violated(self):
        verdicts = {C.I: holding(C.I), C.II: failing(C.II)}
        assert edge_status(self.edge, verdicts) is EdgeStatus.VIOLATED

    def test_skipped_when_not_applicable(self):
        verdicts = {C.I: holding(C.I), C.II: skipped(C.II)}
        assert edge_status(self.edge, verdicts) is EdgeStatus.SKIPPED

    def test_skipped_when_missing(self):
        assert edge_status(self.edge, {C.I: holding(C.I)}) is EdgeStatus.SKIPPED


class TestCheckEdges:
    def test_all_failing_is_consistent(self):
        results = check_edges([failing(cid) for cid in ConditionId])
        assert len(results) == len(EDGES)
        assert all(r.status is EdgeStatus.OK for r in results)

    def test_single_holding_condition_violates_its_out_edges(self, caplog):
        verdicts = [holding(C.IX)] + [failing(cid) for cid in ConditionId if cid is not C.IX]
        with caplog.at_level(logging.WARNING, logger="engine.implication_graph"):
            results = check_edges(verdicts)
        violated = {(r.source, r.target) for r in results if r.status is EdgeStatus.VIOLATED}
        assert violated == {(e.source, e.target) for e in EDGES if e.source is C.IX}
        assert "ix->xi" in caplog.text

    def test_reversible_edges_skipped(self):
        verdicts = [holding(cid) for cid in ConditionId if not cid.requires_reversible]
        verdicts += [skipped(cid) for cid in ConditionId if cid.requires_reversible]
        results = check_edges(verdicts)
        for r in results:
            if r.source.requires_reversible or r.target.requires_reversible:
                assert r.status is EdgeStatus.SKIPPED
            else:
                assert r.status is EdgeStatus.OK

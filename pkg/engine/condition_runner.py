"""
Deterministic condition runner.

Builds the shared state once (stationary law, centered powers, measure
battery, drift function) and runs each evaluator family over it, timing every
run.  A family that raises is recorded as failed and its conditions get
failing verdicts with diagnostics["evaluation_error"] = 1.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, replace
from typing import Callable, List, Optional, Sequence, Tuple

from chain.core import ChainSpec, StationaryDist, require_irreducible, stationary, structure
from drift.drift import synthesize_drift
from drift.small_sets import default_small_set, find_small_set_m, normalize_set
from engine.conditions import (
    MeasureBattery,
    cond_drift,
    cond_measure_family,
    cond_pointwise_tv,
    cond_reversible,
    cond_spectral,
    cond_v_uniform,
    measure_battery,
)
from engine.decay import CenteredPowers
from errors import KappaBeyondRadius, SNotSmall
from measures.norms import WeightFunction
from schemas import ConditionId, DriftCert, EvaluationStatus, RunConfig, StructureReport, Verdict

logger = logging.getLogger(__name__)

C = ConditionId


@dataclass
class RunContext:
    chain: ChainSpec
    pi: StationaryDist
    structure: StructureReport
    config: RunConfig
    S: List[int]
    powers: CenteredPowers
    battery: MeasureBattery
    drift: DriftCert
    weight: Optional[WeightFunction] = None  # overrides the drift V for (ix)-(xxvi)

    @property
    def V(self) -> WeightFunction:
        if self.weight is not None:
            return self.weight
        return WeightFunction(self.drift.V)

    def with_weight(self, weight: WeightFunction) -> "RunContext":
        return replace(self, weight=weight)


def build_context(chain: ChainSpec, config: RunConfig, pi: Optional[StationaryDist] = None) -> RunContext:
    """
    Raises:
        NotIrreducible: the chain has more than one communicating class.
        SNotSmall: a user-supplied small set has no positive minorization.
    """
    require_irreducible(chain)
    pi = pi if pi is not None else stationary(chain)
    report = structure(chain)
    if config.small_set:
        S = normalize_set(chain, config.small_set)
        if find_small_set_m(chain, S) is None:
            raise SNotSmall(f"S={S} has no positive minorization for m <= {chain.n}")
    else:
        S = default_small_set(pi)

    try:
        drift = synthesize_drift(chain, S, config.kappa, pi=pi, j_set=config.j_set)
    except KappaBeyondRadius:
        drift = synthesize_drift(chain, S, None, pi=pi, j_set=config.j_set)

    logger.info("Context: N=%d S=%s period=%d reversible=%s", chain.n, S, report.period, report.reversible)
    return RunContext(
        chain=chain,
        pi=pi,
        structure=report,
        config=config,
        S=S,
        powers=CenteredPowers(chain, pi, config.n_max),
        battery=measure_battery(chain, pi, S, seed=config.seed),
        drift=drift,
    )


# ── Evaluator families ─────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Evaluator:
    name: str
    conditions: Tuple[ConditionId, ...]
    run: Callable[[RunContext], List[Verdict]]


def _ids(first: int, last: int) -> Tuple[ConditionId, ...]:
    return tuple(cid for cid in ConditionId if first <= cid.index <= last)


EVALUATORS: List[Evaluator] = [
    Evaluator("pointwise_tv", _ids(1, 2),
              lambda ctx: cond_pointwise_tv(ctx.chain, ctx.pi, ctx.config.n_max, ctx.powers)),
    Evaluator("measure_family", _ids(3, 5),
              lambda ctx: cond_measure_family(ctx.chain, ctx.pi, ctx.battery, ctx.config.p_set,
                                              ctx.config.n_max, ctx.powers)),
    Evaluator("drift", _ids(6, 8),
              lambda ctx: cond_drift(ctx.chain, ctx.pi, ctx.S, ctx.config.kappa, ctx.config.j_set,
                                     aperiodic=ctx.structure.aperiodic)[0]),
    Evaluator("v_uniform", _ids(9, 12),
              lambda ctx: cond_v_uniform(ctx.chain, ctx.pi, ctx.V, ctx.battery, ctx.config.j_set,
                                         ctx.config.n_max, ctx.powers)),
    Evaluator("spectral", _ids(13, 26),
              lambda ctx: cond_spectral(ctx.chain, ctx.pi, ctx.V, ctx.config.j_set,
                                        ctx.config.n_max, ctx.powers)),
    Evaluator("reversible", _ids(27, 33),
              lambda ctx: cond_reversible(ctx.chain, ctx.pi, ctx.battery, ctx.structure.reversible,
                                          ctx.config.n_max, ctx.powers)),
]

# families whose verdicts depend on the weight V
WEIGHTED_EVALUATORS: List[Evaluator] = [e for e in EVALUATORS if e.name in ("v_uniform", "spectral")]


def run_evaluators(
    ctx: RunContext,
    evaluators: Sequence[Evaluator] = EVALUATORS,
) -> Tuple[List[Verdict], List[EvaluationStatus]]:
    """
    Run every family with at least one wanted condition.

    Returns:
        (verdicts in roman-numeral order, one status per family run)
    """
    verdicts: List[Verdict] = []
    statuses: List[EvaluationStatus] = []

    for evaluator in evaluators:
        wanted = [cid for cid in evaluator.conditions if ctx.config.wants(cid)]
        if not wanted:
            continue
        logger.info("Evaluating %s (%s)", evaluator.name, ", ".join(c.value for c in wanted))
        start = time.perf_counter()
        try:
            produced = evaluator.run(ctx)
            latency_ms = (time.perf_counter() - start) * 1000
            statuses.append(EvaluationStatus(evaluator=evaluator.name, success=True, latency_ms=latency_ms))
            logger.info("  -> %s done (%.1fms)", evaluator.name, latency_ms)
        except Exception as exc:
            latency_ms = (time.perf_counter() - start) * 1000
            error_msg = f"{type(exc).__name__}: {exc}"
            statuses.append(EvaluationStatus(
                evaluator=evaluator.name, success=False, latency_ms=latency_ms, error=error_msg,
            ))
            logger.warning("Evaluator '%s' failed: %s", evaluator.name, error_msg)
            produced = [
                Verdict(condition=cid, holds=False, diagnostics={"evaluation_error": 1.0})
                for cid in evaluator.conditions
            ]
        verdicts.extend(v for v in produced if v.condition in wanted)

    verdicts.sort(key=lambda v: v.condition.index)
    return verdicts, statuses

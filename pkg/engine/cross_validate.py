"""
Consistency check of a full condition run.

Three layers:
  1. implication edges: no edge may have a holding source and a failing target
  2. rate coherence (reversible chains): fitted rates and the V≡1 radius agree
     with the second-largest |eigenvalue| within config.rate_tol
  3. edge witnesses: constructive proofs are replayed by transferring the
     source certificate and re-checking it on the target's data
Violations are data in the ConsistencyReport, never exceptions.
"""

from __future__ import annotations

import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from chain.core import ChainSpec, StationaryDist
from config import CERTIFICATE_SLACK, DRIFT_SLACK, HOLDER_SLACK, MIXING_EPS, WITNESS_NORM_STEPS
from drift.drift import drift_holds, drift_power, pi_v_bound_holds
from drift.return_time import return_time_mgf
from engine.condition_runner import WEIGHTED_EVALUATORS, RunContext, build_context, run_evaluators
from engine.decay import measure_tv, tv_mixing_time, tv_rows
from engine.implication_graph import check_edges
from measures.norms import (
    WeightFunction,
    l2_measure_norm_of_operator,
    lp_norm,
    op_norm_linf_v,
    op_norm_linf_v0,
)
from schemas import (
    ConditionId,
    ConsistencyReport,
    DriftCert,
    EdgeResult,
    EdgeStatus,
    EvaluationStatus,
    GeometricRate,
    RateCheck,
    RunConfig,
    SpectralReport,
    Verdict,
    WeightSweep,
)
from spectral.analysis import pi_perp_norm, reversible_spectrum

logger = logging.getLogger(__name__)

C = ConditionId


# ── Rate coherence ─────────────────────────────────────────────────────────────

def unit_weight_rates(unit_verdicts: Sequence[Verdict]) -> Dict[str, float]:
    """
    Rates read off the V ≡ 1 verdicts: the fitted state rate (ix), the fitted
    operator-norm rate (xxiii) and the radius of P − Π (xv).  Conditions
    that were not evaluated are left out.
    """
    by_id = {v.condition: v for v in unit_verdicts}
    rates: Dict[str, float] = {}
    for source, cid in (("ix_V1", C.IX), ("xxiii_V1", C.XXIII)):
        verdict = by_id.get(cid)
        if verdict is not None and isinstance(verdict.certificate, GeometricRate):
            rates[source] = verdict.certificate.rho
    radius = by_id.get(C.XV)
    if radius is not None and isinstance(radius.certificate, SpectralReport):
        rates["xv_V1"] = radius.certificate.radius
    return rates


def rate_checks(
    ctx: RunContext,
    verdicts: Dict[ConditionId, Verdict],
    unit_verdicts: Sequence[Verdict] = (),
) -> List[RateCheck]:
    if not ctx.structure.reversible:
        return []
    oracle = reversible_spectrum(ctx.chain, ctx.pi).second_largest_modulus
    rates = {}
    first = verdicts.get(C.I)
    if first is not None and isinstance(first.certificate, GeometricRate):
        rates["i"] = first.certificate.rho
    rates.update(unit_weight_rates(unit_verdicts))

    tol = ctx.config.rate_tol
    checks = []
    for source, rate in rates.items():
        coherent = abs(rate - oracle) <= tol
        if not coherent:
            logger.warning("Rate from %s is %.9g, eigenvalue oracle %.9g", source, rate, oracle)
        checks.append(RateCheck(source=source, rate=rate, oracle=oracle, coherent=coherent))
    return checks


# ── Witnesses ──────────────────────────────────────────────────────────────────

def _bound(C_: float, rho: float, ns: np.ndarray) -> np.ndarray:
    if rho == 0.0:
        return np.zeros_like(ns, dtype=float)
    with np.errstate(over="ignore"):
        return C_ * np.exp(ns * math.log(rho))


def witness_measure_to_pointwise(ctx: RunContext, cert: GeometricRate) -> bool:
    """C_x = C·V(x) at the same ρ bounds every row's TV sequence."""
    V = ctx.V.V
    with np.errstate(over="ignore"):
        table = np.exp(ctx.powers.collect({"tv": tv_rows})["tv"])
    bound = _bound(cert.C, cert.rho, ctx.powers.ns.astype(float))[:, None] * V[None, :]
    return bool(np.all(table <= bound + CERTIFICATE_SLACK))


def holder_bound_holds(mu: np.ndarray, V: np.ndarray, pi: StationaryDist, j: int) -> bool:
    """μ(V) ≤ π(V^{j+1})^{1/(j+1)} · ‖μ‖_{L^{1+1/j}(π)}."""
    lhs = float(mu @ V)
    rhs = float(pi.pi @ V ** (j + 1)) ** (1.0 / (j + 1)) * lp_norm(mu, pi, 1.0 + 1.0 / j)
    return lhs <= rhs + HOLDER_SLACK * max(1.0, rhs)


def witness_holder(ctx: RunContext, cert: GeometricRate) -> bool:
    """Hölder for every battery μ and j, then TV(μPⁿ, π) ≤ ½·C·μ(V)·ρⁿ."""
    V = ctx.V.V
    B = ctx.battery.matrix
    for mu in B:
        if not all(holder_bound_holds(mu, V, ctx.pi, j) for j in ctx.config.j_set):
            return False
    with np.errstate(over="ignore"):
        table = np.exp(ctx.powers.collect({"tv": measure_tv(B)})["tv"])
    bound = 0.5 * _bound(cert.C, cert.rho, ctx.powers.ns.astype(float))[:, None] * (B @ V)[None, :]
    return bool(np.all(table <= bound + CERTIFICATE_SLACK))


def witness_norm_sandwich(ctx: RunContext, steps: int = WITNESS_NORM_STEPS) -> bool:
    """‖Pⁿ‖_{V,0} ≤ ‖Pⁿ − Π‖_V ≤ ‖Pⁿ‖_{V,0}·(1 + π(V)) for n ≤ steps."""
    V = ctx.V
    pi_v = ctx.pi.mean(V.V)
    for n, D, log_scale in ctx.powers:
        if n > steps:
            break
        if not math.isfinite(log_scale):
            continue
        full = op_norm_linf_v(D, V)
        zero_mean = op_norm_linf_v0(D, V, ctx.pi)
        scale = max(full, 1e-300)
        if zero_mean > full + 1e-9 * scale or full > zero_mean * (1.0 + pi_v) + 1e-9 * scale:
            return False
    return True


def witness_drift_loop(ctx: RunContext, verdicts: Dict[ConditionId, Verdict]) -> bool:
    """λ·κ = 1 for the synthesized drift."""
    v = verdicts.get(C.VII)
    return v is not None and abs(v.diagnostics.get("lambda_kappa", math.nan) - 1.0) <= 1e-10


def witness_powers(ctx: RunContext, cert: DriftCert) -> bool:
    return all(drift_holds(ctx.chain, drift_power(cert, j), DRIFT_SLACK) for j in ctx.config.j_set)


def attach_witnesses(
    ctx: RunContext,
    edges: List[EdgeResult],
    verdicts: Dict[ConditionId, Verdict],
) -> Tuple[List[EdgeResult], List[str]]:
    """Fill EdgeResult.witness where a constructive transfer exists and the source holds."""
    failures: List[str] = []
    out = []
    for edge in edges:
        source = verdicts.get(edge.source)
        witness: Optional[bool] = None
        if edge.status is not EdgeStatus.SKIPPED and source is not None and source.holds:
            pair = (edge.source, edge.target)
            if pair == (C.XI, C.I):
                witness = witness_measure_to_pointwise(ctx, source.certificate)
            elif pair == (C.XII, C.IV) and verdicts.get(C.XI) is not None and verdicts[C.XI].holds:
                witness = witness_holder(ctx, verdicts[C.XI].certificate)
            elif pair in ((C.XXV, C.XXIII), (C.XXIII, C.XXV)):
                witness = witness_norm_sandwich(ctx)
            elif pair == (C.VI, C.VII):
                witness = witness_drift_loop(ctx, verdicts)
            elif pair == (C.VII, C.VIII) and isinstance(verdicts[C.VII].certificate, DriftCert):
                witness = witness_powers(ctx, verdicts[C.VII].certificate)
        if witness is None:
            out.append(edge)
            continue
        if not witness:
            label = f"{edge.source.value}->{edge.target.value}"
            failures.append(label)
            logger.warning("Witness for %s failed", label)
        out.append(edge.model_copy(update={"witness": "pass" if witness else "fail"}))

    drift = verdicts.get(C.VII)
    if drift is not None and isinstance(drift.certificate, DriftCert):
        if not pi_v_bound_holds(drift.certificate, ctx.pi):
            failures.append("vii:pi_V_bound")
    return out, failures


# ── Entry points ───────────────────────────────────────────────────────────────

def _violated(edges: Sequence[EdgeResult]) -> List[str]:
    return [f"{e.source.value}->{e.target.value}" for e in edges if e.status is EdgeStatus.VIOLATED]


def unit_weight_sweep(ctx: RunContext, verdicts: Sequence[Verdict]) -> Optional[WeightSweep]:
    """
    Re-run the V-dependent families with V ≡ 1 and check the implication
    edges on the resulting verdict set; V-free verdicts are shared.
    Returns None when no V-dependent condition was requested.
    """
    unit, _ = run_evaluators(ctx.with_weight(WeightFunction.constant(ctx.chain.n)), WEIGHTED_EVALUATORS)
    if not unit:
        return None
    replaced = {v.condition for v in unit}
    combined = sorted(
        [v for v in verdicts if v.condition not in replaced] + unit,
        key=lambda v: v.condition.index,
    )
    return WeightSweep(weight="V1", verdicts=unit, violated_edges=_violated(check_edges(combined)))


def validate_context(ctx: RunContext, verdicts: List[Verdict]) -> ConsistencyReport:
    by_id = {v.condition: v for v in verdicts}
    edges, witness_failures = attach_witnesses(ctx, check_edges(verdicts), by_id)
    violated = _violated(edges)
    sweeps = [s for s in (unit_weight_sweep(ctx, verdicts),) if s is not None]
    for sweep in sweeps:
        violated.extend(f"{sweep.weight}:{label}" for label in sweep.violated_edges)
    unit_verdicts = sweeps[0].verdicts if sweeps else []
    checks = rate_checks(ctx, by_id, unit_verdicts)
    report = ConsistencyReport(
        verdicts=verdicts,
        edges=edges,
        violated_edges=violated,
        rate_checks=checks,
        rate_violations=[c.source for c in checks if not c.coherent],
        witness_failures=witness_failures,
        weight_sweeps=sweeps,
    )
    logger.info(
        "Consistency: %d edges, %d violated, %d rate violations, %d witness failures",
        len(edges), len(violated), len(report.rate_violations), len(witness_failures),
    )
    return report


def cross_validate(
    chain: ChainSpec,
    pi: Optional[StationaryDist] = None,
    config: Optional[RunConfig] = None,
) -> ConsistencyReport:
    """
    Evaluate every wanted condition and check the results against each other.

    Raises:
        NotIrreducible: reducible chains are refused before any evaluation.
    """
    ctx = build_context(chain, config or RunConfig(), pi)
    verdicts, _ = run_evaluators(ctx)
    return validate_context(ctx, verdicts)


def analyze_chain(
    chain: ChainSpec,
    config: RunConfig,
    pi: Optional[StationaryDist] = None,
) -> Tuple[RunContext, ConsistencyReport, List[EvaluationStatus]]:
    ctx = build_context(chain, config, pi)
    verdicts, statuses = run_evaluators(ctx)
    return ctx, validate_context(ctx, verdicts), statuses


def summary_rates(ctx: RunContext, report: ConsistencyReport) -> Dict[str, float]:
    """Headline numbers for the analyze report; inf where undefined."""
    rates: Dict[str, float] = {}
    if ctx.structure.reversible:
        rates["pi_perp_norm"] = pi_perp_norm(ctx.chain, ctx.pi)
        rates["second_eigenvalue_modulus"] = reversible_spectrum(ctx.chain, ctx.pi).second_largest_modulus
    else:
        rates["pi_perp_norm"] = l2_measure_norm_of_operator(ctx.powers.centered, ctx.pi)
    for check in report.rate_checks:
        rates[f"rho_{check.source}"] = check.rate
    first = next((v for v in report.verdicts if v.condition == C.I), None)
    if first is not None and isinstance(first.certificate, GeometricRate):
        rates["rho_tv"] = first.certificate.rho
    rates["kappa_star"] = return_time_mgf(ctx.chain, ctx.S).kappa_star
    rates["drift_lambda"] = ctx.drift.lambda_
    rates["drift_b"] = ctx.drift.b
    mixing = tv_mixing_time(ctx.chain, ctx.pi, MIXING_EPS, ctx.config.n_max)
    rates["mixing_time"] = float(mixing) if mixing is not None else math.inf
    return rates
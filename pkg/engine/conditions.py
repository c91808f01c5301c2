"""
Condition evaluators.

Each cond_* function evaluates one family of equivalent conditions on an
irreducible chain and returns its Verdicts in roman-numeral order.  They
share the centered power sequence through an optional CenteredPowers
argument; passed None they build their own.

A verdict holds only when its certificate re-verifies: fitted rates need
ρ < 1 − GEOMETRIC_RATE_MARGIN and v_n ≤ Cρⁿ within CERTIFICATE_SLACK at
every observed n; radii and norms need the same margin below 1.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from chain.core import ChainSpec, StationaryDist
from config import (
    BATTERY_RANDOM_MEASURES,
    CERTIFICATE_SLACK,
    DEFAULT_N_MAX,
    GELFAND_N_MAX,
    GEOMETRIC_RATE_MARGIN,
)
from drift.drift import drift_holds, drift_power, pi_v_bound_holds, synthesize_drift, verify_drift
from drift.return_time import return_time_mgf
from engine.decay import (
    CenteredPowers,
    measure_l2,
    measure_tv,
    measure_v_weighted,
    tv_rows,
)
from engine.fitting import DecaySeries, RateFit, constant_for, excess, fit_geometric_rate
from errors import KappaBeyondRadius, MeasureNotInLp
from measures.norms import (
    WeightFunction,
    check_probability,
    conditional_measure,
    l2_measure_norm_of_operator,
    lp_norm,
    op_norm_linf_v,
    op_norm_linf_v0,
)
from schemas import (
    ConditionId,
    DriftCert,
    GeometricRate,
    NormBound,
    SpectralReport,
    Verdict,
)
from spectral.analysis import (
    L2pi,
    LinfV,
    LinfV0,
    eigenvalue_one_multiplicity,
    gelfand_radius,
    pi_perp_norm,
    reversible_spectrum,
)

logger = logging.getLogger(__name__)

C = ConditionId


def below_one(value: float) -> bool:
    return value < 1.0 - GEOMETRIC_RATE_MARGIN


def _flag(value: bool) -> float:
    return 1.0 if value else 0.0


def _powers(chain: ChainSpec, pi: StationaryDist, n_max: int, powers: Optional[CenteredPowers]) -> CenteredPowers:
    if powers is not None and powers.n_max == n_max:
        return powers
    return CenteredPowers(chain, pi, n_max)


def _rate_cert(fit: RateFit, **extra) -> GeometricRate:
    return GeometricRate(rho=fit.rho, C=fit.C, geometric=fit.geometric, max_excess=fit.max_excess, **extra)


def _fit_columns(logs: np.ndarray) -> List[RateFit]:
    ns = np.arange(1, logs.shape[0] + 1, dtype=float)
    return [fit_geometric_rate(DecaySeries(ns, logs[:, k])) for k in range(logs.shape[1])]


def _shared_rate(logs: np.ndarray) -> Tuple[float, List[float], List[RateFit], float]:
    """Per-column fits, their common ρ = max ρ_k, each column's C at that ρ, and the worst excess."""
    fits = _fit_columns(logs)
    ns = np.arange(1, logs.shape[0] + 1, dtype=float)
    rho = max(f.rho for f in fits)
    constants, worst = [], 0.0
    for k in range(logs.shape[1]):
        series = DecaySeries(ns, logs[:, k])
        c = constant_for(series, rho)
        constants.append(c)
        worst = max(worst, excess(series, rho, c) if math.isfinite(c) else math.inf)
    return rho, constants, fits, worst


# ── Measure battery ────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class MeasureBattery:
    """Rows are probability vectors: point masses, π_S, seeded Dirichlet draws."""

    matrix: np.ndarray
    labels: Tuple[str, ...]
    pi_s_index: int


def measure_battery(
    chain: ChainSpec,
    pi: StationaryDist,
    S: Sequence[int],
    size: int = BATTERY_RANDOM_MEASURES,
    seed: int = 0,
) -> MeasureBattery:
    n = chain.n
    rng = np.random.default_rng(seed)
    rows = [np.eye(n)[x] for x in range(n)]
    labels = [f"delta_{chain.states[x]}" for x in range(n)]
    rows.append(conditional_measure(pi, S))
    labels.append("pi_S")
    for k, draw in enumerate(rng.dirichlet(np.ones(n), size=size)):
        rows.append(draw)
        labels.append(f"dirichlet_{k}")
    matrix = np.vstack(rows)
    matrix.setflags(write=False)
    return MeasureBattery(matrix=matrix, labels=tuple(labels), pi_s_index=n)


# ── (i), (ii) ──────────────────────────────────────────────────────────────────

def cond_pointwise_tv(
    chain: ChainSpec,
    pi: StationaryDist,
    n_max: int = DEFAULT_N_MAX,
    powers: Optional[CenteredPowers] = None,
) -> List[Verdict]:
    """TV(Pⁿ(x,·), π) ≤ C_x ρⁿ from every state (i), and per-state rates (ii)."""
    powers = _powers(chain, pi, n_max, powers)
    logs = powers.collect({"tv": tv_rows})["tv"]
    rho, constants, fits, worst = _shared_rate(logs)

    shared = GeometricRate(
        rho=rho, C=max(constants), C_x=constants, rho_x=[f.rho for f in fits],
        geometric=below_one(rho), max_excess=worst,
    )
    holds_i = below_one(rho) and worst <= CERTIFICATE_SLACK
    own = GeometricRate(
        rho=rho, C=max(f.C for f in fits), C_x=[f.C for f in fits], rho_x=[f.rho for f in fits],
        geometric=all(f.geometric for f in fits), max_excess=max(f.max_excess for f in fits),
    )
    holds_ii = all(f.holds for f in fits)
    logger.info("  (i)  pointwise TV: rho=%.6g holds=%s", rho, holds_i)
    return [
        Verdict(condition=C.I, holds=holds_i, certificate=shared, diagnostics={"n_max": float(n_max)}),
        Verdict(condition=C.II, holds=holds_ii, certificate=own, diagnostics={"states": float(chain.n)}),
    ]


# ── (iii), (iv), (v) ───────────────────────────────────────────────────────────

def cond_measure_tv(
    chain: ChainSpec,
    pi: StationaryDist,
    mu: np.ndarray,
    p: float,
    n_max: int = DEFAULT_N_MAX,
    powers: Optional[CenteredPowers] = None,
    condition: ConditionId = C.III,
) -> Verdict:
    """
    TV(μPⁿ, π) ≤ C ρⁿ from one starting measure.

    Raises:
        MeasureNotInLp: ‖μ‖_{L^p(π)} is infinite.
    """
    mu = check_probability(mu)
    norm = lp_norm(mu, pi, p)
    if not math.isfinite(norm):
        raise MeasureNotInLp(f"starting measure is not in L^{p}(pi)")
    powers = _powers(chain, pi, n_max, powers)
    logs = powers.collect({"tv": measure_tv(mu[None, :])})["tv"]
    fit = fit_geometric_rate(DecaySeries.from_logs(logs[:, 0]))
    return Verdict(
        condition=condition,
        holds=fit.holds,
        certificate=_rate_cert(fit),
        diagnostics={"p": float(p), "lp_norm": norm},
    )


def cond_measure_family(
    chain: ChainSpec,
    pi: StationaryDist,
    battery: MeasureBattery,
    p_set: Sequence[float],
    n_max: int = DEFAULT_N_MAX,
    powers: Optional[CenteredPowers] = None,
) -> List[Verdict]:
    """(iii) at p = 2, (iv) at every p in p_set, (v) from π_S."""
    powers = _powers(chain, pi, n_max, powers)
    logs = powers.collect({"tv": measure_tv(battery.matrix)})["tv"]
    fits = _fit_columns(logs)

    def family(p: float) -> Tuple[bool, Optional[GeometricRate], Dict[str, float]]:
        members = [k for k in range(battery.matrix.shape[0])
                   if math.isfinite(lp_norm(battery.matrix[k], pi, p))]
        if not members:
            return False, None, {"p": p, "measures": 0.0}
        rho, constants, _, worst = _shared_rate(logs[:, members])
        cert = GeometricRate(rho=rho, C=max(constants), C_x=constants,
                             geometric=below_one(rho), max_excess=worst)
        ok = below_one(rho) and worst <= CERTIFICATE_SLACK
        return ok, cert, {"p": float(p), "measures": float(len(members))}

    p_some = 2.0 if 2.0 in p_set else float(p_set[0])
    holds_iii, cert_iii, diag_iii = family(p_some)

    per_p = [family(p) for p in p_set]
    holds_iv = all(ok for ok, _, _ in per_p)
    diag_iv = {f"rho_p{p:g}": (cert.rho if cert else math.inf) for p, (_, cert, _) in zip(p_set, per_p)}
    cert_iv = max((cert for _, cert, _ in per_p if cert), key=lambda c: c.rho, default=None)

    fit_v = fits[battery.pi_s_index]
    logger.info("  (iii) measure TV: rho=%.6g holds=%s", cert_iii.rho if cert_iii else math.inf, holds_iii)
    return [
        Verdict(condition=C.III, holds=holds_iii, certificate=cert_iii, diagnostics=diag_iii),
        Verdict(condition=C.IV, holds=holds_iv and cert_iv is not None, certificate=cert_iv, diagnostics=diag_iv),
        Verdict(condition=C.V, holds=fit_v.holds, certificate=_rate_cert(fit_v),
                diagnostics={"pi_S_mass": float(battery.matrix[battery.pi_s_index] @ np.ones(chain.n))}),
    ]


# ── (vi), (vii), (viii) ────────────────────────────────────────────────────────

def cond_drift(
    chain: ChainSpec,
    pi: StationaryDist,
    S: Sequence[int],
    kappa: Optional[float] = None,
    j_set: Sequence[int] = (1,),
    aperiodic: bool = True,
) -> Tuple[List[Verdict], DriftCert]:
    """
    Return-time MGF (vi), synthesized drift (vii), Jensen powers (viii).

    Certificates are computed on periodic chains too; the verdicts then fail
    with diagnostics["aperiodic"] = 0.
    """
    try:
        rt = return_time_mgf(chain, S, kappa)
    except KappaBeyondRadius as exc:
        logger.warning("kappa=%.6g is beyond kappa*=%.6g; using the default midpoint", exc.kappa, exc.kappa_star)
        rt = return_time_mgf(chain, S, None)

    ap = _flag(aperiodic)
    mgf_finite = all(math.isfinite(v) for v in rt.mgf)
    vi = Verdict(
        condition=C.VI,
        holds=aperiodic and mgf_finite and rt.kappa > 1.0,
        certificate=rt,
        diagnostics={"aperiodic": ap, "kappa_star": rt.kappa_star, "sup_mgf": rt.sup_mgf},
    )

    cert = synthesize_drift(chain, rt.S, rt.kappa, pi=pi, j_set=j_set)
    recheck = verify_drift(chain, cert.V, cert.S)
    recheck_ok = isinstance(recheck, DriftCert) and recheck.lambda_ <= cert.lambda_ + 1e-10
    lam_kappa = cert.lambda_ * rt.kappa
    vii = Verdict(
        condition=C.VII,
        holds=aperiodic and drift_holds(chain, cert) and recheck_ok,
        certificate=cert,
        diagnostics={
            "aperiodic": ap,
            "lambda_kappa": lam_kappa,
            "pi_V_bound": _flag(pi_v_bound_holds(cert, pi)),
            "recheck": _flag(recheck_ok),
        },
    )

    diag_viii: Dict[str, float] = {"aperiodic": ap}
    all_ok = True
    last = cert
    for j in j_set:
        powered = drift_power(cert, j, pi=pi, j_set=[j])
        ok = drift_holds(chain, powered)
        all_ok = all_ok and ok
        diag_viii[f"lambda_j{j}"] = powered.lambda_
        diag_viii[f"b_j{j}"] = powered.b
        diag_viii[f"pi_V_j{j}"] = powered.pi_V_moments.get(j, math.nan)
        last = powered
    viii = Verdict(condition=C.VIII, holds=aperiodic and all_ok, certificate=last, diagnostics=diag_viii)
    logger.info("  (vi)-(viii) kappa*=%.6g lambda=%.6g b=%.6g aperiodic=%s", rt.kappa_star, cert.lambda_, cert.b, aperiodic)
    return [vi, vii, viii], cert


# ── (ix) - (xii) ───────────────────────────────────────────────────────────────

def _v_norm_reducer(V: np.ndarray):
    return lambda D: np.max((np.abs(D) @ V) / V)


def _v0_norm_reducer(V: np.ndarray, pi: StationaryDist):
    return lambda D: op_norm_linf_v0(D, V, pi)


def cond_v_uniform(
    chain: ChainSpec,
    pi: StationaryDist,
    V: WeightFunction,
    battery: MeasureBattery,
    j_set: Sequence[int] = (1,),
    n_max: int = DEFAULT_N_MAX,
    powers: Optional[CenteredPowers] = None,
) -> List[Verdict]:
    """
    sup_{|f| ≤ V} |Pⁿf(x) − π(f)| ≤ C V(x) ρⁿ (ix), its V^{1/j} family (x),
    and the same from battery measures with μ(V) in place of V(x) (xi), (xii).
    """
    powers = _powers(chain, pi, n_max, powers)
    weights = {j: (V if j == 1 else V.power(1.0 / j)).V for j in sorted(set(j_set) | {1})}
    reducers = {}
    for j, w in weights.items():
        reducers[f"state_{j}"] = _v_norm_reducer(w)
        reducers[f"measure_{j}"] = measure_v_weighted(battery.matrix, w)
    logs = powers.collect(reducers)

    def state_fit(j: int) -> RateFit:
        return fit_geometric_rate(DecaySeries.from_logs(logs[f"state_{j}"][:, 0]))

    def measure_fit(j: int) -> RateFit:
        worst = logs[f"measure_{j}"].max(axis=1)
        return fit_geometric_rate(DecaySeries.from_logs(worst))

    fit_ix = state_fit(1)
    fit_xi = measure_fit(1)

    # the state certificate bounds every measure start through μ(V)
    transferred = excess(DecaySeries.from_logs(logs["measure_1"].max(axis=1)), fit_ix.rho, fit_ix.C)

    family_state = {j: state_fit(j) for j in j_set}
    family_measure = {j: measure_fit(j) for j in j_set}
    worst_j_state = max(family_state, key=lambda j: family_state[j].rho)
    worst_j_measure = max(family_measure, key=lambda j: family_measure[j].rho)

    logger.info("  (ix) V-uniform: rho=%.6g C=%.6g holds=%s", fit_ix.rho, fit_ix.C, fit_ix.holds)
    return [
        Verdict(condition=C.IX, holds=fit_ix.holds, certificate=_rate_cert(fit_ix),
                diagnostics={"pi_V": pi.mean(V.V)}),
        Verdict(condition=C.X, holds=all(f.holds for f in family_state.values()),
                certificate=_rate_cert(family_state[worst_j_state]),
                diagnostics={f"rho_j{j}": f.rho for j, f in family_state.items()}),
        Verdict(condition=C.XI, holds=fit_xi.holds, certificate=_rate_cert(fit_xi),
                diagnostics={"transfer_excess": transferred,
                             "max_mu_V": float(np.max(battery.matrix @ V.V))}),
        Verdict(condition=C.XII, holds=all(f.holds for f in family_measure.values()),
                certificate=_rate_cert(family_measure[worst_j_measure]),
                diagnostics={f"rho_j{j}": f.rho for j, f in family_measure.items()}),
    ]


# ── (xiii) - (xxvi) ────────────────────────────────────────────────────────────

def first_contracting_power(
    log_norms: np.ndarray,
    last: Tuple[np.ndarray, float],
    norm,
    m_limit: int = GELFAND_N_MAX,
) -> Optional[Tuple[int, float]]:
    """
    Smallest n ≤ n_max with ‖·‖ < 1 − GEOMETRIC_RATE_MARGIN from the tabulated
    sequence; failing that, the first doubling 2^k·n_max ≤ m_limit that gets there.
    """
    threshold = math.log1p(-GEOMETRIC_RATE_MARGIN)
    below = np.flatnonzero(log_norms < threshold)
    if below.size:
        n = int(below[0]) + 1
        return n, math.exp(float(log_norms[below[0]]))

    A, log_scale = last
    m = log_norms.size
    if not math.isfinite(log_scale):
        return None
    while 2 * m <= m_limit:
        A = A @ A
        log_scale *= 2.0
        m *= 2
        peak = float(np.max(np.abs(A)))
        if peak == 0.0:
            return m, 0.0
        A = A / peak
        log_scale += math.log(peak)
        value = norm(A)
        if value == 0.0:
            return m, 0.0
        log_value = math.log(value) + log_scale
        if log_value < threshold:
            return m, math.exp(log_value)
    return None


def cond_spectral(
    chain: ChainSpec,
    pi: StationaryDist,
    V: WeightFunction,
    j_set: Sequence[int] = (1,),
    n_max: int = DEFAULT_N_MAX,
    powers: Optional[CenteredPowers] = None,
) -> List[Verdict]:
    """Radii (xiii-xviii), contracting powers (xix-xxii) and norm decay (xxiii-xxvi)."""
    powers = _powers(chain, pi, n_max, powers)
    multiplicity = eigenvalue_one_multiplicity(chain, pi)
    K = powers.centered
    last_power = None
    for _, D, log_scale in powers:
        last_power = (D, log_scale)

    js = sorted(set(j_set) | {1})
    weights = {j: (V if j == 1 else V.power(1.0 / j)) for j in js}
    reducers = {}
    for j, w in weights.items():
        reducers[f"v_{j}"] = _v_norm_reducer(w.V)
        reducers[f"v0_{j}"] = _v0_norm_reducer(w.V, pi)
    logs = powers.collect(reducers)

    results = {}
    for j, w in weights.items():
        r_v = gelfand_radius(K, LinfV(w))
        r_v0 = gelfand_radius(chain.P, LinfV0(w, pi))
        seq_v = logs[f"v_{j}"][:, 0]
        seq_v0 = logs[f"v0_{j}"][:, 0]
        m_v = first_contracting_power(seq_v, last_power, lambda A, w=w: op_norm_linf_v(A, w))
        m_v0 = first_contracting_power(seq_v0, last_power, lambda A, w=w: op_norm_linf_v0(A, w, pi))
        results[j] = {
            "r_v": r_v,
            "r_v0": r_v0,
            "m_v": m_v,
            "m_v0": m_v0,
            "fit_v": fit_geometric_rate(DecaySeries.from_logs(seq_v)),
            "fit_v0": fit_geometric_rate(DecaySeries.from_logs(seq_v0)),
        }

    def radius_report(rep: SpectralReport, with_mult: bool) -> SpectralReport:
        if with_mult:
            return rep.model_copy(update={"eigenvalue_one_multiplicity": multiplicity})
        return rep

    def gap_ok(j: int) -> bool:
        return multiplicity == 1 and below_one(results[j]["r_v"].radius)

    def radius_ok(j: int, key: str) -> bool:
        return below_one(results[j][key].radius)

    def norm_ok(j: int, key: str) -> bool:
        return results[j][key] is not None

    def norm_cert(j: int, key: str) -> Optional[NormBound]:
        found = results[j][key]
        return NormBound(m=found[0], value=found[1]) if found else None

    def worst_j(key: str) -> int:
        return max(j_set, key=lambda j: results[j][key].radius)

    def worst_fit_j(key: str) -> int:
        return max(j_set, key=lambda j: results[j][key].rho)

    def first_failing(predicate) -> int:
        return next((j for j in j_set if not predicate(j)), j_set[-1])

    base = results[1]
    verdicts = [
        Verdict(condition=C.XIII, holds=gap_ok(1), certificate=radius_report(base["r_v"], True),
                diagnostics={"multiplicity": float(multiplicity)}),
        Verdict(condition=C.XIV, holds=all(gap_ok(j) for j in j_set),
                certificate=radius_report(results[worst_j("r_v")]["r_v"], True),
                diagnostics={f"radius_j{j}": results[j]["r_v"].radius for j in j_set}),
        Verdict(condition=C.XV, holds=radius_ok(1, "r_v"), certificate=base["r_v"],
                diagnostics={"converged": _flag(base["r_v"].converged)}),
        Verdict(condition=C.XVI, holds=all(radius_ok(j, "r_v") for j in j_set),
                certificate=results[worst_j("r_v")]["r_v"],
                diagnostics={f"radius_j{j}": results[j]["r_v"].radius for j in j_set}),
        Verdict(condition=C.XVII, holds=radius_ok(1, "r_v0"), certificate=base["r_v0"],
                diagnostics={"converged": _flag(base["r_v0"].converged)}),
        Verdict(condition=C.XVIII, holds=all(radius_ok(j, "r_v0") for j in j_set),
                certificate=results[worst_j("r_v0")]["r_v0"],
                diagnostics={f"radius_j{j}": results[j]["r_v0"].radius for j in j_set}),
        Verdict(condition=C.XIX, holds=norm_ok(1, "m_v"), certificate=norm_cert(1, "m_v"),
                diagnostics={"norm_at_1": math.exp(float(base_log(logs, "v_1")))}),
        Verdict(condition=C.XX, holds=all(norm_ok(j, "m_v") for j in j_set),
                certificate=norm_cert(first_failing(lambda j: norm_ok(j, "m_v")), "m_v"),
                diagnostics={f"m_j{j}": float(results[j]["m_v"][0]) if results[j]["m_v"] else math.inf
                             for j in j_set}),
        Verdict(condition=C.XXI, holds=norm_ok(1, "m_v0"), certificate=norm_cert(1, "m_v0"),
                diagnostics={"norm_at_1": math.exp(float(base_log(logs, "v0_1")))}),
        Verdict(condition=C.XXII, holds=all(norm_ok(j, "m_v0") for j in j_set),
                certificate=norm_cert(first_failing(lambda j: norm_ok(j, "m_v0")), "m_v0"),
                diagnostics={f"m_j{j}": float(results[j]["m_v0"][0]) if results[j]["m_v0"] else math.inf
                             for j in j_set}),
        Verdict(condition=C.XXIII, holds=base["fit_v"].holds, certificate=_rate_cert(base["fit_v"])),
        Verdict(condition=C.XXIV, holds=all(results[j]["fit_v"].holds for j in j_set),
                certificate=_rate_cert(results[worst_fit_j("fit_v")]["fit_v"]),
                diagnostics={f"rho_j{j}": results[j]["fit_v"].rho for j in j_set}),
        Verdict(condition=C.XXV, holds=base["fit_v0"].holds, certificate=_rate_cert(base["fit_v0"])),
        Verdict(condition=C.XXVI, holds=all(results[j]["fit_v0"].holds for j in j_set),
                certificate=_rate_cert(results[worst_fit_j("fit_v0")]["fit_v0"]),
                diagnostics={f"rho_j{j}": results[j]["fit_v0"].rho for j in j_set}),
    ]
    logger.info(
        "  (xv) r_V(P-Pi)=%.6g  (xvii) r_V0(P)=%.6g  multiplicity=%d",
        base["r_v"].radius, base["r_v0"].radius, multiplicity,
    )
    return verdicts


def base_log(logs: Dict[str, np.ndarray], key: str) -> float:
    return float(logs[key][0, 0])


# ── (xxvii) - (xxxiii) ─────────────────────────────────────────────────────────

REVERSIBLE_IDS = [C.XXVII, C.XXVIII, C.XXIX, C.XXX, C.XXXI, C.XXXII, C.XXXIII]


def not_applicable(ids: Sequence[ConditionId], reason: str) -> List[Verdict]:
    return [Verdict(condition=cid, holds=False, applicable=False, diagnostics={reason: 0.0}) for cid in ids]


def cond_reversible(
    chain: ChainSpec,
    pi: StationaryDist,
    battery: MeasureBattery,
    reversible: bool,
    n_max: int = DEFAULT_N_MAX,
    powers: Optional[CenteredPowers] = None,
) -> List[Verdict]:
    """
    L²(π) conditions; on non-reversible chains all seven are not applicable.
    """
    if not reversible:
        return not_applicable(REVERSIBLE_IDS, "reversible")

    powers = _powers(chain, pi, n_max, powers)
    spectrum = reversible_spectrum(chain, pi)
    rho = pi_perp_norm(chain, pi)
    centered = powers.centered
    l2_norm = l2_measure_norm_of_operator(centered, pi)
    radius_l2 = gelfand_radius(centered, L2pi(pi))
    multiplicity = eigenvalue_one_multiplicity(chain, pi)

    logs = powers.collect({"l2": measure_l2(battery.matrix, pi.pi)})["l2"]
    ns = np.arange(1, logs.shape[0] + 1, dtype=float)

    # (xxvii): some C_μ for every battery μ at ρ = ‖P‖_{π⊥}
    constants = [constant_for(DecaySeries(ns, logs[:, k]), rho) for k in range(logs.shape[1])]
    holds_xxvii = below_one(rho) and all(math.isfinite(c) for c in constants)

    # (xxviii): C_μ = ‖μ − π‖_{L²(π)}
    start_norms = [lp_norm(battery.matrix[k] - pi.pi, pi, 2) for k in range(battery.matrix.shape[0])]
    worst_excess = 0.0
    for k, c in enumerate(start_norms):
        series = DecaySeries(ns, logs[:, k])
        worst_excess = max(worst_excess, excess(series, rho, c))
    holds_xxviii = below_one(rho) and worst_excess <= CERTIFICATE_SLACK

    gap_ok = spectrum.top_multiplicity == 1 and multiplicity == 1 and below_one(spectrum.second_largest_modulus)
    rate_cert = GeometricRate(rho=rho, C=max(constants) if constants else 0.0, C_x=constants,
                              geometric=below_one(rho), max_excess=0.0)
    identity_gap = abs(l2_norm - rho)
    logger.info("  (xxxii) ||P||_pi_perp=%.6g gap=%.6g", rho, spectrum.gap)
    return [
        Verdict(condition=C.XXVII, holds=holds_xxvii, certificate=rate_cert,
                diagnostics={"measures": float(len(constants))}),
        Verdict(condition=C.XXVIII, holds=holds_xxviii,
                certificate=GeometricRate(rho=rho, C=max(start_norms), C_x=start_norms,
                                          geometric=below_one(rho), max_excess=worst_excess),
                diagnostics={"max_excess": worst_excess}),
        Verdict(condition=C.XXIX, holds=gap_ok, certificate=spectrum,
                diagnostics={"multiplicity": float(multiplicity), "gap": spectrum.gap}),
        Verdict(condition=C.XXX, holds=below_one(radius_l2.radius), certificate=radius_l2),
        Verdict(condition=C.XXXI, holds=below_one(l2_norm), certificate=NormBound(m=1, value=l2_norm),
                diagnostics={"identity_gap": identity_gap}),
        Verdict(condition=C.XXXII, holds=below_one(rho), certificate=NormBound(m=1, value=rho),
                diagnostics={"identity_gap": identity_gap}),
        Verdict(condition=C.XXXIII, holds=below_one(spectrum.second_largest_modulus),
                certificate=SpectralReport(radius=spectrum.second_largest_modulus,
                                           norm_space="PiPerp", converged=True)),
    ]

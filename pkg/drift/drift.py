"""
Geometric drift: PV ≤ λV + b·1_S.

verify_drift:     tightest (λ, b) for a given (V, S), or a refutation
synthesize_drift: V from hitting-time MGFs, λ = 1/κ exactly off S
drift_power:      Jensen: (V^{1/j}, λ^{1/j}, b^{1/j}) is again a drift certificate
"""

from __future__ import annotations

import logging
from typing import Iterable, List, Optional, Sequence, Union

import numpy as np

from chain.core import ChainSpec, StationaryDist
from config import DRIFT_PI_V_SLACK, DRIFT_SLACK, WHOLE_SPACE_LAMBDA
from drift.return_time import return_time_mgf
from drift.small_sets import complement, find_small_set_m, normalize_set
from errors import BadParameters, SNotSmall
from measures.norms import WeightFunction, as_array
from schemas import DriftCert, DriftRefutation

logger = logging.getLogger(__name__)


def _moments(V: np.ndarray, pi: Optional[StationaryDist], j_set: Optional[Sequence[int]]) -> dict:
    if pi is None or not j_set:
        return {}
    return {int(j): float(pi.pi @ V ** j) for j in j_set}


def verify_drift(
    chain: ChainSpec,
    V: Union[WeightFunction, np.ndarray, Sequence[float]],
    S: Iterable[int],
    pi: Optional[StationaryDist] = None,
    j_set: Optional[Sequence[int]] = None,
) -> Union[DriftCert, DriftRefutation]:
    """
    λ = max_{x∉S} PV(x)/V(x), b = max(0, max_{x∈S} PV(x) − λV(x)).

    When S is the whole space λ is free; the convention λ = ½ is used.

    Raises:
        VBelowOne: V has an entry below 1.
        SNotSmall: λ < 1 but no m ≤ N gives S a positive minorization.
    """
    weights = V if isinstance(V, WeightFunction) else WeightFunction(as_array(V))
    v = weights.V
    idx = normalize_set(chain, S, allow_empty=True)
    out = complement(chain, idx)
    PV = chain.P @ v

    if out:
        ratios = PV[out] / v[out]
        worst = int(np.argmax(ratios))
        lam = float(ratios[worst])
        if lam >= 1.0:
            logger.debug("Drift refuted: PV/V = %.6g at state %d outside S", lam, out[worst])
            return DriftRefutation(V=v.tolist(), S=idx, lambda_=lam, worst_state=out[worst])
    else:
        lam = WHOLE_SPACE_LAMBDA

    small = find_small_set_m(chain, idx)
    if small is None:
        raise SNotSmall(f"S={idx} has no positive minorization for m <= {chain.n}")

    b = max(0.0, float(np.max(PV[idx] - lam * v[idx])))
    cert = DriftCert(
        V=v.tolist(), S=idx, lambda_=lam, b=b,
        pi_V_moments=_moments(v, pi, j_set),
        small_set_m=small.m,
    )
    if pi is not None and not pi_v_bound_holds(cert, pi):
        logger.warning("pi(V)=%.6g exceeds b/(1-lambda)=%.6g", pi.mean(v), b / (1.0 - lam))
    return cert


def synthesize_drift(
    chain: ChainSpec,
    S: Iterable[int],
    kappa: Optional[float] = None,
    pi: Optional[StationaryDist] = None,
    j_set: Optional[Sequence[int]] = None,
) -> DriftCert:
    """
    V(x) = E_x[κ^{σ_S}]: 1 on S, the hitting MGF off S.  Off S, PV = V/κ.

    Errors from return_time_mgf propagate (NotIrreducible, KappaBeyondRadius).

    Raises:
        SNotSmall: no m <= N gives S a positive minorization.
    """
    rt = return_time_mgf(chain, S, kappa)
    idx = rt.S
    out = complement(chain, idx)
    v = np.ones(chain.n)
    if out:
        v[out] = rt.hitting_mgf
    lam = 1.0 / rt.kappa
    PV = chain.P @ v
    b = max(0.0, float(np.max(PV[idx] - lam * v[idx])))

    small = find_small_set_m(chain, idx)
    if small is None:
        raise SNotSmall(f"S={idx} has no positive minorization for m <= {chain.n}")
    return DriftCert(
        V=v.tolist(), S=idx, lambda_=lam, b=b,
        pi_V_moments=_moments(v, pi, j_set),
        small_set_m=small.m,
    )


def drift_power(
    cert: DriftCert,
    j: int,
    pi: Optional[StationaryDist] = None,
    j_set: Optional[Sequence[int]] = None,
) -> DriftCert:
    """(V^{1/j}, λ^{1/j}, b^{1/j}) by Jensen's inequality for the concave t ↦ t^{1/j}."""
    if j < 1:
        raise BadParameters(f"drift_power needs j >= 1, got {j}")
    if j == 1 and pi is None:
        return cert.model_copy(deep=True)
    v = np.asarray(cert.V) ** (1.0 / j)
    return DriftCert(
        V=v.tolist(),
        S=list(cert.S),
        lambda_=cert.lambda_ ** (1.0 / j),
        b=cert.b ** (1.0 / j),
        pi_V_moments=_moments(v, pi, j_set),
        small_set_m=cert.small_set_m,
    )


# ── Re-checks ──────────────────────────────────────────────────────────────────

def drift_slack(chain: ChainSpec, cert: DriftCert) -> float:
    """min_x (λV + b1_S − PV)(x); a valid certificate has this ≥ −DRIFT_SLACK."""
    v = np.asarray(cert.V)
    indicator = np.zeros(chain.n)
    indicator[cert.S] = 1.0
    return float(np.min(cert.lambda_ * v + cert.b * indicator - chain.P @ v))


def drift_holds(chain: ChainSpec, cert: DriftCert, slack: float = DRIFT_SLACK) -> bool:
    return drift_slack(chain, cert) >= -slack


def pi_v_bound_holds(cert: DriftCert, pi: StationaryDist, slack: float = DRIFT_PI_V_SLACK) -> bool:
    """π(V) ≤ b/(1−λ)."""
    return pi.mean(cert.V) <= cert.b / (1.0 - cert.lambda_) + slack


def power_certificates(
    cert: DriftCert,
    j_set: Sequence[int],
    pi: Optional[StationaryDist] = None,
) -> List[DriftCert]:
    return [drift_power(cert, j, pi=pi, j_set=[j]) for j in j_set]

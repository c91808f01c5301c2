"""
Strict schemas for the geometric ergodicity certifier.
Every certificate, verdict and report that leaves the numerical core
conforms to one of these Pydantic models.

Numerical inputs (chains, stationary vectors, weight functions) are numpy
dataclasses defined next to the code that owns them; these models carry
plain floats and lists so they serialize deterministically.
"""

from __future__ import annotations

import math
from enum import Enum
from typing import Annotated, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, Field, field_validator, model_validator


ROMAN_IDS = [
    "i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix", "x",
    "xi", "xii", "xiii", "xiv", "xv", "xvi", "xvii", "xviii", "xix", "xx",
    "xxi", "xxii", "xxiii", "xxiv", "xxv", "xxvi",
    "xxvii", "xxviii", "xxix", "xxx", "xxxi", "xxxii", "xxxiii",
]


# ──────────────────────────────────────────────
# Condition identifiers
# ──────────────────────────────────────────────

class ConditionId(str, Enum):
    """Roman-numeral id of one equivalent condition; 26 general + 7 reversible."""
    I = "i"
    II = "ii"
    III = "iii"
    IV = "iv"
    V = "v"
    VI = "vi"
    VII = "vii"
    VIII = "viii"
    IX = "ix"
    X = "x"
    XI = "xi"
    XII = "xii"
    XIII = "xiii"
    XIV = "xiv"
    XV = "xv"
    XVI = "xvi"
    XVII = "xvii"
    XVIII = "xviii"
    XIX = "xix"
    XX = "xx"
    XXI = "xxi"
    XXII = "xxii"
    XXIII = "xxiii"
    XXIV = "xxiv"
    XXV = "xxv"
    XXVI = "xxvi"
    XXVII = "xxvii"
    XXVIII = "xxviii"
    XXIX = "xxix"
    XXX = "xxx"
    XXXI = "xxxi"
    XXXII = "xxxii"
    XXXIII = "xxxiii"

    @property
    def index(self) -> int:
        return ROMAN_IDS.index(self.value) + 1

    @property
    def requires_reversible(self) -> bool:
        return self.index >= 27


# ──────────────────────────────────────────────
# Structure
# ──────────────────────────────────────────────

class StructureReport(BaseModel):
    """Support-digraph structure of a chain plus detailed-balance check."""
    irreducible: bool
    period: int = Field(..., ge=1)
    aperiodic: bool
    reversible: bool
    num_recurrent_classes: int = Field(..., ge=1)
    num_classes: int = Field(..., ge=1)
    detailed_balance_residual: Optional[float] = None

    @model_validator(mode="after")
    def aperiodic_matches_period(self) -> "StructureReport":
        if self.aperiodic != (self.period == 1):
            raise ValueError("aperiodic must be equivalent to period == 1")
        return self


# ──────────────────────────────────────────────
# Spectral
# ──────────────────────────────────────────────

class NormSpace(str, Enum):
    LINF_V = "LinfV"
    LINF_V0 = "LinfV0"
    L2_PI = "L2pi"
    PI_PERP = "PiPerp"


class GelfandIterate(BaseModel):
    n: int
    estimate: float


class SpectralReport(BaseModel):
    """Spectral radius estimate with the Gelfand iterates that bracket it."""
    kind: Literal["spectral"] = "spectral"
    radius: float = Field(..., ge=0.0)
    norm_space: NormSpace
    gelfand_iterates: List[GelfandIterate] = Field(default_factory=list)
    converged: bool = True
    eigenvalue_one_multiplicity: Optional[int] = Field(default=None, ge=1)


class ReversibleSpectrum(BaseModel):
    """Real spectrum of a reversible kernel on L2(pi)."""
    kind: Literal["reversible_spectrum"] = "reversible_spectrum"
    eigenvalues: List[float]
    gap: float
    top_multiplicity: int = Field(..., ge=0)
    second_largest_modulus: float


# ──────────────────────────────────────────────
# Drift / return-time certificates
# ──────────────────────────────────────────────

class SmallSetCert(BaseModel):
    kind: Literal["small_set"] = "small_set"
    S: List[int]
    m: int = Field(..., ge=1)
    nu: List[float]
    volume: float

    @property
    def is_small(self) -> bool:
        return self.volume > 0.0


class ReturnTimeCert(BaseModel):
    kind: Literal["return_time"] = "return_time"
    S: List[int]
    kappa_star: float
    kappa: float
    taboo_radius: float = Field(..., ge=0.0)
    mgf: List[float] = Field(default_factory=list, description="E_x[kappa^tau_S] for x in S")
    hitting_mgf: List[float] = Field(default_factory=list, description="E_y[kappa^sigma_S] for y outside S")

    @property
    def sup_mgf(self) -> float:
        return max(self.mgf) if self.mgf else math.inf


class DriftCert(BaseModel):
    """PV <= lambda V + b 1_S certificate."""
    kind: Literal["drift"] = "drift"
    V: List[float]
    S: List[int]
    lambda_: float = Field(..., alias="lambda", gt=0.0, lt=1.0)
    b: float = Field(..., ge=0.0)
    pi_V_moments: Dict[int, float] = Field(default_factory=dict)
    small_set_m: Optional[int] = None

    model_config = {"populate_by_name": True}

    @field_validator("V")
    @classmethod
    def v_at_least_one(cls, v: List[float]) -> List[float]:
        if v and min(v) < 1.0 - 1e-12:
            raise ValueError("drift function must satisfy V >= 1")
        return v


class DriftRefutation(BaseModel):
    """A (V, S) pair for which no lambda < 1 exists off S."""
    kind: Literal["drift_refutation"] = "drift_refutation"
    V: List[float]
    S: List[int]
    lambda_: float = Field(..., alias="lambda")
    worst_state: Optional[int] = None

    model_config = {"populate_by_name": True}


# ──────────────────────────────────────────────
# Rates and norm bounds
# ──────────────────────────────────────────────

class GeometricRate(BaseModel):
    """value_n <= C * rho^n; per-state constants in C_x when pointwise."""
    kind: Literal["geometric_rate"] = "geometric_rate"
    rho: float = Field(..., ge=0.0)
    C: float = Field(..., ge=0.0)
    C_x: Optional[List[float]] = None
    rho_x: Optional[List[float]] = None
    geometric: bool = True
    max_excess: float = 0.0


class NormBound(BaseModel):
    kind: Literal["norm_bound"] = "norm_bound"
    m: Optional[int] = None
    value: float


Certificate = Annotated[
    Union[
        GeometricRate,
        DriftCert,
        DriftRefutation,
        ReturnTimeCert,
        SpectralReport,
        ReversibleSpectrum,
        NormBound,
    ],
    Field(discriminator="kind"),
]


# ──────────────────────────────────────────────
# Verdicts and consistency
# ──────────────────────────────────────────────

class Verdict(BaseModel):
    """Outcome of evaluating one condition on one chain."""
    condition: ConditionId
    holds: bool
    applicable: bool = True
    certificate: Optional[Certificate] = None
    diagnostics: Dict[str, float] = Field(default_factory=dict)

    @model_validator(mode="after")
    def holding_needs_certificate(self) -> "Verdict":
        if self.holds and self.certificate is None:
            raise ValueError(f"condition {self.condition.value} holds without a certificate")
        if self.holds and not self.applicable:
            raise ValueError("a not-applicable condition cannot hold")
        return self


class EdgeStatus(str, Enum):
    OK = "ok"
    VIOLATED = "violated"
    SKIPPED = "skipped"


class EdgeResult(BaseModel):
    source: ConditionId
    target: ConditionId
    proof: str
    status: EdgeStatus
    witness: Optional[str] = None  # "pass" / "fail" / None when no constructive witness


class RateCheck(BaseModel):
    source: str
    rate: float
    oracle: float
    coherent: bool


class WeightSweep(BaseModel):
    """V-dependent verdicts (ix)-(xxvi) re-evaluated under one alternative weight."""
    weight: str
    verdicts: List[Verdict]
    violated_edges: List[str] = Field(default_factory=list)


class ConsistencyReport(BaseModel):
    verdicts: List[Verdict]
    edges: List[EdgeResult]
    violated_edges: List[str] = Field(default_factory=list)
    rate_checks: List[RateCheck] = Field(default_factory=list)
    rate_violations: List[str] = Field(default_factory=list)
    witness_failures: List[str] = Field(default_factory=list)
    weight_sweeps: List[WeightSweep] = Field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return not self.violated_edges and not self.rate_violations

    def verdict(self, condition: Union[ConditionId, str]) -> Verdict:
        cid = ConditionId(condition)
        for v in self.verdicts:
            if v.condition == cid:
                return v
        raise KeyError(f"no verdict for condition {cid.value}")


class EvaluationStatus(BaseModel):
    """Execution tracking for one evaluator run by the condition runner."""
    evaluator: str
    success: bool
    latency_ms: float
    error: Optional[str] = None


# ──────────────────────────────────────────────
# Run configuration
# ──────────────────────────────────────────────

class RunConfig(BaseModel):
    n_max: int = Field(default=256, ge=8)
    j_set: List[int] = Field(default_factory=lambda: [1, 2, 3, 5], min_length=1)
    p_set: List[float] = Field(default_factory=lambda: [1.5, 2.0, 4.0], min_length=1)
    rate_tol: float = Field(default=1e-3, gt=0.0)
    conditions: Union[Literal["all"], List[ConditionId]] = "all"
    seed: int = 20220301
    small_set: Optional[List[int]] = None
    kappa: Optional[float] = Field(default=None, gt=1.0)

    @field_validator("j_set")
    @classmethod
    def positive_sorted_j(cls, v: List[int]) -> List[int]:
        if any(j < 1 for j in v):
            raise ValueError("j_set entries must be positive integers")
        return sorted(set(v))

    @field_validator("p_set")
    @classmethod
    def p_above_one(cls, v: List[float]) -> List[float]:
        if any(p <= 1.0 for p in v):
            raise ValueError("p_set entries must be > 1")
        return sorted(set(v))

    def wants(self, condition: ConditionId) -> bool:
        return self.conditions == "all" or condition in self.conditions


# ──────────────────────────────────────────────
# Reports
# ──────────────────────────────────────────────

class StationarySummary(BaseModel):
    pi: List[float]
    residual: float


class AnalysisReport(BaseModel):
    """Top-level analyze output; field order is the JSON key order."""
    schema_version: int = Field(default=1, serialization_alias="schema")
    states: List[str]
    structure: StructureReport
    stationary: StationarySummary
    config: RunConfig
    verdicts: List[Verdict]
    consistency: Dict[str, object]
    rates: Dict[str, float]

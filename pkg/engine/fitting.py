"""
Geometric rate fitting: value_n ≤ C ρⁿ.

The fit works on log values so sequences decaying past 1e-308 keep their
slope.  ρ is the larger of two estimates over the window:
  - exp(least-squares slope) of the upper envelope u_n = max_{m ≥ n} log v_m
  - the block-maximum ratio between the first and last quarter of the window
The second one pins stagnant or periodic sequences at ρ = 1.
C is then the smallest constant with v_n ≤ C ρⁿ at every observed n.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence, Tuple

import numpy as np

from config import CERTIFICATE_SLACK, GEOMETRIC_RATE_MARGIN
from errors import EmptyWindow

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DecaySeries:
    """Observed (n, log value) pairs; −inf marks an exact zero."""

    ns: np.ndarray
    log_values: np.ndarray

    @classmethod
    def from_values(cls, ns: Sequence[int], values: Sequence[float]) -> "DecaySeries":
        vals = np.asarray(values, dtype=float)
        if np.any(vals < 0):
            raise ValueError("decay values must be nonnegative")
        with np.errstate(divide="ignore"):
            logs = np.log(vals)
        return cls(np.asarray(ns, dtype=float), logs)

    @classmethod
    def from_logs(cls, log_values: Sequence[float], start: int = 1) -> "DecaySeries":
        logs = np.asarray(log_values, dtype=float)
        return cls(np.arange(start, start + logs.size, dtype=float), logs)

    @property
    def values(self) -> np.ndarray:
        with np.errstate(over="ignore"):
            return np.exp(self.log_values)


class RateFit(NamedTuple):
    rho: float
    C: float
    geometric: bool
    max_excess: float

    @property
    def holds(self) -> bool:
        return self.geometric and self.max_excess <= CERTIFICATE_SLACK


def _envelope_slope(ns: np.ndarray, logs: np.ndarray) -> float:
    envelope = np.maximum.accumulate(logs[::-1])[::-1]
    slope, _ = np.polyfit(ns, envelope, 1)
    return float(slope)


def _block_slope(ns: np.ndarray, logs: np.ndarray) -> float:
    q = max(1, ns.size // 4)
    first = int(np.argmax(logs[:q]))
    last = ns.size - q + int(np.argmax(logs[-q:]))
    if ns[last] <= ns[first]:
        return -math.inf
    return float((logs[last] - logs[first]) / (ns[last] - ns[first]))


def excess(series: DecaySeries, rho: float, C: float) -> float:
    """max_n (v_n − C ρⁿ)."""
    finite = np.isfinite(series.log_values)
    if not finite.any():
        return 0.0
    if rho == 0.0:
        bound = np.where(series.ns[finite] == 0, C, 0.0)
    else:
        with np.errstate(over="ignore"):
            bound = C * np.exp(series.ns[finite] * math.log(rho))
    return float(np.max(series.values[finite] - bound))


def constant_for(series: DecaySeries, rho: float) -> float:
    """Smallest C with v_n ≤ C ρⁿ over the observed n."""
    finite = np.isfinite(series.log_values)
    if not finite.any():
        return 0.0
    if rho <= 0.0:
        return math.inf
    log_c = float(np.max(series.log_values[finite] - series.ns[finite] * math.log(rho)))
    return math.exp(log_c) if log_c < 700 else math.inf


def fit_geometric_rate(
    series: DecaySeries,
    window: Optional[Tuple[float, float]] = None,
) -> RateFit:
    """
    Fit (ρ, C) to a nonnegative sequence.

    Args:
        series: observed decay.
        window: inclusive (n_lo, n_hi) used for the slope; default is the late
            half n ≥ n_max/2.

    Raises:
        EmptyWindow: an explicit window contains no observed n.
    """
    ns = series.ns
    logs = series.log_values
    finite = np.isfinite(logs)

    if window is not None:
        in_window = (ns >= window[0]) & (ns <= window[1])
        if not in_window.any():
            raise EmptyWindow(f"no observations with n in [{window[0]}, {window[1]}]")
    elif ns.size:
        in_window = ns >= ns.max() / 2.0
    else:
        raise EmptyWindow("empty decay series")

    if not finite.any():
        return RateFit(rho=0.0, C=0.0, geometric=True, max_excess=0.0)

    use = in_window & finite
    if use.sum() < 2:
        use = finite
    if use.sum() == 1:
        n1 = float(ns[use][0])
        v1 = math.exp(float(logs[use][0]))
        rho = v1 ** (1.0 / n1) if v1 < 1.0 and n1 > 0 else 0.5
    else:
        slope = max(_envelope_slope(ns[use], logs[use]), _block_slope(ns[use], logs[use]))
        rho = math.exp(min(max(slope, -700.0), 700.0))

    C = constant_for(series, rho)
    fit = RateFit(
        rho=rho,
        C=C,
        geometric=rho < 1.0 - GEOMETRIC_RATE_MARGIN,
        max_excess=excess(series, rho, C) if math.isfinite(C) else math.inf,
    )
    logger.debug("Rate fit: rho=%.9g C=%.6g geometric=%s", fit.rho, fit.C, fit.geometric)
    return fit

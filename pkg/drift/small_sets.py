"""
Small sets by explicit minorization: ν(y) = min_{x∈S} P^m(x, y).
"""

from __future__ import annotations

import logging
from typing import Iterable, List, Optional

import numpy as np

from chain.core import ChainSpec, StationaryDist, kernel_power
from errors import BadParameters, EmptySet
from schemas import SmallSetCert

logger = logging.getLogger(__name__)


def normalize_set(chain: ChainSpec, S: Iterable[int], allow_empty: bool = False) -> List[int]:
    idx = sorted(set(int(s) for s in S))
    if not idx and not allow_empty:
        raise EmptySet("state subset S is empty")
    if idx and (idx[0] < 0 or idx[-1] >= chain.n):
        raise BadParameters(f"state subset {idx} out of range for {chain.n} states")
    return idx


def complement(chain: ChainSpec, S: Iterable[int]) -> List[int]:
    inside = set(S)
    return [x for x in range(chain.n) if x not in inside]


def minorization(chain: ChainSpec, S: Iterable[int], m: int) -> SmallSetCert:
    idx = normalize_set(chain, S)
    Pm = kernel_power(chain, m)
    nu = Pm[idx].min(axis=0)
    return SmallSetCert(S=idx, m=int(m), nu=nu.tolist(), volume=float(nu.sum()))


def find_small_set_m(chain: ChainSpec, S: Iterable[int], m_max: Optional[int] = None) -> Optional[SmallSetCert]:
    """First m in 1..m_max (default N) with positive minorization volume."""
    idx = normalize_set(chain, S)
    m_max = m_max or chain.n
    Pm = np.eye(chain.n)
    for m in range(1, m_max + 1):
        Pm = Pm @ chain.P
        nu = Pm[idx].min(axis=0)
        if nu.sum() > 0:
            logger.debug("S=%s is small with m=%d (volume %.4g)", idx, m, nu.sum())
            return SmallSetCert(S=idx, m=m, nu=nu.tolist(), volume=float(nu.sum()))
    return None


def default_small_set(pi: StationaryDist) -> List[int]:
    """Singleton of the state with the largest stationary mass."""
    return [int(np.argmax(pi.pi))]

"""
Cyclic Jacobi eigensolver for real symmetric matrices.

Small reversible chains go through this solver; above JACOBI_MAX_STATES the
LAPACK driver takes over (see symmetric_eigh).
"""

from __future__ import annotations

import logging
import math
from typing import Tuple

import numpy as np
from scipy.linalg import eigh

from config import JACOBI_MAX_STATES, JACOBI_MAX_SWEEPS, JACOBI_TOL
from errors import BadParameters

logger = logging.getLogger(__name__)


def _off_norm(a: np.ndarray) -> float:
    return math.sqrt(max(float(np.sum(a * a) - np.sum(np.diag(a) ** 2)), 0.0))


def jacobi_eigh(
    matrix: np.ndarray,
    tol: float = JACOBI_TOL,
    max_sweeps: int = JACOBI_MAX_SWEEPS,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Eigen-decomposition of a symmetric matrix by cyclic row-order rotations.

    Returns:
        (eigenvalues ascending, eigenvectors as columns), like scipy.linalg.eigh.
    """
    a = np.array(matrix, dtype=float, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise BadParameters(f"Jacobi needs a square matrix, got shape {a.shape}")
    scale = max(float(np.max(np.abs(a))), 1.0) if a.size else 1.0
    if np.max(np.abs(a - a.T), initial=0.0) > 1e-9 * scale:
        raise BadParameters("Jacobi needs a symmetric matrix")
    a = 0.5 * (a + a.T)
    n = a.shape[0]
    v = np.eye(n)

    for sweep in range(max_sweeps):
        off = _off_norm(a)
        if off < tol:
            logger.debug("Jacobi converged after %d sweeps (off=%.2e)", sweep, off)
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c

                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0

                vec_p = v[:, p].copy()
                vec_q = v[:, q].copy()
                v[:, p] = c * vec_p - s * vec_q
                v[:, q] = s * vec_p + c * vec_q
    else:
        logger.warning("Jacobi stopped after %d sweeps with off-diagonal norm %.2e", max_sweeps, _off_norm(a))

    values = np.diag(a).copy()
    order = np.argsort(values, kind="stable")
    return values[order], v[:, order]


def symmetric_eigh(matrix: np.ndarray, max_states: int = JACOBI_MAX_STATES) -> Tuple[np.ndarray, np.ndarray]:
    """Jacobi for small matrices, LAPACK above max_states."""
    n = np.asarray(matrix).shape[0]
    if n <= max_states:
        return jacobi_eigh(matrix)
    logger.warning("Symmetric eigensolve of %d states exceeds Jacobi limit %d; using LAPACK eigh", n, max_states)
    sym = 0.5 * (np.asarray(matrix, dtype=float) + np.asarray(matrix, dtype=float).T)
    return eigh(sym)

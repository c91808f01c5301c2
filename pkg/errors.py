"""
Exception hierarchy.

Everything raised on purpose by the certifier derives from ErgodicityError,
itself a ValueError, so callers that only know about ValueError still work.
Failed conditions and violated implications are NOT errors: they are
reported as data on the verdicts.
"""

from __future__ import annotations

from typing import Optional


class ErgodicityError(ValueError):
    """Root of every deliberate failure."""


# ── Chain validation ───────────────────────────────────────────────────────────

class ChainValidationError(ErgodicityError):
    pass


class NegativeEntry(ChainValidationError):
    def __init__(self, row: int, col: int, value: float) -> None:
        self.row = row
        self.col = col
        self.value = value
        super().__init__(f"P[{row}][{col}] = {value!r} is negative")


class RowSumOutOfTolerance(ChainValidationError):
    def __init__(self, row: int, row_sum: float, row_tol: float) -> None:
        self.row = row
        self.row_sum = row_sum
        self.row_tol = row_tol
        super().__init__(
            f"row {row} sums to {row_sum!r}, outside tolerance {row_tol:g}"
        )


class DimensionMismatch(ChainValidationError):
    pass


class DuplicateLabel(ChainValidationError):
    pass


class ChainFileError(ErgodicityError):
    """Unreadable or malformed chain file."""


# ── Structural ─────────────────────────────────────────────────────────────────

class NotIrreducible(ErgodicityError):
    def __init__(self, num_classes: Optional[int] = None) -> None:
        self.num_classes = num_classes
        detail = f" ({num_classes} strongly connected classes)" if num_classes else ""
        super().__init__(f"chain is not irreducible{detail}: stationary distribution not unique")


class StationaryNotConverged(ErgodicityError):
    def __init__(self, residual: float, bound: float) -> None:
        self.residual = residual
        self.bound = bound
        super().__init__(f"stationary solve did not converge: residual {residual:.3e} exceeds {bound:.3e}")


class NotReversible(ErgodicityError):
    def __init__(self, residual: float) -> None:
        self.residual = residual
        super().__init__(f"chain is not reversible: detailed balance residual {residual:.3e}")


# ── Measures and norms ─────────────────────────────────────────────────────────

class NotProbability(ErgodicityError):
    pass


class ZeroStationaryMass(ErgodicityError):
    pass


class NormEvaluation(ErgodicityError):
    pass


class MeasureNotInLp(ErgodicityError):
    pass


# ── Drift and return times ─────────────────────────────────────────────────────

class EmptySet(ErgodicityError):
    pass


class KappaBeyondRadius(ErgodicityError):
    def __init__(self, kappa: float, kappa_star: float) -> None:
        self.kappa = kappa
        self.kappa_star = kappa_star
        super().__init__(f"kappa={kappa!r} >= kappa_star={kappa_star!r}: return-time MGF diverges")


class SNotSmall(ErgodicityError):
    pass


class VBelowOne(ErgodicityError):
    pass


# ── Fitting / generators ───────────────────────────────────────────────────────

class EmptyWindow(ErgodicityError):
    pass


class BadParameters(ErgodicityError):
    pass

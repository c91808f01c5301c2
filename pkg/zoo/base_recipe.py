"""
Abstract base class for chain recipes.

Every recipe must:
  - Validate its parameters and raise BadParameters on bad input
  - Return a ChainSpec that passes validate_chain at ZOO_ROW_TOL
  - Be fully deterministic (same parameters and seed → same matrix)
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Optional, Sequence

import numpy as np

from chain.core import ChainSpec, validate_chain
from config import ZOO_ROW_TOL


class BaseRecipe(ABC):
    """Interface that every zoo recipe implements."""

    # name of the parameter that sets the state-space size; None when fixed
    size_param: Optional[str] = None

    @property
    @abstractmethod
    def name(self) -> str:
        """Unique recipe identifier (must match registry key)."""
        ...

    @property
    @abstractmethod
    def description(self) -> str:
        ...

    @abstractmethod
    def generate(self, **params) -> ChainSpec:
        ...

    def sized(self, size: int, **params) -> ChainSpec:
        """Generate at a given size; recipes without a size parameter ignore it."""
        if self.size_param is not None:
            params = {**params, self.size_param: size}
        return self.generate(**params)

    @staticmethod
    def finish(weights: np.ndarray, labels: Optional[Sequence] = None) -> ChainSpec:
        """Normalize nonnegative row weights into a validated kernel."""
        weights = np.asarray(weights, dtype=float)
        P = weights / weights.sum(axis=1, keepdims=True)
        return validate_chain(P, labels=labels, row_tol=ZOO_ROW_TOL)

    def __repr__(self) -> str:
        return f"<Recipe: {self.name}>"

from .analysis import (
    L2pi,
    LinfV,
    LinfV0,
    eigenvalue_one_multiplicity,
    gelfand_radius,
    pi_perp_norm,
    reversible_spectrum,
)
from .jacobi import jacobi_eigh, symmetric_eigh

__all__ = [
    "L2pi",
    "LinfV",
    "LinfV0",
    "eigenvalue_one_multiplicity",
    "gelfand_radius",
    "pi_perp_norm",
    "reversible_spectrum",
    "jacobi_eigh",
    "symmetric_eigh",
]

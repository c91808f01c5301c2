from .core import (
    ChainSpec,
    StationaryDist,
    kernel_power,
    stationary,
    structure,
    validate_chain,
)
from .io import chain_to_dict, load_chain

__all__ = [
    "ChainSpec",
    "StationaryDist",
    "kernel_power",
    "stationary",
    "structure",
    "validate_chain",
    "chain_to_dict",
    "load_chain",
]

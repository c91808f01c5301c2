from .drift import drift_holds, drift_power, synthesize_drift, verify_drift
from .return_time import return_time_mgf, taboo_radius, truncated_return_mgf
from .small_sets import default_small_set, find_small_set_m, minorization

__all__ = [
    "drift_holds",
    "drift_power",
    "synthesize_drift",
    "verify_drift",
    "return_time_mgf",
    "taboo_radius",
    "truncated_return_mgf",
    "default_small_set",
    "find_small_set_m",
    "minorization",
]

from .norms import (
    FunctionVec,
    SignedMeasureVec,
    WeightFunction,
    conditional_measure,
    l2_measure_norm_of_operator,
    lp_norm,
    op_norm_linf_v,
    op_norm_linf_v0,
    tv_distance,
    v_norm_fn,
)

__all__ = [
    "FunctionVec",
    "SignedMeasureVec",
    "WeightFunction",
    "conditional_measure",
    "l2_measure_norm_of_operator",
    "lp_norm",
    "op_norm_linf_v",
    "op_norm_linf_v0",
    "tv_distance",
    "v_norm_fn",
]

"""
Rate degradation across a family of growing chains.

For each size the table records the spectral gap, κ* for the default small
set and the fitted TV rate.  On truncations of a chain that is not
geometrically ergodic the gap and κ* − 1 shrink toward zero.
"""

from __future__ import annotations

import logging
from typing import List, Sequence, Union

import numpy as np
import pandas as pd

from chain.core import stationary, structure
from config import DEFAULT_N_MAX
from drift.return_time import return_time_mgf
from drift.small_sets import default_small_set
from engine.decay import CenteredPowers, tv_rows
from engine.fitting import DecaySeries, fit_geometric_rate
from measures.norms import WeightFunction
from spectral.analysis import LinfV, gelfand_radius, reversible_spectrum
from zoo.base_recipe import BaseRecipe
from zoo.registry import build_default_registry

logger = logging.getLogger(__name__)

COLUMNS = ["size", "gap", "kappa_star", "fitted_rho"]


def degradation_study(
    recipe: Union[BaseRecipe, str],
    sizes: Sequence[int],
    n_max: int = DEFAULT_N_MAX,
    **params,
) -> pd.DataFrame:
    """
    Rows sorted by size.  The gap is 1 − (second-largest |eigenvalue|) on
    reversible chains and 1 − r(P − Π) in the sup norm otherwise.

    Errors from generation or the certificate operations propagate.
    """
    if isinstance(recipe, str):
        recipe = build_default_registry().get(recipe)

    rows: List[dict] = []
    for size in sorted(set(int(s) for s in sizes)):
        chain = recipe.sized(size, **params)
        pi = stationary(chain)
        if structure(chain).reversible:
            gap = reversible_spectrum(chain, pi).gap
        else:
            ones = WeightFunction.constant(chain.n)
            gap = 1.0 - gelfand_radius(chain.P - pi.projector(), LinfV(ones)).radius
        kappa_star = return_time_mgf(chain, default_small_set(pi)).kappa_star

        logs = CenteredPowers(chain, pi, n_max).collect({"tv": tv_rows})["tv"]
        fit = fit_geometric_rate(DecaySeries.from_logs(logs.max(axis=1)))

        rows.append({"size": size, "gap": gap, "kappa_star": kappa_star, "fitted_rho": fit.rho})
        logger.info("  size=%d gap=%.6g kappa*=%.9g rho=%.6g", size, gap, kappa_star, fit.rho)

    table = pd.DataFrame(rows, columns=COLUMNS)
    table.attrs["monotone"] = is_monotone(table)
    if not table.attrs["monotone"]:
        logger.warning("Gap or kappa*-1 is not nonincreasing in size for %s", recipe.name)
    return table


def is_monotone(table: pd.DataFrame, slack: float = 1e-9) -> bool:
    """True when the gap and κ* − 1 never grow with size; inf to inf counts as flat."""
    gaps = table["gap"].to_numpy()
    excess = table["kappa_star"].to_numpy() - 1.0
    with np.errstate(invalid="ignore"):
        grows = np.diff(gaps) > slack
        grows |= np.diff(excess) > slack
    return not bool(np.any(grows))

"""
Report writer: JSON reports, chain files and decay CSV tables.

Numbers are rendered with 12 significant digits and infinities as the string
"inf", so identical inputs give byte-identical files.  Every file is written
to a temporary sibling first and renamed into place; a failed run never
leaves a partial file.
"""

from __future__ import annotations

import json
import logging
import math
import os
import tempfile
from enum import Enum
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel

from chain.core import ChainSpec, StationaryDist
from chain.io import chain_to_dict
from config import SIGNIFICANT_DIGITS
from engine.decay import CenteredPowers, tv_rows, v_uniform_rows
from measures.norms import WeightFunction

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def render_number(x: float) -> Union[float, str]:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return float(f"{x:.{SIGNIFICANT_DIGITS}g}")


def to_plain(obj: Any) -> Any:
    """Recursively convert models, enums and numpy scalars into rounded JSON values."""
    if isinstance(obj, BaseModel):
        return to_plain(obj.model_dump(mode="python", by_alias=True))
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k.value if isinstance(k, Enum) else k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return render_number(float(obj))
    return obj


def render_json(payload: Any) -> str:
    return json.dumps(to_plain(payload), indent=2, ensure_ascii=False) + "\n"


def write_text_atomic(path: PathLike, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
    logger.debug("Wrote %s (%d bytes)", path, len(text))
    return path


def write_json(path: PathLike, payload: Any) -> Path:
    return write_text_atomic(path, render_json(payload))


def write_chain(path: PathLike, chain: ChainSpec, pi: Optional[StationaryDist] = None) -> Path:
    out = write_json(path, chain_to_dict(chain, pi))
    logger.info("Chain written: %s (N=%d)", out, chain.n)
    return out


# ── Decay tables ───────────────────────────────────────────────────────────────

def decay_table(chain: ChainSpec, pi: StationaryDist, V: WeightFunction, n_max: int) -> pd.DataFrame:
    """
    Long table with columns n, state, tv, vnorm_bound for n = 1..n_max;
    vnorm_bound is Σ_y |Pⁿ(x,y) − π(y)|·V(y) / V(x).
    """
    powers = CenteredPowers(chain, pi, n_max)
    logs = powers.collect({"tv": tv_rows, "v": v_uniform_rows(V.V)})
    with np.errstate(over="ignore"):
        tv = np.exp(logs["tv"])
        vnorm = np.exp(logs["v"])
    ns = powers.ns
    return pd.DataFrame({
        "n": np.repeat(ns, chain.n),
        "state": np.tile(np.asarray(chain.states, dtype=object), ns.size),
        "tv": tv.reshape(-1),
        "vnorm_bound": vnorm.reshape(-1),
    })


def write_table(path: PathLike, table: pd.DataFrame) -> Path:
    text = table.to_csv(index=False, float_format=f"%.{SIGNIFICANT_DIGITS}g", lineterminator="\n")
    out = write_text_atomic(path, text)
    logger.info("Table written: %s (%d rows)", out, len(table))
    return out

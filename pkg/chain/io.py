"""
Chain files.

JSON:  {"states": [...], "P": [[...], ...], "pi": [...]}   ("pi" optional)
CSV:   N rows of N comma-separated decimals, no header; states are 0..N-1.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Optional, Tuple

import numpy as np
import pandas as pd

from chain.core import ChainSpec, StationaryDist, stationary_from_vector, validate_chain
from config import ROW_TOL
from errors import ChainFileError

logger = logging.getLogger(__name__)


def load_chain(path: Path | str, row_tol: float = ROW_TOL) -> Tuple[ChainSpec, Optional[StationaryDist]]:
    """
    Read a chain file. A supplied "pi" is checked for stationarity and returned.

    Raises:
        ChainFileError: unreadable file, malformed JSON/CSV, missing keys.
        ChainValidationError subclasses: the matrix itself is invalid.
    """
    path = Path(path)
    if not path.exists():
        raise ChainFileError(f"chain file not found: {path}")

    if path.suffix.lower() == ".csv":
        try:
            frame = pd.read_csv(path, header=None, dtype=float)
        except (ValueError, pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
            raise ChainFileError(f"malformed CSV chain file {path}: {exc}") from exc
        chain = validate_chain(frame.to_numpy(), labels=None, row_tol=row_tol)
        logger.info("Loaded %d-state chain from %s", chain.n, path.name)
        return chain, None

    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError, OSError) as exc:
        raise ChainFileError(f"malformed JSON chain file {path}: {exc}") from exc

    if not isinstance(payload, dict) or "P" not in payload:
        raise ChainFileError(f"chain file {path} must be an object with a 'P' matrix")

    chain = validate_chain(payload["P"], labels=payload.get("states"), row_tol=row_tol)
    pi = None
    if payload.get("pi") is not None:
        pi = stationary_from_vector(chain, payload["pi"])
    logger.info("Loaded %d-state chain from %s%s", chain.n, path.name, " (with pi)" if pi else "")
    return chain, pi


def chain_to_dict(chain: ChainSpec, pi: Optional[StationaryDist] = None) -> dict:
    record = {
        "states": [s if isinstance(s, (int, str)) else str(s) for s in chain.states],
        "P": np.asarray(chain.P).tolist(),
    }
    if pi is not None:
        record["pi"] = np.asarray(pi.pi).tolist()
    return record

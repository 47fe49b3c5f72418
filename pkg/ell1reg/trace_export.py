"""
trace_export.py

Export module that writes run artifacts: the per-step trace CSV, the kappa sweep
table, the verification table, and the text/JSON run summaries.
"""

import json
import logging
import math
from pathlib import Path
from typing import Mapping, Optional

import numpy as np
import pandas as pd

from ell1reg.config import CSV_SWEEP, CSV_TRACE, CSV_VERIFY, FLOAT_FORMAT, SUMMARY_JSON, SUMMARY_TEXT
from ell1reg.core import RegretTrace

logger = logging.getLogger("ell1reg")

TRACE_COLUMNS = ["t", "y", "yhat", "loss", "cumloss", "comploss", "regret", "bound"]


def trace_frame(trace: RegretTrace) -> pd.DataFrame:
    """One row per step; comploss and bound are repeated constants"""
    cumloss = trace.cumulative_loss
    comparator = math.nan if trace.comparator_loss is None else trace.comparator_loss
    bound = math.nan if trace.bound is None else trace.bound
    steps = len(trace.losses)
    return pd.DataFrame(
        {
            "t": np.arange(1, steps + 1),
            "y": trace.y,
            "yhat": trace.predictions,
            "loss": trace.losses,
            "cumloss": cumloss,
            "comploss": np.full(steps, comparator),
            "regret": cumloss - comparator,
            "bound": np.full(steps, bound),
        },
        columns=TRACE_COLUMNS,
    )


def _write_csv(frame: pd.DataFrame, path, label: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    logger.info(f"{label} exported to {path} ({len(frame)} rows)")
    return path


def export_trace_to_csv(trace: RegretTrace, path=CSV_TRACE) -> Path:
    return _write_csv(trace_frame(trace), path, "Trace")


def export_sweep_to_csv(frame: pd.DataFrame, path=CSV_SWEEP) -> Path:
    return _write_csv(frame, path, "Kappa sweep")


def export_verify_to_csv(frame: pd.DataFrame, path=CSV_VERIFY) -> Path:
    return _write_csv(frame, path, "Verification table")


def _plain(value):
    """JSON-friendly scalars; NaN and infinities become null"""
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, Mapping):
        return {key: _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    return value


def write_summary(summary: Mapping, text_path=SUMMARY_TEXT, json_path: Optional[Path] = SUMMARY_JSON) -> Path:
    """Plain-text `key: value` summary, plus a JSON copy unless json_path is None"""
    text_path = Path(text_path)
    text_path.parent.mkdir(parents=True, exist_ok=True)

    lines = []
    for key, value in summary.items():
        if isinstance(value, Mapping):
            lines.append(f"{key}:")
            lines.extend(f"  {inner}: {item}" for inner, item in value.items())
        else:
            lines.append(f"{key}: {value}")
    text_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    logger.info(f"Summary written to {text_path}")

    if json_path is not None:
        json_path = Path(json_path)
        json_path.parent.mkdir(parents=True, exist_ok=True)
        with open(json_path, "w", encoding="utf-8") as f:
            json.dump(_plain(dict(summary)), f, indent=2)
        logger.info(f"Summary JSON written to {json_path}")
    return text_path

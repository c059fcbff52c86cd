# =================================================================================================
# File:          reporting.py
# Project:       Operator SSA Verification
# License:       MIT
# Last Updated:  2026-10-16
#
# Purpose:
#   Deterministic JSON text for state files and trial records (17 significant digits for reals),
#   plus the campaign summary table printed at the end of a run.
# =================================================================================================

import json
import math
from typing import Any, Dict, Iterable, List, Mapping, Tuple

import numpy as np
import pandas as pd
from tabulate import tabulate


def format_real(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"Non-finite value {x!r} has no JSON representation.")
    return f"{x:.17g}"


def dumps(obj: Any) -> str:
    """One-line JSON text; key order is insertion order, reals carry 17 significant digits."""
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_real(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return f"[{format_real(obj.real)}, {format_real(obj.imag)}]"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, Mapping):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"Cannot serialize object of type {type(obj).__name__}.")


# --- Summary --------------------------------------------------------------------------------------
# ML: CONTRACT(records -> DataFrame[trial_index, verdict, <scalars>...], summary dict)
def scalar_frame(records: Iterable[Mapping[str, Any]]) -> pd.DataFrame:
    rows: List[Dict[str, Any]] = []
    for record in records:
        row = {'trial_index': record.get('trial_index'), 'verdict': record.get('verdict')}
        for key, value in record.get('scalars', {}).items():
            if isinstance(value, (int, float, np.integer, np.floating)) and not isinstance(value, bool):
                row[key] = float(value)
        rows.append(row)
    return pd.DataFrame(rows)


def summarize(records: List[Mapping[str, Any]]) -> Tuple[Dict[str, Any], pd.DataFrame]:
    frame = scalar_frame(records)
    verdicts = frame['verdict'].value_counts() if not frame.empty else pd.Series(dtype=int)
    summary: Dict[str, Any] = {
        'trials': len(records),
        'passed': int(verdicts.get('pass', 0)),
        'failures': int(verdicts.get('fail', 0)),
        'anomalies': int(verdicts.get('anomaly', 0)),
    }
    scalar_columns = [c for c in frame.columns if c not in ('trial_index', 'verdict')]
    worst = pd.DataFrame({
        'scalar': scalar_columns,
        'min': [frame[c].min() for c in scalar_columns],
        'max': [frame[c].max() for c in scalar_columns],
    })
    return summary, worst


def render_summary(summary: Mapping[str, Any], worst: pd.DataFrame) -> str:
    head = pd.DataFrame({'Metric': list(summary.keys()), 'Value': [str(v) for v in summary.values()]})
    lines = [tabulate(head, headers='keys', tablefmt='psql', showindex=False)]
    if not worst.empty:
        shown = worst.copy()
        shown['min'] = shown['min'].map('{:.3e}'.format)
        shown['max'] = shown['max'].map('{:.3e}'.format)
        lines.append(tabulate(shown, headers='keys', tablefmt='psql', showindex=False))
    return "\n".join(lines)

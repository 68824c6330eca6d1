"""CSV and JSON writers for curves, traces, events and scans."""

from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction

from .model import format_exact

CURVE_COLUMNS = ("L_m", "P_isolated", "P_paper_pair", "P_joint", "P_marginal")
ENTANGLE_COLUMNS = ("tau_s", "L_m", "concurrence", "negativity", "entropy_bits", "phi_E_reduced_rad")
EVENT_COLUMNS = ("L_bin_m", "n_pairs", "n_double", "n_single")
SCAN_RESULT_COLUMNS = (
    "lambda_m", "phi_G_rad", "phi_E_rad", "wl_pass", "spread_pass", "bg_pass",
    "spread_margin", "wl_margin", "bg_margin",
)

# baselines need more than 17 digits once L >> bin width
LENGTH_DIGITS = 30


def fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return format_exact(x, LENGTH_DIGITS)
    return format(float(x), ".17g")


def to_csv(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def curve_csv(rows) -> str:
    return to_csv(CURVE_COLUMNS, rows)


def events_csv(samples) -> str:
    return to_csv(
        EVENT_COLUMNS,
        [(s.L_bin, s.n_pairs_emitted, s.n_double_hits, s.n_single_hits) for s in samples],
    )


def scan_table(rows):
    """(columns, values) for scan rows: parameters first, then results."""
    if not rows:
        return (), []
    flat = [r.flat() for r in rows]
    columns = tuple(flat[0])
    return columns, [tuple(f[c] for c in columns) for f in flat]


def scan_csv(rows) -> str:
    columns, values = scan_table(rows)
    return to_csv(columns, values)


def _json_safe(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    if isinstance(x, Fraction):
        return float(x)
    if isinstance(x, dict):
        return {k: _json_safe(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_json_safe(v) for v in x]
    return x


def dumps(obj) -> str:
    return json.dumps(_json_safe(obj), indent=2) + "\n"


def scan_json(rows) -> str:
    columns, values = scan_table(rows)
    return dumps([dict(zip(columns, v)) for v in values])

"""Canonical JSON and CSV emission.

JSON uses the stdlib encoder with fixed separators and preserved key order,
so load -> dump round-trips byte-identically (float repr is exact).  CSV
numbers use 17 significant digits; concurrence-like columns snap values
below 1e-10 to exact 0 so threshold semantics survive the text round trip.
"""

from __future__ import annotations

import json
from typing import Iterable

CSV_ZERO_SNAP = 1e-10
_SNAP_COLUMNS = frozenset({
    "C_end", "C_single_modulus", "C_nn_end", "concurrence",
})


def fmt_float(x: float) -> str:
    return format(float(x), ".17g")


def dumps_canonical(obj) -> str:
    return json.dumps(obj, indent=2, separators=(",", ": "), ensure_ascii=False) + "\n"


def provenance_lines(provenance: dict) -> list[str]:
    return ["# " + line for line in
            json.dumps(provenance, indent=None, separators=(", ", ": "),
                       ensure_ascii=False).splitlines()]


def format_cell(name: str, value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        if name in _SNAP_COLUMNS and abs(value) < CSV_ZERO_SNAP:
            return "0"
        return fmt_float(value)
    if value is None:
        return ""
    return str(value)


def rows_to_csv(columns: list[str], rows: Iterable[dict], provenance: dict | None = None) -> str:
    lines = provenance_lines(provenance) if provenance else []
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(format_cell(c, row.get(c)) for c in columns))
    return "\n".join(lines) + "\n"

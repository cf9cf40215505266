"""Deterministic text and CSV rendering (12 significant digits)."""

from __future__ import annotations

import csv
import enum
import io
import math
from typing import Iterable, Sequence


def fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, enum.Enum):
        return str(value.value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        out = f"{value:.12g}"
        return "0" if out == "-0" else out
    return str(value)


def key_value_block(items: Iterable[tuple[str, object]]) -> str:
    items = list(items)
    width = max((len(k) for k, _ in items), default=0)
    return "".join(f"{k.ljust(width)} = {fmt(v)}\n" for k, v in items)


def csv_text(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def bound_report_text(report) -> str:
    return key_value_block(report.items())


def bound_report_csv(report) -> str:
    return csv_text(("field", "value"), report.items())


def po_result_text(result, title: str = "retrenchment PO") -> str:
    return f"[{title}]\n" + key_value_block([("verdict", result.verdict), *result.witness.items()])


def po_result_csv(result) -> str:
    return csv_text(("field", "value"), [("verdict", result.verdict), *result.witness.items()])

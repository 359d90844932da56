"""Report envelope and deterministic rendering.

Identical command, configuration and input files produce byte-identical
bytes from ``emit``: JSON keys are sorted, every non-integer number is a
decimal string, and nothing time- or locale-dependent enters the payload
(wall-clock duration is surfaced separately, on stderr).  CSV renders the
payload's tabular core only -- column order is fixed per command and
documented in the README; the configuration echo lives in the JSON form.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Report:
    command: str
    config: dict
    payload: dict
    table: tuple[tuple[str, ...], list[tuple, ...]] | None = None  # (header, rows)


def emit(report: Report, fmt: str) -> bytes:
    if fmt == "json":
        doc = {
            "command": report.command,
            "config": report.config,
            "payload": report.payload,
        }
        return (json.dumps(doc, sort_keys=True, indent=2) + "\n").encode()
    if fmt == "csv":
        if report.table is None:
            raise ValueError(f"command {report.command!r} has no CSV form")
        header, rows = report.table
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([str(x) for x in row])
        return buf.getvalue().encode()
    raise ValueError(f"unknown format {fmt!r}")

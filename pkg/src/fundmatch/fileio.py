"""Small JSONL / CSV helpers with canonical, reproducible output.

All text is UTF-8. JSON lines are written compact with keys in insertion
order so that identical inputs always produce byte-identical files.
"""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Any, Iterable, Iterator


def dumps_canonical(obj: Any) -> str:
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def write_jsonl(path: str | Path, rows: Iterable[dict]) -> int:
    """Write one canonical JSON object per line; returns the row count."""
    n = 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for row in rows:
            fh.write(dumps_canonical(row))
            fh.write("\n")
            n += 1
    return n


def read_jsonl(path: str | Path) -> Iterator[tuple[int, str, dict | None]]:
    """Yield (line_no, raw_line, parsed_or_None) for every non-blank line."""
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                if not isinstance(obj, dict):
                    obj = None
            except json.JSONDecodeError:
                obj = None
            yield line_no, line, obj


def write_csv(path: str | Path, header: list[str], rows: Iterable[list]) -> int:
    """Comma-delimited, double-quote quoting, LF line endings."""
    n = 0
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, delimiter=",", quotechar='"', lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)
            n += 1
    return n


def read_csv_dicts(path: str | Path) -> Iterator[tuple[int, str, dict]]:
    """Yield (line_no, raw_line, row_dict) for each data row of a CSV file."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        text = fh.read()
    reader = csv.DictReader(io.StringIO(text))
    raw_lines = text.splitlines()
    for i, row in enumerate(reader):
        line_no = i + 2  # header is line 1
        raw = raw_lines[line_no - 1] if line_no - 1 < len(raw_lines) else ""
        yield line_no, raw, {k: (v if v is not None else "") for k, v in row.items()}


def format_float(x: float) -> str:
    """Shortest round-trip decimal form, canonical across runs."""
    return repr(float(x))

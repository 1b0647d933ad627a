"""File ingestion with per-record validation and a rejects report.

Records that violate an invariant are never silently dropped: each bad line is
collected as (original line, reason) and can be written to rejects.jsonl.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ValidationError
from .fileio import read_csv_dicts, read_jsonl, write_jsonl
from .records import (
    CallRecord,
    MasterRecord,
    PublicationRecord,
    SourceAuthorProfile,
    author_profile_from_dict,
    call_from_dict,
    master_from_dict,
    publication_from_dict,
    validate_call,
    validate_publication,
)

JSONL = "jsonl"
CSV = "csv"
FORMATS = (JSONL, CSV)


@dataclass
class Reject:
    line: str
    reason: str

    def to_dict(self) -> dict:
        return {"line": self.line, "reason": self.reason}


@dataclass
class IngestReport:
    accepted: int = 0
    rejects: list[Reject] = field(default_factory=list)

    def add_reject(self, line: str, reason: str) -> None:
        self.rejects.append(Reject(line=line, reason=reason))


def write_rejects(path: str | Path, report: IngestReport) -> int:
    return write_jsonl(path, (r.to_dict() for r in report.rejects))


def _check_format(fmt: str, allowed: tuple[str, ...]) -> None:
    if fmt not in allowed:
        raise ValidationError(f"unknown format {fmt!r}; expected one of {allowed}")


def _open_or_fail(path: str | Path) -> Path:
    p = Path(path)
    if not p.is_file():
        raise OSError(f"cannot read {p}")
    return p


def ingest_publications(
    path: str | Path,
    format: str = JSONL,
    reference_year: int | None = None,
    report: IngestReport | None = None,
) -> list[PublicationRecord]:
    """Parse publications.jsonl; invalid records go to the report, valid ones return."""
    _check_format(format, (JSONL,))
    p = _open_or_fail(path)
    report = report if report is not None else IngestReport()

    out: list[PublicationRecord] = []
    seen_ids: set[str] = set()
    for _line_no, raw, obj in read_jsonl(p):
        if obj is None:
            report.add_reject(raw, "not a JSON object")
            continue
        try:
            rec = publication_from_dict(obj)
        except (TypeError, ValueError) as exc:
            report.add_reject(raw, f"schema violation: {exc}")
            continue
        problems = validate_publication(rec, reference_year)
        if rec.pub_id and rec.pub_id in seen_ids:
            problems.append(f"duplicate pub_id {rec.pub_id!r}")
        if problems:
            report.add_reject(raw, "; ".join(problems))
            continue
        seen_ids.add(rec.pub_id)
        out.append(rec)
        report.accepted += 1
    return out


def ingest_calls(
    path: str | Path,
    format: str = JSONL,
    report: IngestReport | None = None,
) -> list[CallRecord]:
    _check_format(format, (JSONL,))
    p = _open_or_fail(path)
    report = report if report is not None else IngestReport()

    out: list[CallRecord] = []
    seen_ids: set[str] = set()
    for _line_no, raw, obj in read_jsonl(p):
        if obj is None:
            report.add_reject(raw, "not a JSON object")
            continue
        try:
            rec = call_from_dict(obj)
        except (TypeError, ValueError) as exc:
            report.add_reject(raw, f"schema violation: {exc}")
            continue
        problems = validate_call(rec)
        if rec.call_id and rec.call_id in seen_ids:
            problems.append(f"duplicate call_id {rec.call_id!r}")
        if problems:
            report.add_reject(raw, "; ".join(problems))
            continue
        seen_ids.add(rec.call_id)
        out.append(rec)
        report.accepted += 1
    return out


def ingest_master_list(
    path: str | Path,
    format: str = JSONL,
    report: IngestReport | None = None,
) -> list[MasterRecord]:
    """Parse the curated master list; a repeated researcher_key is fatal."""
    _check_format(format, FORMATS)
    p = _open_or_fail(path)
    report = report if report is not None else IngestReport()

    rows: list[tuple[str, dict | None]] = []
    if format == JSONL:
        rows = [(raw, obj) for _n, raw, obj in read_jsonl(p)]
    else:
        rows = [(raw, obj) for _n, raw, obj in read_csv_dicts(p)]

    out: list[MasterRecord] = []
    seen: set[str] = set()
    for raw, obj in rows:
        if obj is None:
            report.add_reject(raw, "not a JSON object")
            continue
        rec = master_from_dict(obj)
        if not rec.researcher_key:
            report.add_reject(raw, "missing researcher_key")
            continue
        if rec.researcher_key in seen:
            raise ValidationError(f"duplicate researcher_key {rec.researcher_key!r} in master list")
        if not (rec.verified_source_ids or rec.orcid or rec.email or rec.canonical_name.strip()):
            report.add_reject(raw, "no identifier channel (source id, orcid, email or name)")
            continue
        seen.add(rec.researcher_key)
        out.append(rec)
        report.accepted += 1
    return out


def ingest_author_profiles(
    path: str | Path,
    format: str = JSONL,
    report: IngestReport | None = None,
) -> list[SourceAuthorProfile]:
    _check_format(format, (JSONL,))
    p = _open_or_fail(path)
    report = report if report is not None else IngestReport()

    out: list[SourceAuthorProfile] = []
    seen: set[str] = set()
    for _line_no, raw, obj in read_jsonl(p):
        if obj is None:
            report.add_reject(raw, "not a JSON object")
            continue
        rec = author_profile_from_dict(obj)
        if not rec.source_author_id:
            report.add_reject(raw, "missing source_author_id")
            continue
        if rec.source_author_id in seen:
            report.add_reject(raw, f"duplicate source_author_id {rec.source_author_id!r}")
            continue
        seen.add(rec.source_author_id)
        out.append(rec)
        report.accepted += 1
    return out


def read_topic_map(path: str | Path) -> list[tuple[str, str]]:
    """Read topics.csv rows of (doi, topic)."""
    p = _open_or_fail(path)
    with open(p, "r", encoding="utf-8", newline="") as fh:
        text = fh.read()
    reader = csv.reader(io.StringIO(text))
    rows = list(reader)
    if not rows:
        return []
    start = 1 if [c.strip().lower() for c in rows[0][:2]] == ["doi", "topic"] else 0
    out: list[tuple[str, str]] = []
    for row in rows[start:]:
        if len(row) >= 2 and row[0].strip():
            out.append((row[0].strip(), row[1].strip()))
    return out


def enrich_topics(
    pubs: list[PublicationRecord], topic_map_path: str | Path
) -> list[PublicationRecord]:
    """Attach a topic to every publication whose DOI appears in the map."""
    from .records import with_topic

    mapping = {doi.lower(): topic for doi, topic in read_topic_map(topic_map_path)}
    out: list[PublicationRecord] = []
    for pub in pubs:
        if pub.doi and pub.doi.lower() in mapping:
            out.append(with_topic(pub, mapping[pub.doi.lower()]))
        else:
            out.append(pub)
    return out

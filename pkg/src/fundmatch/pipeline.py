"""Stage orchestration over a run directory, and the recomputation engine.

Embedding is the expensive invariant part and runs as its own offline stage;
recomputation only replays profiling, scoring, ranking and analytics on top of
the frozen vector store, which is what makes interactive parameter changes
cheap.
"""
from __future__ import annotations

import datetime as _dt
import hashlib
import json
import shutil
from dataclasses import dataclass
from pathlib import Path

from .analytics import analytics_payload
from .config import (
    PROVIDER_HASH,
    PROVIDER_IMPORT,
    PROVIDER_SIDECAR,
    PipelineConfig,
)
from .embedding import (
    HashEmbedder,
    SidecarEmbedder,
    VectorStore,
    build_store,
    compute_baseline,
    embed_batch,
    export_vectors,
    import_vectors,
)
from .errors import ValidationError
from .fileio import dumps_canonical, read_jsonl, write_csv, write_jsonl
from .identity import filter_population, resolve_identities_detailed
from .ingest import (
    IngestReport,
    ingest_author_profiles,
    ingest_calls,
    ingest_master_list,
    ingest_publications,
    enrich_topics,
    write_rejects,
)
from .profiling import build_all_sets
from .ranking import RankingBook
from .records import (
    CallRecord,
    PublicationRecord,
    ResearcherProfile,
    author_profile_from_dict,
    author_profile_to_dict,
    call_from_dict,
    call_to_dict,
    master_from_dict,
    master_to_dict,
    publication_from_dict,
    publication_to_dict,
    researcher_from_dict,
    researcher_to_dict,
    to_document,
)
from .scoring import ScoreRow, score_matrix

PUBLICATIONS_FILE = "publications.jsonl"
CALLS_FILE = "calls.jsonl"
MASTERS_FILE = "masters.jsonl"
AUTHOR_PROFILES_FILE = "author_profiles.jsonl"
REJECTS_FILE = "rejects.jsonl"
RESEARCHERS_FILE = "researchers.jsonl"
UNMATCHED_FILE = "unmatched_profiles.jsonl"
DOCS_FILE = "docs.jsonl"
VECTORS_FILE = "vectors.jsonl"
SCORES_FILE = "scores.jsonl"
ASSIGNMENTS_FILE = "assignments.csv"
RECOMMENDATIONS_FILE = "recommendations.csv"
ANALYTICS_FILE = "analytics.json"
REPORT_FILE = "report.md"


def _sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def stage_ingest(
    run_dir: Path,
    publications: Path,
    calls: Path,
    masters: Path,
    author_profiles: Path,
    topics: Path | None = None,
    masters_format: str = "jsonl",
    reference_year: int | None = None,
) -> IngestReport:
    """Validate raw inputs and write their canonical forms plus rejects.jsonl."""
    run_dir.mkdir(parents=True, exist_ok=True)
    report = IngestReport()
    pubs = ingest_publications(publications, reference_year=reference_year, report=report)
    if topics is not None:
        pubs = enrich_topics(pubs, topics)
    call_records = ingest_calls(calls, report=report)
    master_records = ingest_master_list(masters, format=masters_format, report=report)
    profile_records = ingest_author_profiles(author_profiles, report=report)

    write_jsonl(run_dir / PUBLICATIONS_FILE, (publication_to_dict(p) for p in pubs))
    write_jsonl(run_dir / CALLS_FILE, (call_to_dict(c) for c in call_records))
    write_jsonl(run_dir / MASTERS_FILE, (master_to_dict(m) for m in master_records))
    write_jsonl(run_dir / AUTHOR_PROFILES_FILE, (author_profile_to_dict(a) for a in profile_records))
    write_rejects(run_dir / REJECTS_FILE, report)
    return report


def load_publications(run_dir: Path) -> list[PublicationRecord]:
    return [publication_from_dict(obj) for _n, _raw, obj in read_jsonl(run_dir / PUBLICATIONS_FILE) if obj]


def load_calls(run_dir: Path) -> list[CallRecord]:
    return [call_from_dict(obj) for _n, _raw, obj in read_jsonl(run_dir / CALLS_FILE) if obj]


def load_researchers(run_dir: Path) -> list[ResearcherProfile]:
    return [researcher_from_dict(obj) for _n, _raw, obj in read_jsonl(run_dir / RESEARCHERS_FILE) if obj]


def stage_resolve(run_dir: Path) -> int:
    """Cascade identity resolution over the canonical corpus; writes researchers.jsonl."""
    pubs = load_publications(run_dir)
    masters = [master_from_dict(obj) for _n, _raw, obj in read_jsonl(run_dir / MASTERS_FILE) if obj]
    profiles = [
        author_profile_from_dict(obj)
        for _n, _raw, obj in read_jsonl(run_dir / AUTHOR_PROFILES_FILE)
        if obj
    ]
    result = resolve_identities_detailed(masters, profiles, pubs)
    write_jsonl(run_dir / RESEARCHERS_FILE, (researcher_to_dict(r) for r in result.profiles))
    write_jsonl(run_dir / UNMATCHED_FILE, (author_profile_to_dict(p) for p in result.unattached))
    return len(result.profiles)


def make_provider(cfg: PipelineConfig):
    if cfg.provider == PROVIDER_HASH:
        dim = int(cfg.provider_options.get("dim", "64"))
        return HashEmbedder(dim=dim)
    if cfg.provider == PROVIDER_SIDECAR:
        cmd = cfg.provider_options.get("cmd", "")
        model = cfg.provider_options.get("model", "specter2")
        if not cmd:
            raise ValidationError("sidecar provider requires provider_options.cmd")
        return SidecarEmbedder(cmd.split(), model_tag=model)
    raise ValidationError(f"provider {cfg.provider!r} does not embed in-process")


def stage_embed(run_dir: Path, cfg: PipelineConfig) -> int:
    """Lower records to documents and produce vectors.jsonl via the configured provider."""
    pubs = load_publications(run_dir)
    calls = load_calls(run_dir)
    docs = [to_document(p) for p in pubs] + [to_document(c) for c in calls]
    docs.sort(key=lambda d: d.doc_id)
    write_jsonl(
        run_dir / DOCS_FILE,
        ({"doc_id": d.doc_id, "title": d.title, "body": d.body, "keywords": d.keywords} for d in docs),
    )

    if cfg.provider == PROVIDER_IMPORT:
        src = cfg.provider_options.get("path", "")
        if not src:
            raise ValidationError("import provider requires provider_options.path")
        store = import_vectors(src)  # validates before adopting
        shutil.copyfile(src, run_dir / VECTORS_FILE)
        return len(store)

    provider = make_provider(cfg)
    vectors = embed_batch(provider, docs)
    baseline = compute_baseline(provider)
    store = build_store(vectors, baseline=baseline)
    debias_flag = cfg.provider_options.get("debias", "true").lower() != "false"
    if debias_flag:
        store = store.debiased_copy(baseline)
    export_vectors(store, run_dir / VECTORS_FILE)
    return len(store)


def compute_scores(
    pubs: list[PublicationRecord],
    researchers: list[ResearcherProfile],
    calls: list[CallRecord],
    store: VectorStore,
    cfg: PipelineConfig,
    threads: int = 1,
) -> list[ScoreRow]:
    cfg.validate()
    population = filter_population(researchers, cfg.population_min_pubs)
    pubs_by_id = {p.pub_id: p for p in pubs}
    sets = build_all_sets(population, cfg.indicators, pubs_by_id, cfg.reference_year)
    call_ids = [c.call_id for c in calls]
    return score_matrix(
        sets,
        store,
        call_ids,
        scope=cfg.normalization_scope,
        denominator=cfg.top_fraction_denominator,
        threads=threads,
    )


def stage_score(run_dir: Path, cfg: PipelineConfig, threads: int = 1) -> int:
    pubs = load_publications(run_dir)
    researchers = load_researchers(run_dir)
    calls = load_calls(run_dir)
    store = import_vectors(run_dir / VECTORS_FILE)
    rows = compute_scores(pubs, researchers, calls, store, cfg, threads=threads)
    write_jsonl(run_dir / SCORES_FILE, (r.to_dict() for r in rows))
    return len(rows)


def load_scores(run_dir: Path) -> list[ScoreRow]:
    rows = []
    for _n, _raw, obj in read_jsonl(run_dir / SCORES_FILE):
        if obj:
            rows.append(
                ScoreRow(
                    researcher_id=obj["researcher_id"],
                    indicator=obj["indicator"],
                    call_id=obj["call_id"],
                    a=float(obj["a"]),
                    z=float(obj["z"]),
                    n_set=int(obj["n_set"]),
                    k_used=int(obj["k_used"]),
                    rule=obj["rule"],
                )
            )
    return rows


def write_ranking_reports(run_dir: Path, book: RankingBook) -> None:
    assigned = list(book.iter_assigned())
    write_csv(
        run_dir / ASSIGNMENTS_FILE,
        ["indicator", "call_id", "researcher_id", "z", "percentile", "rank"],
        (
            [e.indicator_name, e.call_id, e.researcher_id, repr(e.z), repr(e.percentile), e.rank]
            for e in assigned
        ),
    )
    rec_rows = []
    for researcher_id in sorted({e.researcher_id for e in assigned}):
        per = book.recommend_for_researcher(researcher_id)
        for indicator in book.indicators:
            for call_id, rank, pct in per.get(indicator, []):
                rec_rows.append([researcher_id, indicator, call_id, rank, repr(pct)])
    write_csv(
        run_dir / RECOMMENDATIONS_FILE,
        ["researcher_id", "indicator", "call_id", "rank", "percentile"],
        rec_rows,
    )


def stage_rank(run_dir: Path, cfg: PipelineConfig) -> int:
    rows = load_scores(run_dir)
    book = RankingBook(rows, cutoff=cfg.percentile_cutoff, indicator_order=[i.name for i in cfg.indicators])
    write_ranking_reports(run_dir, book)
    return len(book.assignments)


def stage_analyze(run_dir: Path, cfg: PipelineConfig) -> dict:
    rows = load_scores(run_dir)
    book = RankingBook(rows, cutoff=cfg.percentile_cutoff, indicator_order=[i.name for i in cfg.indicators])
    names = [i.name for i in cfg.indicators if i.name in set(book.indicators)] or book.indicators
    payload = analytics_payload(book.assignments, names)
    with open(run_dir / ANALYTICS_FILE, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_canonical(payload))
        fh.write("\n")
    return payload


def stage_report(run_dir: Path, cfg: PipelineConfig) -> Path:
    """Human-readable digest of the run: summary, overlap and top matches."""
    with open(run_dir / ANALYTICS_FILE, "r", encoding="utf-8") as fh:
        analytics = json.load(fh)
    lines = ["# Matching run report", ""]
    lines.append("## Assignment summary")
    lines.append("| indicator | researchers | unique | avg calls/researcher | avg researchers/call |")
    lines.append("|---|---|---|---|---|")
    for row in analytics["summary"]:
        unique = "-" if row["unique_researchers"] is None else row["unique_researchers"]
        lines.append(
            f"| {row['indicator_name']} | {row['researchers_assigned']} | {unique} "
            f"| {row['avg_calls_per_researcher']:.1f} | {row['avg_researchers_per_call']:.1f} |"
        )
    lines.append("")
    lines.append("## Pairwise overlap (row pairs also in column)")
    lines.append("| row | col | overlap % | spearman |")
    lines.append("|---|---|---|---|")
    for cell in analytics["overlap"]:
        rho = "-" if cell["spearman_rho"] is None else f"{cell['spearman_rho']:.2f}"
        lines.append(
            f"| {cell['row_indicator']} | {cell['col_indicator']} | {cell['overlap_pct']:.0f}% | {rho} |"
        )
    lines.append("")
    lines.append("## Recommended-calls-per-researcher distribution")
    lines.append("| indicator | q1 | median | q3 |")
    lines.append("|---|---|---|---|")
    for d in analytics["distributions"]:
        fmt = lambda v: "-" if v is None else f"{v:.1f}"
        lines.append(f"| {d['indicator_name']} | {fmt(d['q1'])} | {fmt(d['median'])} | {fmt(d['q3'])} |")
    lines.append("")
    out = run_dir / REPORT_FILE
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines))
    return out


@dataclass(frozen=True)
class RunSnapshot:
    """Immutable result of one full computation over a frozen corpus."""

    snapshot_id: str
    config_digest: str
    corpus_digest: str
    config: PipelineConfig
    scores: list[ScoreRow]
    book: RankingBook
    analytics: dict
    created_at: str


class MatchingEngine:
    """Owns the frozen corpus artifacts and recomputes snapshots on demand."""

    def __init__(
        self,
        pubs: list[PublicationRecord],
        researchers: list[ResearcherProfile],
        calls: list[CallRecord],
        store: VectorStore,
        corpus_digest: str,
        threads: int = 1,
    ):
        self.pubs = pubs
        self.researchers = researchers
        self.calls = calls
        self.store = store
        self.corpus_digest = corpus_digest
        self.threads = threads

    @classmethod
    def from_run_dir(cls, run_dir: str | Path, threads: int = 1) -> "MatchingEngine":
        run = Path(run_dir)
        parts = []
        for name in (PUBLICATIONS_FILE, CALLS_FILE, RESEARCHERS_FILE, VECTORS_FILE):
            path = run / name
            if not path.is_file():
                raise OSError(f"run directory is missing {name}")
            parts.append(f"{name}:{_sha256_file(path)}")
        corpus_digest = hashlib.sha256("|".join(parts).encode("utf-8")).hexdigest()
        return cls(
            pubs=load_publications(run),
            researchers=load_researchers(run),
            calls=load_calls(run),
            store=import_vectors(run / VECTORS_FILE),
            corpus_digest=corpus_digest,
            threads=threads,
        )

    def compute(self, cfg: PipelineConfig) -> RunSnapshot:
        cfg.validate()
        rows = compute_scores(self.pubs, self.researchers, self.calls, self.store, cfg, self.threads)
        book = RankingBook(rows, cutoff=cfg.percentile_cutoff, indicator_order=[i.name for i in cfg.indicators])
        names = [i.name for i in cfg.indicators if i.name in set(book.indicators)] or book.indicators
        analytics = analytics_payload(book.assignments, names)
        config_digest = cfg.digest()
        snapshot_id = hashlib.sha256(
            f"{config_digest}:{self.corpus_digest}".encode("utf-8")
        ).hexdigest()[:16]
        return RunSnapshot(
            snapshot_id=snapshot_id,
            config_digest=config_digest,
            corpus_digest=self.corpus_digest,
            config=cfg,
            scores=rows,
            book=book,
            analytics=analytics,
            created_at=_dt.datetime.now(_dt.timezone.utc).isoformat(),
        )

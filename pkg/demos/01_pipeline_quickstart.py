"""End-to-end walk through the matching pipeline on a synthetic corpus.

Generates a small seeded institution, resolves identities, embeds documents
with the deterministic hash provider, scores and ranks, then prints the top
candidates for one call and the recommended calls for one researcher.
"""
from pathlib import Path
import tempfile

from fundmatch.config import PipelineConfig
from fundmatch.pipeline import (
    MatchingEngine,
    stage_embed,
    stage_ingest,
    stage_resolve,
)
from fundmatch.synth import generate_corpus, write_corpus

workdir = Path(tempfile.mkdtemp(prefix="fundmatch-demo-"))
print(f"working in {workdir}\n")

# 1. A seeded synthetic institution: 30 researchers, 8 calls.
corpus = generate_corpus(n_researchers=30, n_calls=8, seed=7, pubs_per_researcher=8)
inputs = write_corpus(corpus, workdir / "raw")
print(f"synthesized {len(corpus.publications)} publications, {len(corpus.calls)} calls")

# 2. Ingest -> resolve -> embed. Each stage writes its artifact into workdir.
cfg = PipelineConfig(reference_year=2025)
stage_ingest(
    workdir,
    inputs["publications"],
    inputs["calls"],
    inputs["masters"],
    inputs["author_profiles"],
    topics=inputs["topics"],
    reference_year=cfg.reference_year,
)
stage_resolve(workdir)
stage_embed(workdir, cfg)

# 3. Score + rank in memory via the engine used by the HTTP service.
engine = MatchingEngine.from_run_dir(workdir)
snapshot = engine.compute(cfg)
print(f"snapshot {snapshot.snapshot_id}: {len(snapshot.scores)} scored triples\n")

call_id = corpus.calls[0].call_id
print(f"top candidates for {call_id} ({corpus.calls[0].title!r}):")
for entry in snapshot.book.candidates_for_call(call_id, "Research background")[:5]:
    print(f"  rank {entry.rank:>2}  pct {entry.percentile:6.2f}  {entry.researcher_id}")

rid = snapshot.book.assignments[0].researcher_id
print(f"\nrecommended calls for {rid}:")
for indicator, items in snapshot.book.recommend_for_researcher(rid).items():
    listing = ", ".join(f"{c} (p{p:.1f})" for c, _r, p in items[:2]) or "none"
    print(f"  {indicator:<22} {listing}")

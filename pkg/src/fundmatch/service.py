"""HTTP API: read endpoints over an immutable snapshot, serialized recomputation.

Every handler grabs the published snapshot reference once, so concurrent
readers never observe a mix of old and new results; /recompute builds the next
snapshot off to the side and publishes it with a single assignment. Only one
recompute may be in flight (409 otherwise) and embeddings are never redone.
"""
from __future__ import annotations

import threading

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import JSONResponse

from .config import PipelineConfig
from .errors import ValidationError
from .pipeline import MatchingEngine, RunSnapshot


class SnapshotHolder:
    def __init__(self, engine: MatchingEngine, cfg: PipelineConfig):
        self._engine = engine
        self._lock = threading.Lock()
        self._snapshot: RunSnapshot = engine.compute(cfg)

    @property
    def snapshot(self) -> RunSnapshot:
        return self._snapshot

    def recompute(self, overrides: dict) -> RunSnapshot:
        if not self._lock.acquire(blocking=False):
            raise RecomputeInFlight()
        try:
            cfg = self._snapshot.config.with_overrides(overrides)
            snapshot = self._engine.compute(cfg)
            self._snapshot = snapshot  # atomic publish
            return snapshot
        finally:
            self._lock.release()


class RecomputeInFlight(Exception):
    pass


def _snapshot_info(snap: RunSnapshot) -> dict:
    return {
        "snapshot_id": snap.snapshot_id,
        "config_digest": snap.config_digest,
        "corpus_digest": snap.corpus_digest,
        "created_at": snap.created_at,
    }


def create_app(engine: MatchingEngine, cfg: PipelineConfig) -> FastAPI:
    app = FastAPI(title="fundmatch", version="0.1.0")
    holder = SnapshotHolder(engine, cfg)
    app.state.holder = holder

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.get("/snapshot")
    def snapshot():
        return _snapshot_info(holder.snapshot)

    @app.get("/indicators")
    def indicators():
        snap = holder.snapshot
        return {
            "snapshot_id": snap.snapshot_id,
            "indicators": [
                {
                    "name": i.name,
                    "author_filter": i.author_filter,
                    "window_years": i.window_years,
                    "min_pubs": i.min_pubs,
                }
                for i in snap.config.indicators
            ],
        }

    @app.get("/calls")
    def calls():
        snap = holder.snapshot
        return {
            "snapshot_id": snap.snapshot_id,
            "calls": [
                {"call_id": c.call_id, "title": c.title}
                for c in sorted(engine.calls, key=lambda c: c.call_id)
            ],
        }

    @app.get("/researchers/{researcher_id}/recommendations")
    def recommendations(researcher_id: str):
        snap = holder.snapshot
        try:
            per = snap.book.recommend_for_researcher(researcher_id)
        except ValidationError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        return {
            "snapshot_id": snap.snapshot_id,
            "researcher_id": researcher_id,
            "indicators": [
                {
                    "indicator": name,
                    "items": [
                        {"call_id": call_id, "rank": rank, "percentile": pct}
                        for call_id, rank, pct in per.get(name, [])
                    ],
                }
                for name in snap.book.indicators
            ],
        }

    @app.get("/calls/{call_id}/candidates")
    def candidates(
        call_id: str,
        indicator: str = Query(...),
        min_percentile: float = Query(0.0),
    ):
        snap = holder.snapshot
        try:
            entries = snap.book.candidates_for_call(call_id, indicator, min_percentile)
        except ValidationError as exc:
            status = 404 if "unknown call" in str(exc) else 400
            raise HTTPException(status_code=status, detail=str(exc))
        return {
            "snapshot_id": snap.snapshot_id,
            "call_id": call_id,
            "indicator": indicator,
            "min_percentile": min_percentile,
            "candidates": [
                {
                    "researcher_id": e.researcher_id,
                    "rank": e.rank,
                    "percentile": e.percentile,
                    "z": e.z,
                }
                for e in entries
            ],
        }

    @app.get("/analytics/summary")
    def analytics_summary():
        snap = holder.snapshot
        return {"snapshot_id": snap.snapshot_id, "summary": snap.analytics["summary"]}

    @app.get("/analytics/overlap")
    def analytics_overlap():
        snap = holder.snapshot
        return {"snapshot_id": snap.snapshot_id, "overlap": snap.analytics["overlap"]}

    @app.get("/analytics/distribution")
    def analytics_distribution(indicator: str = Query(...)):
        snap = holder.snapshot
        for dist in snap.analytics["distributions"]:
            if dist["indicator_name"] == indicator:
                return {"snapshot_id": snap.snapshot_id, "distribution": dist}
        raise HTTPException(status_code=404, detail=f"unknown indicator {indicator!r}")

    @app.post("/recompute")
    def recompute(overrides: dict | None = None):
        try:
            snap = holder.recompute(overrides or {})
        except RecomputeInFlight:
            return JSONResponse(status_code=409, content={"detail": "recompute in flight"})
        except ValidationError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return _snapshot_info(snap)

    return app

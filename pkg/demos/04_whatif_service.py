"""Interactive recalculation through the HTTP API.

Boots the service in-process over a synthetic run, then shows what a research
office sees when it drops the assignment cutoff from the 95th to the 90th
percentile: candidate lists grow, and the snapshot id changes only when the
configuration actually changes.
"""
from pathlib import Path
import tempfile

from fastapi.testclient import TestClient

from fundmatch.config import PipelineConfig, save_config
from fundmatch.pipeline import MatchingEngine, stage_embed, stage_ingest, stage_resolve
from fundmatch.service import create_app
from fundmatch.synth import generate_corpus, write_corpus

workdir = Path(tempfile.mkdtemp(prefix="fundmatch-demo-"))
corpus = generate_corpus(n_researchers=60, n_calls=10, seed=3, pubs_per_researcher=8)
inputs = write_corpus(corpus, workdir / "raw")
cfg = PipelineConfig(reference_year=2025)
save_config(cfg, workdir / "config.json")
stage_ingest(
    workdir,
    inputs["publications"], inputs["calls"], inputs["masters"], inputs["author_profiles"],
    reference_year=cfg.reference_year,
)
stage_resolve(workdir)
stage_embed(workdir, cfg)

app = create_app(MatchingEngine.from_run_dir(workdir), cfg)
client = TestClient(app)

snap = client.get("/snapshot").json()
print(f"serving snapshot {snap['snapshot_id']}")

call = client.get("/calls").json()["calls"][0]["call_id"]
params = {"indicator": "Current focus", "min_percentile": 95}
n95 = len(client.get(f"/calls/{call}/candidates", params=params).json()["candidates"])
print(f"{call}: {n95} candidates at cutoff 95")

print("\nPOST /recompute {'percentile_cutoff': 90} ...")
new_snap = client.post("/recompute", json={"percentile_cutoff": 90}).json()
print(f"new snapshot {new_snap['snapshot_id']}")

params["min_percentile"] = 90
n90 = len(client.get(f"/calls/{call}/candidates", params=params).json()["candidates"])
print(f"{call}: {n90} candidates at cutoff 90 (was {n95})")

print("\nPOST /recompute {} (no overrides) ...")
same = client.post("/recompute", json={}).json()
print(f"snapshot unchanged: {same['snapshot_id'] == new_snap['snapshot_id']}")

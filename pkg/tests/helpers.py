"""Shared comparison utilities for report files."""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path

from click.testing import CliRunner

from fundmatch.cli import main as cli_main


def run_cli(*args: str) -> str:
    runner = CliRunner()
    result = runner.invoke(cli_main, list(args), catch_exceptions=False)
    assert result.exit_code == 0, f"cli {' '.join(args)} failed:\n{result.output}"
    return result.output


def run_fixture_pipeline(fixture_dir: Path, run_dir: Path, threads: int = 1) -> None:
    """Drive every stage over the bundled fixture corpus via the CLI."""
    base = ["--dir", str(run_dir), "--config", str(fixture_dir / "config.json"), "--threads", str(threads)]
    run_cli(
        *base, "ingest",
        "--publications", str(fixture_dir / "publications.jsonl"),
        "--calls", str(fixture_dir / "calls.jsonl"),
        "--masters", str(fixture_dir / "masters.jsonl"),
        "--author-profiles", str(fixture_dir / "author_profiles.jsonl"),
        "--topics", str(fixture_dir / "topics.csv"),
    )
    run_cli(*base, "resolve")
    run_cli(*base, "embed")
    run_cli(*base, "score")
    run_cli(*base, "rank")
    run_cli(*base, "analyze")
    run_cli(*base, "report")


def numbers_close(a, b, tol=1e-9) -> bool:
    if a is None or b is None:
        return a is None and b is None
    return math.isclose(float(a), float(b), rel_tol=0.0, abs_tol=tol)


def assert_jsonl_equal(got: Path, want: Path, float_keys: tuple[str, ...], tol: float = 1e-9):
    got_rows = [json.loads(line) for line in got.read_text(encoding="utf-8").splitlines() if line]
    want_rows = [json.loads(line) for line in want.read_text(encoding="utf-8").splitlines() if line]
    assert len(got_rows) == len(want_rows), f"{got.name}: {len(got_rows)} rows != {len(want_rows)}"
    for g, w in zip(got_rows, want_rows):
        assert set(g) == set(w), (g, w)
        for key in g:
            if key in float_keys:
                assert numbers_close(g[key], w[key], tol), (key, g, w)
            else:
                assert g[key] == w[key], (key, g, w)


def assert_csv_equal(got: Path, want: Path, float_cols: tuple[str, ...], tol: float = 1e-9):
    got_rows = list(csv.DictReader(got.open(encoding="utf-8")))
    want_rows = list(csv.DictReader(want.open(encoding="utf-8")))
    assert len(got_rows) == len(want_rows), f"{got.name}: {len(got_rows)} rows != {len(want_rows)}"
    for g, w in zip(got_rows, want_rows):
        for col in w:
            if col in float_cols:
                assert numbers_close(g[col], w[col], tol), (col, g, w)
            else:
                assert g[col] == w[col], (col, g, w)


def assert_analytics_equal(got: Path, want: Path, tol: float = 1e-9):
    g = json.loads(got.read_text(encoding="utf-8"))
    w = json.loads(want.read_text(encoding="utf-8"))
    assert [s["indicator_name"] for s in g["summary"]] == [s["indicator_name"] for s in w["summary"]]
    for gs, ws in zip(g["summary"], w["summary"]):
        for key in ("researchers_assigned", "unique_researchers"):
            assert gs[key] == ws[key], (key, gs, ws)
        for key in ("avg_calls_per_researcher", "avg_researchers_per_call"):
            assert numbers_close(gs[key], ws[key], tol), (key, gs, ws)
    assert len(g["overlap"]) == len(w["overlap"])
    for gc, wc in zip(g["overlap"], w["overlap"]):
        assert (gc["row_indicator"], gc["col_indicator"]) == (wc["row_indicator"], wc["col_indicator"])
        assert numbers_close(gc["overlap_pct"], wc["overlap_pct"], tol)
        assert numbers_close(gc["spearman_rho"], wc["spearman_rho"], tol)
    assert len(g["distributions"]) == len(w["distributions"])
    for gd, wd in zip(g["distributions"], w["distributions"]):
        assert gd["indicator_name"] == wd["indicator_name"]
        assert gd["histogram"] == wd["histogram"]
        for key in ("median", "q1", "q3"):
            assert numbers_close(gd[key], wd[key], tol)

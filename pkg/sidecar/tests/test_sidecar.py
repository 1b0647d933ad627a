import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from embed_sidecar.cli import main, read_docs
from embed_sidecar.encoder import HashEncoder, make_encoder, render_template

TEN_DOCS = [
    {"doc_id": f"D{i:02d}", "title": f"title {i}", "body": f"body text number {i}", "keywords": [f"kw{i}"]}
    for i in range(9)
] + [{"doc_id": "__baseline__", "title": "", "body": "", "keywords": []}]


def write_docs(path: Path, docs=None):
    with open(path, "w", encoding="utf-8") as fh:
        for doc in docs or TEN_DOCS:
            fh.write(json.dumps(doc) + "\n")


def run_cli(in_path: Path, out_path: Path, model="hash-64") -> int:
    return main(["--in", str(in_path), "--out", str(out_path), "--model", model])


def read_vectors(path: Path):
    lines = [json.loads(l) for l in path.read_text(encoding="utf-8").splitlines()]
    return lines[0], lines[1:]


def test_header_then_one_row_per_doc_in_order(tmp_path):
    docs, out = tmp_path / "docs.jsonl", tmp_path / "vectors.jsonl"
    write_docs(docs)
    assert run_cli(docs, out) == 0
    header, rows = read_vectors(out)
    assert header == {"model_tag": "hash-64", "dim": 64, "debiased": False}
    assert [r["doc_id"] for r in rows] == [d["doc_id"] for d in TEN_DOCS]
    assert all(len(r["v"]) == 64 for r in rows)


def test_rerun_is_byte_identical(tmp_path):
    docs = tmp_path / "docs.jsonl"
    write_docs(docs)
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    assert run_cli(docs, a) == 0
    assert run_cli(docs, b) == 0
    assert a.read_bytes() == b.read_bytes()


def test_baseline_vector_nonzero_and_distinct(tmp_path):
    docs, out = tmp_path / "docs.jsonl", tmp_path / "vectors.jsonl"
    write_docs(docs)
    run_cli(docs, out)
    _header, rows = read_vectors(out)
    by_id = {r["doc_id"]: np.asarray(r["v"]) for r in rows}
    baseline = by_id["__baseline__"]
    assert np.linalg.norm(baseline) > 0
    assert not np.allclose(baseline, by_id["D00"])


def test_template_includes_field_labels():
    text = render_template("", "", [])
    assert "Title:" in text and "Abstract:" in text and "Keywords:" in text


def test_hash_encoder_rows_unit_norm():
    enc = HashEncoder(dim=32)
    out = enc.encode([render_template("t", "some body", ["k"])])
    assert np.linalg.norm(out[0]) == pytest.approx(1.0, abs=1e-6)


def test_make_encoder_parses_hash_tags():
    assert make_encoder("hash-128").dim == 128


def test_duplicate_doc_id_fails_without_partial_output(tmp_path):
    docs, out = tmp_path / "docs.jsonl", tmp_path / "vectors.jsonl"
    write_docs(docs, [{"doc_id": "A", "title": "x"}, {"doc_id": "A", "title": "y"}])
    assert run_cli(docs, out) == 1
    assert not out.exists()


def test_malformed_input_fails(tmp_path):
    docs, out = tmp_path / "docs.jsonl", tmp_path / "vectors.jsonl"
    docs.write_text("{broken\n", encoding="utf-8")
    assert run_cli(docs, out) == 1
    assert not out.exists()


def test_missing_input_fails(tmp_path):
    assert run_cli(tmp_path / "nope.jsonl", tmp_path / "out.jsonl") == 1


def test_subprocess_invocation_matches_protocol(tmp_path):
    docs, out = tmp_path / "docs.jsonl", tmp_path / "vectors.jsonl"
    write_docs(docs)
    proc = subprocess.run(
        [sys.executable, "-m", "embed_sidecar", "--in", str(docs), "--out", str(out), "--model", "hash-32"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    header, rows = read_vectors(out)
    assert header["dim"] == 32 and len(rows) == 10


def test_subprocess_failure_reports_on_stderr(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "embed_sidecar", "--in", str(tmp_path / "nope.jsonl"),
         "--out", str(tmp_path / "out.jsonl"), "--model", "hash-32"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode != 0
    assert "embed-sidecar:" in proc.stderr


def test_read_docs_defaults_missing_fields(tmp_path):
    docs = tmp_path / "docs.jsonl"
    docs.write_text('{"doc_id": "A"}\n', encoding="utf-8")
    assert read_docs(docs) == [{"doc_id": "A", "title": "", "body": "", "keywords": []}]


def test_transformer_tag_requires_extra_or_model():
    try:
        import sentence_transformers  # noqa: F401

        pytest.skip("sentence-transformers installed; load path covered elsewhere")
    except ImportError:
        with pytest.raises(RuntimeError):
            make_encoder("specter2")

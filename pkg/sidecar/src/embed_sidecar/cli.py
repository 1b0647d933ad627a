"""Sidecar entry point: docs.jsonl in, vectors.jsonl out.

Output order equals input order, the header line carries model_tag/dim, and
the file is written to a temp path and renamed on success so a failure never
leaves a partial vectors.jsonl behind. Progress goes to stdout, diagnostics
to stderr, exit code is nonzero on any failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

from .encoder import make_encoder, render_template


def read_docs(path: Path) -> list[dict]:
    docs = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            if not raw.strip():
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}:{line_no}: not valid JSON ({exc})") from None
            if "doc_id" not in obj:
                raise ValueError(f"{path}:{line_no}: missing doc_id")
            docs.append(
                {
                    "doc_id": str(obj["doc_id"]),
                    "title": str(obj.get("title") or ""),
                    "body": str(obj.get("body") or ""),
                    "keywords": [str(k) for k in obj.get("keywords") or []],
                }
            )
    seen = set()
    for doc in docs:
        if doc["doc_id"] in seen:
            raise ValueError(f"duplicate doc_id {doc['doc_id']!r} in batch")
        seen.add(doc["doc_id"])
    return docs


def write_vectors(path: Path, model_tag: str, dim: int, rows: list[tuple[str, list[float]]]) -> None:
    tmp_fd, tmp_name = tempfile.mkstemp(dir=str(path.parent), prefix=".vectors-", suffix=".tmp")
    try:
        with os.fdopen(tmp_fd, "w", encoding="utf-8", newline="\n") as fh:
            header = {"model_tag": model_tag, "dim": dim, "debiased": False}
            fh.write(json.dumps(header, ensure_ascii=False, separators=(",", ":")) + "\n")
            for doc_id, values in rows:
                row = {"doc_id": doc_id, "v": values}
                fh.write(json.dumps(row, ensure_ascii=False, separators=(",", ":")) + "\n")
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


def run(in_path: Path, out_path: Path, model_tag: str, batch_size: int) -> int:
    docs = read_docs(in_path)
    encoder = make_encoder(model_tag)
    texts = [render_template(d["title"], d["body"], d["keywords"]) for d in docs]
    print(f"encoding {len(docs)} documents with {model_tag} (dim {encoder.dim})")
    matrix = encoder.encode(texts, batch_size=batch_size)
    if matrix.shape != (len(docs), encoder.dim):
        raise RuntimeError(f"encoder produced shape {matrix.shape}, expected ({len(docs)}, {encoder.dim})")
    rows = [
        (doc["doc_id"], [float(x) for x in matrix[i]])
        for i, doc in enumerate(docs)
    ]
    write_vectors(out_path, model_tag, encoder.dim, rows)
    print(f"wrote {out_path}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="embed-sidecar",
        description="Embed scholarly documents into the vectors.jsonl format.",
    )
    parser.add_argument("--in", dest="in_path", required=True, help="docs.jsonl input")
    parser.add_argument("--out", dest="out_path", required=True, help="vectors.jsonl output")
    parser.add_argument("--model", required=True, help="model tag (hash-<dim> or a transformer id)")
    parser.add_argument("--batch-size", type=int, default=32)
    args = parser.parse_args(argv)

    try:
        return run(Path(args.in_path), Path(args.out_path), args.model, args.batch_size)
    except (OSError, ValueError, RuntimeError) as exc:
        print(f"embed-sidecar: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

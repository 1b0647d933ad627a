"""Command line pipeline driver.

Exit codes: 0 success, 1 validation failure, 2 I/O failure. Stage errors are
printed to stderr with whatever file context is available.
"""
from __future__ import annotations

import functools
import sys
from pathlib import Path

import click

from .config import PipelineConfig, load_config, resolve_config_path, save_config
from .errors import ValidationError
from . import pipeline
from .synth import generate_corpus, write_corpus


def _fail_codes(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ValidationError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)
        except OSError as exc:
            click.echo(f"i/o error: {exc}", err=True)
            sys.exit(2)

    return wrapper


@click.group()
@click.option("--dir", "run_dir", default=".", show_default=True, help="Run directory for stage artifacts.")
@click.option("--config", "config_path", default=None, help="Config file (falls back to FUNDMATCH_CONFIG, then <dir>/config.json).")
@click.option("--threads", default=1, show_default=True, help="Parallelism cap for the scoring sweep.")
@click.pass_context
def main(ctx: click.Context, run_dir: str, config_path: str | None, threads: int):
    """Match researchers to funding calls from bibliometric publication sets."""
    ctx.ensure_object(dict)
    ctx.obj["run_dir"] = Path(run_dir)
    ctx.obj["config_path"] = config_path
    ctx.obj["threads"] = max(1, threads)


def _load_cfg(ctx: click.Context) -> PipelineConfig:
    path = resolve_config_path(ctx.obj["config_path"], ctx.obj["run_dir"])
    return load_config(path)


@main.group()
def config():
    """Configuration management."""


@config.command("init")
@click.option("--reference-year", default=2025, show_default=True)
@click.option("--force", is_flag=True, help="Overwrite an existing config file.")
@click.pass_context
@_fail_codes
def config_init(ctx: click.Context, reference_year: int, force: bool):
    """Write a config.json with the default indicators and thresholds."""
    path = resolve_config_path(ctx.obj["config_path"], ctx.obj["run_dir"])
    if path.exists() and not force:
        raise ValidationError(f"{path} already exists (use --force to overwrite)")
    path.parent.mkdir(parents=True, exist_ok=True)
    cfg = PipelineConfig(reference_year=reference_year)
    save_config(cfg, path)
    click.echo(f"wrote {path}")


@main.command()
@click.option("--publications", required=True, type=click.Path())
@click.option("--calls", required=True, type=click.Path())
@click.option("--masters", required=True, type=click.Path())
@click.option("--author-profiles", required=True, type=click.Path())
@click.option("--topics", default=None, type=click.Path())
@click.option("--masters-format", default="jsonl", type=click.Choice(["jsonl", "csv"]), show_default=True)
@click.pass_context
@_fail_codes
def ingest(ctx, publications, calls, masters, author_profiles, topics, masters_format):
    """Validate raw inputs into canonical corpus files plus rejects.jsonl."""
    cfg = _load_cfg(ctx)
    report = pipeline.stage_ingest(
        ctx.obj["run_dir"],
        Path(publications),
        Path(calls),
        Path(masters),
        Path(author_profiles),
        topics=Path(topics) if topics else None,
        masters_format=masters_format,
        reference_year=cfg.reference_year,
    )
    click.echo(f"accepted {report.accepted} records, rejected {len(report.rejects)}")


@main.command()
@click.pass_context
@_fail_codes
def resolve(ctx):
    """Resolve fragmented author identities into researcher profiles."""
    n = pipeline.stage_resolve(ctx.obj["run_dir"])
    click.echo(f"resolved {n} researcher profiles")


@main.command()
@click.pass_context
@_fail_codes
def embed(ctx):
    """Produce document vectors with the configured provider."""
    cfg = _load_cfg(ctx)
    n = pipeline.stage_embed(ctx.obj["run_dir"], cfg)
    click.echo(f"embedded {n} documents")


@main.command()
@click.pass_context
@_fail_codes
def score(ctx):
    """Compute aggregated and normalized scores into scores.jsonl."""
    cfg = _load_cfg(ctx)
    n = pipeline.stage_score(ctx.obj["run_dir"], cfg, threads=ctx.obj["threads"])
    click.echo(f"wrote {n} score rows")


@main.command()
@click.pass_context
@_fail_codes
def rank(ctx):
    """Derive percentiles and assignments; writes assignments.csv and recommendations.csv."""
    cfg = _load_cfg(ctx)
    n = pipeline.stage_rank(ctx.obj["run_dir"], cfg)
    click.echo(f"{n} assignments at cutoff {cfg.percentile_cutoff}")


@main.command()
@click.pass_context
@_fail_codes
def analyze(ctx):
    """Summaries, overlap matrix and distributions into analytics.json."""
    cfg = _load_cfg(ctx)
    payload = pipeline.stage_analyze(ctx.obj["run_dir"], cfg)
    click.echo(f"analytics over {len(payload['summary']) - 1} indicators written")


@main.command()
@click.pass_context
@_fail_codes
def report(ctx):
    """Render report.md from the computed artifacts."""
    cfg = _load_cfg(ctx)
    out = pipeline.stage_report(ctx.obj["run_dir"], cfg)
    click.echo(f"wrote {out}")


@main.command()
@click.option("--researchers", "n_researchers", default=50, show_default=True)
@click.option("--calls", "n_calls", default=20, show_default=True)
@click.option("--seed", default=7, show_default=True)
@click.option("--pubs-per-researcher", default=8, show_default=True)
@click.option("--reference-year", default=2025, show_default=True)
@click.pass_context
@_fail_codes
def synth(ctx, n_researchers, n_calls, seed, pubs_per_researcher, reference_year):
    """Generate a seeded synthetic corpus into the run directory."""
    corpus = generate_corpus(
        n_researchers=n_researchers,
        n_calls=n_calls,
        seed=seed,
        pubs_per_researcher=pubs_per_researcher,
        reference_year=reference_year,
    )
    paths = write_corpus(corpus, ctx.obj["run_dir"])
    click.echo(
        f"synthesized {len(corpus.publications)} publications, {len(corpus.calls)} calls "
        f"into {ctx.obj['run_dir']}"
    )
    for name, path in paths.items():
        click.echo(f"  {name}: {path}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
@click.pass_context
@_fail_codes
def serve(ctx, host, port):
    """Serve the HTTP API over a completed run directory."""
    import uvicorn

    from .service import create_app

    cfg = _load_cfg(ctx)
    engine = pipeline.MatchingEngine.from_run_dir(ctx.obj["run_dir"], threads=ctx.obj["threads"])
    app = create_app(engine, cfg)
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()

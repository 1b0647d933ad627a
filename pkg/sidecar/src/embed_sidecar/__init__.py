"""Batch document embedding sidecar for the vectors.jsonl protocol."""

from .encoder import HashEncoder, TransformerEncoder, make_encoder, render_template

__version__ = "0.1.0"

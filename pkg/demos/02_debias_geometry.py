"""What stylistic debiasing does to the similarity geometry.

Two documents sharing boilerplate phrasing look artificially similar; after
projecting out the embedding of the shared template, only the thematic signal
remains. The hash provider makes this easy to see because every token maps to
a fixed bucket.
"""
import numpy as np

from fundmatch.embedding import HashEmbedder, debias, embed_batch
from fundmatch.records import ScholarlyDocument
from fundmatch.scoring import cosine

provider = HashEmbedder(dim=256)

BOILERPLATE = "this study presents a novel approach with promising experimental results"

doc_a = ScholarlyDocument(
    doc_id="A", kind="publication",
    title="quantum error correction",
    body=f"{BOILERPLATE} for superconducting qubit lattices",
)
doc_b = ScholarlyDocument(
    doc_id="B", kind="publication",
    title="soil microbial ecology",
    body=f"{BOILERPLATE} for earthworm community restoration",
)
style = ScholarlyDocument(doc_id="style", kind="publication", title="", body=BOILERPLATE)

va, vb, vs = embed_batch(provider, [doc_a, doc_b, style])

print(f"raw cosine (unrelated topics, shared boilerplate): {cosine(va, vb):+.4f}")

da, db = debias(va, vs), debias(vb, vs)
print(f"debiased cosine:                                    {cosine(da, db):+.4f}")

for name, vec in (("A'", da), ("B'", db)):
    residual = float(vec.components @ vs.components.astype(np.float64))
    print(f"residual {name} . style = {residual:+.2e}  (orthogonal up to rounding)")

twice = debias(da, vs)
print(f"max |debias twice - debias once| = {np.max(np.abs(twice.components - da.components)):.2e}")

"""Seeded synthetic corpus generation for desk-scale testing and benchmarks.

Every researcher gets a home theme and a recent theme drawn from a fixed
vocabulary; older publications use the home theme and the last two years use
the recent one, so short-window indicators genuinely diverge from long-window
ones. All randomness flows from a single seed, making corpora reproducible
byte for byte.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from pathlib import Path

from .fileio import write_csv, write_jsonl
from .records import (
    AuthorSlot,
    CallPart,
    CallRecord,
    MasterRecord,
    PublicationRecord,
    SourceAuthorProfile,
    author_profile_to_dict,
    call_to_dict,
    master_to_dict,
    publication_to_dict,
)

THEMES: dict[str, list[str]] = {
    "neuro": "cortex synapse plasticity neuron cognition imaging stimulation memory circuit dopamine".split(),
    "climate": "carbon emission warming ocean glacier mitigation atmosphere drought resilience forecast".split(),
    "quantum": "qubit entanglement decoherence superconducting photonic annealing error correction gate lattice".split(),
    "genomics": "genome sequencing variant expression transcriptome epigenetic mutation crispr annotation cohort".split(),
    "robotics": "manipulation locomotion actuator gripper autonomy perception trajectory swarm kinematics control".split(),
    "energy": "battery photovoltaic electrolyte storage grid turbine hydrogen catalyst efficiency inverter".split(),
    "security": "cybercrime intrusion malware encryption forensics biometric anomaly firewall phishing audit".split(),
    "language": "multilingual parsing semantics corpus translation discourse morphology pragmatics lexicon dialect".split(),
    "materials": "polymer nanostructure alloy composite coating graphene crystallography fatigue ceramic adhesion".split(),
    "health": "epidemiology biomarker clinical prevention rehabilitation telemedicine screening nutrition vaccine morbidity".split(),
    "agriculture": "irrigation soil yield pest agroecology fertilizer crop pollinator greenhouse rotation".split(),
    "transport": "mobility logistics congestion railway freight electrification routing infrastructure safety autonomous".split(),
}

FILLER = "study analysis evaluation framework approach model assessment method evidence review".split()

SURNAMES = [
    "garcia", "martinez", "lopez", "sanchez", "romero", "navarro", "iglesias", "castro",
    "ortega", "delgado", "vargas", "molina", "serrano", "rubio", "crespo", "pascual",
]
GIVEN = ["ana", "jorge", "lucia", "marta", "pablo", "sara", "ivan", "elena", "raul", "nuria"]


@dataclass
class SynthCorpus:
    publications: list[PublicationRecord]
    calls: list[CallRecord]
    masters: list[MasterRecord]
    author_profiles: list[SourceAuthorProfile]
    topic_rows: list[tuple[str, str]] = field(default_factory=list)


def generate_corpus(
    n_researchers: int = 50,
    n_calls: int = 20,
    seed: int = 7,
    pubs_per_researcher: int = 8,
    reference_year: int = 2025,
    co_author_rate: float = 0.2,
) -> SynthCorpus:
    rng = random.Random(seed)
    theme_names = sorted(THEMES)

    masters: list[MasterRecord] = []
    profiles: list[SourceAuthorProfile] = []
    publications: list[PublicationRecord] = []
    topic_rows: list[tuple[str, str]] = []

    for i in range(n_researchers):
        key = f"R{i:05d}"
        sid = f"S{i:05d}"
        email = f"{key.lower()}@inst.example"
        name = f"{rng.choice(SURNAMES)} {rng.choice(SURNAMES)}, {rng.choice(GIVEN)}"
        masters.append(
            MasterRecord(
                researcher_key=key,
                verified_source_ids={sid},
                orcid=f"0000-0000-{i // 10000:04d}-{i % 10000:04d}",
                email=email,
                canonical_name=name,
            )
        )
        profiles.append(
            SourceAuthorProfile(
                source_author_id=sid,
                name_variants=[name],
                orcid=None,
                emails={email},
                affiliations=["Synthetic Institute"],
            )
        )

        home = theme_names[i % len(theme_names)]
        recent = theme_names[(i + rng.randrange(1, len(theme_names))) % len(theme_names)]
        for j in range(pubs_per_researcher):
            year = reference_year - (j % 5)
            theme = recent if year >= reference_year - 1 else home
            pool = THEMES[theme]
            title = " ".join(rng.sample(pool, 4) + rng.sample(FILLER, 2))
            abstract = " ".join(rng.choices(pool + FILLER, k=24))
            pub_id = f"P{i:05d}-{j:02d}"
            authors = [AuthorSlot(source_author_id=sid, position=1, is_corresponding=True)]
            if n_researchers > 1 and rng.random() < co_author_rate:
                other = rng.randrange(n_researchers - 1)
                other = other if other < i else other + 1
                authors.append(AuthorSlot(source_author_id=f"S{other:05d}", position=2))
            doi = f"10.9999/{pub_id.lower()}" if rng.random() < 0.3 else None
            if doi and rng.random() < 0.5:
                topic_rows.append((doi, f"{theme} research"))
            publications.append(
                PublicationRecord(
                    pub_id=pub_id,
                    doi=doi,
                    title=title,
                    abstract=abstract,
                    keywords=rng.sample(pool, 2),
                    year=year,
                    authors=authors,
                    source_tags=["synth"],
                )
            )

    calls: list[CallRecord] = []
    part_labels = ["description", "destination", "expected outcome", "scope"]
    for c in range(n_calls):
        theme = theme_names[c % len(theme_names)]
        pool = THEMES[theme]
        parts = [
            CallPart(label=label, text=" ".join(rng.choices(pool + FILLER, k=18)))
            for label in part_labels
        ]
        calls.append(
            CallRecord(
                call_id=f"C{c:04d}",
                title=" ".join(rng.sample(pool, 4) + ["call"]),
                description_parts=parts,
                classification_terms=rng.sample(pool, 2),
            )
        )

    return SynthCorpus(
        publications=publications,
        calls=calls,
        masters=masters,
        author_profiles=profiles,
        topic_rows=topic_rows,
    )


def write_corpus(corpus: SynthCorpus, out_dir: str | Path) -> dict[str, Path]:
    """Write the standard input files into out_dir; returns the paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "publications": out / "publications.jsonl",
        "calls": out / "calls.jsonl",
        "masters": out / "masters.jsonl",
        "author_profiles": out / "author_profiles.jsonl",
        "topics": out / "topics.csv",
    }
    write_jsonl(paths["publications"], (publication_to_dict(p) for p in corpus.publications))
    write_jsonl(paths["calls"], (call_to_dict(c) for c in corpus.calls))
    write_jsonl(paths["masters"], (master_to_dict(m) for m in corpus.masters))
    write_jsonl(paths["author_profiles"], (author_profile_to_dict(a) for a in corpus.author_profiles))
    write_csv(paths["topics"], ["doi", "topic"], [[doi, topic] for doi, topic in corpus.topic_rows])
    return paths

"""Domain records for publications, calls, researchers and the unified document view.

Publications and calls are lowered to the same ScholarlyDocument shape
(title / body / keywords) so the embedding and scoring layers never need to
know which side of the match a text came from.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

PUBLICATION_KIND = "publication"
CALL_KIND = "call"

MIN_YEAR = 1900


@dataclass(frozen=True)
class AuthorSlot:
    """One author position on a publication."""

    source_author_id: str
    position: int
    is_corresponding: bool = False
    raw_name: str = ""


@dataclass
class PublicationRecord:
    pub_id: str
    title: str
    authors: list[AuthorSlot]
    year: int
    doi: str | None = None
    abstract: str | None = None
    keywords: list[str] = field(default_factory=list)
    topics: list[str] = field(default_factory=list)
    source_tags: list[str] = field(default_factory=list)


@dataclass
class SourceAuthorProfile:
    """An author profile as one bibliographic source sees it (possibly fragmented)."""

    source_author_id: str
    name_variants: list[str] = field(default_factory=list)
    orcid: str | None = None
    emails: set[str] = field(default_factory=set)
    affiliations: list[str] = field(default_factory=list)


@dataclass
class MasterRecord:
    """Curated institutional record anchoring one researcher's identity."""

    researcher_key: str
    verified_source_ids: set[str] = field(default_factory=set)
    orcid: str | None = None
    email: str | None = None
    canonical_name: str = ""


@dataclass
class ResearcherProfile:
    """Consolidated researcher identity after the cascading resolution."""

    researcher_id: str
    merged_source_ids: set[str] = field(default_factory=set)
    orcid: str | None = None
    emails: set[str] = field(default_factory=set)
    normalized_name: str = ""
    publication_ids: set[str] = field(default_factory=set)
    provenance: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class CallPart:
    label: str
    text: str


@dataclass
class CallRecord:
    call_id: str
    title: str
    description_parts: list[CallPart] = field(default_factory=list)
    classification_terms: list[str] = field(default_factory=list)


@dataclass
class ScholarlyDocument:
    """Unified text unit: title is mandatory, body may be empty, keywords optional."""

    doc_id: str
    kind: str  # "publication" | "call"
    title: str
    body: str = ""
    keywords: list[str] = field(default_factory=list)


def validate_publication(rec: PublicationRecord, reference_year: int | None = None) -> list[str]:
    """Return the list of invariant violations for one record (empty if valid)."""
    problems: list[str] = []
    if not rec.pub_id:
        problems.append("missing pub_id")
    if not rec.title or not rec.title.strip():
        problems.append("empty title")
    if not rec.authors:
        problems.append("no authors")
    else:
        positions = sorted(a.position for a in rec.authors)
        if positions != list(range(1, len(rec.authors) + 1)):
            problems.append("author positions not contiguous 1..n")
    if not isinstance(rec.year, int) or rec.year < MIN_YEAR:
        problems.append(f"year before {MIN_YEAR}")
    elif reference_year is not None and rec.year > reference_year:
        problems.append(f"year after reference year {reference_year}")
    return problems


def validate_call(rec: CallRecord) -> list[str]:
    problems: list[str] = []
    if not rec.call_id:
        problems.append("missing call_id")
    if not rec.title or not rec.title.strip():
        problems.append("empty title")
    if not "".join(p.text for p in rec.description_parts).strip():
        problems.append("empty description")
    return problems


def dedup_terms(terms: list[str]) -> list[str]:
    """Case-insensitive dedup preserving first occurrence and its casing."""
    seen: set[str] = set()
    out: list[str] = []
    for t in terms:
        key = t.strip().lower()
        if not key or key in seen:
            continue
        seen.add(key)
        out.append(t.strip())
    return out


def call_body(rec: CallRecord) -> str:
    """Concatenate description parts in order, separated by single blank lines."""
    return "\n\n".join(p.text.strip() for p in rec.description_parts if p.text.strip())


def to_document(entity: PublicationRecord | CallRecord) -> ScholarlyDocument:
    """Lower a publication or call to the unified document representation.

    A missing abstract produces an empty body, never an error: the document
    simply carries less information.
    """
    if isinstance(entity, PublicationRecord):
        return ScholarlyDocument(
            doc_id=entity.pub_id,
            kind=PUBLICATION_KIND,
            title=entity.title.strip(),
            body=(entity.abstract or "").strip(),
            keywords=dedup_terms(list(entity.keywords) + list(entity.topics)),
        )
    if isinstance(entity, CallRecord):
        return ScholarlyDocument(
            doc_id=entity.call_id,
            kind=CALL_KIND,
            title=entity.title.strip(),
            body=call_body(entity),
            keywords=dedup_terms(list(entity.classification_terms)),
        )
    raise TypeError(f"cannot build a document from {type(entity).__name__}")


def publication_to_dict(rec: PublicationRecord) -> dict:
    """Canonical JSON shape for publications.jsonl (stable key order)."""
    return {
        "pub_id": rec.pub_id,
        "doi": rec.doi,
        "title": rec.title,
        "abstract": rec.abstract,
        "keywords": list(rec.keywords),
        "topics": list(rec.topics),
        "year": rec.year,
        "authors": [
            {
                "source_author_id": a.source_author_id,
                "position": a.position,
                "is_corresponding": a.is_corresponding,
                "raw_name": a.raw_name,
            }
            for a in rec.authors
        ],
        "source_tags": list(rec.source_tags),
    }


def publication_from_dict(obj: dict) -> PublicationRecord:
    return PublicationRecord(
        pub_id=str(obj.get("pub_id", "") or ""),
        doi=obj.get("doi") or None,
        title=str(obj.get("title", "") or ""),
        abstract=obj.get("abstract") or None,
        keywords=[str(k) for k in obj.get("keywords") or []],
        topics=[str(t) for t in obj.get("topics") or []],
        year=int(obj["year"]) if obj.get("year") is not None else 0,
        authors=[
            AuthorSlot(
                source_author_id=str(a.get("source_author_id", "") or ""),
                position=int(a.get("position", 0)),
                is_corresponding=bool(a.get("is_corresponding", False)),
                raw_name=str(a.get("raw_name", "") or ""),
            )
            for a in obj.get("authors") or []
        ],
        source_tags=[str(s) for s in obj.get("source_tags") or []],
    )


def call_to_dict(rec: CallRecord) -> dict:
    return {
        "call_id": rec.call_id,
        "title": rec.title,
        "parts": [{"label": p.label, "text": p.text} for p in rec.description_parts],
        "terms": list(rec.classification_terms),
    }


def call_from_dict(obj: dict) -> CallRecord:
    return CallRecord(
        call_id=str(obj.get("call_id", "") or ""),
        title=str(obj.get("title", "") or ""),
        description_parts=[
            CallPart(label=str(p.get("label", "") or ""), text=str(p.get("text", "") or ""))
            for p in obj.get("parts") or []
        ],
        classification_terms=[str(t) for t in obj.get("terms") or []],
    )


def master_to_dict(rec: MasterRecord) -> dict:
    return {
        "researcher_key": rec.researcher_key,
        "source_ids": sorted(rec.verified_source_ids),
        "orcid": rec.orcid,
        "email": rec.email,
        "name": rec.canonical_name,
    }


def master_from_dict(obj: dict) -> MasterRecord:
    raw_ids = obj.get("source_ids") or []
    if isinstance(raw_ids, str):  # CSV carries a semicolon-joined string
        raw_ids = [s for s in raw_ids.split(";") if s.strip()]
    email = obj.get("email") or None
    return MasterRecord(
        researcher_key=str(obj.get("researcher_key", "") or ""),
        verified_source_ids={str(s).strip() for s in raw_ids if str(s).strip()},
        orcid=(str(obj["orcid"]).strip() or None) if obj.get("orcid") else None,
        email=email.strip().lower() if email else None,
        canonical_name=str(obj.get("name", "") or ""),
    )


def author_profile_to_dict(rec: SourceAuthorProfile) -> dict:
    return {
        "source_author_id": rec.source_author_id,
        "names": list(rec.name_variants),
        "orcid": rec.orcid,
        "emails": sorted(rec.emails),
        "affiliations": list(rec.affiliations),
    }


def author_profile_from_dict(obj: dict) -> SourceAuthorProfile:
    return SourceAuthorProfile(
        source_author_id=str(obj.get("source_author_id", "") or ""),
        name_variants=[str(n) for n in obj.get("names") or []],
        orcid=(str(obj["orcid"]).strip() or None) if obj.get("orcid") else None,
        emails={str(e).strip().lower() for e in obj.get("emails") or [] if str(e).strip()},
        affiliations=[str(a) for a in obj.get("affiliations") or []],
    )


def researcher_to_dict(rec: ResearcherProfile) -> dict:
    return {
        "researcher_id": rec.researcher_id,
        "merged_source_ids": sorted(rec.merged_source_ids),
        "orcid": rec.orcid,
        "emails": sorted(rec.emails),
        "normalized_name": rec.normalized_name,
        "publication_ids": sorted(rec.publication_ids),
        "provenance": list(rec.provenance),
    }


def researcher_from_dict(obj: dict) -> ResearcherProfile:
    return ResearcherProfile(
        researcher_id=str(obj["researcher_id"]),
        merged_source_ids=set(obj.get("merged_source_ids") or []),
        orcid=obj.get("orcid") or None,
        emails=set(obj.get("emails") or []),
        normalized_name=str(obj.get("normalized_name", "") or ""),
        publication_ids=set(obj.get("publication_ids") or []),
        provenance=[str(p) for p in obj.get("provenance") or []],
    )


def with_topic(rec: PublicationRecord, topic: str) -> PublicationRecord:
    """Copy of the record with one topic appended (case-insensitive dedup)."""
    existing = {t.strip().lower() for t in rec.topics}
    if topic.strip().lower() in existing:
        return rec
    return replace(rec, topics=list(rec.topics) + [topic.strip()])

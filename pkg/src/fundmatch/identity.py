"""Researcher identity resolution.

Fragmented source author profiles are attached to curated master records by a
cascade of rules applied in order of reliability: verified source id, ORCID,
email, and finally exact normalized-name equality. Profiles already attached
under different researchers are afterwards merged when their normalized names
are equal and their email sets intersect.

Email evidence is only trusted for a source profile that occupies the
corresponding-author slot on at least one publication; emails of profiles
never seen as corresponding author are ignored by the email stage and by the
name+email merge.
"""
from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field

from .errors import IdentityConflictError
from .records import MasterRecord, PublicationRecord, ResearcherProfile, SourceAuthorProfile

RULE_ID = "id"
RULE_ORCID = "orcid"
RULE_EMAIL = "email"
RULE_NAME = "name"

_NON_ALNUM = re.compile(r"[^0-9a-z]+")


def _name_tokens(text: str) -> list[str]:
    """Lowercase, strip diacritics, squash punctuation to spaces, split."""
    decomposed = unicodedata.normalize("NFKD", text)
    stripped = "".join(ch for ch in decomposed if not unicodedata.combining(ch))
    return [t for t in _NON_ALNUM.split(stripped.lower()) if t]


def normalize_name(raw: str) -> str:
    """Normalize a person name to a canonical comparable form.

    With a comma the input is read as "surname part, given part" and the given
    tokens are reduced to initials; without a comma the token order is kept.
    The result is idempotent: normalizing a normalized name is a no-op.
    """
    if not raw or not raw.strip():
        return ""
    if "," in raw:
        surname_part, _, given_part = raw.partition(",")
        surname = _name_tokens(surname_part)
        initials = [t[0] for t in _name_tokens(given_part)]
        if surname and initials:
            return " ".join(surname) + ", " + " ".join(initials)
        return " ".join(surname or initials)
    return " ".join(_name_tokens(raw))


@dataclass
class ResolutionResult:
    """Profiles plus the audit trail of what could not be attached."""

    profiles: list[ResearcherProfile]
    unattached: list[SourceAuthorProfile] = field(default_factory=list)


def _corresponding_ids(pubs: list[PublicationRecord]) -> set[str]:
    out: set[str] = set()
    for pub in pubs:
        for slot in pub.authors:
            if slot.is_corresponding:
                out.add(slot.source_author_id)
    return out


def verified_emails(profile: SourceAuthorProfile, corresponding_ids: set[str]) -> set[str]:
    """Emails usable as identity evidence for this profile.

    Trust requires the profile to hold the corresponding-author slot on at
    least one publication; otherwise the address cannot be tied to the person.
    """
    if profile.source_author_id in corresponding_ids:
        return {e.strip().lower() for e in profile.emails if e.strip()}
    return set()


def _check_conflicts(masters: list[MasterRecord]) -> None:
    claimed: dict[str, str] = {}
    for master in sorted(masters, key=lambda m: m.researcher_key):
        for sid in sorted(master.verified_source_ids):
            if sid in claimed and claimed[sid] != master.researcher_key:
                raise IdentityConflictError(sid, claimed[sid], master.researcher_key)
            claimed[sid] = master.researcher_key


def resolve_identities(
    masters: list[MasterRecord],
    profiles: list[SourceAuthorProfile],
    pubs: list[PublicationRecord],
) -> list[ResearcherProfile]:
    """Run the full cascade; see resolve_identities_detailed for the audit trail."""
    return resolve_identities_detailed(masters, profiles, pubs).profiles


def resolve_identities_detailed(
    masters: list[MasterRecord],
    profiles: list[SourceAuthorProfile],
    pubs: list[PublicationRecord],
) -> ResolutionResult:
    """Attach source profiles to masters, then merge same-name/shared-email profiles.

    Deterministic regardless of input order: masters and profiles are walked in
    lexicographic id order at every stage, and each stage only considers
    profiles that no earlier stage attached.
    """
    _check_conflicts(masters)

    corr_ids = _corresponding_ids(pubs)
    emails_ok = {p.source_author_id: verified_emails(p, corr_ids) for p in profiles}
    profile_by_id = {p.source_author_id: p for p in profiles}

    masters_sorted = sorted(masters, key=lambda m: m.researcher_key)
    profile_ids_sorted = sorted(profile_by_id)

    # attached: source_author_id -> (researcher_key, rule)
    attached: dict[str, tuple[str, str]] = {}

    def stage(rule: str, matches) -> None:
        for master in masters_sorted:
            for pid in profile_ids_sorted:
                if pid in attached:
                    continue
                if matches(master, profile_by_id[pid]):
                    attached[pid] = (master.researcher_key, rule)

    stage(RULE_ID, lambda m, p: p.source_author_id in m.verified_source_ids)
    stage(
        RULE_ORCID,
        lambda m, p: bool(m.orcid) and bool(p.orcid) and m.orcid.strip().lower() == p.orcid.strip().lower(),
    )
    stage(
        RULE_EMAIL,
        lambda m, p: bool(m.email) and m.email.strip().lower() in emails_ok[p.source_author_id],
    )
    norm_master = {m.researcher_key: normalize_name(m.canonical_name) for m in masters_sorted}
    stage(
        RULE_NAME,
        lambda m, p: bool(norm_master[m.researcher_key])
        and norm_master[m.researcher_key] in {normalize_name(v) for v in p.name_variants},
    )

    # One profile per master, carrying everything the cascade attached.
    researchers: dict[str, ResearcherProfile] = {}
    for master in masters_sorted:
        emails = {master.email.strip().lower()} if master.email else set()
        researchers[master.researcher_key] = ResearcherProfile(
            researcher_id=master.researcher_key,
            merged_source_ids=set(),
            orcid=master.orcid,
            emails=emails,
            normalized_name=norm_master[master.researcher_key],
            provenance=[],
        )
    for pid in profile_ids_sorted:
        if pid not in attached:
            continue
        key, rule = attached[pid]
        rec = researchers[key]
        rec.merged_source_ids.add(pid)
        rec.emails |= emails_ok[pid]
        if rec.orcid is None and profile_by_id[pid].orcid:
            rec.orcid = profile_by_id[pid].orcid
        rec.provenance.append(f"{rule}:{pid}")

    _merge_same_name_shared_email(researchers)

    pubs_by_source: dict[str, set[str]] = {}
    for pub in pubs:
        for slot in pub.authors:
            pubs_by_source.setdefault(slot.source_author_id, set()).add(pub.pub_id)
    for rec in researchers.values():
        for sid in rec.merged_source_ids:
            rec.publication_ids |= pubs_by_source.get(sid, set())

    unattached = [profile_by_id[pid] for pid in profile_ids_sorted if pid not in attached]
    ordered = [researchers[k] for k in sorted(researchers)]
    return ResolutionResult(profiles=ordered, unattached=unattached)


def _merge_same_name_shared_email(researchers: dict[str, ResearcherProfile]) -> None:
    """Merge researcher profiles with equal normalized names and overlapping emails.

    The lexicographically smallest researcher_id survives; merging repeats to a
    fixpoint so transitively linked profiles end up together.
    """
    changed = True
    while changed:
        changed = False
        by_name: dict[str, list[str]] = {}
        for key, rec in researchers.items():
            if rec.normalized_name:
                by_name.setdefault(rec.normalized_name, []).append(key)
        for keys in by_name.values():
            keys.sort()
            for i in range(len(keys)):
                for j in range(i + 1, len(keys)):
                    a, b = researchers.get(keys[i]), researchers.get(keys[j])
                    if a is None or b is None:
                        continue
                    if a.emails & b.emails:
                        a.merged_source_ids |= b.merged_source_ids
                        a.emails |= b.emails
                        a.publication_ids |= b.publication_ids
                        if a.orcid is None:
                            a.orcid = b.orcid
                        a.provenance.extend(b.provenance)
                        a.provenance.append(f"{RULE_NAME}+{RULE_EMAIL}:merged:{b.researcher_id}")
                        del researchers[keys[j]]
                        changed = True
        # deletion invalidates the name index; rebuild on the next sweep


def filter_population(
    researchers: list[ResearcherProfile], min_total_pubs: int = 3
) -> list[ResearcherProfile]:
    """Keep researchers owning at least min_total_pubs publications.

    Counts run over the consolidated profile (after merging); the ingested
    corpus is already restricted to the study window.
    """
    return [r for r in researchers if len(r.publication_ids) >= min_total_pubs]

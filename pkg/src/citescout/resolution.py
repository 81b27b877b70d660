"""Deterministic entity resolution over extracted dataset mentions.

Mentions collapse in two stages. Local consolidation merges duplicates of
the same dataset within one citation relation, keeping the most confident
record as representative. Global grouping then folds consolidated
mentions with the same canonical key into one entity per dataset, electing
the most frequent surface form as display name. A final family pass merges
entities that share a persistent identifier (an LDC catalog number, a DOI)
even when their names disagree, and flags conflicting evidence instead of
guessing.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field

from .extraction import DatasetMention
from .links import LinkRecord, TIER_CONTEXT, link_from_extracted, sort_links
from .naming import NormalizesToEmpty, normalize_name

__all__ = [
    "NormalizesToEmpty",
    "normalize_name",
    "ConsolidatedMention",
    "ResolvedEntity",
    "local_consolidate",
    "group_entities",
    "family_merge",
    "detect_family_ids",
]

_LDC_ID_RE = re.compile(r"LDC\d+[A-Z]\d+", re.IGNORECASE)


@dataclass
class ConsolidatedMention:
    """All mentions of one dataset within one citing->cited relation."""

    canonical_key: str
    relation: tuple[str, str]
    representative: DatasetMention
    surface_counts: dict[str, int]
    roles: dict[str, int]
    contexts: tuple[str, ...]
    extracted_urls: tuple[str, ...]
    merged_count: int

    def to_dict(self) -> dict:
        return {
            "canonical_key": self.canonical_key,
            "relation": list(self.relation),
            "representative": self.representative.to_dict(),
            "surface_counts": dict(sorted(self.surface_counts.items())),
            "roles": dict(sorted(self.roles.items())),
            "contexts": list(self.contexts),
            "extracted_urls": list(self.extracted_urls),
            "merged_count": self.merged_count,
        }


@dataclass
class ResolvedEntity:
    canonical_key: str
    display_name: str
    aliases: tuple[str, ...]
    surface_counts: dict[str, int]
    usage_roles: dict[str, int]
    mention_count: int
    contexts: tuple[str, ...]
    relations: tuple[tuple[str, str], ...]
    links: tuple[LinkRecord, ...]
    family_id: str | None = None
    flags: tuple[str, ...] = ()

    @property
    def citing_ids(self) -> tuple[str, ...]:
        return tuple(sorted({citing for citing, _ in self.relations}))

    @property
    def citation_count(self) -> int:
        return len({citing for citing, _ in self.relations})

    def has_pid(self) -> bool:
        return any(link.is_pid for link in self.links)

    def has_trusted_link(self) -> bool:
        return any(link.trusted for link in self.links)

    def to_dict(self) -> dict:
        return {
            "canonical_key": self.canonical_key,
            "display_name": self.display_name,
            "aliases": list(self.aliases),
            "surface_counts": dict(sorted(self.surface_counts.items())),
            "usage_roles": dict(sorted(self.usage_roles.items())),
            "mention_count": self.mention_count,
            "contexts": list(self.contexts),
            "relations": [list(r) for r in self.relations],
            "links": [link.to_dict() for link in self.links],
            "family_id": self.family_id,
            "flags": list(self.flags),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ResolvedEntity":
        return cls(
            canonical_key=d["canonical_key"],
            display_name=d["display_name"],
            aliases=tuple(d["aliases"]),
            surface_counts=dict(d["surface_counts"]),
            usage_roles=dict(d["usage_roles"]),
            mention_count=d["mention_count"],
            contexts=tuple(d["contexts"]),
            relations=tuple((r[0], r[1]) for r in d["relations"]),
            links=tuple(LinkRecord.from_dict(x) for x in d["links"]),
            family_id=d.get("family_id"),
            flags=tuple(d.get("flags", ())),
        )


@dataclass
class ConsolidationResult:
    consolidated: list[ConsolidatedMention]
    quarantined: list[DatasetMention] = field(default_factory=list)


def _pick_representative(mentions: list[DatasetMention]) -> DatasetMention:
    # Highest confidence wins; ties go to the longer, then the
    # lexicographically smaller surface form.
    return min(mentions, key=lambda m: (-m.confidence, -len(m.surface_name), m.surface_name))


def local_consolidate(mentions: list[DatasetMention]) -> ConsolidationResult:
    """Merge duplicate mentions of one dataset within each citation relation.

    Mentions whose names normalize to nothing are quarantined rather than
    dropped silently; validation should have caught them already.
    """
    keyed: dict[tuple[tuple[str, str], str], list[DatasetMention]] = {}
    quarantined: list[DatasetMention] = []
    for mention in mentions:
        try:
            key = normalize_name(mention.surface_name)
        except NormalizesToEmpty:
            quarantined.append(mention)
            continue
        keyed.setdefault((mention.relation, key), []).append(mention)

    consolidated = []
    for (relation, key), group in sorted(keyed.items()):
        surfaces = Counter(m.surface_name for m in group)
        roles = Counter(m.usage_role for m in group)
        contexts = tuple(sorted({m.context_id for m in group}))
        urls = tuple(sorted({m.extracted_url for m in group if m.extracted_url}))
        consolidated.append(
            ConsolidatedMention(
                canonical_key=key,
                relation=relation,
                representative=_pick_representative(group),
                surface_counts=dict(surfaces),
                roles=dict(roles),
                contexts=contexts,
                extracted_urls=urls,
                merged_count=len(group),
            )
        )
    return ConsolidationResult(consolidated=consolidated, quarantined=quarantined)


def _elect_display(surface_counts: dict[str, int]) -> str:
    # Most frequent surface form; ties go to the lexicographically smaller.
    return min(surface_counts.items(), key=lambda kv: (-kv[1], kv[0]))[0]


def group_entities(consolidated: list[ConsolidatedMention]) -> list[ResolvedEntity]:
    """Fold consolidated mentions into one entity per canonical key."""
    by_key: dict[str, list[ConsolidatedMention]] = {}
    for cm in consolidated:
        by_key.setdefault(cm.canonical_key, []).append(cm)

    entities = []
    for key in sorted(by_key):
        group = by_key[key]
        surfaces: Counter = Counter()
        roles: Counter = Counter()
        contexts: set[str] = set()
        relations: set[tuple[str, str]] = set()
        urls: set[str] = set()
        mention_count = 0
        for cm in group:
            surfaces.update(cm.surface_counts)
            roles.update(cm.roles)
            contexts.update(cm.contexts)
            relations.add(cm.relation)
            urls.update(cm.extracted_urls)
            mention_count += cm.merged_count
        display = _elect_display(dict(surfaces))
        links = sort_links([link_from_extracted(u, tier=TIER_CONTEXT) for u in sorted(urls)])
        entities.append(
            ResolvedEntity(
                canonical_key=key,
                display_name=display,
                aliases=tuple(sorted(s for s in surfaces if s != display)),
                surface_counts=dict(surfaces),
                usage_roles=dict(roles),
                mention_count=mention_count,
                contexts=tuple(sorted(contexts)),
                relations=tuple(sorted(relations)),
                links=tuple(links),
            )
        )
    return entities


def detect_family_ids(entity: ResolvedEntity) -> set[str]:
    """Family identifiers evidenced by the entity's own links."""
    ids: set[str] = set()
    for link in entity.links:
        if link.kind == "DOI":
            ids.add("doi:" + link.value.lower())
        elif link.kind in ("HANDLE", "ARK"):
            ids.add(link.kind.lower() + ":" + link.value.lower())
        catalog = _LDC_ID_RE.search(link.value)
        if catalog:
            ids.add("ldc:" + catalog.group(0).upper())
    return ids


@dataclass
class FamilyMergeResult:
    entities: list[ResolvedEntity]
    flagged: list[ResolvedEntity] = field(default_factory=list)


def family_merge(entities: list[ResolvedEntity], family_map: dict[str, str] | None = None) -> FamilyMergeResult:
    """Merge entities that share exactly one persistent family identifier.

    An entity whose links evidence two or more distinct identifiers is
    flagged and left unmerged; silent merging on conflicting evidence
    would corrupt both families.
    """
    family_map = family_map or {}
    flagged: list[ResolvedEntity] = []
    singles: list[ResolvedEntity] = []
    by_family: dict[str, list[ResolvedEntity]] = {}

    for entity in entities:
        ids = detect_family_ids(entity)
        mapped = family_map.get(entity.canonical_key)
        if mapped:
            ids.add(mapped)
        if len(ids) > 1:
            conflicted = ResolvedEntity(
                **{**entity.__dict__, "flags": tuple(sorted(set(entity.flags) | {"family_conflict"}))}
            )
            flagged.append(conflicted)
            singles.append(conflicted)
        elif len(ids) == 1:
            by_family.setdefault(next(iter(ids)), []).append(entity)
        else:
            singles.append(entity)

    merged: list[ResolvedEntity] = []
    for family_id in sorted(by_family):
        group = by_family[family_id]
        if len(group) == 1:
            entity = group[0]
            entity.family_id = family_id
            merged.append(entity)
            continue
        surfaces: Counter = Counter()
        roles: Counter = Counter()
        contexts: set[str] = set()
        relations: set[tuple[str, str]] = set()
        links: set[LinkRecord] = set()
        flags: set[str] = set()
        mention_count = 0
        for entity in group:
            surfaces.update(entity.surface_counts)
            roles.update(entity.usage_roles)
            contexts.update(entity.contexts)
            relations.update(entity.relations)
            links.update(entity.links)
            flags.update(entity.flags)
            mention_count += entity.mention_count
        display = _elect_display(dict(surfaces))
        try:
            key = normalize_name(display)
        except NormalizesToEmpty:
            key = min(e.canonical_key for e in group)
        merged.append(
            ResolvedEntity(
                canonical_key=key,
                display_name=display,
                aliases=tuple(sorted(s for s in surfaces if s != display)),
                surface_counts=dict(surfaces),
                usage_roles=dict(roles),
                mention_count=mention_count,
                contexts=tuple(sorted(contexts)),
                relations=tuple(sorted(relations)),
                links=tuple(sort_links(links)),
                family_id=family_id,
                flags=tuple(sorted(flags)),
            )
        )

    result = sorted(singles + merged, key=lambda e: e.canonical_key)
    return FamilyMergeResult(entities=result, flagged=flagged)

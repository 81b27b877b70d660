"""Link enrichment, trust classification, and citation ranking.

Every entity leaves this stage with the best link evidence available,
resolved through three tiers of decreasing trust: URLs or identifiers
extracted from citation contexts, then the DOI of a cited resource paper,
then an external search hit. Persistent identifiers are always trusted;
plain URLs are trusted only when their host is on the configured list.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import replace

from .backends import BackendError, SearchBackend
from .config import EnrichmentConfig
from .corpus import CorpusHandle
from .links import TIER_CITED_DOI, TIER_SEARCH, LinkRecord, host_matches, sort_links, url_host
from .resolution import ResolvedEntity


def classify_trust(link: LinkRecord, trusted_hosts: tuple[str, ...]) -> bool:
    if link.is_pid:
        return True
    host = url_host(link.value)
    return any(host_matches(host, trusted) for trusted in trusted_hosts)


def mark_trust(links, trusted_hosts: tuple[str, ...]) -> tuple[LinkRecord, ...]:
    return tuple(replace(link, trusted=classify_trust(link, trusted_hosts)) for link in links)


def is_resource_title(title: str, markers: tuple[str, ...]) -> bool:
    lowered = title.lower()
    return any(marker in lowered for marker in markers)


def resolve_links(
    entity: ResolvedEntity,
    corpus: CorpusHandle,
    search: SearchBackend,
    cfg: EnrichmentConfig,
) -> tuple[tuple[LinkRecord, ...], tuple[str, ...]]:
    """Return the entity's final links and any new flags.

    Tier 1 evidence (links carried by the entity itself) short-circuits
    the fallbacks. Tier 2 scans the cited papers for a resource paper
    with a DOI. Tier 3 asks the external search backend; its failure is
    recorded as a flag, never raised.
    """
    if entity.links:
        return entity.links, ()

    for cited_id in sorted({cited for _, cited in entity.relations}):
        paper = corpus.papers.get(cited_id)
        if paper is None or not paper.doi:
            continue
        if is_resource_title(paper.title, cfg.resource_title_markers):
            link = LinkRecord(kind="DOI", value=paper.doi, tier=TIER_CITED_DOI)
            return (link,), ()

    try:
        results = search.search(entity.display_name)
    except BackendError:
        return (), ("search_failed",)
    if results:
        url, _title = results[0]
        return (LinkRecord(kind="URL", value=url, tier=TIER_SEARCH),), ()
    return (), ()


def enrich_entities(
    entities: list[ResolvedEntity],
    corpus: CorpusHandle,
    search: SearchBackend,
    cfg: EnrichmentConfig,
) -> list[ResolvedEntity]:
    enriched = []
    for entity in entities:
        links, new_flags = resolve_links(entity, corpus, search, cfg)
        links = tuple(sort_links(mark_trust(links, cfg.trusted_hosts)))
        flags = tuple(sorted(set(entity.flags) | set(new_flags)))
        enriched.append(
            ResolvedEntity(
                **{**entity.__dict__, "links": links, "flags": flags}
            )
        )
    return enriched


def rank_entities(entities: list[ResolvedEntity]) -> list[ResolvedEntity]:
    """Order by distinct citing papers, most first; ties break on display name."""
    return sorted(entities, key=lambda e: (-e.citation_count, e.display_name))


TABLE_COLUMNS = (
    "rank",
    "display_name",
    "canonical_key",
    "citation_count",
    "mention_count",
    "usage_roles",
    "aliases",
    "link_kind",
    "link_value",
    "link_tier",
    "trusted",
    "family_id",
    "flags",
)


def build_table(entities: list[ResolvedEntity]) -> list[dict]:
    """Ranked result rows, one per entity, in rank order."""
    rows = []
    for rank, entity in enumerate(rank_entities(entities), start=1):
        primary = entity.links[0] if entity.links else None
        rows.append(
            {
                "rank": rank,
                "display_name": entity.display_name,
                "canonical_key": entity.canonical_key,
                "citation_count": entity.citation_count,
                "mention_count": entity.mention_count,
                "usage_roles": dict(sorted(entity.usage_roles.items())),
                "aliases": list(entity.aliases),
                "link": primary.to_dict() if primary else None,
                "trusted": entity.has_trusted_link(),
                "with_pid": entity.has_pid(),
                "family_id": entity.family_id,
                "flags": list(entity.flags),
            }
        )
    return rows


def table_to_csv(rows: list[dict]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(TABLE_COLUMNS)
    for row in rows:
        link = row["link"] or {}
        writer.writerow(
            [
                row["rank"],
                row["display_name"],
                row["canonical_key"],
                row["citation_count"],
                row["mention_count"],
                "; ".join(f"{role}={count}" for role, count in sorted(row["usage_roles"].items())),
                "; ".join(row["aliases"]),
                link.get("kind", ""),
                link.get("value", ""),
                link.get("tier", ""),
                "true" if row["trusted"] else "false",
                row["family_id"] or "",
                "; ".join(row["flags"]),
            ]
        )
    return buffer.getvalue()


def table_to_json(rows: list[dict]) -> str:
    return json.dumps({"rows": rows}, ensure_ascii=False, sort_keys=True, indent=2) + "\n"

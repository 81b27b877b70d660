"""Local consolidation, global grouping, and family merging."""

from hypothesis import given, settings
from hypothesis import strategies as st

from citescout.extraction import DatasetMention
from citescout.links import LinkRecord
from citescout.resolution import (
    ResolvedEntity,
    detect_family_ids,
    family_merge,
    group_entities,
    local_consolidate,
)


def mention(surface, citing="P1", cited="P2", role="Use", conf=0.9, ordinal=0, url=None):
    return DatasetMention(
        surface_name=surface,
        usage_role=role,
        content_type="Produced Resource",
        evidence=surface,
        confidence=conf,
        rationale="",
        citing_id=citing,
        cited_id=cited,
        context_id=f"ctx::{citing}::{cited}::{ordinal:04d}",
        extracted_url=url,
    )


def entity(key, display, aliases=(), links=(), relations=(("P1", "P2"),), mention_count=1, surface_counts=None):
    return ResolvedEntity(
        canonical_key=key,
        display_name=display,
        aliases=tuple(aliases),
        surface_counts=surface_counts or {display: mention_count},
        usage_roles={"Use": mention_count},
        mention_count=mention_count,
        contexts=(f"ctx::{relations[0][0]}::{relations[0][1]}::0000",),
        relations=tuple(relations),
        links=tuple(links),
    )


class TestLocalConsolidate:
    def test_same_relation_same_key_merges(self):
        result = local_consolidate([
            mention("ACE 2005", ordinal=0),
            mention("ACE-2005", ordinal=1),
            mention("ace 2005", ordinal=2),
        ])
        assert len(result.consolidated) == 1
        cm = result.consolidated[0]
        assert cm.canonical_key == "ace 2005"
        assert cm.merged_count == 3
        assert cm.surface_counts == {"ACE 2005": 1, "ACE-2005": 1, "ace 2005": 1}
        assert cm.contexts == (
            "ctx::P1::P2::0000",
            "ctx::P1::P2::0001",
            "ctx::P1::P2::0002",
        )

    def test_representative_highest_confidence(self):
        result = local_consolidate([
            mention("ACE-2005", conf=0.95, ordinal=0),
            mention("ACE 2005", conf=0.8, ordinal=1),
        ])
        assert result.consolidated[0].representative.surface_name == "ACE-2005"

    def test_representative_tie_prefers_longer_surface(self):
        result = local_consolidate([
            mention("ACE 2005", conf=0.9, ordinal=0),
            mention("ACE 2005 Dataset", conf=0.9, ordinal=1),
        ])
        assert result.consolidated[0].representative.surface_name == "ACE 2005 Dataset"

    def test_representative_tie_prefers_lexicographic(self):
        result = local_consolidate([
            mention("ACE-2005", conf=0.9, ordinal=0),
            mention("ACE.2005", conf=0.9, ordinal=1),
        ])
        assert result.consolidated[0].representative.surface_name == "ACE-2005"

    def test_relations_kept_apart(self):
        result = local_consolidate([
            mention("GENIA", citing="P1"),
            mention("GENIA", citing="P3"),
        ])
        assert len(result.consolidated) == 2
        assert {cm.relation for cm in result.consolidated} == {("P1", "P2"), ("P3", "P2")}

    def test_quarantine_unnormalizable_names(self):
        result = local_consolidate([mention("dataset"), mention("GENIA")])
        assert [m.surface_name for m in result.quarantined] == ["dataset"]
        assert [cm.canonical_key for cm in result.consolidated] == ["genia"]

    def test_roles_and_urls_aggregated(self):
        result = local_consolidate([
            mention("MAVEN", role="Use", ordinal=0, url="https://a.example/m"),
            mention("MAVEN", role="Evaluate Against", ordinal=1),
            mention("MAVEN", role="Use", ordinal=2, url="https://a.example/m"),
        ])
        cm = result.consolidated[0]
        assert cm.roles == {"Use": 2, "Evaluate Against": 1}
        assert cm.extracted_urls == ("https://a.example/m",)

    def test_order_invariant(self):
        ms = [mention("A1", ordinal=0), mention("B2", citing="P3", ordinal=1), mention("A1", ordinal=2, conf=0.5)]
        forward = local_consolidate(ms)
        backward = local_consolidate(list(reversed(ms)))
        assert [cm.to_dict() for cm in forward.consolidated] == [cm.to_dict() for cm in backward.consolidated]


class TestGroupEntities:
    def test_display_is_most_frequent_surface(self):
        result = local_consolidate([
            mention("ACE 2005", citing="S1", ordinal=0),
            mention("ACE 2005", citing="S2", ordinal=0),
            mention("ACE-2005", citing="S3", ordinal=0),
        ])
        entities = group_entities(result.consolidated)
        assert len(entities) == 1
        assert entities[0].display_name == "ACE 2005"
        assert entities[0].aliases == ("ACE-2005",)
        assert entities[0].mention_count == 3
        assert entities[0].citation_count == 3

    def test_display_tie_lexicographic(self):
        result = local_consolidate([
            mention("TAC-KBP", citing="S1"),
            mention("TAC KBP", citing="S2"),
        ])
        entities = group_entities(result.consolidated)
        assert entities[0].display_name == "TAC KBP"

    def test_urls_become_context_links(self):
        result = local_consolidate([
            mention("GENIA", url="https://doi.org/10.5555/genia-2003"),
            mention("GENIA", citing="S2", url="https://example.org/genia"),
        ])
        links = group_entities(result.consolidated)[0].links
        assert [(l.kind, l.tier) for l in links] == [("DOI", "ContextExtracted"), ("URL", "ContextExtracted")]

    def test_citation_count_counts_distinct_citing_papers(self):
        result = local_consolidate([
            mention("RAMS", citing="S1", cited="P9", ordinal=0),
            mention("RAMS", citing="S1", cited="P8", ordinal=0),
            mention("RAMS", citing="S2", cited="P9", ordinal=0),
        ])
        e = group_entities(result.consolidated)[0]
        assert e.mention_count == 3
        assert e.citation_count == 2
        assert e.citing_ids == ("S1", "S2")

    def test_entities_sorted_by_key(self):
        result = local_consolidate([mention("Zebra9"), mention("Alpha1", citing="S2")])
        keys = [e.canonical_key for e in group_entities(result.consolidated)]
        assert keys == sorted(keys)


class TestFamilyMerge:
    def test_shared_ldc_id_merges(self):
        a = entity("ace", "ACE", links=(LinkRecord("URL", "https://catalog.ldc.upenn.edu/LDC2006T06", "ContextExtracted"),))
        b = entity(
            "ace 2005",
            "ACE 2005",
            links=(LinkRecord("URL", "https://catalog.ldc.upenn.edu/LDC2006T06", "ContextExtracted"),),
            relations=(("P3", "P2"),),
            mention_count=2,
        )
        result = family_merge([a, b])
        assert len(result.entities) == 1
        merged = result.entities[0]
        assert merged.family_id == "ldc:LDC2006T06"
        assert merged.display_name == "ACE 2005"
        assert merged.canonical_key == "ace 2005"
        assert merged.mention_count == 3
        assert len(merged.links) == 1
        assert result.flagged == []

    def test_conflicting_ids_flagged_not_merged(self):
        conflicted = entity(
            "muc",
            "MUC",
            links=(
                LinkRecord("DOI", "10.1/a", "ContextExtracted"),
                LinkRecord("DOI", "10.2/b", "ContextExtracted"),
            ),
        )
        other = entity("genia", "GENIA", links=(LinkRecord("DOI", "10.1/a", "CitedPaperDOI"),))
        result = family_merge([conflicted, other])
        assert len(result.entities) == 2
        assert [e.canonical_key for e in result.flagged] == ["muc"]
        flagged = next(e for e in result.entities if e.canonical_key == "muc")
        assert "family_conflict" in flagged.flags
        assert flagged.family_id is None

    def test_family_map_overrides(self):
        a = entity("richere", "RichERE")
        b = entity("rich ere", "Rich ERE", relations=(("P3", "P2"),))
        result = family_merge([a, b], family_map={"richere": "ldc:LDC2015E29", "rich ere": "ldc:LDC2015E29"})
        assert len(result.entities) == 1
        assert result.entities[0].family_id == "ldc:LDC2015E29"

    def test_lone_family_member_keeps_identity(self):
        a = entity("genia", "GENIA", links=(LinkRecord("DOI", "10.5555/genia-2003", "CitedPaperDOI"),))
        result = family_merge([a])
        assert result.entities[0].family_id == "doi:10.5555/genia-2003"
        assert result.entities[0].canonical_key == "genia"

    def test_no_ids_no_merge(self):
        a = entity("casie", "CASIE")
        b = entity("pheme", "PHEME", relations=(("P3", "P2"),))
        result = family_merge([a, b])
        assert [e.canonical_key for e in result.entities] == ["casie", "pheme"]
        assert all(e.family_id is None for e in result.entities)

    def test_detect_family_ids(self):
        e = entity(
            "x",
            "X1",
            links=(
                LinkRecord("DOI", "10.5555/Ace-2005", "ContextExtracted"),
                LinkRecord("URL", "https://catalog.ldc.upenn.edu/ldc2006t06", "ContextExtracted"),
                LinkRecord("HANDLE", "11234/h-1", "ContextExtracted"),
            ),
        )
        assert detect_family_ids(e) == {"doi:10.5555/ace-2005", "ldc:LDC2006T06", "handle:11234/h-1"}


_SURFACE_POOL = ("ACE 2005", "ACE-2005", "ACE", "GENIA", "MAVEN", "TAC KBP", "dataset", "the corpus")


@st.composite
def mention_lists(draw):
    n = draw(st.integers(min_value=0, max_value=25))
    ms = []
    for i in range(n):
        ms.append(
            mention(
                draw(st.sampled_from(_SURFACE_POOL)),
                citing=draw(st.sampled_from(("S1", "S2", "S3"))),
                cited=draw(st.sampled_from(("P5", "P6"))),
                role=draw(st.sampled_from(("Use", "Modify", "Evaluate Against"))),
                conf=draw(st.sampled_from((0.5, 0.8, 0.9))),
                ordinal=i,
            )
        )
    return ms


@given(mention_lists())
@settings(max_examples=200)
def test_consolidation_conserves_mentions(ms):
    result = local_consolidate(ms)
    assert sum(cm.merged_count for cm in result.consolidated) + len(result.quarantined) == len(ms)
    entities = group_entities(result.consolidated)
    assert sum(e.mention_count for e in entities) == len(ms) - len(result.quarantined)
    kept_contexts = {m.context_id for m in ms} - {m.context_id for m in result.quarantined}
    grouped_contexts = set()
    for e in entities:
        grouped_contexts.update(e.contexts)
    assert grouped_contexts <= {m.context_id for m in ms}
    # Every non-quarantined context survives into some entity.
    assert kept_contexts <= grouped_contexts


@given(mention_lists(), st.randoms())
@settings(max_examples=100)
def test_resolution_is_order_invariant(ms, rng):
    shuffled = list(ms)
    rng.shuffle(shuffled)
    a = [e.to_dict() for e in group_entities(local_consolidate(ms).consolidated)]
    b = [e.to_dict() for e in group_entities(local_consolidate(shuffled).consolidated)]
    assert a == b

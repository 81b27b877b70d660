"""Ingestion, sentence windows, lexical search, and context expansion."""

import json

import pytest

from citescout.corpus import (
    CorpusError,
    CorpusHandle,
    Query,
    context_id_for,
    find_citation_marker,
    ingest_snapshot,
    split_sentences,
    tokenize,
    window_extract,
)


def sentences(text):
    return [text[s:e].strip() for s, e in split_sentences(text)]


class TestSentenceSplitting:
    def test_plain_boundaries(self):
        text = "First sentence. Second one here! Third ends?"
        assert sentences(text) == ["First sentence.", "Second one here!", "Third ends?"]

    def test_boundary_needs_uppercase(self):
        text = "We reach 3.5 points. the gain holds."
        assert sentences(text) == ["We reach 3.5 points. the gain holds."]

    def test_abbreviations_do_not_split(self):
        text = "See Smith et al. Then we act."
        assert sentences(text) == ["See Smith et al. Then we act."]

    def test_eg_suppressed_but_real_boundary_splits(self):
        text = "We use markers, e.g. BERT embeddings. Second sentence."
        assert sentences(text) == ["We use markers, e.g. BERT embeddings.", "Second sentence."]

    def test_punctuation_runs_collapse(self):
        text = "Really?! Yes. Done."
        assert sentences(text) == ["Really?!", "Yes.", "Done."]

    def test_empty_and_whitespace(self):
        assert split_sentences("") == []
        assert split_sentences("   ") == []


class TestCitationMarkers:
    def test_numeric(self):
        assert find_citation_marker("as shown in [7], we") == (12, 15)

    def test_numeric_list(self):
        text = "prior work [3, 5] found"
        span = find_citation_marker(text)
        assert text[span[0] : span[1]] == "[3, 5]"

    def test_author_year(self):
        text = "following (Chen, 2020) we train"
        span = find_citation_marker(text)
        assert text[span[0] : span[1]] == "(Chen, 2020)"

    def test_earliest_marker_wins(self):
        text = "[1] and later (Chen, 2020)"
        span = find_citation_marker(text)
        assert text[span[0] : span[1]] == "[1]"

    def test_lowercase_author_year_is_not_a_marker(self):
        assert find_citation_marker("per (chen, 2020) we") is None

    def test_no_marker(self):
        assert find_citation_marker("no citations here") is None


class TestWindowExtract:
    TEXT = "Alpha one. Beta two. Gamma [3] three. Delta four. Epsilon five."

    def marker(self):
        return find_citation_marker(self.TEXT)

    def test_center_plus_neighbours(self):
        assert window_extract(self.TEXT, self.marker(), 3) == "Beta two. Gamma [3] three. Delta four."

    def test_window_of_one(self):
        assert window_extract(self.TEXT, self.marker(), 1) == "Gamma [3] three."

    def test_truncates_at_start(self):
        text = "Gamma [3] three. Delta four. Epsilon five."
        span = find_citation_marker(text)
        assert window_extract(text, span, 3) == "Gamma [3] three. Delta four."

    def test_truncates_at_end(self):
        text = "Alpha one. Beta two. Gamma [3] three."
        span = find_citation_marker(text)
        assert window_extract(text, span, 3) == "Beta two. Gamma [3] three."

    def test_out_of_bounds_span_raises(self):
        with pytest.raises(ValueError):
            window_extract("short", (0, 99))

    def test_whitespace_normalized(self):
        text = "Alpha  one.   Beta   [2]  two. Gamma three."
        span = find_citation_marker(text)
        assert window_extract(text, span, 3) == "Alpha one. Beta [2] two. Gamma three."


def test_context_id_format():
    assert context_id_for("P1", "P2", 3) == "ctx::P1::P2::0003"


def test_tokenize_folds_case_and_punctuation():
    assert tokenize("Document-Level Event_Extraction, 2020!") == [
        "document",
        "level",
        "event",
        "extraction",
        "2020",
    ]


def _write_jsonl(path, rows):
    with open(path, "w", encoding="utf-8") as f:
        for row in rows:
            if isinstance(row, str):
                f.write(row + "\n")
            else:
                f.write(json.dumps(row) + "\n")


@pytest.fixture()
def messy_snapshot(tmp_path):
    papers = tmp_path / "papers.jsonl"
    citations = tmp_path / "citations.jsonl"
    _write_jsonl(
        papers,
        [
            {"paper_id": "A", "title": "Event extraction study", "abstract": "We study event extraction."},
            {"paper_id": "B", "title": "Relation extraction", "abstract": "Relations only."},
            {"paper_id": "C", "title": "Event parsing", "abstract": "Events appear twice: event event."},
            {"paper_id": "A", "title": "Event extraction study v2", "abstract": "We study event extraction."},
            {"title": "no id"},
            "{not json",
            {"paper_id": "D", "year": 1492},
        ],
    )
    _write_jsonl(
        citations,
        [
            {"citing_id": "A", "cited_id": "B", "contexts": ["Alpha. We build on [2] heavily. Omega."]},
            {"citing_id": "A", "cited_id": "B", "contexts": ["Replacement window [2]."]},
            {"citing_id": "A", "cited_id": "C", "contexts": ["No marker snippet at all.", "Second [4] snippet. Tail."]},
            {"citing_id": "B", "cited_id": "Z", "contexts": ["Dangling [9]."]},
            {"citing_id": "C", "cited_id": "C"},
            {"citing_id": "", "cited_id": "B"},
            "also not json",
        ],
    )
    return papers, citations


class TestIngest:
    def test_report_counts(self, messy_snapshot, tmp_path):
        papers, citations = messy_snapshot
        handle = ingest_snapshot(papers, citations, tmp_path / "idx")
        report = handle.ingest_report
        assert report["papers_rows"] == 7
        assert report["papers_indexed"] == 3
        assert report["papers_rejected"] == 3
        assert report["duplicate_paper_ids"] == 1
        assert report["citations_rows"] == 7
        assert report["edges_indexed"] == 3
        assert report["citations_rejected"] == 3
        assert report["duplicate_edges"] == 1
        assert report["dangling_edges"] == 1
        assert report["contexts_built"] == 4

    def test_duplicates_keep_last(self, messy_snapshot, tmp_path):
        papers, citations = messy_snapshot
        handle = ingest_snapshot(papers, citations, tmp_path / "idx")
        assert handle.paper("A").title == "Event extraction study v2"
        windows = [c.window_text for c in handle.expand_contexts(["B"]) if c.cited_id == "B"]
        assert windows == ["Replacement window [2]."]

    def test_contexts_window_or_whole_snippet(self, messy_snapshot, tmp_path):
        papers, citations = messy_snapshot
        handle = ingest_snapshot(papers, citations, tmp_path / "idx")
        by_id = {c.context_id: c.window_text for c in handle.expand_contexts(["A"])}
        assert by_id["ctx::A::C::0000"] == "No marker snippet at all."
        assert by_id["ctx::A::C::0001"] == "Second [4] snippet. Tail."

    def test_reopen_matches(self, messy_snapshot, tmp_path):
        papers, citations = messy_snapshot
        built = ingest_snapshot(papers, citations, tmp_path / "idx")
        reopened = CorpusHandle.open(tmp_path / "idx")
        assert reopened.paper_count == built.paper_count
        assert reopened.context_count == built.context_count
        assert reopened.meta == built.meta

    def test_open_rejects_non_index(self, tmp_path):
        with pytest.raises(CorpusError):
            CorpusHandle.open(tmp_path)

    def test_missing_snapshot_raises(self, tmp_path):
        with pytest.raises(CorpusError):
            ingest_snapshot(tmp_path / "nope.jsonl", tmp_path / "also.jsonl", tmp_path / "idx")

    def test_row_order_invariance(self, tmp_path):
        papers = [
            {"paper_id": f"P{i}", "title": f"Title {i} event", "abstract": f"Abstract {i}."} for i in range(8)
        ]
        citations = [
            {"citing_id": "P0", "cited_id": "P1", "contexts": ["We use [1] here."]},
            {"citing_id": "P2", "cited_id": "P3", "contexts": ["Compare with [3]."]},
            {"citing_id": "P4", "cited_id": "P5", "contexts": []},
        ]
        _write_jsonl(tmp_path / "p1.jsonl", papers)
        _write_jsonl(tmp_path / "c1.jsonl", citations)
        _write_jsonl(tmp_path / "p2.jsonl", list(reversed(papers)))
        _write_jsonl(tmp_path / "c2.jsonl", list(reversed(citations)))
        ingest_snapshot(tmp_path / "p1.jsonl", tmp_path / "c1.jsonl", tmp_path / "idx1")
        ingest_snapshot(tmp_path / "p2.jsonl", tmp_path / "c2.jsonl", tmp_path / "idx2")
        for name in ("papers.jsonl", "edges.jsonl", "contexts.jsonl", "lexicon.json", "meta.json"):
            assert (tmp_path / "idx1" / name).read_bytes() == (tmp_path / "idx2" / name).read_bytes(), name


@pytest.fixture()
def search_corpus(tmp_path):
    papers = [
        {"paper_id": "D1", "title": "event event event", "abstract": "", "fields_of_study": ["Computer Science"]},
        {"paper_id": "D2", "title": "event extraction", "abstract": "", "fields_of_study": ["Computer Science"]},
        {"paper_id": "D3", "title": "nothing relevant", "abstract": "", "fields_of_study": ["Computer Science"]},
        {"paper_id": "D4", "title": "event extraction", "abstract": "", "fields_of_study": ["Biology"]},
        {"paper_id": "D5", "title": "event extraction", "abstract": "", "fields_of_study": ["Computer Science"]},
    ]
    citations = [
        {"citing_id": "D1", "cited_id": "D2", "contexts": ["D1 cites D2 [1]."]},
        {"citing_id": "D3", "cited_id": "D1", "contexts": ["D3 cites D1 [2]."]},
        {"citing_id": "D1", "cited_id": "D3", "contexts": ["D1 cites D3 [3]."]},
    ]
    _write_jsonl(tmp_path / "papers.jsonl", papers)
    _write_jsonl(tmp_path / "citations.jsonl", citations)
    return ingest_snapshot(tmp_path / "papers.jsonl", tmp_path / "citations.jsonl", tmp_path / "idx")


class TestSeedSearch:
    def test_non_matching_papers_excluded(self, search_corpus):
        hits = dict(search_corpus.seed_search(Query(text="event")))
        assert "D3" not in hits
        assert set(hits) == {"D1", "D2", "D4", "D5"}

    def test_ties_break_by_paper_id(self, search_corpus):
        ranked = [pid for pid, _ in search_corpus.seed_search(Query(text="event extraction"))]
        # D2, D4, D5 share identical titles, so identical scores.
        tied = [pid for pid in ranked if pid in {"D2", "D4", "D5"}]
        assert tied == ["D2", "D4", "D5"]

    def test_fos_filter(self, search_corpus):
        query = Query(text="event extraction", field_constraints=frozenset({"Biology"}))
        assert [pid for pid, _ in search_corpus.seed_search(query)] == ["D4"]

    def test_seed_k_truncates(self, search_corpus):
        assert len(search_corpus.seed_search(Query(text="event", seed_k=2))) == 2

    def test_scores_positive_and_sorted(self, search_corpus):
        results = search_corpus.seed_search(Query(text="event extraction"))
        scores = [score for _, score in results]
        assert all(s > 0 for s in scores)
        assert scores == sorted(scores, reverse=True)

    def test_deterministic(self, search_corpus):
        q = Query(text="event extraction")
        assert search_corpus.seed_search(q) == search_corpus.seed_search(q)

    def test_empty_query_text_rejected(self):
        with pytest.raises(ValueError):
            Query(text="   ")

    def test_bad_seed_k_rejected(self):
        with pytest.raises(ValueError):
            Query(text="x", seed_k=0)


class TestExpandContexts:
    def test_empty_seeds_raise(self, search_corpus):
        with pytest.raises(ValueError):
            search_corpus.expand_contexts([])

    def test_unknown_seed_skipped(self, search_corpus):
        assert search_corpus.expand_contexts(["D2", "D999"]) == search_corpus.expand_contexts(["D2"])

    def test_dedup_when_both_endpoints_are_seeds(self, search_corpus):
        ids = [c.context_id for c in search_corpus.expand_contexts(["D1", "D2", "D3"])]
        assert len(ids) == len(set(ids)) == 3

    def test_sorted_and_permutation_invariant(self, search_corpus):
        a = search_corpus.expand_contexts(["D1", "D3"])
        b = search_corpus.expand_contexts(["D3", "D1"])
        assert a == b
        assert [c.context_id for c in a] == sorted(c.context_id for c in a)

    def test_titles_and_abstracts_attached(self, search_corpus):
        ctx = next(c for c in search_corpus.expand_contexts(["D2"]) if c.cited_id == "D2")
        assert ctx.citing_title == "event event event"
        assert ctx.cited_title == "event extraction"


class TestMiniFixture:
    def test_ingest_counts_match_manifest(self, mini_corpus, manifest):
        expected = manifest["ingest"]
        assert mini_corpus.paper_count == expected["papers"]
        assert mini_corpus.edge_count == expected["edges"]
        assert mini_corpus.context_count == expected["contexts"]
        assert mini_corpus.ingest_report["dangling_edges"] == expected["dangling_edges"]
        assert mini_corpus.ingest_report["papers_rejected"] == 0
        assert mini_corpus.ingest_report["citations_rejected"] == 0

    def test_seed_set_matches_manifest(self, mini_corpus, manifest, mini_query):
        seeds = [pid for pid, _ in mini_corpus.seed_search(mini_query)]
        assert sorted(seeds) == manifest["seed_ids"]

    def test_ui_subsets_derive_from_table(self, manifest):
        table = manifest["table"]
        trusted = [row["canonical_key"] for row in table if row["trusted"]]
        evaluate = [row["canonical_key"] for row in table if "Evaluate Against" in row["usage_roles"]]
        assert manifest["ui"]["trusted_keys"] == trusted
        assert manifest["ui"]["evaluate_against_keys"] == evaluate
        assert len(trusted) == 5
        assert len(evaluate) == 4

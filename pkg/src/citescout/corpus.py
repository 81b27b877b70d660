"""Scholarly-corpus ingestion and citation-context retrieval.

Ingestion converts a snapshot (papers + citation edges with raw context
snippets) into a local index directory: normalized record tables, a
prebuilt sentence-window context table, and a lexical index over
title+abstract. After ingestion the index is read-only; a CorpusHandle
loads it fully into memory, so every query operation is a pure function.
"""

from __future__ import annotations

import json
import logging
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

PAPERS_FILE = "papers.jsonl"
EDGES_FILE = "edges.jsonl"
CONTEXTS_FILE = "contexts.jsonl"
LEXICON_FILE = "lexicon.json"
META_FILE = "meta.json"

_TOKEN_RE = re.compile(r"[a-z0-9]+")

# Citation markers: numeric brackets "[7]"/"[3, 5]" and author-year "(Name, 2020)".
_NUMERIC_MARKER_RE = re.compile(r"\[\d+(?:\s*[,;–—-]\s*\d+)*\]")
_AUTHOR_YEAR_MARKER_RE = re.compile(r"\([A-Z][^()]{0,60}?,\s*(?:19|20)\d{2}[a-z]?\)")

# Sentence boundaries: [.?!] + whitespace + uppercase, with common
# abbreviations suppressed.
_ABBREVIATIONS = ("et al", "e.g", "i.e", "fig", "eq", "cf", "vs", "etc", "resp", "no")


class CorpusError(Exception):
    """Raised for unusable snapshot files or a broken index directory."""


# ---------------------------------------------------------------------------
# Domain types


@dataclass(frozen=True)
class Paper:
    paper_id: str
    title: str = ""
    abstract: str = ""
    year: int | None = None
    venue: str = ""
    doi: str | None = None
    fields_of_study: tuple = ()

    def to_dict(self) -> dict:
        return {
            "paper_id": self.paper_id,
            "title": self.title,
            "abstract": self.abstract,
            "year": self.year,
            "venue": self.venue,
            "doi": self.doi,
            "fields_of_study": sorted(self.fields_of_study),
        }


@dataclass(frozen=True)
class CitationEdge:
    citing_id: str
    cited_id: str
    raw_contexts: tuple = ()


@dataclass(frozen=True)
class CitationContext:
    """One sentence window tying a citing paper to a cited paper."""

    context_id: str
    citing_id: str
    cited_id: str
    window_text: str
    citing_title: str = ""
    cited_title: str = ""
    citing_abstract: str = ""
    cited_abstract: str = ""

    def to_dict(self) -> dict:
        return {
            "context_id": self.context_id,
            "citing_id": self.citing_id,
            "cited_id": self.cited_id,
            "window_text": self.window_text,
            "citing_title": self.citing_title,
            "cited_title": self.cited_title,
            "citing_abstract": self.citing_abstract,
            "cited_abstract": self.cited_abstract,
        }


@dataclass(frozen=True)
class Query:
    text: str
    field_constraints: frozenset = frozenset()
    seed_k: int = 300

    def __post_init__(self):
        if not self.text or not self.text.strip():
            raise ValueError("query text must be non-empty")
        if self.seed_k < 1:
            raise ValueError("seed_k must be >= 1")


@dataclass
class IngestReport:
    papers_rows: int = 0
    papers_indexed: int = 0
    papers_rejected: int = 0
    duplicate_paper_ids: int = 0
    citations_rows: int = 0
    edges_indexed: int = 0
    citations_rejected: int = 0
    duplicate_edges: int = 0
    dangling_edges: int = 0
    contexts_built: int = 0
    warnings: list = field(default_factory=list)

    def warn(self, message: str):
        if len(self.warnings) < 50:
            self.warnings.append(message)
        logger.warning(message)

    def to_dict(self) -> dict:
        return {
            "papers_rows": self.papers_rows,
            "papers_indexed": self.papers_indexed,
            "papers_rejected": self.papers_rejected,
            "duplicate_paper_ids": self.duplicate_paper_ids,
            "citations_rows": self.citations_rows,
            "edges_indexed": self.edges_indexed,
            "citations_rejected": self.citations_rejected,
            "duplicate_edges": self.duplicate_edges,
            "dangling_edges": self.dangling_edges,
            "contexts_built": self.contexts_built,
            "warnings": list(self.warnings),
        }


# ---------------------------------------------------------------------------
# Text helpers


def tokenize(text: str) -> list[str]:
    """Lowercased, punctuation-stripped tokens for lexical scoring."""
    return _TOKEN_RE.findall(text.lower())


def normalize_whitespace(text: str) -> str:
    return " ".join(text.split())


def _is_abbreviation(text: str, dot_index: int) -> bool:
    prefix = text[:dot_index].lower()
    for abbrev in _ABBREVIATIONS:
        if prefix.endswith(abbrev):
            before = dot_index - len(abbrev) - 1
            if before < 0 or not (text[before].isalnum() or text[before] == "."):
                return True
    return False


def split_sentences(text: str) -> list[tuple[int, int]]:
    """Character spans of sentences in text.

    A boundary is a run of [.?!] followed by whitespace and an uppercase
    letter, or end-of-text; abbreviations like "et al." never split.
    """
    spans = []
    start = 0
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch in ".?!":
            run_start = i
            while i + 1 < n and text[i + 1] in ".?!":
                i += 1
            j = i + 1
            while j < n and text[j].isspace():
                j += 1
            at_end = j >= n
            next_upper = j < n and j > i + 1 and text[j].isupper()
            if (at_end or next_upper) and not (ch == "." and _is_abbreviation(text, run_start)):
                spans.append((start, j if at_end else j))
                start = j
                i = j
                continue
        i += 1
    if start < n:
        spans.append((start, n))
    return [(s, e) for s, e in spans if text[s:e].strip()]


def find_citation_marker(text: str) -> tuple[int, int] | None:
    """Span of the first citation marker in a snippet, or None."""
    candidates = []
    for regex in (_NUMERIC_MARKER_RE, _AUTHOR_YEAR_MARKER_RE):
        m = regex.search(text)
        if m:
            candidates.append(m.span())
    return min(candidates) if candidates else None


def window_extract(text: str, marker_span: tuple[int, int], window_sentences: int = 3) -> str:
    """Sentence window around a citation marker, whitespace-normalized.

    Returns the sentence containing the marker start plus
    (window_sentences - 1) // 2 neighbours on each side; truncated at
    document boundaries, never fails there.
    """
    start, end = marker_span
    if start < 0 or end > len(text) or start > end:
        raise ValueError("marker_span out of bounds")
    spans = split_sentences(text)
    if not spans:
        return normalize_whitespace(text)
    center = len(spans) - 1
    for idx, (s, e) in enumerate(spans):
        if s <= start < e:
            center = idx
            break
    half = max(0, (window_sentences - 1) // 2)
    lo = max(0, center - half)
    hi = min(len(spans), center + half + 1)
    picked = [normalize_whitespace(text[s:e]) for s, e in spans[lo:hi]]
    return " ".join(p for p in picked if p)


def context_id_for(citing_id: str, cited_id: str, ordinal: int) -> str:
    """Deterministic context key from the edge pair and window ordinal."""
    return f"ctx::{citing_id}::{cited_id}::{ordinal:04d}"


# ---------------------------------------------------------------------------
# Snapshot parsing


def _iter_rows(path: Path):
    """Yield (row_number, record_or_None, error) from JSONL or Parquet."""
    if path.suffix.lower() in (".parquet", ".pq"):
        import pyarrow.parquet as pq  # optional dependency, columnar input

        table = pq.read_table(path)
        for i, row in enumerate(table.to_pylist()):
            yield i + 1, row, None
        return
    with open(path, "r", encoding="utf-8") as f:
        for i, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                yield i, json.loads(line), None
            except json.JSONDecodeError as exc:
                yield i, None, str(exc)


def _parse_paper(record: dict) -> Paper:
    paper_id = record.get("paper_id")
    if not isinstance(paper_id, str) or not paper_id.strip():
        raise ValueError("missing or empty paper_id")
    year = record.get("year")
    if year is not None:
        if not isinstance(year, int) or isinstance(year, bool) or not (1900 <= year <= 2100):
            raise ValueError(f"year out of range: {year!r}")
    fos = record.get("fields_of_study") or []
    if not isinstance(fos, (list, tuple)):
        raise ValueError("fields_of_study must be a list")
    doi = record.get("doi")
    if doi is not None and not isinstance(doi, str):
        raise ValueError("doi must be a string")
    return Paper(
        paper_id=paper_id.strip(),
        title=str(record.get("title") or ""),
        abstract=str(record.get("abstract") or ""),
        year=year,
        venue=str(record.get("venue") or ""),
        doi=doi,
        fields_of_study=tuple(sorted(str(f) for f in fos)),
    )


def _parse_edge(record: dict) -> CitationEdge:
    citing = record.get("citing_id")
    cited = record.get("cited_id")
    if not isinstance(citing, str) or not citing.strip():
        raise ValueError("missing citing_id")
    if not isinstance(cited, str) or not cited.strip():
        raise ValueError("missing cited_id")
    citing, cited = citing.strip(), cited.strip()
    if citing == cited:
        raise ValueError("self-citation edge")
    contexts = record.get("contexts")
    if contexts is None:
        contexts = []
    if not isinstance(contexts, (list, tuple)) or any(not isinstance(c, str) for c in contexts):
        raise ValueError("contexts must be a list of strings")
    return CitationEdge(citing_id=citing, cited_id=cited, raw_contexts=tuple(contexts))


# ---------------------------------------------------------------------------
# Ingestion


def _dump(record: dict) -> str:
    return json.dumps(record, ensure_ascii=False, sort_keys=True)


def ingest_snapshot(
    papers_path: str | Path,
    citations_path: str | Path,
    out_dir: str | Path,
    window_sentences: int = 3,
) -> "CorpusHandle":
    """Build an index directory from snapshot files and return an open handle.

    Record-level failures are rejected and counted in the ingestion report;
    a duplicate paper_id keeps the last occurrence (with a warning).
    Ingestion is deterministic: byte-identical inputs produce byte-identical
    index files regardless of input row order (modulo last-write-wins on
    duplicates, which follows file order).
    """
    papers_path, citations_path = Path(papers_path), Path(citations_path)
    out_dir = Path(out_dir)
    if not papers_path.exists():
        raise CorpusError(f"papers file not found: {papers_path}")
    if not citations_path.exists():
        raise CorpusError(f"citations file not found: {citations_path}")
    out_dir.mkdir(parents=True, exist_ok=True)

    report = IngestReport()

    papers: dict[str, Paper] = {}
    for row_no, record, err in _iter_rows(papers_path):
        report.papers_rows += 1
        if err is not None:
            report.papers_rejected += 1
            report.warn(f"papers row {row_no}: unparseable ({err})")
            continue
        try:
            paper = _parse_paper(record)
        except ValueError as exc:
            report.papers_rejected += 1
            report.warn(f"papers row {row_no}: {exc}")
            continue
        if paper.paper_id in papers:
            report.duplicate_paper_ids += 1
            report.warn(f"duplicate paper_id {paper.paper_id!r}: keeping last occurrence")
        papers[paper.paper_id] = paper
    report.papers_indexed = len(papers)

    edges: dict[tuple[str, str], CitationEdge] = {}
    for row_no, record, err in _iter_rows(citations_path):
        report.citations_rows += 1
        if err is not None:
            report.citations_rejected += 1
            report.warn(f"citations row {row_no}: unparseable ({err})")
            continue
        try:
            edge = _parse_edge(record)
        except ValueError as exc:
            report.citations_rejected += 1
            report.warn(f"citations row {row_no}: {exc}")
            continue
        key = (edge.citing_id, edge.cited_id)
        if key in edges:
            report.duplicate_edges += 1
            report.warn(f"duplicate edge {key}: keeping last occurrence")
        edges[key] = edge
    report.edges_indexed = len(edges)

    # Prebuilt context table: one sentence window per raw snippet.
    context_rows = []
    for citing, cited in sorted(edges):
        edge = edges[(citing, cited)]
        if citing not in papers or cited not in papers:
            report.dangling_edges += 1
        for ordinal, snippet in enumerate(edge.raw_contexts):
            marker = find_citation_marker(snippet)
            if marker is not None:
                window = window_extract(snippet, marker, window_sentences)
            else:
                window = normalize_whitespace(snippet)
            if not window:
                continue
            context_rows.append(
                {
                    "context_id": context_id_for(citing, cited, ordinal),
                    "citing_id": citing,
                    "cited_id": cited,
                    "window_text": window,
                }
            )
    context_rows.sort(key=lambda r: r["context_id"])
    report.contexts_built = len(context_rows)

    # Lexical index over title+abstract.
    doc_ids = sorted(papers)
    postings: dict[str, list] = {}
    doc_lens = []
    for ordinal, pid in enumerate(doc_ids):
        paper = papers[pid]
        counts = Counter(tokenize(paper.title + " " + paper.abstract))
        doc_lens.append(sum(counts.values()))
        for token, tf in counts.items():
            postings.setdefault(token, []).append([ordinal, tf])
    lexicon = {
        "doc_ids": doc_ids,
        "doc_lens": doc_lens,
        "postings": {t: postings[t] for t in sorted(postings)},
    }

    (out_dir / PAPERS_FILE).write_text(
        "".join(_dump(papers[pid].to_dict()) + "\n" for pid in doc_ids), encoding="utf-8"
    )
    (out_dir / EDGES_FILE).write_text(
        "".join(
            _dump(
                {
                    "citing_id": citing,
                    "cited_id": cited,
                    "contexts": list(edges[(citing, cited)].raw_contexts),
                }
            )
            + "\n"
            for citing, cited in sorted(edges)
        ),
        encoding="utf-8",
    )
    (out_dir / CONTEXTS_FILE).write_text(
        "".join(_dump(row) + "\n" for row in context_rows), encoding="utf-8"
    )
    (out_dir / LEXICON_FILE).write_text(_dump(lexicon), encoding="utf-8")
    (out_dir / META_FILE).write_text(
        _dump(
            {
                "schema_version": SCHEMA_VERSION,
                "window_sentences": window_sentences,
                "papers": len(papers),
                "edges": len(edges),
                "contexts": len(context_rows),
                "report": report.to_dict(),
            }
        ),
        encoding="utf-8",
    )
    return CorpusHandle.open(out_dir)


# ---------------------------------------------------------------------------
# Handle and query operations


class CorpusHandle:
    """In-memory view of an index directory; read-only after open()."""

    def __init__(self, index_dir: Path, papers, context_rows, lexicon, meta):
        self.index_dir = index_dir
        self.papers = papers
        self._context_rows = context_rows
        self._by_citing: dict[str, list[int]] = {}
        self._by_cited: dict[str, list[int]] = {}
        for i, row in enumerate(context_rows):
            self._by_citing.setdefault(row["citing_id"], []).append(i)
            self._by_cited.setdefault(row["cited_id"], []).append(i)
        self._doc_ids = lexicon["doc_ids"]
        self._doc_lens = lexicon["doc_lens"]
        self._postings = lexicon["postings"]
        self._avgdl = (sum(self._doc_lens) / len(self._doc_lens)) if self._doc_lens else 0.0
        self.meta = meta

    @classmethod
    def open(cls, index_dir: str | Path) -> "CorpusHandle":
        index_dir = Path(index_dir)
        meta_path = index_dir / META_FILE
        if not meta_path.exists():
            raise CorpusError(f"not an index directory: {index_dir}")
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
        papers = {}
        with open(index_dir / PAPERS_FILE, "r", encoding="utf-8") as f:
            for line in f:
                rec = json.loads(line)
                papers[rec["paper_id"]] = Paper(
                    paper_id=rec["paper_id"],
                    title=rec.get("title", ""),
                    abstract=rec.get("abstract", ""),
                    year=rec.get("year"),
                    venue=rec.get("venue", ""),
                    doi=rec.get("doi"),
                    fields_of_study=tuple(rec.get("fields_of_study", [])),
                )
        context_rows = []
        with open(index_dir / CONTEXTS_FILE, "r", encoding="utf-8") as f:
            for line in f:
                context_rows.append(json.loads(line))
        lexicon = json.loads((index_dir / LEXICON_FILE).read_text(encoding="utf-8"))
        return cls(index_dir, papers, context_rows, lexicon, meta)

    @property
    def paper_count(self) -> int:
        return len(self.papers)

    @property
    def edge_count(self) -> int:
        return int(self.meta.get("edges", 0))

    @property
    def context_count(self) -> int:
        return len(self._context_rows)

    def paper(self, paper_id: str) -> Paper | None:
        return self.papers.get(paper_id)

    @property
    def ingest_report(self) -> dict:
        return self.meta.get("report", {})

    # -- lexical search

    def _bm25_scores(self, terms: list[str], k1: float, b: float) -> dict[int, float]:
        n_docs = len(self._doc_ids)
        scores: dict[int, float] = {}
        for term in terms:
            plist = self._postings.get(term)
            if not plist:
                continue
            df = len(plist)
            idf = math.log(1.0 + (n_docs - df + 0.5) / (df + 0.5))
            for ordinal, tf in plist:
                dl = self._doc_lens[ordinal]
                denom = tf + k1 * (1.0 - b + b * (dl / self._avgdl if self._avgdl else 0.0))
                scores[ordinal] = scores.get(ordinal, 0.0) + idf * tf * (k1 + 1.0) / denom
        return scores

    def seed_search(self, query: Query, k1: float = 1.2, b: float = 0.75) -> list[tuple[str, float]]:
        """Top seed_k papers by BM25 over title+abstract, optionally FOS-filtered.

        Deterministic: ties broken by ascending paper_id; papers matching no
        query term are never returned.
        """
        terms = tokenize(query.text)
        scores = self._bm25_scores(terms, k1, b)
        results = []
        for ordinal, score in scores.items():
            pid = self._doc_ids[ordinal]
            if query.field_constraints:
                fos = set(self.papers[pid].fields_of_study)
                if not fos & set(query.field_constraints):
                    continue
            results.append((pid, score))
        results.sort(key=lambda r: (-r[1], r[0]))
        return results[: query.seed_k]

    # -- citation expansion

    def expand_contexts(self, seeds) -> list["CitationContext"]:
        """All contexts where a seed is the citing or the cited paper.

        Unknown seed ids are skipped with a warning. Output is deduplicated
        by context_id and sorted by context_id, so it is invariant under
        permutation of the seeds set.
        """
        if not seeds:
            raise ValueError("seeds must be non-empty")
        indices = set()
        for seed in seeds:
            if seed not in self.papers:
                logger.warning("seed id %r not in corpus; skipped", seed)
                continue
            indices.update(self._by_citing.get(seed, ()))
            indices.update(self._by_cited.get(seed, ()))
        contexts = [self._materialize(self._context_rows[i]) for i in indices]
        contexts.sort(key=lambda c: c.context_id)
        return contexts

    def _materialize(self, row: dict) -> CitationContext:
        citing = self.papers.get(row["citing_id"])
        cited = self.papers.get(row["cited_id"])
        return CitationContext(
            context_id=row["context_id"],
            citing_id=row["citing_id"],
            cited_id=row["cited_id"],
            window_text=row["window_text"],
            citing_title=citing.title if citing else "",
            cited_title=cited.title if cited else "",
            citing_abstract=citing.abstract if citing else "",
            cited_abstract=cited.abstract if cited else "",
        )


def seed_search(corpus: CorpusHandle, query: Query, k1: float = 1.2, b: float = 0.75):
    return corpus.seed_search(query, k1=k1, b=b)


def expand_contexts(corpus: CorpusHandle, seeds):
    return corpus.expand_contexts(seeds)

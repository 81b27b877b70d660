"""End-to-end pipeline: query to ranked dataset table, persisted per run.

Each run owns a directory with a status record and the full artifact
chain: contexts, validated mentions, rejections, resolved entities, and
the ranked table in JSON and CSV. Stage counters are checked against
their conservation invariants before a run is marked complete, so a
counter that drifts fails the run instead of silently lying.
"""

from __future__ import annotations

import json
import logging
import uuid
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path

from .backends import ExtractorBackend, SearchBackend, WireLog, make_extractor_backend, make_search_backend
from .config import DEFAULT_BLOCKLIST, PipelineConfig, load_line_file
from .corpus import CorpusHandle, Query
from .enrichment import build_table, enrich_entities, table_to_csv, table_to_json
from .evaluation import EvaluationReport, compute_report, format_report_table, load_gold
from .extraction import run_extraction
from .naming import NormalizesToEmpty, normalize_name
from .resolution import ResolvedEntity, family_merge, group_entities, local_consolidate

logger = logging.getLogger(__name__)

STATUS_PENDING = "Pending"
STATUS_RUNNING = "Running"
STATUS_COMPLETE = "Complete"
STATUS_FAILED = "Failed"

RUN_FILE = "run.json"
CONTEXTS_FILE = "contexts.jsonl"
MENTIONS_FILE = "mentions.jsonl"
REJECTIONS_FILE = "rejections.jsonl"
ENTITIES_FILE = "entities.jsonl"
TABLE_JSON_FILE = "table.json"
TABLE_CSV_FILE = "table.csv"
WIRE_FILE = "wire.jsonl"
REPORT_JSON_FILE = "report.json"
REPORT_TXT_FILE = "report.txt"


class PipelineError(Exception):
    pass


class InvariantViolation(PipelineError):
    """A stage counter broke its conservation law."""


@dataclass
class RunResult:
    run_id: str
    run_dir: Path
    status: str
    counters: dict
    rows: list = field(default_factory=list)
    entities: list = field(default_factory=list)
    error: str = ""


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def _write_json(path: Path, payload: dict):
    path.write_text(json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def _write_jsonl(path: Path, rows):
    with open(path, "w", encoding="utf-8") as f:
        for row in rows:
            f.write(json.dumps(row, ensure_ascii=False, sort_keys=True) + "\n")


def _read_jsonl(path: Path) -> list[dict]:
    rows = []
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            if line.strip():
                rows.append(json.loads(line))
    return rows


def _write_run_record(run_dir: Path, record: dict):
    _write_json(run_dir / RUN_FILE, record)


def load_run_record(run_dir: str | Path) -> dict:
    path = Path(run_dir) / RUN_FILE
    if not path.exists():
        raise PipelineError(f"no run record in {run_dir}")
    return json.loads(path.read_text(encoding="utf-8"))


def load_entities(run_dir: str | Path) -> list[ResolvedEntity]:
    return [ResolvedEntity.from_dict(d) for d in _read_jsonl(Path(run_dir) / ENTITIES_FILE)]


def load_table(run_dir: str | Path) -> list[dict]:
    data = json.loads((Path(run_dir) / TABLE_JSON_FILE).read_text(encoding="utf-8"))
    return data["rows"]


def _resolve_blocklist(cfg: PipelineConfig) -> frozenset[str]:
    entries = set(DEFAULT_BLOCKLIST)
    if cfg.backend.blocklist_path:
        entries.update(e.casefold() for e in load_line_file(cfg.backend.blocklist_path))
    return frozenset(entries)

def _resolve_trusted_hosts(cfg: PipelineConfig) -> tuple[str, ...]:
    hosts = list(cfg.enrichment.trusted_hosts)
    if cfg.enrichment.trusted_hosts_path:
        hosts.extend(load_line_file(cfg.enrichment.trusted_hosts_path))
    return tuple(dict.fromkeys(hosts))

def _resolve_family_map(cfg: PipelineConfig) -> dict[str, str]:
    if not cfg.resolution.family_map_path:
        return {}
    data = json.loads(Path(cfg.resolution.family_map_path).read_text(encoding="utf-8"))
    return {str(k): str(v) for k, v in data.items()}


def _check_invariants(counters: dict):
    checks = (
        ("validated_mentions", "raw_mentions"),
        ("relevant_mentions", "validated_mentions"),
        ("entities", "relevant_mentions"),
    )
    for smaller, larger in checks:
        if counters[smaller] > counters[larger]:
            raise InvariantViolation(f"{smaller}={counters[smaller]} exceeds {larger}={counters[larger]}")
    accounted = counters["validated_mentions"] + counters["rejected_schema"] + counters["rejected_semantic"] + counters["rejected_domain"]
    if accounted != counters["raw_mentions"]:
        raise InvariantViolation(
            f"mention conservation broken: {accounted} accounted vs {counters['raw_mentions']} raw"
        )


def _mention_key(surface: str) -> str | None:
    try:
        return normalize_name(surface)
    except NormalizesToEmpty:
        return None


def run_pipeline(
    corpus: CorpusHandle,
    query: Query,
    config: PipelineConfig,
    out_dir: str | Path,
    backend: ExtractorBackend | None = None,
    search: SearchBackend | None = None,
    run_id: str | None = None,
) -> RunResult:
    """Execute the full pipeline and persist every artifact under out_dir.

    Raises on failure after recording a Failed status, so callers polling
    the run record always see a terminal state.
    """
    run_dir = Path(out_dir)
    run_dir.mkdir(parents=True, exist_ok=True)
    run_id = run_id or uuid.uuid4().hex[:12]

    record = {
        "run_id": run_id,
        "status": STATUS_RUNNING,
        "query": {"text": query.text, "field_constraints": sorted(query.field_constraints), "seed_k": query.seed_k},
        "config": config.to_dict(),
        "counters": {},
        "artifacts": [],
        "error": "",
        "created_at": _now(),
        "finished_at": None,
    }
    _write_run_record(run_dir, record)

    try:
        result = _execute(corpus, query, config, run_dir, backend, search)
    except Exception as exc:
        record["status"] = STATUS_FAILED
        record["error"] = str(exc)
        record["finished_at"] = _now()
        _write_run_record(run_dir, record)
        raise

    record["status"] = STATUS_COMPLETE
    record["counters"] = result["counters"]
    record["artifacts"] = result["artifacts"]
    record["finished_at"] = _now()
    _write_run_record(run_dir, record)
    return RunResult(
        run_id=run_id,
        run_dir=run_dir,
        status=STATUS_COMPLETE,
        counters=result["counters"],
        rows=result["rows"],
        entities=result["entities"],
    )


def _execute(
    corpus: CorpusHandle,
    query: Query,
    config: PipelineConfig,
    run_dir: Path,
    backend: ExtractorBackend | None,
    search: SearchBackend | None,
) -> dict:
    if backend is None:
        backend = make_extractor_backend(
            config.backend.kind,
            endpoint=config.backend.endpoint,
            model=config.backend.model,
            timeout=config.backend.timeout,
        )
    if search is None:
        search = make_search_backend(
            config.search.kind,
            table_path=config.search.table_path,
            endpoint=config.search.endpoint,
            timeout=config.search.timeout,
        )
    blocklist = _resolve_blocklist(config)
    wire_log = WireLog(run_dir / WIRE_FILE)

    seeds = corpus.seed_search(query, k1=config.corpus.bm25_k1, b=config.corpus.bm25_b)
    contexts = corpus.expand_contexts([pid for pid, _ in seeds]) if seeds else []
    _write_jsonl(run_dir / CONTEXTS_FILE, (c.to_dict() for c in contexts))
    logger.info("run %s: %d seeds, %d contexts", run_dir.name, len(seeds), len(contexts))

    batch = run_extraction(backend, contexts, query, config.backend, blocklist, log=wire_log)

    consolidation = local_consolidate(batch.mentions)
    entities = group_entities(consolidation.consolidated)
    merge = family_merge(entities, _resolve_family_map(config))
    enrich_cfg = replace(config.enrichment, trusted_hosts=_resolve_trusted_hosts(config))
    enriched = enrich_entities(merge.entities, corpus, search, enrich_cfg)
    rows = build_table(enriched)

    mention_rows = batch.mention_rows()
    for row in mention_rows:
        row["canonical_key"] = _mention_key(row["surface_name"])
    _write_jsonl(run_dir / MENTIONS_FILE, mention_rows)
    _write_jsonl(run_dir / REJECTIONS_FILE, (r.to_dict() for r in batch.rejections))
    _write_jsonl(run_dir / ENTITIES_FILE, (e.to_dict() for e in enriched))
    (run_dir / TABLE_JSON_FILE).write_text(table_to_json(rows), encoding="utf-8")
    (run_dir / TABLE_CSV_FILE).write_text(table_to_csv(rows), encoding="utf-8")

    counters = dict(batch.stats)
    counters.update(
        {
            "seeds": len(seeds),
            "contexts": len(contexts),
            "quarantined_mentions": len(consolidation.quarantined),
            "family_conflicts": len(merge.flagged),
            "entities": len(enriched),
        }
    )
    _check_invariants(counters)

    return {
        "counters": counters,
        "rows": rows,
        "entities": enriched,
        "artifacts": [
            CONTEXTS_FILE,
            MENTIONS_FILE,
            REJECTIONS_FILE,
            ENTITIES_FILE,
            TABLE_JSON_FILE,
            TABLE_CSV_FILE,
            WIRE_FILE,
        ],
    }


def evaluate_run(run_dir: str | Path, gold_path: str | Path, tau: float = 0.9) -> EvaluationReport:
    """Score a completed run against a gold standard and persist the report."""
    run_dir = Path(run_dir)
    record = load_run_record(run_dir)
    if record.get("status") != STATUS_COMPLETE:
        raise PipelineError(f"run is not complete: {record.get('status')}")
    entities = load_entities(run_dir)
    gold = load_gold(gold_path)
    mention_count = record["counters"].get("relevant_mentions", 0)
    report = compute_report(entities, gold, mention_count, tau=tau)
    _write_json(run_dir / REPORT_JSON_FILE, report.to_dict())
    (run_dir / REPORT_TXT_FILE).write_text(format_report_table([report]), encoding="utf-8")
    return report


def evidence_for_entity(run_dir: str | Path, canonical_key: str) -> dict:
    """Every validated mention row backing one resolved entity.

    Each row carries the citation window it was extracted from, so a
    viewer can highlight the evidence span in place.
    """
    run_dir = Path(run_dir)
    windows = {row["context_id"]: row for row in _read_jsonl(run_dir / CONTEXTS_FILE)}
    for entity in load_entities(run_dir):
        if entity.canonical_key == canonical_key:
            contexts = set(entity.contexts)
            surfaces = set(entity.surface_counts)
            rows = []
            for row in _read_jsonl(run_dir / MENTIONS_FILE):
                if row["context_id"] not in contexts or row["surface_name"] not in surfaces:
                    continue
                window = windows.get(row["context_id"], {})
                row["window_text"] = window.get("window_text", "")
                row["citing_title"] = window.get("citing_title", "")
                row["cited_title"] = window.get("cited_title", "")
                rows.append(row)
            return {"entity": entity.to_dict(), "mentions": rows}
    raise KeyError(canonical_key)

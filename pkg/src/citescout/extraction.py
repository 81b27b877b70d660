"""Schema-guided dataset-mention extraction over citation contexts.

Two backend calls per context: an extraction pass that returns structured
dataset mentions, then a relevance pass per surviving mention that judges
it against the research question. Every raw record either survives
validation or lands in a rejection bucket with the tier that caught it,
so mention counts are conserved end to end.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

from .backends import BackendError, BackendRequest, ExtractorBackend, WireLog
from .config import BackendConfig
from .corpus import CitationContext, Query
from .links import find_urls
from .naming import NormalizesToEmpty, normalize_name

USAGE_ROLES = ("Use", "Modify", "Evaluate Against")
CONTENT_TYPES = ("Performed Work", "Discovery", "Produced Resource")

# Rejection tiers, ordered from cheapest to most semantic.
TIER_SCHEMA = "schema"
TIER_SEMANTIC = "semantic"
TIER_DOMAIN = "domain"

EXTRACTION_SCHEMA = {
    "type": "object",
    "properties": {
        "datasets": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "name": {"type": "string"},
                    "usage_role": {"type": "string", "enum": list(USAGE_ROLES)},
                    "content_type": {"type": "string", "enum": list(CONTENT_TYPES)},
                    "evidence": {"type": "string"},
                    "confidence": {"type": "number", "minimum": 0.0, "maximum": 1.0},
                    "rationale": {"type": "string"},
                },
                "required": ["name", "usage_role", "content_type", "evidence", "confidence"],
            },
        }
    },
    "required": ["datasets"],
}

RELEVANCE_SCHEMA = {
    "type": "object",
    "properties": {
        "is_relevant": {"type": "boolean"},
        "confidence": {"type": "number", "minimum": 0.0, "maximum": 1.0},
        "reasoning": {"type": "string"},
    },
    "required": ["is_relevant", "confidence"],
}

_EXTRACTION_SYSTEM = """You are a careful scientific annotator. Given one citation context from a scholarly paper, identify every dataset, benchmark, or corpus it names.

Rules:
- Ground every finding in the provided context only; never invent names or evidence.
- Datasets, benchmarks, corpora, and shared-task collections qualify. Models, software tools, and methods do not (MIMIC-III qualifies; BERT does not).
- usage_role must be one of: "Use", "Modify", "Evaluate Against".
- content_type must be one of: "Performed Work", "Discovery", "Produced Resource".
- evidence must be a verbatim span copied from the context.
- confidence is a number between 0.0 and 1.0.
- Respond with JSON only, no surrounding prose."""

_RELEVANCE_SYSTEM = """You are a careful scientific annotator. Decide whether a dataset mention is relevant to a research question.

Rules:
- The mention is relevant only if the cited dataset is used, modified, or evaluated against in service of the research question.
- Be conservative: require explicit support in the context, not topical similarity alone.
- confidence is a number between 0.0 and 1.0.
- Respond with JSON only, no surrounding prose."""


def build_extraction_prompt(context: CitationContext, query: Query) -> BackendRequest:
    user = (
        "Research Question (RQ):\n"
        f'"{query.text}"\n'
        f'Citing Paper Title: "{context.citing_title}"\n'
        f'Cited Paper Title: "{context.cited_title}"\n'
        "Citation Context (verbatim):\n"
        "[BEGIN CONTEXT]\n"
        f"{context.window_text}\n"
        "[END CONTEXT]\n"
        "\n"
        "Task:\n"
        "1) List each dataset, benchmark, or corpus the context references.\n"
        "2) For each, report: name, usage_role, content_type, evidence (verbatim span), confidence, rationale.\n"
        "Output JSON only, in the form:\n"
        '{"datasets": [{"name": "...", "usage_role": "...", "content_type": "...", '
        '"evidence": "...", "confidence": 0.0, "rationale": "..."}]}'
    )
    return BackendRequest(purpose="extract", system=_EXTRACTION_SYSTEM, user=user, response_schema=EXTRACTION_SCHEMA)


def build_relevance_prompt(mention: "DatasetMention", context: CitationContext, query: Query) -> BackendRequest:
    user = (
        "Research Question (RQ):\n"
        f'"{query.text}"\n'
        "Candidate dataset mention:\n"
        f'{{"name": "{mention.surface_name}", "usage_role": "{mention.usage_role}", "evidence": "{mention.evidence}"}}\n'
        f'Citing Paper Title: "{context.citing_title}"\n'
        f"Citing Paper Abstract: {context.citing_abstract}\n"
        f'Cited Paper Title: "{context.cited_title}"\n'
        f"Cited Paper Abstract: {context.cited_abstract}\n"
        "Citation Context (verbatim):\n"
        "[BEGIN CONTEXT]\n"
        f"{context.window_text}\n"
        "[END CONTEXT]\n"
        "\n"
        "Task: decide whether this dataset mention serves the research question.\n"
        "Output JSON only, in the form:\n"
        '{"is_relevant": true, "confidence": 0.0, "reasoning": "..."}'
    )
    return BackendRequest(purpose="relevance", system=_RELEVANCE_SYSTEM, user=user, response_schema=RELEVANCE_SCHEMA)


@dataclass(frozen=True)
class DatasetMention:
    surface_name: str
    usage_role: str
    content_type: str
    evidence: str
    confidence: float
    rationale: str
    citing_id: str
    cited_id: str
    context_id: str
    extracted_url: str | None = None

    @property
    def relation(self) -> tuple[str, str]:
        return (self.citing_id, self.cited_id)

    def to_dict(self) -> dict:
        return {
            "surface_name": self.surface_name,
            "usage_role": self.usage_role,
            "content_type": self.content_type,
            "evidence": self.evidence,
            "confidence": self.confidence,
            "rationale": self.rationale,
            "citing_id": self.citing_id,
            "cited_id": self.cited_id,
            "context_id": self.context_id,
            "extracted_url": self.extracted_url,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DatasetMention":
        return cls(
            surface_name=d["surface_name"],
            usage_role=d["usage_role"],
            content_type=d["content_type"],
            evidence=d["evidence"],
            confidence=d["confidence"],
            rationale=d.get("rationale", ""),
            citing_id=d["citing_id"],
            cited_id=d["cited_id"],
            context_id=d["context_id"],
            extracted_url=d.get("extracted_url"),
        )


@dataclass(frozen=True)
class Rejection:
    tier: str  # schema | semantic | domain | relevance | backend
    reason: str
    context_id: str
    record: dict

    def to_dict(self) -> dict:
        return {"tier": self.tier, "reason": self.reason, "context_id": self.context_id, "record": self.record}


@dataclass(frozen=True)
class RelevanceVerdict:
    is_relevant: bool
    confidence: float
    reasoning: str
    undetermined: bool = False

    def to_dict(self) -> dict:
        return {
            "is_relevant": self.is_relevant,
            "confidence": self.confidence,
            "reasoning": self.reasoning,
            "undetermined": self.undetermined,
        }


def validate_mention(raw: object, context: CitationContext, blocklist: frozenset[str]) -> DatasetMention | Rejection:
    """Apply the three validation tiers to one raw record.

    Schema: required fields present with the right types, enums drawn from
    the controlled vocabularies, confidence within [0, 1]. Semantic: the
    evidence span must be non-empty verbatim text from the window.
    Domain: blocklisted tool/model names and names that are nothing but
    generic type words are rejected.
    """
    def reject(tier: str, reason: str) -> Rejection:
        record = raw if isinstance(raw, dict) else {"value": repr(raw)}
        return Rejection(tier=tier, reason=reason, context_id=context.context_id, record=record)

    if not isinstance(raw, dict):
        return reject(TIER_SCHEMA, "record is not an object")
    name = raw.get("name")
    if not isinstance(name, str) or not name.strip():
        return reject(TIER_SCHEMA, "missing or empty name")
    role = raw.get("usage_role")
    if role not in USAGE_ROLES:
        return reject(TIER_SCHEMA, f"usage_role not in controlled vocabulary: {role!r}")
    content = raw.get("content_type")
    if content not in CONTENT_TYPES:
        return reject(TIER_SCHEMA, f"content_type not in controlled vocabulary: {content!r}")
    evidence = raw.get("evidence")
    if not isinstance(evidence, str):
        return reject(TIER_SCHEMA, "missing evidence")
    confidence = raw.get("confidence")
    if isinstance(confidence, bool) or not isinstance(confidence, (int, float)):
        return reject(TIER_SCHEMA, "confidence is not a number")
    if not (0.0 <= float(confidence) <= 1.0):
        return reject(TIER_SCHEMA, f"confidence out of range: {confidence}")
    rationale = raw.get("rationale", "")
    if not isinstance(rationale, str):
        return reject(TIER_SCHEMA, "rationale is not a string")

    if not evidence.strip():
        return reject(TIER_SEMANTIC, "empty evidence span")
    if evidence not in context.window_text:
        return reject(TIER_SEMANTIC, "evidence is not a verbatim span of the context")

    trimmed = name.strip()
    if trimmed.casefold() in blocklist:
        return reject(TIER_DOMAIN, f"blocklisted non-dataset name: {trimmed}")
    try:
        normalized = normalize_name(trimmed)
    except NormalizesToEmpty:
        return reject(TIER_DOMAIN, f"name is only generic type words: {trimmed}")
    if normalized in blocklist:
        return reject(TIER_DOMAIN, f"blocklisted non-dataset name: {trimmed}")

    urls = find_urls(context.window_text)
    return DatasetMention(
        surface_name=trimmed,
        usage_role=role,
        content_type=content,
        evidence=evidence,
        confidence=float(confidence),
        rationale=rationale,
        citing_id=context.citing_id,
        cited_id=context.cited_id,
        context_id=context.context_id,
        extracted_url=urls[0] if urls else None,
    )


def _call_with_retry(backend: ExtractorBackend, request: BackendRequest, cfg: BackendConfig, log: WireLog | None, context_id: str) -> str:
    last_error: Exception | None = None
    for attempt in range(1, cfg.retry_limit + 1):
        try:
            text = backend.complete(request)
            if log is not None:
                log.record(request, text, context_id=context_id, attempt=attempt)
            return text
        except BackendError as exc:
            last_error = exc
            if log is not None:
                log.record(request, None, context_id=context_id, attempt=attempt, error=str(exc))
            if attempt < cfg.retry_limit:
                time.sleep(cfg.retry_base_delay * (2 ** (attempt - 1)))
    raise BackendError(f"backend failed after {cfg.retry_limit} attempts: {last_error}")


def _parse_json_with_repair(
    backend: ExtractorBackend, request: BackendRequest, cfg: BackendConfig, log: WireLog | None, context_id: str
) -> dict | None:
    """Call the backend, parse JSON, and re-prompt once on unparseable output."""
    text = _call_with_retry(backend, request, cfg, log, context_id)
    for _ in range(2):
        try:
            parsed = json.loads(text)
            if isinstance(parsed, dict):
                return parsed
        except json.JSONDecodeError:
            pass
        repair = replace(request, user=request.user + "\n\nYour previous reply was not valid JSON. Output valid JSON only.")
        text = _call_with_retry(backend, repair, cfg, log, context_id)
    try:
        parsed = json.loads(text)
        return parsed if isinstance(parsed, dict) else None
    except json.JSONDecodeError:
        return None


@dataclass
class ContextOutcome:
    context: CitationContext
    kept: list[tuple[DatasetMention, RelevanceVerdict]] = field(default_factory=list)
    rejections: list[Rejection] = field(default_factory=list)
    raw_count: int = 0
    failed: bool = False
    error: str = ""


@dataclass
class ExtractionBatch:
    mentions: list[DatasetMention]
    verdicts: dict  # context_id -> list of verdict dicts aligned with kept mentions
    rejections: list[Rejection]
    stats: dict

    def mention_rows(self) -> list[dict]:
        rows = []
        verdict_iters = {cid: iter(v) for cid, v in self.verdicts.items()}
        for mention in self.mentions:
            row = mention.to_dict()
            row["relevance"] = next(verdict_iters[mention.context_id])
            rows.append(row)
        return rows


def extract_context(
    backend: ExtractorBackend,
    context: CitationContext,
    query: Query,
    cfg: BackendConfig,
    blocklist: frozenset[str],
    log: WireLog | None = None,
) -> ContextOutcome:
    """Run extraction plus per-mention relevance for one context."""
    outcome = ContextOutcome(context=context)
    try:
        parsed = _parse_json_with_repair(backend, build_extraction_prompt(context, query), cfg, log, context.context_id)
    except BackendError as exc:
        outcome.failed = True
        outcome.error = str(exc)
        return outcome
    if parsed is None or not isinstance(parsed.get("datasets"), list):
        outcome.rejections.append(
            Rejection(tier=TIER_SCHEMA, reason="unparseable extraction output", context_id=context.context_id, record={})
        )
        return outcome

    records = parsed["datasets"]
    outcome.raw_count = len(records)
    survivors: list[DatasetMention] = []
    for raw in records:
        result = validate_mention(raw, context, blocklist)
        if isinstance(result, Rejection):
            outcome.rejections.append(result)
        else:
            survivors.append(result)

    for mention in survivors:
        verdict = _judge_relevance(backend, mention, context, query, cfg, log)
        keep = verdict.is_relevant or (verdict.undetermined and cfg.keep_undetermined)
        if keep:
            outcome.kept.append((mention, verdict))
        else:
            tier = "backend" if verdict.undetermined else "relevance"
            outcome.rejections.append(
                Rejection(
                    tier=tier,
                    reason=verdict.reasoning or "judged not relevant to the research question",
                    context_id=context.context_id,
                    record=mention.to_dict(),
                )
            )
    return outcome


def _judge_relevance(
    backend: ExtractorBackend,
    mention: DatasetMention,
    context: CitationContext,
    query: Query,
    cfg: BackendConfig,
    log: WireLog | None,
) -> RelevanceVerdict:
    try:
        parsed = _parse_json_with_repair(backend, build_relevance_prompt(mention, context, query), cfg, log, context.context_id)
    except BackendError as exc:
        return RelevanceVerdict(is_relevant=False, confidence=0.0, reasoning=f"backend failure: {exc}", undetermined=True)
    if parsed is None or not isinstance(parsed.get("is_relevant"), bool):
        return RelevanceVerdict(is_relevant=False, confidence=0.0, reasoning="unparseable relevance output", undetermined=True)
    confidence = parsed.get("confidence")
    if isinstance(confidence, bool) or not isinstance(confidence, (int, float)) or not (0.0 <= float(confidence) <= 1.0):
        confidence = 0.0
    reasoning = parsed.get("reasoning", "")
    if not isinstance(reasoning, str):
        reasoning = ""
    return RelevanceVerdict(is_relevant=parsed["is_relevant"], confidence=float(confidence), reasoning=reasoning)


def run_extraction(
    backend: ExtractorBackend,
    contexts: list[CitationContext],
    query: Query,
    cfg: BackendConfig,
    blocklist: frozenset[str],
    log: WireLog | None = None,
) -> ExtractionBatch:
    """Extract and filter mentions for a batch of contexts.

    Contexts are processed concurrently but results are reassembled in
    context-id order, so the output is independent of scheduling.
    """
    ordered = sorted(contexts, key=lambda c: c.context_id)

    def work(context: CitationContext) -> ContextOutcome:
        return extract_context(backend, context, query, cfg, blocklist, log)

    if cfg.parallelism > 1 and len(ordered) > 1:
        with ThreadPoolExecutor(max_workers=cfg.parallelism) as pool:
            outcomes = list(pool.map(work, ordered))
    else:
        outcomes = [work(c) for c in ordered]

    mentions: list[DatasetMention] = []
    verdicts: dict[str, list[dict]] = {}
    rejections: list[Rejection] = []
    stats = {
        "contexts_processed": len(ordered),
        "contexts_failed": 0,
        "raw_mentions": 0,
        "validated_mentions": 0,
        "relevant_mentions": 0,
        "rejected_schema": 0,
        "rejected_semantic": 0,
        "rejected_domain": 0,
        "rejected_relevance": 0,
        "rejected_backend": 0,
    }
    for outcome in outcomes:
        if outcome.failed:
            stats["contexts_failed"] += 1
            continue
        stats["raw_mentions"] += outcome.raw_count
        validated = len(outcome.kept) + sum(1 for r in outcome.rejections if r.tier in ("relevance", "backend"))
        stats["validated_mentions"] += validated
        stats["relevant_mentions"] += len(outcome.kept)
        for rejection in outcome.rejections:
            key = f"rejected_{rejection.tier}"
            if key in stats:
                stats[key] += 1
            rejections.append(rejection)
        if outcome.kept:
            verdicts[outcome.context.context_id] = [v.to_dict() for _, v in outcome.kept]
            mentions.extend(m for m, _ in outcome.kept)
    return ExtractionBatch(mentions=mentions, verdicts=verdicts, rejections=rejections, stats=stats)

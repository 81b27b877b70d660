"""Extractor and search backends behind one wire contract.

A request carries system+user text plus a response-schema descriptor; a
response is the backend's raw text, expected to parse as JSON matching the
schema. Two extractor implementations: an HTTP structured-chat client
(temperature 0) and a deterministic rule-based stub that makes the whole
pipeline a pure function for tests and offline use. The stub reads the
same prompts the HTTP backend would receive, so both sides of the wire
contract are exercised identically.
"""

from __future__ import annotations

import json
import re
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

import httpx

STOPWORDS = frozenset(
    "a an the and or of for to in on with from by at as is are was were be been this that these those".split()
)


@dataclass(frozen=True)
class BackendRequest:
    purpose: str  # "extract" or "relevance"
    system: str
    user: str
    response_schema: dict

    def to_dict(self) -> dict:
        return {
            "purpose": self.purpose,
            "system": self.system,
            "user": self.user,
            "response_schema": self.response_schema,
        }


class BackendError(Exception):
    """Transport or protocol failure talking to a backend."""


class ExtractorBackend(Protocol):
    def complete(self, request: BackendRequest) -> str: ...


class WireLog:
    """Append-only JSONL audit log of every request/response pair."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._seq = 0

    def record(self, request: BackendRequest, response_text: str | None, *, context_id: str = "", attempt: int = 1, error: str | None = None):
        entry = {
            "seq": self._seq,
            "context_id": context_id,
            "attempt": attempt,
            "request": request.to_dict(),
            "response": response_text,
            "error": error,
        }
        with self._lock:
            entry["seq"] = self._seq
            self._seq += 1
            with open(self.path, "a", encoding="utf-8") as f:
                f.write(json.dumps(entry, ensure_ascii=False, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# Deterministic stub extractor

_NAME_TOKEN = r"[A-Z][A-Za-z0-9]*(?:[-.][A-Za-z0-9]+)*"
_NAME_CONT = r"(?:[A-Z][A-Za-z0-9]*(?:[-.][A-Za-z0-9]+)*|\d[\w.]*)"
_NAME = rf"{_NAME_TOKEN}(?:\s+{_NAME_CONT})*"

# Usage cues, most specific first. The verb decides the usage role.
_CUES = (
    (re.compile(rf"\bevaluat(?:ed?|es|ing)\s+(?:on|against)\s+({_NAME})"), "Evaluate Against", 0.9),
    (re.compile(rf"\btrain(?:ed|s)?\s+on\s+({_NAME})"), "Use", 0.85),
    (re.compile(rf"\bus(?:e|es|ed|ing)\s+({_NAME})"), "Use", 0.85),
    (re.compile(rf"\b(?:extend(?:s|ed)?|adapt(?:s|ed)?|modif(?:y|ies|ied)|augment(?:s|ed)?)\s+({_NAME})"), "Modify", 0.8),
)

_RQ_RE = re.compile(r'Research Question \(RQ\):\s*\n"(.*?)"', re.DOTALL)
_CONTEXT_RE = re.compile(r"\[BEGIN CONTEXT\]\n(.*?)\n\[END CONTEXT\]", re.DOTALL)
_CANDIDATE_RE = re.compile(r'"name":\s*"(.*?)"')


def _content_keywords(text: str) -> set:
    tokens = re.findall(r"[a-z0-9]+", text.lower())
    keywords = {t for t in tokens if len(t) >= 4 and t not in STOPWORDS}
    if not keywords:
        keywords = {t for t in tokens if len(t) >= 2 and t not in STOPWORDS}
    return keywords


class StubExtractorBackend:
    """Rule-based extractor: a pure function of the prompt text.

    Extraction scans the context window for usage cues ("evaluated on X",
    "we use X", "extended X") followed by a capitalized name. Relevance is
    a conservative keyword-overlap test between the research question and
    the window. Safe under concurrent invocation.
    """

    def complete(self, request: BackendRequest) -> str:
        if request.purpose == "extract":
            return self._extract(request.user)
        if request.purpose == "relevance":
            return self._relevance(request.user)
        raise BackendError(f"unknown request purpose: {request.purpose}")

    def _extract(self, user: str) -> str:
        m = _CONTEXT_RE.search(user)
        window = m.group(1) if m else ""
        datasets = []
        for regex, role, confidence in _CUES:
            for match in regex.finditer(window):
                datasets.append(
                    {
                        "name": match.group(1),
                        "usage_role": role,
                        "content_type": "Produced Resource",
                        "evidence": match.group(0),
                        "confidence": confidence,
                        "rationale": f"usage cue {match.group(0).split()[0]!r} precedes the name in the context",
                        "_span": match.start(1),
                    }
                )
        datasets.sort(key=lambda d: d.pop("_span"))
        return json.dumps({"datasets": datasets}, ensure_ascii=False)

    def _relevance(self, user: str) -> str:
        rq_match = _RQ_RE.search(user)
        ctx_match = _CONTEXT_RE.search(user)
        name_match = _CANDIDATE_RE.search(user)
        rq = rq_match.group(1) if rq_match else ""
        window = ctx_match.group(1) if ctx_match else ""
        candidate = name_match.group(1) if name_match else ""
        keywords = _content_keywords(rq)
        window_tokens = set(re.findall(r"[a-z0-9]+", (window + " " + candidate).lower()))
        shared = sorted(keywords & window_tokens)
        if shared:
            verdict = {
                "is_relevant": True,
                "confidence": 0.9,
                "reasoning": "context shares query terms: " + ", ".join(shared),
            }
        else:
            verdict = {
                "is_relevant": False,
                "confidence": 0.9,
                "reasoning": "no query term appears in the context",
            }
        return json.dumps(verdict, ensure_ascii=False)


# ---------------------------------------------------------------------------
# HTTP structured-chat extractor


class HttpExtractorBackend:
    """OpenAI-style chat-completions client with enforced response schema.

    Sends temperature 0 for deterministic decoding and forwards the
    request's response schema via response_format. Raises BackendError on
    transport or protocol failures; retrying is the caller's concern.
    """

    def __init__(self, endpoint: str, model: str, timeout: float = 60.0, client: httpx.Client | None = None):
        if not endpoint:
            raise ValueError("http backend requires an endpoint")
        self.endpoint = endpoint.rstrip("/")
        self.model = model
        self.timeout = timeout
        self._client = client or httpx.Client(timeout=timeout)

    def complete(self, request: BackendRequest) -> str:
        payload = {
            "model": self.model,
            "temperature": 0.0,
            "messages": [
                {"role": "system", "content": request.system},
                {"role": "user", "content": request.user},
            ],
            "response_format": {
                "type": "json_schema",
                "json_schema": {"name": request.purpose, "schema": request.response_schema},
            },
        }
        try:
            response = self._client.post(f"{self.endpoint}/chat/completions", json=payload)
            response.raise_for_status()
            body = response.json()
            return body["choices"][0]["message"]["content"]
        except (httpx.HTTPError, KeyError, IndexError, TypeError, ValueError) as exc:
            raise BackendError(f"chat backend failure: {exc}") from exc

    def close(self):
        self._client.close()


def make_extractor_backend(kind: str, endpoint: str = "", model: str = "", timeout: float = 60.0) -> ExtractorBackend:
    if kind == "stub":
        return StubExtractorBackend()
    if kind == "http":
        return HttpExtractorBackend(endpoint=endpoint, model=model, timeout=timeout)
    raise ValueError(f"unknown extractor backend kind: {kind}")


# ---------------------------------------------------------------------------
# External search backends (link tier 3)


class SearchBackend(Protocol):
    def search(self, query: str) -> list[tuple[str, str]]: ...


class NullSearchBackend:
    """Always-empty search; the offline default."""

    def search(self, query: str) -> list[tuple[str, str]]:
        return []


class TableSearchBackend:
    """Fixture-table search: case-insensitive lookup in a JSON mapping."""

    def __init__(self, table: dict):
        self._table = {k.lower(): [(r[0], r[1]) for r in v] for k, v in table.items()}

    @classmethod
    def from_file(cls, path: str | Path) -> "TableSearchBackend":
        return cls(json.loads(Path(path).read_text(encoding="utf-8")))

    def search(self, query: str) -> list[tuple[str, str]]:
        return list(self._table.get(query.lower(), []))


class HttpSearchBackend:
    """GET {endpoint}?q=... expecting a JSON list of {url, title} records."""

    def __init__(self, endpoint: str, timeout: float = 30.0, client: httpx.Client | None = None):
        if not endpoint:
            raise ValueError("http search backend requires an endpoint")
        self.endpoint = endpoint
        self._client = client or httpx.Client(timeout=timeout)

    def search(self, query: str) -> list[tuple[str, str]]:
        try:
            response = self._client.get(self.endpoint, params={"q": query})
            response.raise_for_status()
            body = response.json()
            return [(str(r["url"]), str(r.get("title", ""))) for r in body]
        except (httpx.HTTPError, KeyError, TypeError, ValueError) as exc:
            raise BackendError(f"search backend failure: {exc}") from exc


def make_search_backend(kind: str, table_path: str | None = None, endpoint: str = "", timeout: float = 30.0) -> SearchBackend:
    if kind == "none":
        return NullSearchBackend()
    if kind == "table":
        if not table_path:
            raise ValueError("table search backend requires table_path")
        return TableSearchBackend.from_file(table_path)
    if kind == "http":
        return HttpSearchBackend(endpoint=endpoint, timeout=timeout)
    raise ValueError(f"unknown search backend kind: {kind}")

"""Link records and persistent-identifier helpers shared across stages."""

from __future__ import annotations

import re
from dataclasses import dataclass
from urllib.parse import urlparse

# DOI syntax: 10.<registrant>/<suffix>
DOI_RE = re.compile(r"^10\.\d{4,9}/\S+$")
HANDLE_RE = re.compile(r"^(?!10\.)\d+(\.\d+)*/\S+$")
ARK_RE = re.compile(r"^ark:/?\d{5,}/\S+$", re.IGNORECASE)
URL_RE = re.compile(r"https?://[^\s<>\"')\]}]+")

# Kinds in preference order: persistent identifiers before plain URLs.
PID_KINDS = ("DOI", "HANDLE", "ARK")
_KIND_ORDER = {"DOI": 0, "HANDLE": 1, "ARK": 2, "URL": 3}

# Tiers of the link-retrieval strategy, in precedence order.
TIER_CONTEXT = "ContextExtracted"
TIER_CITED_DOI = "CitedPaperDOI"
TIER_SEARCH = "ExternalSearch"


@dataclass(frozen=True)
class LinkRecord:
    kind: str  # DOI | HANDLE | ARK | URL
    value: str
    tier: str  # ContextExtracted | CitedPaperDOI | ExternalSearch
    trusted: bool = False

    @property
    def is_pid(self) -> bool:
        return self.kind in PID_KINDS

    def to_dict(self) -> dict:
        return {"kind": self.kind, "value": self.value, "tier": self.tier, "trusted": self.trusted}

    @classmethod
    def from_dict(cls, d: dict) -> "LinkRecord":
        return cls(kind=d["kind"], value=d["value"], tier=d["tier"], trusted=bool(d.get("trusted", False)))


def extract_doi(text: str) -> str | None:
    """Pull a DOI out of a raw identifier or a doi.org URL, if any."""
    text = text.strip()
    m = re.search(r"(?:doi\.org/|doi:|^)(10\.\d{4,9}/[^\s\"'<>]+)", text, re.IGNORECASE)
    if m:
        candidate = m.group(1).rstrip(".,;")
        if DOI_RE.match(candidate):
            return candidate
    return None


def classify_value(value: str) -> str:
    """Classify a raw identifier string into a link kind."""
    doi = extract_doi(value)
    if doi:
        return "DOI"
    if ARK_RE.match(value):
        return "ARK"
    if HANDLE_RE.match(value):
        return "HANDLE"
    return "URL"


def link_from_extracted(value: str, tier: str = TIER_CONTEXT) -> LinkRecord:
    """Build a LinkRecord from a URL or identifier found in a context window.

    doi.org URLs are folded into proper DOI records so PID preference and
    trust classification see them as persistent identifiers.
    """
    kind = classify_value(value)
    if kind == "DOI":
        value = extract_doi(value) or value
    return LinkRecord(kind=kind, value=value, tier=tier)


def find_urls(text: str) -> list[str]:
    """All http(s) URLs in a text, in order, with trailing punctuation trimmed."""
    return [u.rstrip(".,;") for u in URL_RE.findall(text)]


def url_host(url: str) -> str | None:
    try:
        host = urlparse(url).hostname
    except ValueError:
        return None
    return host.lower() if host else None


def host_matches(host: str, pattern: str) -> bool:
    """True when host equals the pattern or is a subdomain of it."""
    pattern = pattern.lower().lstrip("*.")
    return host == pattern or host.endswith("." + pattern)


def sort_links(links: list[LinkRecord]) -> list[LinkRecord]:
    """Deterministic order: persistent identifiers first, then by kind/value."""
    return sorted(links, key=lambda l: (_KIND_ORDER.get(l.kind, 9), l.value, l.tier))

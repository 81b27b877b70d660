"""Canonical name normalization for dataset surface forms.

normalize_name maps a raw surface form to a canonical key through a fixed
pipeline: Unicode NFKC, outer quote/bracket stripping, parenthetical
removal, generic type-word and split-marker removal, punctuation folding,
lowercasing, and leading-article stripping. The pipeline is a fixed point:
normalizing an already-normalized key returns it unchanged.
"""

from __future__ import annotations

import re
import unicodedata

from .config import GENERIC_TYPE_WORDS, LEADING_ARTICLES, SPLIT_MARKERS


class NormalizesToEmpty(ValueError):
    """The surface form contains nothing but generic or removable text."""


_QUOTES = {'"', "'", "‘", "’", "“", "”", "`"}
_BRACKETS = {"(": ")", "[": "]", "{": "}"}
_PARENTHETICAL_RE = re.compile(r"\([^()]*\)")


def _strip_enclosure(text: str) -> str:
    """Peel matching outer quotes and bracket pairs."""
    while len(text) >= 2:
        first, last = text[0], text[-1]
        if first in _QUOTES and last in _QUOTES:
            text = text[1:-1].strip()
        elif _BRACKETS.get(first) == last:
            text = text[1:-1].strip()
        else:
            break
    return text


def _remove_tokens(text: str, tokens: frozenset[str]) -> str:
    kept = [t for t in text.split() if t.lower() not in tokens]
    return " ".join(kept)


def normalize_name(
    surface: str,
    generic_words: frozenset[str] = GENERIC_TYPE_WORDS,
    split_markers: frozenset[str] = SPLIT_MARKERS,
    articles: tuple[str, ...] = LEADING_ARTICLES,
) -> str:
    """Normalize a dataset surface form to its canonical key.

    Raises NormalizesToEmpty when nothing identifying remains, e.g. for a
    bare "dataset" or "the training corpus".
    """
    removable = frozenset(generic_words) | frozenset(split_markers)

    text = unicodedata.normalize("NFKC", surface).strip()
    text = _strip_enclosure(text)
    while _PARENTHETICAL_RE.search(text):
        text = _PARENTHETICAL_RE.sub(" ", text)
    text = _remove_tokens(text, removable)
    text = " ".join(text.split())
    text = "".join(ch if ch.isalnum() or ch.isspace() else " " for ch in text)
    text = text.lower()
    # Punctuation folding can expose new removable tokens ("ACE-dataset").
    text = _remove_tokens(text, removable)
    tokens = text.split()
    while tokens and tokens[0] in articles:
        tokens = tokens[1:]
    result = " ".join(tokens)
    if not result:
        raise NormalizesToEmpty(f"nothing identifying remains in {surface!r}")
    return result


def norm_form(surface: str) -> str:
    """Forgiving variant for scoring: falls back to folded text when the
    strict pipeline leaves nothing."""
    try:
        return normalize_name(surface)
    except NormalizesToEmpty:
        folded = "".join(ch if ch.isalnum() or ch.isspace() else " " for ch in unicodedata.normalize("NFKC", surface))
        return " ".join(folded.lower().split())

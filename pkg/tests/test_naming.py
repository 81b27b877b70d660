"""Canonical-name normalization behavior."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from citescout.naming import NormalizesToEmpty, norm_form, normalize_name

from .cases import NORMALIZATION_CASES


@pytest.mark.parametrize("surface,expected", NORMALIZATION_CASES, ids=[c[0] for c in NORMALIZATION_CASES])
def test_hand_cases(surface, expected):
    if expected is None:
        with pytest.raises(NormalizesToEmpty):
            normalize_name(surface)
    else:
        assert normalize_name(surface) == expected


@pytest.mark.parametrize("surface,expected", [c for c in NORMALIZATION_CASES if c[1] is not None])
def test_hand_cases_are_fixed_points(surface, expected):
    assert normalize_name(expected) == expected


_SURFACE_ALPHABET = st.sampled_from(
    list("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789")
    + list(" -.()[]{}'\"/,:;")
    + ["dataset", "corpus", "benchmark", "the ", " training ", "“", "”", "é"]
)
_SURFACES = st.lists(_SURFACE_ALPHABET, min_size=0, max_size=24).map("".join)


@given(_SURFACES)
@settings(max_examples=300)
def test_idempotent_on_arbitrary_text(surface):
    try:
        once = normalize_name(surface)
    except NormalizesToEmpty:
        return
    assert normalize_name(once) == once


@given(_SURFACES)
@settings(max_examples=300)
def test_output_shape(surface):
    try:
        result = normalize_name(surface)
    except NormalizesToEmpty:
        return
    assert result == result.strip()
    assert "  " not in result
    assert result == result.lower()
    assert all(ch.isalnum() or ch == " " for ch in result)


@given(_SURFACES)
@settings(max_examples=300)
def test_norm_form_never_raises_and_is_idempotent(surface):
    form = norm_form(surface)
    assert isinstance(form, str)
    assert norm_form(form) == form


def test_norm_form_falls_back_when_strict_pipeline_empties():
    assert norm_form("dataset") == "dataset"
    assert norm_form("the training corpus") == "the training corpus"
    assert norm_form("ACE 2005 (zh)") == "ace 2005"


def test_deterministic_across_calls():
    for surface, expected in NORMALIZATION_CASES:
        if expected is None:
            continue
        assert normalize_name(surface) == normalize_name(surface)


def test_custom_word_lists_respected():
    assert normalize_name("Shared Task", generic_words=frozenset({"task"}), split_markers=frozenset()) == "shared"
    with pytest.raises(NormalizesToEmpty):
        normalize_name("Shared Task", generic_words=frozenset({"task", "shared"}), split_markers=frozenset())

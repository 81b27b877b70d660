"""Evaluation harness: gold standards, match tiers, and recall reports.

Matching runs at three cumulative tiers. Exact requires verbatim string
equality between a predicted surface form and a gold name or alias. Norm
compares canonical forms. Fuzzy starts from the norm matches and
greedily assigns remaining gold items to remaining predictions by
normalized Levenshtein similarity, one prediction per gold item, highest
similarity first. By construction every exact match is a norm match and
every norm match is a fuzzy match, at any threshold.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, Union

from .naming import norm_form
from .resolution import ResolvedEntity

Prediction = Union[ResolvedEntity, str]

DEFAULT_TAU = 0.9


class EmptyGoldError(ValueError):
    """A gold standard with no items cannot anchor recall."""


class GoldFormatError(ValueError):
    """The gold file is malformed."""


@dataclass(frozen=True)
class GoldItem:
    name: str
    aliases: tuple[str, ...] = ()

    @property
    def variants(self) -> tuple[str, ...]:
        return (self.name,) + self.aliases


@dataclass(frozen=True)
class GoldStandard:
    label: str
    items: tuple[GoldItem, ...]

    def __len__(self) -> int:
        return len(self.items)


def load_gold(path: str | Path) -> GoldStandard:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise GoldFormatError(f"gold file is not valid JSON: {exc}") from exc
    if not isinstance(data, dict) or not isinstance(data.get("items"), list):
        raise GoldFormatError("gold file must be an object with an 'items' list")
    items = []
    for raw in data["items"]:
        if not isinstance(raw, dict) or not isinstance(raw.get("name"), str) or not raw["name"].strip():
            raise GoldFormatError(f"gold item needs a non-empty name: {raw!r}")
        aliases = raw.get("aliases", [])
        if not isinstance(aliases, list) or any(not isinstance(a, str) for a in aliases):
            raise GoldFormatError(f"gold aliases must be strings: {raw!r}")
        items.append(GoldItem(name=raw["name"].strip(), aliases=tuple(a.strip() for a in aliases if a.strip())))
    if not items:
        raise EmptyGoldError("gold standard has no items")
    return GoldStandard(label=str(data.get("query", data.get("label", ""))), items=tuple(items))


def prediction_variants(pred: Prediction) -> tuple[str, ...]:
    if isinstance(pred, ResolvedEntity):
        return (pred.display_name,) + pred.aliases
    return (pred,)


def levenshtein(a: str, b: str) -> int:
    """Plain edit distance, quadratic but exact."""
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cost = 0 if ca == cb else 1
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost))
        prev = cur
    return prev[-1]


def levenshtein_bounded(a: str, b: str, limit: int) -> int:
    """Edit distance clamped at limit+1, computed within a diagonal band."""
    la, lb = len(a), len(b)
    if abs(la - lb) > limit:
        return limit + 1
    if la > lb:
        a, b, la, lb = b, a, lb, la
    infinity = limit + 1
    prev = [j if j <= limit else infinity for j in range(lb + 1)]
    for i in range(1, la + 1):
        lo = max(1, i - limit)
        hi = min(lb, i + limit)
        cur = [infinity] * (lb + 1)
        if i <= limit:
            cur[0] = i
        row_min = infinity
        for j in range(lo, hi + 1):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            value = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost)
            if value > infinity:
                value = infinity
            cur[j] = value
            if value < row_min:
                row_min = value
        if min(row_min, cur[0]) > limit:
            return infinity
        prev = cur
    return min(prev[lb], infinity)


def similarity(a: str, b: str) -> float:
    """Normalized similarity: 1 - distance / max length. Empty == empty is 1."""
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0
    return 1.0 - levenshtein(a, b) / longest


def _distance_limit(longest: int, tau: float) -> int:
    """Largest distance whose similarity still reaches tau.

    Aligned with the float comparison 1 - d/longest >= tau so the banded
    search admits exactly the pairs a full scan would.
    """
    limit = min(longest, int((1.0 - tau) * longest + 1e-9))
    while limit + 1 <= longest and 1.0 - (limit + 1) / longest >= tau:
        limit += 1
    while limit > 0 and 1.0 - limit / longest < tau:
        limit -= 1
    return limit


def _similarity_at_least(a: str, b: str, tau: float) -> float | None:
    """Similarity if it reaches tau, else None; avoids full DP when hopeless."""
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0 if 1.0 >= tau else None
    limit = _distance_limit(longest, tau)
    distance = levenshtein_bounded(a, b, limit)
    if distance > limit:
        return None
    return 1.0 - distance / longest


def match_exact(predictions: Sequence[Prediction], gold: GoldStandard) -> dict[str, int]:
    """Gold name -> index of the first prediction sharing a verbatim variant."""
    matched: dict[str, int] = {}
    for item in gold.items:
        for index, pred in enumerate(predictions):
            if any(gv == pv for gv in item.variants for pv in prediction_variants(pred)):
                matched[item.name] = index
                break
    return matched


def match_norm(predictions: Sequence[Prediction], gold: GoldStandard) -> dict[str, int]:
    """Gold name -> index of the first prediction sharing a canonical form."""
    pred_forms = [frozenset(norm_form(v) for v in prediction_variants(p)) for p in predictions]
    matched: dict[str, int] = {}
    for item in gold.items:
        gold_forms = {norm_form(v) for v in item.variants}
        for index, forms in enumerate(pred_forms):
            if gold_forms & forms:
                matched[item.name] = index
                break
    return matched


def match_fuzzy(predictions: Sequence[Prediction], gold: GoldStandard, tau: float = DEFAULT_TAU) -> dict[str, int]:
    """Norm matches plus a greedy one-to-one assignment of the remainder.

    Candidate pairs are ordered by similarity, then gold name, then
    prediction index, so the assignment is deterministic. Predictions
    that already satisfy a norm match are not reused.
    """
    matched = match_norm(predictions, gold)
    pred_forms = [tuple(norm_form(v) for v in prediction_variants(p)) for p in predictions]
    consumed = set()
    # Predictions participating in any norm match are off the table.
    gold_forms_all = {norm_form(v) for item in gold.items if item.name in matched for v in item.variants}
    for index, forms in enumerate(pred_forms):
        if any(f in gold_forms_all for f in forms):
            consumed.add(index)

    candidates = []
    for item in gold.items:
        if item.name in matched:
            continue
        gold_forms = [norm_form(v) for v in item.variants]
        for index, forms in enumerate(pred_forms):
            if index in consumed:
                continue
            best = None
            for gf in gold_forms:
                for pf in forms:
                    sim = _similarity_at_least(gf, pf, tau)
                    if sim is not None and (best is None or sim > best):
                        best = sim
            if best is not None:
                candidates.append((-best, item.name, index))
    candidates.sort()
    assigned_gold = set()
    assigned_pred = set()
    for neg_sim, gold_name, index in candidates:
        if gold_name in assigned_gold or index in assigned_pred:
            continue
        matched[gold_name] = index
        assigned_gold.add(gold_name)
        assigned_pred.add(index)
    return matched


@dataclass(frozen=True)
class EvaluationReport:
    label: str
    gold_count: int
    entity_count: int
    mention_count: int
    exact_count: int
    norm_count: int
    fuzzy_count: int
    exact_recall: float
    norm_recall: float
    fuzzy_recall: float
    fuzzy_gain: float
    redundancy: float
    trusted_pct: float
    with_pid_pct: float
    matches_norm: tuple[tuple[str, str], ...]
    matches_fuzzy: tuple[tuple[str, str], ...]

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "gold_count": self.gold_count,
            "entity_count": self.entity_count,
            "mention_count": self.mention_count,
            "exact_count": self.exact_count,
            "norm_count": self.norm_count,
            "fuzzy_count": self.fuzzy_count,
            "exact_recall": self.exact_recall,
            "norm_recall": self.norm_recall,
            "fuzzy_recall": self.fuzzy_recall,
            "fuzzy_gain": self.fuzzy_gain,
            "redundancy": self.redundancy,
            "trusted_pct": self.trusted_pct,
            "with_pid_pct": self.with_pid_pct,
            "matches_norm": [list(pair) for pair in self.matches_norm],
            "matches_fuzzy": [list(pair) for pair in self.matches_fuzzy],
        }


def _display_of(pred: Prediction) -> str:
    return pred.display_name if isinstance(pred, ResolvedEntity) else pred


def compute_report(
    entities: Sequence[Prediction],
    gold: GoldStandard,
    mention_count: int,
    tau: float = DEFAULT_TAU,
) -> EvaluationReport:
    """Recall at all three tiers plus redundancy and link-quality shares.

    Recall percentages are over gold items. Redundancy measures surplus
    mentions per entity. The trusted share is taken over norm-matched
    entities; the identifier share is over all entities.
    """
    if len(gold) == 0:
        raise EmptyGoldError("gold standard has no items")
    exact = match_exact(entities, gold)
    norm = match_norm(entities, gold)
    fuzzy = match_fuzzy(entities, gold, tau)

    gold_count = len(gold)
    entity_count = len(entities)

    def recall(matched: dict) -> float:
        return 100.0 * len(matched) / gold_count

    matched_entities = {norm[name] for name in norm}
    trusted = sum(
        1
        for index in matched_entities
        if isinstance(entities[index], ResolvedEntity) and entities[index].has_trusted_link()
    )
    with_pid = sum(1 for e in entities if isinstance(e, ResolvedEntity) and e.has_pid())

    return EvaluationReport(
        label=gold.label,
        gold_count=gold_count,
        entity_count=entity_count,
        mention_count=mention_count,
        exact_count=len(exact),
        norm_count=len(norm),
        fuzzy_count=len(fuzzy),
        exact_recall=recall(exact),
        norm_recall=recall(norm),
        fuzzy_recall=recall(fuzzy),
        fuzzy_gain=recall(fuzzy) - recall(norm),
        redundancy=(mention_count - entity_count) / max(1, entity_count),
        trusted_pct=100.0 * trusted / len(matched_entities) if matched_entities else 0.0,
        with_pid_pct=100.0 * with_pid / entity_count if entity_count else 0.0,
        matches_norm=tuple(sorted((name, _display_of(entities[idx])) for name, idx in norm.items())),
        matches_fuzzy=tuple(sorted((name, _display_of(entities[idx])) for name, idx in fuzzy.items())),
    )


def macro_average(reports: Sequence[EvaluationReport]) -> dict:
    """Unweighted mean of each metric across queries."""
    if not reports:
        raise ValueError("macro average needs at least one report")
    n = len(reports)
    fields = (
        "exact_recall",
        "norm_recall",
        "fuzzy_recall",
        "fuzzy_gain",
        "redundancy",
        "trusted_pct",
        "with_pid_pct",
    )
    return {name: sum(getattr(r, name) for r in reports) / n for name in fields}


def format_report_table(reports: Sequence[EvaluationReport]) -> str:
    """Fixed-width text table, one row per query plus a macro-average row."""
    header = f"{'Query':<40} {'Gold':>5} {'Ent':>5} {'Exact%':>7} {'Norm%':>7} {'Fuzzy%':>7} {'Gain':>6} {'Redund':>7} {'Trust%':>7} {'PID%':>6}"
    lines = [header, "-" * len(header)]
    for r in reports:
        label = (r.label or "(unlabeled)")[:40]
        lines.append(
            f"{label:<40} {r.gold_count:>5} {r.entity_count:>5} {r.exact_recall:>7.2f} {r.norm_recall:>7.2f} "
            f"{r.fuzzy_recall:>7.2f} {r.fuzzy_gain:>6.2f} {r.redundancy:>7.2f} {r.trusted_pct:>7.2f} {r.with_pid_pct:>6.2f}"
        )
    if len(reports) > 1:
        avg = macro_average(reports)
        lines.append("-" * len(header))
        lines.append(
            f"{'Macro average':<40} {'':>5} {'':>5} {avg['exact_recall']:>7.2f} {avg['norm_recall']:>7.2f} "
            f"{avg['fuzzy_recall']:>7.2f} {avg['fuzzy_gain']:>6.2f} {avg['redundancy']:>7.2f} "
            f"{avg['trusted_pct']:>7.2f} {avg['with_pid_pct']:>6.2f}"
        )
    return "\n".join(lines) + "\n"

"""Naive reference implementations used as oracles in tests.

Everything here favours obviousness over speed: full dynamic-programming
edit distance with no banding, all-pairs candidate scans with no length
pruning. Production code must agree with these to the last decimal.
"""

from citescout.evaluation import GoldStandard, prediction_variants
from citescout.naming import norm_form


def oracle_levenshtein(a: str, b: str) -> int:
    rows = len(a) + 1
    cols = len(b) + 1
    table = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        table[i][0] = i
    for j in range(cols):
        table[0][j] = j
    for i in range(1, rows):
        for j in range(1, cols):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            table[i][j] = min(table[i - 1][j] + 1, table[i][j - 1] + 1, table[i - 1][j - 1] + cost)
    return table[-1][-1]


def oracle_similarity(a: str, b: str) -> float:
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0
    return 1.0 - oracle_levenshtein(a, b) / longest


def _pred_forms(predictions) -> list[list[str]]:
    return [[norm_form(v) for v in prediction_variants(p)] for p in predictions]


def _gold_forms(gold: GoldStandard) -> dict[str, list[str]]:
    return {item.name: [norm_form(v) for v in item.variants] for item in gold.items}


def oracle_match_exact(predictions, gold: GoldStandard) -> dict:
    matched = {}
    for item in gold.items:
        for index, pred in enumerate(predictions):
            hit = False
            for gv in item.variants:
                for pv in prediction_variants(pred):
                    if gv == pv:
                        hit = True
            if hit:
                matched[item.name] = index
                break
    return matched


def oracle_match_norm(predictions, gold: GoldStandard) -> dict:
    pred_forms = _pred_forms(predictions)
    gold_forms = _gold_forms(gold)
    matched = {}
    for item in gold.items:
        for index, forms in enumerate(pred_forms):
            if set(gold_forms[item.name]) & set(forms):
                matched[item.name] = index
                break
    return matched


def oracle_match_fuzzy(predictions, gold: GoldStandard, tau: float) -> dict:
    pred_forms = _pred_forms(predictions)
    gold_forms = _gold_forms(gold)
    matched = dict(oracle_match_norm(predictions, gold))

    matched_gold_forms = set()
    for item in gold.items:
        if item.name in matched:
            matched_gold_forms.update(gold_forms[item.name])
    consumed = set()
    for index, forms in enumerate(pred_forms):
        for form in forms:
            if form in matched_gold_forms:
                consumed.add(index)

    candidates = []
    for item in gold.items:
        if item.name in matched:
            continue
        for index, forms in enumerate(pred_forms):
            if index in consumed:
                continue
            best = None
            for gf in gold_forms[item.name]:
                for pf in forms:
                    sim = oracle_similarity(gf, pf)
                    if sim >= tau and (best is None or sim > best):
                        best = sim
            if best is not None:
                candidates.append((-best, item.name, index))
    candidates.sort()
    taken_gold = set()
    taken_pred = set()
    for neg_sim, name, index in candidates:
        if name in taken_gold or index in taken_pred:
            continue
        matched[name] = index
        taken_gold.add(name)
        taken_pred.add(index)
    return matched

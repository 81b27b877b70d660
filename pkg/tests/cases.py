"""Hand-built case tables shared between unit and acceptance tests.

NORMALIZATION_CASES maps raw surface forms to expected canonical keys;
an expected value of None means the form normalizes to nothing and must
raise. MALFORMED_RECORDS pairs invalid extraction records with the
validation tier expected to reject them, against VALIDATION_WINDOW.
"""

# 50 surface forms covering quotes, brackets, parentheticals, generic
# words, split markers, punctuation folding, unicode, and articles.
NORMALIZATION_CASES = [
    ("ACE 2005 (zh)", "ace 2005"),
    ("The ACE-2005 Dataset", "ace 2005"),
    ("ACE 2005", "ace 2005"),
    ("ace 2005", "ace 2005"),
    ('"GENIA"', "genia"),
    ("'GENIA'", "genia"),
    ("[MAVEN]", "maven"),
    ("(RAMS)", "rams"),
    ("{DuEE}", "duee"),
    ("“WikiEvents”", "wikievents"),
    ("TAC-KBP", "tac kbp"),
    ("TAC–KBP", "tac kbp"),
    ("MUC-4", "muc 4"),
    ("CoNLL-2003 shared task", "conll 2003 shared task"),
    ("OntoNotes 5.0", "ontonotes 5 0"),
    ("the FewEvent benchmark", "fewevent"),
    ("The PHEME rumour dataset", "pheme rumour"),
    ("ACE dataset", "ace"),
    ("ACE-dataset", "ace"),
    ("dataset", None),
    ("datasets", None),
    ("the corpus", None),
    ("training set", "set"),
    ("train/dev/test splits", "splits"),
    ("GENIA (2003)", "genia"),
    ("GENIA (v3.02)", "genia"),
    ("ImageNet", "imagenet"),
    ("ImageNet-1k", "imagenet 1k"),
    ("MS COCO", "ms coco"),
    ("MS-COCO", "ms coco"),
    ("The Penn Treebank", "penn treebank"),
    ("Penn Treebank (PTB)", "penn treebank"),
    ("  SQuAD  ", "squad"),
    ("SQuAD 2.0", "squad 2 0"),
    ("WikiText-103", "wikitext 103"),
    ("`BC5CDR`", "bc5cdr"),
    ("“The WSJ Corpus”", "wsj"),
    ("A Large-Scale Benchmark", "large scale"),
    ("an annotated corpus", "annotated"),
    ("The The", None),
    ("42", "42"),
    ("C#", "c"),
    ("(dataset)", None),
    ("０１２３", "0123"),
    ("ＡＣＥ", "ace"),
    ("Café Corpus", "café"),
    ("D’Alembert Set", "d alembert set"),
    ("the-dataset", None),
    ("RichERE (LDC2015E29)", "richere"),
    ("Test Collection", None),
]

# Window used when validating MALFORMED_RECORDS; evidence spans below are
# either verbatim substrings of this text or deliberately not.
VALIDATION_WINDOW = (
    "Prior work trained on OntoNotes for coreference [3]. "
    "We evaluate on ACE 2005 following standard splits. "
    "Results improve by two points on the benchmark."
)

_GOOD = {
    "name": "ACE 2005",
    "usage_role": "Evaluate Against",
    "content_type": "Produced Resource",
    "evidence": "evaluate on ACE 2005",
    "confidence": 0.9,
    "rationale": "usage verb precedes the name",
}


def _variant(**overrides) -> dict:
    record = dict(_GOOD)
    for key, value in overrides.items():
        if value is _OMIT:
            record.pop(key, None)
        else:
            record[key] = value
    return record


_OMIT = object()

# 30 invalid extraction records with the tier expected to catch each.
MALFORMED_RECORDS = [
    ("just a string", "schema"),
    (42, "schema"),
    (None, "schema"),
    (["name", "ACE 2005"], "schema"),
    ({}, "schema"),
    (_variant(name=""), "schema"),
    (_variant(name="   "), "schema"),
    (_variant(name=7), "schema"),
    (_variant(name=_OMIT), "schema"),
    (_variant(usage_role="Trains On"), "schema"),
    (_variant(usage_role=_OMIT), "schema"),
    (_variant(usage_role="use"), "schema"),
    (_variant(content_type="Resource"), "schema"),
    (_variant(content_type=_OMIT), "schema"),
    (_variant(evidence=_OMIT), "schema"),
    (_variant(evidence=3.5), "schema"),
    (_variant(confidence="high"), "schema"),
    (_variant(confidence=True), "schema"),
    (_variant(confidence=1.5), "schema"),
    (_variant(confidence=-0.1), "schema"),
    (_variant(rationale=99), "schema"),
    (_variant(evidence=""), "semantic"),
    (_variant(evidence="   "), "semantic"),
    (_variant(evidence="completely fabricated span"), "semantic"),
    (_variant(evidence="ace 2005"), "semantic"),
    (_variant(evidence="ACE  2005"), "semantic"),
    (_variant(name="BERT", evidence="Results improve by two points"), "domain"),
    (_variant(name="bert", evidence="Results improve by two points"), "domain"),
    (_variant(name="dataset", evidence="on the benchmark"), "domain"),
    (_variant(name="the training corpus", evidence="trained on OntoNotes"), "domain"),
]

# Records that must survive all three validation tiers.
VALID_RECORDS = [
    dict(_GOOD),
    _variant(name="OntoNotes", usage_role="Use", evidence="trained on OntoNotes"),
]

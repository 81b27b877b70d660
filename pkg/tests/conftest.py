import json
import random
from pathlib import Path

import pytest

from citescout.config import PipelineConfig
from citescout.corpus import CorpusHandle, Query, ingest_snapshot
from citescout.pipeline import run_pipeline

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures" / "mini"


@pytest.fixture(scope="session")
def manifest() -> dict:
    return json.loads((FIXTURES / "manifest.json").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def gold_path() -> Path:
    return FIXTURES / "gold_event.json"


@pytest.fixture(scope="session")
def mini_corpus(tmp_path_factory) -> CorpusHandle:
    index_dir = tmp_path_factory.mktemp("index")
    return ingest_snapshot(FIXTURES / "papers.jsonl", FIXTURES / "citations.jsonl", index_dir)


@pytest.fixture(scope="session")
def stub_config() -> PipelineConfig:
    config = PipelineConfig()
    config.backend.retry_base_delay = 0.0
    return config


@pytest.fixture(scope="session")
def mini_query(manifest) -> Query:
    return Query(text=manifest["query"]["text"], seed_k=manifest["query"]["seed_k"])


@pytest.fixture(scope="session")
def mini_run(tmp_path_factory, mini_corpus, mini_query, stub_config):
    """One shared pipeline run over the fixture corpus."""
    run_dir = tmp_path_factory.mktemp("runs") / "shared"
    return run_pipeline(mini_corpus, mini_query, stub_config, run_dir)


def _random_token(rng: random.Random) -> str:
    return "".join(rng.choice("abcdefghijklmnopqrstuvwxyz") for _ in range(rng.randint(3, 10)))


def make_metric_instance(rng: random.Random):
    """One randomized (gold, predictions, tau) instance for metric checks.

    Gold items get distinct names; predictions mix verbatim copies, case
    variants, one-edit typos, and unrelated noise so every match tier has
    work to do.
    """
    from citescout.evaluation import GoldItem, GoldStandard

    n_gold = rng.randint(1, 30)
    names = set()
    while len(names) < n_gold:
        names.add(_random_token(rng))
    items = []
    for name in sorted(names):
        aliases = tuple(name + suffix for suffix in ("x",) if rng.random() < 0.2)
        items.append(GoldItem(name=name, aliases=aliases))
    gold = GoldStandard(label="random", items=tuple(items))

    predictions = []
    for item in items:
        roll = rng.random()
        if roll < 0.30:
            predictions.append(item.name)  # exact
        elif roll < 0.50:
            predictions.append(item.name.upper())  # norm tier
        elif roll < 0.70 and len(item.name) > 3:
            i = rng.randrange(len(item.name))
            typo = item.name[:i] + rng.choice("abcdefghijklmnopqrstuvwxyz") + item.name[i + 1 :]
            predictions.append(typo)  # fuzzy candidate
    for _ in range(rng.randint(0, 10)):
        predictions.append(_random_token(rng))
    rng.shuffle(predictions)
    tau = rng.choice((0.7, 0.8, 0.9, 0.95, 1.0))
    return gold, predictions, tau


@pytest.fixture(scope="session")
def metric_instances():
    rng = random.Random(424242)
    return [make_metric_instance(rng) for _ in range(1000)]


# --- acceptance criterion reporting -----------------------------------------


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(label): marks a test as an acceptance criterion check")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker and marker.args:
        report.acceptance_label = marker.args[0]


def pytest_terminal_summary(terminalreporter):
    results: dict[str, str] = {}
    for status in ("passed", "failed", "error", "skipped"):
        for report in terminalreporter.stats.get(status, []):
            label = getattr(report, "acceptance_label", None)
            if label is None:
                continue
            if report.when == "call" or status in ("error", "skipped"):
                verdict = "PASS" if status == "passed" else "FAIL"
                # A criterion checked by several tests fails if any part fails.
                if results.get(label) != "FAIL":
                    results[label] = verdict
    if results:
        terminalreporter.write_sep("-", "acceptance criteria")
        for label in sorted(results):
            terminalreporter.write_line(f"[{results[label]}] {label}")

#!/usr/bin/env python3
"""Run the stub pipeline over the mini corpus and score it against gold."""

import argparse
import json
import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from citescout.config import PipelineConfig  # noqa: E402
from citescout.corpus import Query, ingest_snapshot  # noqa: E402
from citescout.evaluation import format_report_table  # noqa: E402
from citescout.pipeline import evaluate_run, run_pipeline  # noqa: E402

ROOT = Path(__file__).resolve().parents[1]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="runs/mini-demo", help="Run directory.")
    parser.add_argument("--top", type=int, default=5, help="Rows to print.")
    args = parser.parse_args()

    fixtures = ROOT / "fixtures" / "mini"
    manifest = json.loads((fixtures / "manifest.json").read_text(encoding="utf-8"))
    query = Query(text=manifest["query"]["text"], seed_k=manifest["query"]["seed_k"])

    with tempfile.TemporaryDirectory() as tmp:
        corpus = ingest_snapshot(fixtures / "papers.jsonl", fixtures / "citations.jsonl", tmp)
        result = run_pipeline(corpus, query, PipelineConfig(), args.out)

    counters = result.counters
    print(f"run {result.run_id}: {counters['contexts']} contexts -> {counters['entities']} entities")
    for row in result.rows[: args.top]:
        trusted = "trusted" if row["trusted"] else "unconfirmed"
        print(f"  {row['rank']:>2}. {row['display_name']:<14} citations={row['citation_count']} {trusted}")

    report = evaluate_run(args.out, fixtures / manifest["gold_file"])
    print()
    print(format_report_table([report]))


if __name__ == "__main__":
    main()

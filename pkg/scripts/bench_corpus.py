#!/usr/bin/env python3
"""Benchmark seed search plus context expansion over the mini corpus."""

import argparse
import statistics
import sys
import tempfile
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from citescout.corpus import Query, ingest_snapshot  # noqa: E402

ROOT = Path(__file__).resolve().parents[1]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--rounds", type=int, default=50, help="Timed repetitions.")
    parser.add_argument("--query", default="document-level event extraction")
    args = parser.parse_args()

    fixtures = ROOT / "fixtures" / "mini"
    with tempfile.TemporaryDirectory() as tmp:
        t0 = time.perf_counter()
        corpus = ingest_snapshot(fixtures / "papers.jsonl", fixtures / "citations.jsonl", tmp)
        ingest_ms = (time.perf_counter() - t0) * 1000

        query = Query(text=args.query)
        durations = []
        for _ in range(args.rounds):
            start = time.perf_counter()
            seeds = corpus.seed_search(query)
            contexts = corpus.expand_contexts([pid for pid, _ in seeds]) if seeds else []
            durations.append((time.perf_counter() - start) * 1000)

    durations.sort()
    print(f"ingest: {ingest_ms:.1f} ms for {corpus.paper_count} papers, {corpus.context_count} contexts")
    print(f"search+expand: {len(seeds)} seeds, {len(contexts)} contexts per round")
    print(
        f"over {args.rounds} rounds: median {statistics.median(durations):.2f} ms, "
        f"p90 {durations[int(0.9 * (len(durations) - 1))]:.2f} ms, max {durations[-1]:.2f} ms"
    )


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Regenerate the mini-corpus fixture set under fixtures/mini."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from citescout.fixtures import write_fixtures  # noqa: E402


def main():
    out = Path(__file__).resolve().parents[1] / "fixtures" / "mini"
    manifest = write_fixtures(out)
    print(f"wrote fixtures to {out}")
    print(f"papers={manifest['ingest']['papers']} edges={manifest['ingest']['edges']}")
    print(f"expected entities={manifest['counters']['entities']} contexts={manifest['counters']['contexts']}")


if __name__ == "__main__":
    main()

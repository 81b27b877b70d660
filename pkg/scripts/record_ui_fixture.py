#!/usr/bin/env python3
"""Record HTTP payloads from a stub service run for the frontend tests.

The frontend test suite replays these JSON files instead of talking to a
live service, so it exercises exactly the payload shapes the API emits.
"""

import json
import sys
import tempfile
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from fastapi.testclient import TestClient  # noqa: E402

from citescout.config import PipelineConfig  # noqa: E402
from citescout.corpus import ingest_snapshot  # noqa: E402
from citescout.service import create_app  # noqa: E402

ROOT = Path(__file__).resolve().parents[1]
OUT = ROOT / "frontend" / "tests" / "fixtures"

PINNED_RUN_ID = "fixturerun001"


def scrub(payload):
    """Pin volatile fields so re-recording does not churn the files."""
    if isinstance(payload, dict):
        out = {}
        for key, value in payload.items():
            if key == "run_id":
                out[key] = PINNED_RUN_ID
            elif key in ("created_at", "finished_at"):
                out[key] = "2026-01-01T00:00:00+00:00"
            else:
                out[key] = scrub(value)
        return out
    if isinstance(payload, list):
        return [scrub(v) for v in payload]
    return payload


def dump(name, payload):
    OUT.mkdir(parents=True, exist_ok=True)
    path = OUT / name
    path.write_text(json.dumps(scrub(payload), ensure_ascii=False, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {path.relative_to(ROOT)}")


def main():
    fixtures = ROOT / "fixtures" / "mini"
    manifest = json.loads((fixtures / "manifest.json").read_text(encoding="utf-8"))

    with tempfile.TemporaryDirectory() as tmp_name:
        tmp = Path(tmp_name)
        corpus = ingest_snapshot(fixtures / "papers.jsonl", fixtures / "citations.jsonl", tmp / "index")
        config = PipelineConfig()
        config.backend.retry_base_delay = 0.0
        app = create_app(corpus, config, runs_dir=tmp / "runs", workers=2)
        with TestClient(app) as client:
            dump("health.json", client.get("/api/health").json())

            run_id = client.post("/api/queries", json={"text": manifest["query"]["text"]}).json()["run_id"]
            deadline = time.monotonic() + 60.0
            record = None
            while time.monotonic() < deadline:
                record = client.get(f"/api/runs/{run_id}").json()
                if record["status"] in ("Complete", "Failed"):
                    break
                time.sleep(0.05)
            if record is None or record["status"] != "Complete":
                raise SystemExit(f"run did not complete: {record}")
            dump("run.json", record)

            table = client.get(f"/api/runs/{run_id}/table").json()
            dump("table.json", table)

            top_key = table["rows"][0]["canonical_key"]
            dump("evidence.json", client.get(f"/api/runs/{run_id}/entities/{top_key}/evidence").json())

    dump(
        "expected.json",
        {
            "row_count": len(manifest["table"]),
            "trusted_keys": manifest["ui"]["trusted_keys"],
            "evaluate_against_keys": manifest["ui"]["evaluate_against_keys"],
            "evidence_key": top_key,
        },
    )


if __name__ == "__main__":
    main()

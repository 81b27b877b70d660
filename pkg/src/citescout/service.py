"""HTTP service exposing the pipeline: submit a query, poll, fetch results.

Runs execute on a small worker pool while clients poll the run record.
All errors share one envelope: {"error": {"code": ..., "message": ...}}.
When a built frontend bundle is present it is served at the root path,
with the API mounted under /api.
"""

from __future__ import annotations

import logging
import uuid
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from fastapi import Body, FastAPI
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .backends import ExtractorBackend, SearchBackend
from .config import PipelineConfig
from .corpus import CorpusHandle, Query
from .pipeline import (
    STATUS_COMPLETE,
    STATUS_PENDING,
    _write_run_record,
    evidence_for_entity,
    load_run_record,
    load_table,
    run_pipeline,
)

logger = logging.getLogger(__name__)


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": {"code": code, "message": message}})


def create_app(
    corpus: CorpusHandle,
    config: PipelineConfig | None = None,
    runs_dir: str | Path | None = None,
    frontend_dir: str | Path | None = None,
    backend: ExtractorBackend | None = None,
    search: SearchBackend | None = None,
    workers: int = 2,
) -> FastAPI:
    config = config or PipelineConfig()
    runs_root = Path(runs_dir or config.runs_dir)
    runs_root.mkdir(parents=True, exist_ok=True)

    app = FastAPI(title="citescout", docs_url=None, redoc_url=None)
    executor = ThreadPoolExecutor(max_workers=workers)
    app.state.executor = executor

    def run_dir_of(run_id: str) -> Path:
        return runs_root / run_id

    @app.get("/api/health")
    def health():
        return {"status": "ok", "papers": corpus.paper_count, "contexts": corpus.context_count}

    @app.post("/api/queries")
    def submit_query(payload: dict = Body(...)):
        text = payload.get("text")
        if not isinstance(text, str) or not text.strip():
            return _error(400, "INVALID_QUERY", "query text must be a non-empty string")
        fos = payload.get("fos", [])
        if not isinstance(fos, list) or any(not isinstance(f, str) for f in fos):
            return _error(400, "INVALID_QUERY", "fos must be a list of strings")
        k = payload.get("k", config.corpus.seed_k)
        if not isinstance(k, int) or isinstance(k, bool) or k < 1:
            return _error(400, "INVALID_QUERY", "k must be a positive integer")
        query = Query(text=text.strip(), field_constraints=frozenset(fos), seed_k=k)

        run_id = uuid.uuid4().hex[:12]
        run_dir = run_dir_of(run_id)
        run_dir.mkdir(parents=True)
        # Visible to pollers immediately, before the worker picks it up.
        _write_run_record(
            run_dir,
            {
                "run_id": run_id,
                "status": STATUS_PENDING,
                "query": {"text": query.text, "field_constraints": sorted(query.field_constraints), "seed_k": k},
                "counters": {},
                "artifacts": [],
                "error": "",
            },
        )

        def work():
            try:
                run_pipeline(corpus, query, config, run_dir, backend=backend, search=search, run_id=run_id)
            except Exception:
                logger.exception("run %s failed", run_id)

        executor.submit(work)
        return {"run_id": run_id, "status": STATUS_PENDING}

    @app.get("/api/runs/{run_id}")
    def get_run(run_id: str):
        run_dir = run_dir_of(run_id)
        if not (run_dir / "run.json").exists():
            return _error(404, "NOT_FOUND", f"no run {run_id}")
        return load_run_record(run_dir)

    @app.get("/api/runs/{run_id}/table")
    def get_table(run_id: str):
        run_dir = run_dir_of(run_id)
        if not (run_dir / "run.json").exists():
            return _error(404, "NOT_FOUND", f"no run {run_id}")
        record = load_run_record(run_dir)
        if record.get("status") != STATUS_COMPLETE:
            return _error(409, "RUN_NOT_COMPLETE", f"run {run_id} is {record.get('status')}")
        return {"run_id": run_id, "rows": load_table(run_dir)}

    @app.get("/api/runs/{run_id}/entities/{canonical_key}/evidence")
    def get_evidence(run_id: str, canonical_key: str):
        run_dir = run_dir_of(run_id)
        if not (run_dir / "run.json").exists():
            return _error(404, "NOT_FOUND", f"no run {run_id}")
        record = load_run_record(run_dir)
        if record.get("status") != STATUS_COMPLETE:
            return _error(409, "RUN_NOT_COMPLETE", f"run {run_id} is {record.get('status')}")
        try:
            return evidence_for_entity(run_dir, canonical_key)
        except KeyError:
            return _error(404, "NOT_FOUND", f"no entity {canonical_key} in run {run_id}")

    @app.get("/api/runs")
    def list_runs():
        runs = []
        for child in sorted(runs_root.iterdir()) if runs_root.exists() else []:
            if (child / "run.json").exists():
                record = load_run_record(child)
                runs.append(
                    {
                        "run_id": record.get("run_id", child.name),
                        "status": record.get("status"),
                        "query": record.get("query", {}).get("text", ""),
                    }
                )
        return {"runs": runs}

    if frontend_dir and Path(frontend_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(frontend_dir), html=True), name="frontend")

    return app

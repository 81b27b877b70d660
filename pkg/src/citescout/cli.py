"""Command-line interface: ingest, search, run, evaluate, serve."""

from __future__ import annotations

import logging
from pathlib import Path

import click

from .config import PipelineConfig, load_config
from .corpus import CorpusHandle, Query, ingest_snapshot
from .evaluation import format_report_table
from .pipeline import evaluate_run, run_pipeline
from .service import create_app


def _load_pipeline_config(path: str | None) -> PipelineConfig:
    return load_config(path) if path else PipelineConfig()


def _build_query(text: str, fos: tuple[str, ...], k: int | None, config: PipelineConfig) -> Query:
    return Query(text=text, field_constraints=frozenset(fos), seed_k=k or config.corpus.seed_k)


@click.group()
@click.option("--verbose", is_flag=True, help="Enable debug logging.")
def main(verbose: bool):
    """Literature-driven dataset discovery."""
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")


@main.command()
@click.option("--papers", "papers_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--citations", "citations_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False))
@click.option("--window-sentences", default=3, show_default=True, help="Sentences per citation window.")
def ingest(papers_path: str, citations_path: str, out_dir: str, window_sentences: int):
    """Build an index directory from papers and citations tables."""
    corpus = ingest_snapshot(papers_path, citations_path, out_dir, window_sentences=window_sentences)
    report = corpus.ingest_report
    click.echo(f"indexed {corpus.paper_count} papers, {corpus.edge_count} edges, {corpus.context_count} contexts")
    rejected = report.get("papers_rejected", 0) + report.get("citations_rejected", 0)
    if rejected:
        click.echo(f"rejected {rejected} malformed rows; see meta.json for details")


@main.command("seed-search")
@click.option("--index", "index_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--query", "query_text", required=True)
@click.option("--fos", multiple=True, help="Field-of-study constraint; repeatable.")
@click.option("--k", type=int, default=20, show_default=True)
def seed_search_cmd(index_dir: str, query_text: str, fos: tuple[str, ...], k: int):
    """Rank seed papers for a query."""
    corpus = CorpusHandle.open(index_dir)
    query = Query(text=query_text, field_constraints=frozenset(fos), seed_k=k)
    for paper_id, score in corpus.seed_search(query):
        paper = corpus.paper(paper_id)
        title = paper.title if paper else ""
        click.echo(f"{paper_id}\t{score:.4f}\t{title}")


@main.command()
@click.option("--index", "index_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--query", "query_text", required=True)
@click.option("--fos", multiple=True)
@click.option("--k", type=int, default=None, help="Seed pool size; defaults to the config value.")
@click.option("--backend", "backend_kind", type=click.Choice(["stub", "http"]), default=None)
@click.option("--endpoint", default=None, help="Chat endpoint for the http backend.")
@click.option("--model", default=None, help="Model name for the http backend.")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False))
def run(index_dir, query_text, fos, k, backend_kind, endpoint, model, config_path, out_dir):
    """Run the full pipeline and persist artifacts under --out."""
    config = _load_pipeline_config(config_path)
    if backend_kind:
        config.backend.kind = backend_kind
    if endpoint:
        config.backend.endpoint = endpoint
    if model:
        config.backend.model = model
    corpus = CorpusHandle.open(index_dir)
    query = _build_query(query_text, fos, k, config)
    result = run_pipeline(corpus, query, config, out_dir)
    counters = result.counters
    click.echo(
        f"run {result.run_id}: {counters['contexts']} contexts, {counters['raw_mentions']} raw mentions, "
        f"{counters['relevant_mentions']} relevant, {counters['entities']} entities"
    )
    for row in result.rows[:15]:
        link = row["link"]["value"] if row["link"] else "-"
        click.echo(f"{row['rank']:>3}. {row['display_name']}  citations={row['citation_count']}  link={link}")
    click.echo(f"artifacts in {result.run_dir}")


@main.command("eval")
@click.option("--run", "run_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--gold", "gold_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--tau", type=float, default=0.9, show_default=True)
def eval_cmd(run_dir: str, gold_path: str, tau: float):
    """Score a completed run against a gold standard."""
    report = evaluate_run(run_dir, gold_path, tau=tau)
    click.echo(format_report_table([report]), nl=False)


@main.command()
@click.option("--index", "index_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8077, show_default=True)
@click.option("--runs-dir", default="runs", show_default=True)
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--frontend", "frontend_dir", type=click.Path(file_okay=False), default=None, help="Built frontend bundle to serve at /.")
def serve(index_dir, host, port, runs_dir, config_path, frontend_dir):
    """Serve the HTTP API (and the frontend bundle when available)."""
    import uvicorn

    config = _load_pipeline_config(config_path)
    corpus = CorpusHandle.open(index_dir)
    if frontend_dir is None and Path("frontend/dist").is_dir():
        frontend_dir = "frontend/dist"
    app = create_app(corpus, config, runs_dir=runs_dir, frontend_dir=frontend_dir)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()

"""Literature-driven dataset discovery.

The pipeline answers "which datasets does this research area use?" by
searching a citation snapshot for seed papers, extracting dataset
mentions from their citation contexts, resolving mentions into canonical
entities, enriching them with links, and ranking them by citation
evidence, with an evaluation harness over gold standards.
"""

from .backends import (
    BackendError,
    BackendRequest,
    HttpExtractorBackend,
    NullSearchBackend,
    StubExtractorBackend,
    TableSearchBackend,
)
from .config import PipelineConfig, load_config
from .corpus import CitationContext, CorpusHandle, Paper, Query, ingest_snapshot
from .enrichment import build_table, enrich_entities, rank_entities
from .evaluation import (
    EmptyGoldError,
    EvaluationReport,
    GoldItem,
    GoldStandard,
    compute_report,
    levenshtein,
    load_gold,
    macro_average,
    match_exact,
    match_fuzzy,
    match_norm,
    similarity,
)
from .extraction import DatasetMention, Rejection, run_extraction, validate_mention
from .links import LinkRecord
from .naming import NormalizesToEmpty, norm_form, normalize_name
from .pipeline import RunResult, evaluate_run, run_pipeline
from .resolution import ResolvedEntity, family_merge, group_entities, local_consolidate
from .service import create_app

__version__ = "0.1.0"

__all__ = [
    "BackendError",
    "BackendRequest",
    "CitationContext",
    "CorpusHandle",
    "DatasetMention",
    "EmptyGoldError",
    "EvaluationReport",
    "GoldItem",
    "GoldStandard",
    "HttpExtractorBackend",
    "LinkRecord",
    "NormalizesToEmpty",
    "NullSearchBackend",
    "Paper",
    "PipelineConfig",
    "Query",
    "Rejection",
    "ResolvedEntity",
    "RunResult",
    "StubExtractorBackend",
    "TableSearchBackend",
    "build_table",
    "compute_report",
    "create_app",
    "enrich_entities",
    "evaluate_run",
    "family_merge",
    "group_entities",
    "ingest_snapshot",
    "levenshtein",
    "load_config",
    "load_gold",
    "local_consolidate",
    "macro_average",
    "match_exact",
    "match_fuzzy",
    "match_norm",
    "norm_form",
    "normalize_name",
    "rank_entities",
    "run_extraction",
    "run_pipeline",
    "similarity",
    "validate_mention",
    "__version__",
]

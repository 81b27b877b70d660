"""Configuration dataclasses and the config-file loader.

A single YAML or JSON file configures every stage; CLI flags override
individual fields. All defaults are chosen so the pipeline runs fully
offline against the bundled fixtures with the deterministic stub backend.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path

import yaml

# Tokens removed during canonical-name normalization. Whole-token match,
# case-insensitive. Editable via ResolutionConfig.
GENERIC_TYPE_WORDS = (
    "dataset",
    "datasets",
    "corpus",
    "corpora",
    "benchmark",
    "benchmarks",
    "collection",
    "database",
)
SPLIT_MARKERS = (
    "train",
    "training",
    "test",
    "validation",
    "dev",
)
LEADING_ARTICLES = ("the", "a", "an")

# Common model/tool names that are never dataset entities (domain tier).
DEFAULT_BLOCKLIST = (
    "bert", "roberta", "albert", "distilbert", "electra", "xlnet", "bart",
    "t5", "gpt", "gpt-2", "gpt-3", "gpt-4", "llama", "qwen", "mistral",
    "elmo", "word2vec", "glove", "fasttext", "clip", "whisper",
    "resnet", "vgg", "alexnet", "inception", "densenet", "efficientnet",
    "mobilenet", "vit", "swin transformer", "yolo", "faster r-cnn",
    "mask r-cnn", "ssd", "u-net", "gan", "stylegan", "cyclegan",
    "lstm", "gru", "crf", "svm", "hmm", "xgboost", "lightgbm", "catboost",
    "adam", "adamw", "sgd",
    "pytorch", "tensorflow", "keras", "scikit-learn", "spacy", "nltk",
    "stanford corenlp", "huggingface transformers", "transformers",
)

# Hosts whose URLs count as authoritative provenance even without a PID.
DEFAULT_TRUSTED_HOSTS = (
    "catalog.ldc.upenn.edu",
    "zenodo.org",
    "huggingface.co",
    "kaggle.com",
    "data.mendeley.com",
    "rcsb.org",
    "ncbi.nlm.nih.gov",
    "icpsr.umich.edu",
    "ota.bodleian.ox.ac.uk",
    "catalog.elra.info",
    "europeandataportal.eu",
    "data.gov",
    "datadryad.org",
    "figshare.com",
    "osf.io",
    "archive.org",
    "physionet.org",
    "image-net.org",
    "commoncrawl.org",
    "statmt.org",
)

# Title markers that flag a cited paper as a resource paper (tier-2 links).
RESOURCE_TITLE_MARKERS = ("dataset", "corpus", "benchmark", "shared task", "treebank")


@dataclass
class CorpusConfig:
    window_sentences: int = 3  # center sentence plus one neighbour each side
    seed_k: int = 300
    bm25_k1: float = 1.2
    bm25_b: float = 0.75


@dataclass
class BackendConfig:
    kind: str = "stub"  # "stub" or "http"
    endpoint: str = ""
    model: str = ""
    parallelism: int = 4
    retry_limit: int = 3
    retry_base_delay: float = 1.0
    timeout: float = 60.0
    blocklist_path: str | None = None
    keep_undetermined: bool = False  # keep mentions whose relevance call failed


@dataclass
class SearchConfig:
    kind: str = "none"  # "none", "table" or "http"
    table_path: str | None = None
    endpoint: str = ""
    timeout: float = 30.0


@dataclass
class ResolutionConfig:
    generic_words: tuple = GENERIC_TYPE_WORDS
    split_markers: tuple = SPLIT_MARKERS
    articles: tuple = LEADING_ARTICLES
    family_map_path: str | None = None


@dataclass
class EnrichmentConfig:
    trusted_hosts: tuple = DEFAULT_TRUSTED_HOSTS
    trusted_hosts_path: str | None = None
    resource_title_markers: tuple = RESOURCE_TITLE_MARKERS


@dataclass
class EvaluationConfig:
    fuzzy_tau: float = 0.9


@dataclass
class PipelineConfig:
    corpus: CorpusConfig = field(default_factory=CorpusConfig)
    backend: BackendConfig = field(default_factory=BackendConfig)
    search: SearchConfig = field(default_factory=SearchConfig)
    resolution: ResolutionConfig = field(default_factory=ResolutionConfig)
    enrichment: EnrichmentConfig = field(default_factory=EnrichmentConfig)
    evaluation: EvaluationConfig = field(default_factory=EvaluationConfig)
    runs_dir: str = "runs"

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def _merge_section(instance, values: dict):
    names = {f.name for f in dataclasses.fields(instance)}
    unknown = set(values) - names
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    kwargs = {}
    for name, value in values.items():
        if isinstance(value, list):
            value = tuple(value)
        kwargs[name] = value
    return dataclasses.replace(instance, **kwargs)


def config_from_dict(data: dict) -> PipelineConfig:
    """Build a PipelineConfig from a nested dict, validating section keys."""
    cfg = PipelineConfig()
    sections = {
        "corpus": cfg.corpus,
        "backend": cfg.backend,
        "search": cfg.search,
        "resolution": cfg.resolution,
        "enrichment": cfg.enrichment,
        "evaluation": cfg.evaluation,
    }
    updates = {}
    for key, value in data.items():
        if key in sections:
            updates[key] = _merge_section(sections[key], value or {})
        elif key == "runs_dir":
            updates[key] = str(value)
        else:
            raise ValueError(f"unknown config section: {key}")
    return dataclasses.replace(cfg, **updates)


def load_config(path: str | Path) -> PipelineConfig:
    """Load a YAML or JSON config file into a PipelineConfig."""
    text = Path(path).read_text(encoding="utf-8")
    if str(path).endswith(".json"):
        data = json.loads(text)
    else:
        data = yaml.safe_load(text)
    return config_from_dict(data or {})


def load_line_file(path: str | Path) -> tuple:
    """Read a one-entry-per-line config file; '#' lines and blanks ignored."""
    entries = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            entries.append(line)
    return tuple(entries)

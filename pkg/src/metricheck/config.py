"""Strict TOML run configuration: schema, defaults, and validation.

A config names the corpus files, declares the datasets (task, aspects,
rating bounds, metric domain tags, optional Easy/Hard pair lists), and sets
pipeline knobs.  Parsing is strict: unknown keys anywhere in the document
are errors, so typos fail fast instead of silently falling back to a
default.

Schema (TOML), with defaults shown:

    schema_version = 1            # required, must equal SCHEMA_VERSION

    [corpus]
    paths = ["corpus.jsonl"]      # required, non-empty; relative to the config file
    format = "auto"               # auto | jsonl | csv
    aggregate = "none"            # none | mean | median (annotator aggregation)

    [run]
    metrics = []                  # [] = every metric present in the corpus
    aspects = []                  # [] = each dataset's declared aspects
    correlation = "spearman"      # spearman | pearson
    epsilon = 1e-9                # utility tie tolerance
    low_below = 3.0               # quality band thresholds
    high_above = 3.0
    transfer_aspect = "auto"      # auto | mean | <aspect name>
    pair_mode = "auto"            # auto | configured | generated
    pair_k = 1                    # generated mode: bottom-k x top-k Easy pairs
    # pair_delta = 0.5            # generated mode Hard gap; omit for quantile default
    win_pairing = "auto"          # auto | by_pair_group | cross_product
    win_ties = "half"             # half | drop
    parallel = false

    [output]
    directory = "out"
    formats = ["json"]            # subset of json | csv | markdown

    [aliases]                     # extra aspect-name aliases, applied at load
    informative = "Informativeness"

    [[dataset]]
    id = "newsroom"
    task = "TextSumm"             # TextSumm | DiagGen | CtrlGen | Other
    aspects = ["Coherence", "Fluency"]
    rating_min = 1.0
    rating_max = 5.0
    [dataset.metric_domains]
    bleu = "DomainShift"          # InDomain | SemanticShift | DomainShift
    [dataset.pairs]
    easy = [["worse_system", "better_system"]]
    hard = [["close_a", "close_b"]]
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .corpus import DatasetSpec

SCHEMA_VERSION = 1

CORRELATION_METHODS = ("pearson", "spearman")
AGGREGATE_POLICIES = ("none", "mean", "median")
CORPUS_FORMATS = ("auto", "jsonl", "csv")
PAIR_MODES = ("auto", "configured", "generated")
WIN_PAIRINGS = ("auto", "by_pair_group", "cross_product")
TIE_POLICIES = ("half", "drop")
OUTPUT_FORMATS = ("json", "csv", "markdown")


class ConfigError(ValueError):
    """Raised for unreadable, malformed, or invalid configuration."""


@dataclass(frozen=True)
class RunConfig:
    """Fully validated run configuration with every default filled in."""

    corpus_paths: tuple[Path, ...]
    dataset_specs: Mapping[str, DatasetSpec]
    corpus_format: str = "auto"
    aggregate: str | None = None
    aliases: Mapping[str, str] = field(default_factory=dict)
    metrics: tuple[str, ...] = ()
    aspects: tuple[str, ...] = ()
    correlation_method: str = "spearman"
    epsilon: float = 1e-9
    low_below: float = 3.0
    high_above: float = 3.0
    transfer_aspect: str = "auto"
    pair_mode: str = "auto"
    pair_k: int = 1
    pair_delta: float | None = None
    win_pairing: str = "auto"
    win_ties: str = "half"
    parallel: bool = False
    output_dir: Path = Path("out")
    output_formats: tuple[str, ...] = ("json",)


def _require_keys(table: Mapping[str, Any], allowed: set[str], where: str) -> None:
    unknown = sorted(set(table) - allowed)
    if unknown:
        raise ConfigError(f"unknown key {unknown[0]!r} in {where}")


def _typed(table: Mapping[str, Any], key: str, kind: type, where: str, default: Any) -> Any:
    if key not in table:
        return default
    value = table[key]
    # bool is an int subclass; reject it where an int/float is expected.
    if kind in (int, float) and isinstance(value, bool):
        raise ConfigError(f"{where}.{key} must be a {kind.__name__}, got a boolean")
    if kind is float and isinstance(value, int):
        value = float(value)
    if not isinstance(value, kind):
        raise ConfigError(f"{where}.{key} must be a {kind.__name__}, got {type(value).__name__}")
    return value


def _string_list(table: Mapping[str, Any], key: str, where: str) -> tuple[str, ...]:
    value = table.get(key, [])
    if not isinstance(value, list) or any(not isinstance(item, str) for item in value):
        raise ConfigError(f"{where}.{key} must be an array of strings")
    return tuple(value)


def _choice(value: str, options: tuple[str, ...], where: str) -> str:
    if value not in options:
        raise ConfigError(f"{where} must be one of {', '.join(options)}; got {value!r}")
    return value


def _parse_pairs(table: Mapping[str, Any], where: str) -> dict[str, tuple[tuple[str, str], ...]]:
    _require_keys(table, {"easy", "hard"}, where)
    lists: dict[str, tuple[tuple[str, str], ...]] = {}
    for key, difficulty in (("easy", "Easy"), ("hard", "Hard")):
        if key not in table:
            continue
        raw = table[key]
        if not isinstance(raw, list):
            raise ConfigError(f"{where}.{key} must be an array of [system_a, system_b] pairs")
        pairs = []
        for entry in raw:
            if (
                not isinstance(entry, list)
                or len(entry) != 2
                or any(not isinstance(name, str) for name in entry)
            ):
                raise ConfigError(f"{where}.{key} must be an array of [system_a, system_b] pairs")
            pairs.append((entry[0], entry[1]))
        lists[difficulty] = tuple(pairs)
    return lists


def _parse_dataset(table: Mapping[str, Any], index: int) -> DatasetSpec:
    where = f"[[dataset]] #{index + 1}"
    _require_keys(
        table,
        {"id", "task", "aspects", "rating_min", "rating_max", "metric_domains", "pairs"},
        where,
    )
    if "id" not in table:
        raise ConfigError(f"{where} is missing required key 'id'")
    dataset_id = _typed(table, "id", str, where, None)
    where = f"[[dataset]] {dataset_id!r}"

    domains = table.get("metric_domains", {})
    if not isinstance(domains, dict) or any(
        not isinstance(v, str) for v in domains.values()
    ):
        raise ConfigError(f"{where}.metric_domains must be a table of metric = domain strings")

    pair_lists = None
    if "pairs" in table:
        if not isinstance(table["pairs"], dict):
            raise ConfigError(f"{where}.pairs must be a table with easy/hard arrays")
        pair_lists = _parse_pairs(table["pairs"], f"{where}.pairs")

    try:
        return DatasetSpec(
            dataset_id=dataset_id,
            task=_typed(table, "task", str, where, "Other"),
            aspects=_string_list(table, "aspects", where),
            rating_min=_typed(table, "rating_min", float, where, 1.0),
            rating_max=_typed(table, "rating_max", float, where, 5.0),
            metric_domains=dict(domains),
            pair_lists=pair_lists,
        )
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def parse_config(path: str | Path) -> RunConfig:
    """Read and validate a TOML run configuration.

    Raises ConfigError for an unreadable file, a schema_version mismatch,
    any unknown key, a type error, or a corpus path that does not exist.
    Relative corpus paths resolve against the config file's directory.
    """
    path = Path(path)
    try:
        raw = tomllib.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML in {path}: {exc}") from exc

    _require_keys(
        raw, {"schema_version", "corpus", "run", "output", "aliases", "dataset"}, "config root"
    )
    if "schema_version" not in raw:
        raise ConfigError("config is missing required key 'schema_version'")
    version = raw["schema_version"]
    if version != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {version!r}; expected {SCHEMA_VERSION}")

    corpus = raw.get("corpus")
    if not isinstance(corpus, dict):
        raise ConfigError("config is missing required table [corpus]")
    _require_keys(corpus, {"paths", "format", "aggregate"}, "[corpus]")
    path_strings = _string_list(corpus, "paths", "[corpus]")
    if not path_strings:
        raise ConfigError("[corpus].paths must name at least one corpus file")
    corpus_paths = []
    for entry in path_strings:
        corpus_path = Path(entry)
        if not corpus_path.is_absolute():
            corpus_path = path.parent / corpus_path
        if not corpus_path.exists():
            raise ConfigError(f"corpus file does not exist: {corpus_path}")
        corpus_paths.append(corpus_path)
    corpus_format = _choice(
        _typed(corpus, "format", str, "[corpus]", "auto"), CORPUS_FORMATS, "[corpus].format"
    )
    aggregate = _choice(
        _typed(corpus, "aggregate", str, "[corpus]", "none"),
        AGGREGATE_POLICIES,
        "[corpus].aggregate",
    )

    run = raw.get("run", {})
    if not isinstance(run, dict):
        raise ConfigError("[run] must be a table")
    _require_keys(
        run,
        {
            "metrics",
            "aspects",
            "correlation",
            "epsilon",
            "low_below",
            "high_above",
            "transfer_aspect",
            "pair_mode",
            "pair_k",
            "pair_delta",
            "win_pairing",
            "win_ties",
            "parallel",
        },
        "[run]",
    )
    epsilon = _typed(run, "epsilon", float, "[run]", 1e-9)
    if epsilon < 0:
        raise ConfigError("[run].epsilon must be >= 0")
    pair_k = _typed(run, "pair_k", int, "[run]", 1)
    if pair_k < 1:
        raise ConfigError("[run].pair_k must be >= 1")
    pair_delta = _typed(run, "pair_delta", float, "[run]", None)
    if pair_delta is not None and pair_delta < 0:
        raise ConfigError("[run].pair_delta must be >= 0")

    output = raw.get("output", {})
    if not isinstance(output, dict):
        raise ConfigError("[output] must be a table")
    _require_keys(output, {"directory", "formats"}, "[output]")
    formats = _string_list(output, "formats", "[output]") or ("json",)
    for fmt in formats:
        _choice(fmt, OUTPUT_FORMATS, "[output].formats entry")

    aliases = raw.get("aliases", {})
    if not isinstance(aliases, dict) or any(not isinstance(v, str) for v in aliases.values()):
        raise ConfigError("[aliases] must map alias strings to canonical aspect names")

    datasets = raw.get("dataset", [])
    if not isinstance(datasets, list):
        raise ConfigError("[[dataset]] must be an array of tables")
    specs: dict[str, DatasetSpec] = {}
    for index, table in enumerate(datasets):
        spec = _parse_dataset(table, index)
        if spec.dataset_id in specs:
            raise ConfigError(f"duplicate dataset id {spec.dataset_id!r}")
        specs[spec.dataset_id] = spec

    return RunConfig(
        corpus_paths=tuple(corpus_paths),
        dataset_specs=specs,
        corpus_format=corpus_format,
        aggregate=None if aggregate == "none" else aggregate,
        aliases=dict(aliases),
        metrics=_string_list(run, "metrics", "[run]"),
        aspects=_string_list(run, "aspects", "[run]"),
        correlation_method=_choice(
            _typed(run, "correlation", str, "[run]", "spearman"),
            CORRELATION_METHODS,
            "[run].correlation",
        ),
        epsilon=epsilon,
        low_below=_typed(run, "low_below", float, "[run]", 3.0),
        high_above=_typed(run, "high_above", float, "[run]", 3.0),
        transfer_aspect=_typed(run, "transfer_aspect", str, "[run]", "auto"),
        pair_mode=_choice(
            _typed(run, "pair_mode", str, "[run]", "auto"), PAIR_MODES, "[run].pair_mode"
        ),
        pair_k=pair_k,
        pair_delta=pair_delta,
        win_pairing=_choice(
            _typed(run, "win_pairing", str, "[run]", "auto"), WIN_PAIRINGS, "[run].win_pairing"
        ),
        win_ties=_choice(
            _typed(run, "win_ties", str, "[run]", "half"), TIE_POLICIES, "[run].win_ties"
        ),
        parallel=_typed(run, "parallel", bool, "[run]", False),
        output_dir=Path(_typed(output, "directory", str, "[output]", "out")),
        output_formats=tuple(formats),
    )

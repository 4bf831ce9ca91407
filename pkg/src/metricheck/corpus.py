"""Benchmark corpus model: records, dataset specs, ingestion, validation.

This module is the single source of truth for the on-disk formats.

JSONL (canonical): one object per line with fields

    dataset   string, required
    sample    string, required
    system    string, required
    output    string, required (non-empty after trimming)
    source    string, optional
    references  list of strings, optional
    human     map aspect name -> rating, optional
    metrics   map metric name -> score, optional
    pair_group  string, optional; groups records sharing a prompt for
                matched pairwise comparison

Unknown fields are ignored with a warning.  CSV uses the same field names
with dotted headers for the two maps (human.Fluency, metrics.bleu); the
references column joins multiple references with " ||| ".

Aspect names are normalized case-insensitively through an alias map; built-in
aliases unify dialogue-evaluation aspect vocabularies that name the same
dimension differently (e.g. MaintainsContext and Coherence).  Annotator-level
rows may either repeat the record key or carry a "#annotator" suffix on the
sample id; ``aggregate_annotators`` merges them.
"""

from __future__ import annotations

import csv
import json
import logging
import math
import re
import statistics
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

logger = logging.getLogger(__name__)

__all__ = [
    "CorpusError",
    "Record",
    "DatasetSpec",
    "ValidationReport",
    "SystemSummary",
    "TASKS",
    "METRIC_DOMAINS",
    "DEFAULT_ASPECT_ALIASES",
    "normalize_aspect",
    "load_records",
    "serialize",
    "validate",
    "aggregate_annotators",
    "system_summaries",
]

TASKS = ("TextSumm", "DiagGen", "CtrlGen", "Other")
METRIC_DOMAINS = ("InDomain", "SemanticShift", "DomainShift")

DEFAULT_RATING_MIN = 1.0
DEFAULT_RATING_MAX = 5.0

# Canonical aspect vocabulary; lookups collapse case, spaces, and underscores,
# so "maintains_context", "Maintains Context", and "MaintainsContext" all hit
# the same entry.
_CANONICAL_ASPECTS = (
    "Coherence",
    "Consistency",
    "Engagingness",
    "Fluency",
    "Groundedness",
    "Informativeness",
    "Naturalness",
    "Overall",
    "Relevance",
    "Understandability",
)
DEFAULT_ASPECT_ALIASES = {
    "understandable": "Understandability",
    "natural": "Naturalness",
    "maintainscontext": "Coherence",
    "engaging": "Engagingness",
    "usesknowledge": "Groundedness",
    "overallquality": "Overall",
}


class CorpusError(ValueError):
    """Malformed corpus input (bad row, duplicate key, unreadable file)."""


def _collapse(name: str) -> str:
    return re.sub(r"[\s_]+", "", name).lower()


def _alias_table(aliases: Mapping[str, str] | None) -> dict[str, str]:
    table = {_collapse(name): name for name in _CANONICAL_ASPECTS}
    table.update(DEFAULT_ASPECT_ALIASES)
    if aliases:
        table.update({_collapse(key): value for key, value in aliases.items()})
    return table


def normalize_aspect(name: str, aliases: Mapping[str, str] | None = None) -> str:
    """Resolve an aspect name through the alias map, case-insensitively.

    Names without an alias entry are returned unchanged.
    """
    return _alias_table(aliases).get(_collapse(name), name)


@dataclass(frozen=True)
class Record:
    """One system output on one sample, with its ratings and scores.

    (dataset_id, sample_id, system_id) identifies a record uniquely within a
    corpus.  Treat instances as immutable once validated; pipelines share
    them freely across threads.
    """

    dataset_id: str
    sample_id: str
    system_id: str
    output_text: str
    source_text: str | None = None
    references: tuple[str, ...] = ()
    human_ratings: Mapping[str, float] = field(default_factory=dict)
    metric_scores: Mapping[str, float] = field(default_factory=dict)
    pair_group: str | None = None

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.dataset_id, self.sample_id, self.system_id)

    @property
    def locator(self) -> str:
        return f"{self.dataset_id}/{self.sample_id}/{self.system_id}"


@dataclass(frozen=True)
class DatasetSpec:
    """Declared shape of one dataset: task, aspects, bounds, metric domains.

    Args:
        dataset_id: dataset name records refer to.
        task: one of TASKS.
        aspects: human evaluation aspects the dataset declares.
        rating_min / rating_max: inclusive rating bounds (default [1, 5]).
        metric_domains: metric name -> one of METRIC_DOMAINS; tags which
            transfer group the metric belongs to on this dataset.
        pair_lists: optional {"Easy"|"Hard": [(system_a, system_b), ...]}.
    """

    dataset_id: str
    task: str = "Other"
    aspects: tuple[str, ...] = ()
    rating_min: float = DEFAULT_RATING_MIN
    rating_max: float = DEFAULT_RATING_MAX
    metric_domains: Mapping[str, str] = field(default_factory=dict)
    pair_lists: Mapping[str, tuple[tuple[str, str], ...]] | None = None

    def __post_init__(self):
        if self.task not in TASKS:
            raise ValueError(f"unknown task {self.task!r}; expected one of {TASKS}")
        if not self.rating_min < self.rating_max:
            raise ValueError(
                f"rating_min must be < rating_max, got [{self.rating_min}, {self.rating_max}]"
            )
        for metric, domain in self.metric_domains.items():
            if domain not in METRIC_DOMAINS:
                raise ValueError(
                    f"unknown domain {domain!r} for metric {metric!r}; "
                    f"expected one of {METRIC_DOMAINS}"
                )
        if self.pair_lists is not None:
            for difficulty in self.pair_lists:
                if difficulty not in ("Easy", "Hard"):
                    raise ValueError(f"pair list difficulty must be Easy or Hard, got {difficulty!r}")


@dataclass(frozen=True)
class ValidationReport:
    """Validation outcome: errors are data here, not control flow."""

    errors: tuple[tuple[str, str], ...]
    warnings: tuple[tuple[str, str], ...]
    counts: Mapping[str, int]

    @property
    def ok(self) -> bool:
        return not self.errors


# ----------------------------------------------------------------------------
# Ingestion

_KNOWN_FIELDS = {
    "dataset",
    "sample",
    "system",
    "output",
    "source",
    "references",
    "human",
    "metrics",
    "pair_group",
}
_REFERENCE_SEPARATOR = " ||| "


def _coerce_score_map(raw, path, line_no, field_name) -> dict[str, float]:
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise CorpusError(f"{path}:{line_no}: field '{field_name}' must be an object")
    out = {}
    for key, value in raw.items():
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise CorpusError(
                f"{path}:{line_no}: field '{field_name}.{key}' must be a number, got {value!r}"
            )
        out[str(key)] = float(value)
    return out


def _require_string(raw, path, line_no, field_name) -> str:
    if not isinstance(raw, str) or not raw:
        raise CorpusError(f"{path}:{line_no}: field '{field_name}' must be a non-empty string")
    return raw


def _record_from_json(obj, path, line_no, alias_table) -> tuple[Record, set[str]]:
    if not isinstance(obj, dict):
        raise CorpusError(f"{path}:{line_no}: expected a JSON object")
    unknown = set(obj) - _KNOWN_FIELDS
    human = _coerce_score_map(obj.get("human"), path, line_no, "human")
    human = {alias_table.get(_collapse(k), k): v for k, v in human.items()}
    references = obj.get("references", [])
    if not isinstance(references, list) or any(not isinstance(r, str) for r in references):
        raise CorpusError(f"{path}:{line_no}: field 'references' must be a list of strings")
    source = obj.get("source")
    if source is not None and not isinstance(source, str):
        raise CorpusError(f"{path}:{line_no}: field 'source' must be a string")
    pair_group = obj.get("pair_group")
    if pair_group is not None and not isinstance(pair_group, str):
        raise CorpusError(f"{path}:{line_no}: field 'pair_group' must be a string")
    record = Record(
        dataset_id=_require_string(obj.get("dataset"), path, line_no, "dataset"),
        sample_id=_require_string(obj.get("sample"), path, line_no, "sample"),
        system_id=_require_string(obj.get("system"), path, line_no, "system"),
        output_text=_require_string(obj.get("output"), path, line_no, "output"),
        source_text=source,
        references=tuple(references),
        human_ratings=human,
        metric_scores=_coerce_score_map(obj.get("metrics"), path, line_no, "metrics"),
        pair_group=pair_group,
    )
    return record, unknown


def _iter_jsonl(path: Path, alias_table) -> Iterable[tuple[Record, set[str]]]:
    with path.open(encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"{path}:{line_no}: invalid JSON: {exc.msg}") from None
            yield _record_from_json(obj, path, line_no, alias_table)


def _record_from_csv_row(row, path, line_no, alias_table) -> tuple[Record, set[str]]:
    human: dict[str, float] = {}
    metrics: dict[str, float] = {}
    plain: dict[str, str] = {}
    unknown: set[str] = set()
    for header, cell in row.items():
        if header is None:
            raise CorpusError(f"{path}:{line_no}: more cells than headers")
        if cell is None or cell == "":
            continue
        if header.startswith("human."):
            aspect = header[len("human.") :]
            try:
                human[alias_table.get(_collapse(aspect), aspect)] = float(cell)
            except ValueError:
                raise CorpusError(
                    f"{path}:{line_no}: field '{header}' must be numeric, got {cell!r}"
                ) from None
        elif header.startswith("metrics."):
            try:
                metrics[header[len("metrics.") :]] = float(cell)
            except ValueError:
                raise CorpusError(
                    f"{path}:{line_no}: field '{header}' must be numeric, got {cell!r}"
                ) from None
        elif header in ("dataset", "sample", "system", "output", "source", "references", "pair_group"):
            plain[header] = cell
        else:
            unknown.add(header)
    for required in ("dataset", "sample", "system", "output"):
        if required not in plain:
            raise CorpusError(f"{path}:{line_no}: field '{required}' is missing or empty")
    references = tuple(
        part for part in plain.get("references", "").split(_REFERENCE_SEPARATOR) if part
    )
    record = Record(
        dataset_id=plain["dataset"],
        sample_id=plain["sample"],
        system_id=plain["system"],
        output_text=plain["output"],
        source_text=plain.get("source"),
        references=references,
        human_ratings=human,
        metric_scores=metrics,
        pair_group=plain.get("pair_group"),
    )
    return record, unknown


def _iter_csv(path: Path, alias_table) -> Iterable[tuple[Record, set[str]]]:
    with path.open(encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None:
            return
        for row in reader:
            yield _record_from_csv_row(row, path, reader.line_num, alias_table)


def load_records(
    path,
    format: str | None = None,
    aliases: Mapping[str, str] | None = None,
) -> list[Record]:
    """Load records from a JSONL or CSV file.

    Args:
        path: input file; must exist.
        format: "jsonl" or "csv"; inferred from the extension when omitted.
        aliases: extra aspect aliases merged over the built-in ones.

    Raises:
        CorpusError: missing file, malformed row (with line number and field),
            or duplicate (dataset, sample, system) key.
    """
    path = Path(path)
    if not path.is_file():
        raise CorpusError(f"corpus file not found: {path}")
    if format is None:
        suffix = path.suffix.lower()
        if suffix in (".jsonl", ".ndjson", ".json"):
            format = "jsonl"
        elif suffix == ".csv":
            format = "csv"
        else:
            raise CorpusError(f"cannot infer format from {path.name!r}; pass format=")
    if format not in ("jsonl", "csv"):
        raise CorpusError(f"unknown format: {format!r}")
    alias_table = _alias_table(aliases)
    rows = _iter_jsonl(path, alias_table) if format == "jsonl" else _iter_csv(path, alias_table)
    records: list[Record] = []
    seen: set[tuple[str, str, str]] = set()
    unknown_fields: set[str] = set()
    for record, unknown in rows:
        if record.key in seen:
            raise CorpusError(f"{path}: duplicate record key {record.key}")
        seen.add(record.key)
        records.append(record)
        unknown_fields |= unknown
    if unknown_fields:
        logger.warning("%s: ignored unknown fields: %s", path, ", ".join(sorted(unknown_fields)))
    if not records:
        logger.warning("%s: no records", path)
    return records


def _jsonable(record: Record) -> dict:
    obj: dict = {
        "dataset": record.dataset_id,
        "sample": record.sample_id,
        "system": record.system_id,
        "output": record.output_text,
    }
    if record.source_text is not None:
        obj["source"] = record.source_text
    if record.references:
        obj["references"] = list(record.references)
    if record.human_ratings:
        obj["human"] = dict(sorted(record.human_ratings.items()))
    if record.metric_scores:
        obj["metrics"] = dict(sorted(record.metric_scores.items()))
    if record.pair_group is not None:
        obj["pair_group"] = record.pair_group
    return obj


def serialize(records: Sequence[Record], path, format: str = "jsonl") -> None:
    """Write records to ``path``; loading the file back yields equal records."""
    path = Path(path)
    if format == "jsonl":
        with path.open("w", encoding="utf-8") as handle:
            for record in records:
                handle.write(json.dumps(_jsonable(record), sort_keys=True))
                handle.write("\n")
    elif format == "csv":
        aspect_columns = sorted({a for r in records for a in r.human_ratings})
        metric_columns = sorted({m for r in records for m in r.metric_scores})
        headers = (
            ["dataset", "sample", "system", "output", "source", "references", "pair_group"]
            + [f"human.{a}" for a in aspect_columns]
            + [f"metrics.{m}" for m in metric_columns]
        )
        with path.open("w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(headers)
            for record in records:
                row = [
                    record.dataset_id,
                    record.sample_id,
                    record.system_id,
                    record.output_text,
                    record.source_text or "",
                    _REFERENCE_SEPARATOR.join(record.references),
                    record.pair_group or "",
                ]
                row += [
                    repr(record.human_ratings[a]) if a in record.human_ratings else ""
                    for a in aspect_columns
                ]
                row += [
                    repr(record.metric_scores[m]) if m in record.metric_scores else ""
                    for m in metric_columns
                ]
                writer.writerow(row)
    else:
        raise CorpusError(f"unknown format: {format!r}")


# ----------------------------------------------------------------------------
# Validation and aggregation

def validate(records: Sequence[Record], specs: Sequence[DatasetSpec]) -> ValidationReport:
    """Check rating bounds, key uniqueness, and spec reference integrity.

    Never raises for data problems; everything lands in the report.  Datasets
    without a spec are checked against the default [1, 5] bounds and flagged
    with a warning.
    """
    errors: list[tuple[str, str]] = []
    warnings: list[tuple[str, str]] = []
    spec_by_id = {spec.dataset_id: spec for spec in specs}
    counts = Counter(record.dataset_id for record in records)

    seen: set[tuple[str, str, str]] = set()
    unspecced: set[str] = set()
    for record in records:
        if record.key in seen:
            errors.append((record.locator, "duplicate record key"))
        seen.add(record.key)
        if not record.output_text.strip():
            errors.append((record.locator, "output text is empty after trimming"))
        spec = spec_by_id.get(record.dataset_id)
        if spec is None:
            if record.dataset_id not in unspecced:
                unspecced.add(record.dataset_id)
                warnings.append(
                    (
                        record.dataset_id,
                        f"no dataset spec; checking default bounds "
                        f"[{DEFAULT_RATING_MIN:g}, {DEFAULT_RATING_MAX:g}]",
                    )
                )
            low, high = DEFAULT_RATING_MIN, DEFAULT_RATING_MAX
            declared = None
        else:
            low, high = spec.rating_min, spec.rating_max
            declared = set(spec.aspects)
        for aspect in sorted(record.human_ratings):
            value = record.human_ratings[aspect]
            if not math.isfinite(value) or not low <= value <= high:
                errors.append(
                    (record.locator, f"rating {value!r} for aspect '{aspect}' outside [{low:g}, {high:g}]")
                )
            elif declared is not None and aspect not in declared:
                warnings.append((record.locator, f"aspect '{aspect}' not declared for dataset"))
        for metric in sorted(record.metric_scores):
            if not math.isfinite(record.metric_scores[metric]):
                warnings.append((record.locator, f"non-finite score for metric '{metric}'"))

    systems_by_dataset: dict[str, set[str]] = {}
    metrics_by_dataset: dict[str, set[str]] = {}
    for record in records:
        systems_by_dataset.setdefault(record.dataset_id, set()).add(record.system_id)
        metrics_by_dataset.setdefault(record.dataset_id, set()).update(record.metric_scores)
    for spec in specs:
        systems = systems_by_dataset.get(spec.dataset_id, set())
        if spec.pair_lists:
            for difficulty in sorted(spec.pair_lists):
                for pair in spec.pair_lists[difficulty]:
                    for system in pair:
                        if system not in systems:
                            errors.append(
                                (
                                    spec.dataset_id,
                                    f"{difficulty} pair references unknown system '{system}'",
                                )
                            )
        present = metrics_by_dataset.get(spec.dataset_id, set())
        for metric in sorted(spec.metric_domains):
            if metric not in present:
                warnings.append(
                    (spec.dataset_id, f"metric '{metric}' tagged in metric_domains but absent from records")
                )
    return ValidationReport(tuple(errors), tuple(warnings), dict(sorted(counts.items())))


_ANNOTATOR_SUFFIX = "#"


def aggregate_annotators(records: Sequence[Record], policy: str = "mean") -> list[Record]:
    """Merge annotator-level rows into one record per (dataset, sample, system).

    Rows merge when they share the key after stripping an optional
    "#annotator" suffix from the sample id.  Each aspect is aggregated over
    the rows that carry it.  Metric scores must agree exactly across merged
    rows; text fields are taken from the first row.  Applying the function
    twice equals applying it once.
    """
    if policy not in ("mean", "median"):
        raise ValueError(f"unknown policy: {policy!r}")
    aggregate = statistics.fmean if policy == "mean" else statistics.median
    grouped: dict[tuple[str, str, str], list[Record]] = {}
    for record in records:
        base_sample = record.sample_id.split(_ANNOTATOR_SUFFIX, 1)[0]
        grouped.setdefault((record.dataset_id, base_sample, record.system_id), []).append(record)
    merged: list[Record] = []
    for (dataset_id, sample_id, system_id), rows in grouped.items():
        if len(rows) == 1 and rows[0].sample_id == sample_id:
            merged.append(rows[0])
            continue
        metrics: dict[str, float] = {}
        for row in rows:
            for metric, value in row.metric_scores.items():
                if metric in metrics and metrics[metric] != value:
                    raise ValueError(
                        f"conflicting scores for metric '{metric}' at "
                        f"{dataset_id}/{sample_id}/{system_id}: "
                        f"{metrics[metric]!r} vs {value!r}"
                    )
                metrics[metric] = value
        ratings: dict[str, list[float]] = {}
        for row in rows:
            for aspect, value in row.human_ratings.items():
                ratings.setdefault(aspect, []).append(value)
        first = rows[0]
        merged.append(
            Record(
                dataset_id=dataset_id,
                sample_id=sample_id,
                system_id=system_id,
                output_text=first.output_text,
                source_text=first.source_text,
                references=first.references,
                human_ratings={a: float(aggregate(vs)) for a, vs in ratings.items()},
                metric_scores=metrics,
                pair_group=first.pair_group,
            )
        )
    return merged


@dataclass(frozen=True)
class SystemSummary:
    """Per-system means over available values, with per-key counts."""

    system_id: str
    aspect_means: Mapping[str, float]
    metric_means: Mapping[str, float]
    aspect_n: Mapping[str, int]
    metric_n: Mapping[str, int]
    n_records: int


def system_summaries(records: Sequence[Record]) -> list[SystemSummary]:
    """Mean rating per aspect and mean score per metric, per system.

    Missing and non-finite values are skipped; a key carried by no record of
    a system is absent from that system's summary.  Output is sorted by
    system id and invariant under record reordering.
    """
    by_system: dict[str, list[Record]] = {}
    for record in records:
        by_system.setdefault(record.system_id, []).append(record)
    summaries = []
    for system_id in sorted(by_system):
        rows = by_system[system_id]
        aspect_values: dict[str, list[float]] = {}
        metric_values: dict[str, list[float]] = {}
        for row in rows:
            for aspect, value in row.human_ratings.items():
                if math.isfinite(value):
                    aspect_values.setdefault(aspect, []).append(value)
            for metric, value in row.metric_scores.items():
                if math.isfinite(value):
                    metric_values.setdefault(metric, []).append(value)
        summaries.append(
            SystemSummary(
                system_id=system_id,
                aspect_means={a: statistics.fmean(v) for a, v in sorted(aspect_values.items())},
                metric_means={m: statistics.fmean(v) for m, v in sorted(metric_values.items())},
                aspect_n={a: len(v) for a, v in sorted(aspect_values.items())},
                metric_n={m: len(v) for m, v in sorted(metric_values.items())},
                n_records=len(rows),
            )
        )
    return summaries

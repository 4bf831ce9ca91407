"""The five checklist assessments as batch pipelines over a corpus.

Assessments: cross-dataset transfer correlation, aspect-level KS between
quality bands, aspect-level preference similarity, system-level KS over
Easy/Hard pairs, and system-level preference similarity — plus the shared
machinery: quality-band splitting, pair construction, and pairwise win
matrices.

Human aspect columns run through the same KS / preference / win machinery
as metric columns; a key is looked up in a record's human ratings first and
its metric scores second.  Every pipeline is a pure function of the record
list, so the orchestrator can evaluate cells in parallel and still assemble
a canonical, byte-stable report.
"""

from __future__ import annotations

import enum
import logging
import math
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from .config import RunConfig
from .corpus import (
    CorpusError,
    DatasetSpec,
    Record,
    SystemSummary,
    aggregate_annotators,
    load_records,
    system_summaries,
    validate,
)
from .preference import (
    DEFAULT_EPSILON,
    SimilarityScore,
    UtilityTable,
    linearize,
    preference_order,
    preference_similarity,
)
from .stats import CorrelationResult, KsReport, correlation, ks_distance

logger = logging.getLogger(__name__)

# Canonical ascending-quality sequence the metric-induced band order is
# compared against.
BAND_SYMBOLS = ("L", "M", "H")

ASPECT_KS_COMPARISONS = (
    ("Lo-Hi", "Low", "High"),
    ("Lo-Mod", "Low", "Moderate"),
    ("Hi-Mod", "High", "Moderate"),
)


class QualityBand(enum.Enum):
    LOW = "Low"
    MODERATE = "Moderate"
    HIGH = "High"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class QualityThresholds:
    """Rating cut points: Low < low_below, High > high_above, Moderate between.

    Equality with a threshold is tested within `tolerance`, so annotator
    means that land on a boundary up to float noise still count as exact.
    """

    low_below: float = 3.0
    high_above: float = 3.0
    tolerance: float = 1e-9

    def __post_init__(self):
        if not (math.isfinite(self.low_below) and math.isfinite(self.high_above)):
            raise ValueError("thresholds must be finite")
        if self.low_below > self.high_above:
            raise ValueError(
                f"low_below must be <= high_above, got {self.low_below} > {self.high_above}"
            )
        if not (math.isfinite(self.tolerance) and self.tolerance >= 0):
            raise ValueError("tolerance must be a finite non-negative real")

    def band(self, rating: float) -> QualityBand:
        if rating < self.low_below and self.low_below - rating > self.tolerance:
            return QualityBand.LOW
        if rating > self.high_above and rating - self.high_above > self.tolerance:
            return QualityBand.HIGH
        return QualityBand.MODERATE


DEFAULT_THRESHOLDS = QualityThresholds()


@dataclass(frozen=True)
class QualitySplit:
    """Disjoint Low/Moderate/High partition of the aspect-bearing records."""

    low: tuple[Record, ...]
    moderate: tuple[Record, ...]
    high: tuple[Record, ...]
    missing: int

    def __getitem__(self, band: QualityBand) -> tuple[Record, ...]:
        return {
            QualityBand.LOW: self.low,
            QualityBand.MODERATE: self.moderate,
            QualityBand.HIGH: self.high,
        }[band]

    @property
    def n_split(self) -> int:
        return len(self.low) + len(self.moderate) + len(self.high)


@dataclass(frozen=True)
class Skipped:
    """Explicit placeholder for a cell that could not be computed."""

    reason: str


def split_quality(
    records: Sequence[Record],
    aspect: str,
    thresholds: QualityThresholds | None = None,
) -> QualitySplit:
    """Partition records into quality bands by their rating on one aspect.

    Records lacking the aspect (or carrying a non-finite rating) are
    excluded and counted in `missing`.
    """
    thresholds = thresholds or DEFAULT_THRESHOLDS
    bands: dict[QualityBand, list[Record]] = {band: [] for band in QualityBand}
    missing = 0
    for record in records:
        rating = record.human_ratings.get(aspect)
        if rating is None or not math.isfinite(rating):
            missing += 1
            continue
        bands[thresholds.band(rating)].append(record)
    return QualitySplit(
        low=tuple(bands[QualityBand.LOW]),
        moderate=tuple(bands[QualityBand.MODERATE]),
        high=tuple(bands[QualityBand.HIGH]),
        missing=missing,
    )


def _metric_values(records: Sequence[Record], metric: str) -> list[float]:
    values = [
        record.metric_scores[metric]
        for record in records
        if metric in record.metric_scores and math.isfinite(record.metric_scores[metric])
    ]
    return values


def _key_values(records: Sequence[Record], key: str) -> list[float]:
    # Uniform aspect-or-metric lookup; human ratings shadow a same-named metric.
    values = []
    for record in records:
        value = record.human_ratings.get(key)
        if value is None:
            value = record.metric_scores.get(key)
        if value is not None and math.isfinite(value):
            values.append(value)
    return values


def aspect_level_ks(
    records: Sequence[Record],
    aspect: str,
    metric: str,
    thresholds: QualityThresholds | None = None,
) -> dict[str, KsReport | Skipped]:
    """KS distance between metric-score distributions of quality-band pairs.

    Returns reports keyed "Lo-Hi", "Lo-Mod", "Hi-Mod".  A comparison whose
    side holds fewer than two metric scores becomes a Skipped entry; a
    metric absent from every record is an error.
    """
    if not any(metric in record.metric_scores for record in records):
        raise ValueError(f"metric {metric!r} is absent from every record")
    split = split_quality(records, aspect, thresholds)
    scores = {
        "Low": _metric_values(split.low, metric),
        "Moderate": _metric_values(split.moderate, metric),
        "High": _metric_values(split.high, metric),
    }
    out: dict[str, KsReport | Skipped] = {}
    for name, side_a, side_b in ASPECT_KS_COMPARISONS:
        small = [side for side in (side_a, side_b) if len(scores[side]) < 2]
        if small:
            out[name] = Skipped(
                f"band {small[0]} has {len(scores[small[0]])} {metric!r} scores; need >= 2"
            )
            continue
        out[name] = ks_distance(scores[side_a], scores[side_b], label_a=side_a, label_b=side_b)
    return out


@dataclass(frozen=True)
class AspectPreference:
    """Band order induced by mean metric score, scored against L < M < H."""

    similarity: SimilarityScore
    sequence: tuple[str, ...]
    canonical: tuple[str, ...]
    tied: bool


def aspect_level_preference(
    records: Sequence[Record],
    aspect: str,
    metric: str,
    thresholds: QualityThresholds | None = None,
    epsilon: float = DEFAULT_EPSILON,
) -> AspectPreference | Skipped:
    """Similarity between the metric-induced band order and the human one.

    Bands are ordered by mean metric score ascending (epsilon-merged ties,
    tie groups linearized in ascending label order) and the sequence is
    compared against the canonical ascending-quality order (L, M, H).  An
    empty band yields a Skipped entry.
    """
    split = split_quality(records, aspect, thresholds)
    band_records = {"L": split.low, "M": split.moderate, "H": split.high}
    utilities: dict[str, float] = {}
    for symbol in BAND_SYMBOLS:
        values = _metric_values(band_records[symbol], metric)
        if not values:
            band = {"L": "Low", "M": "Moderate", "H": "High"}[symbol]
            return Skipped(f"band {band} has no {metric!r} scores")
        utilities[symbol] = statistics.fmean(values)
    order = preference_order(UtilityTable(utilities, source=metric), epsilon=epsilon)
    sequence = linearize(order)
    similarity = preference_similarity(sequence, list(BAND_SYMBOLS))
    tied = any(len(group) > 1 for group in order.tie_groups)
    return AspectPreference(
        similarity=similarity,
        sequence=tuple(sequence),
        canonical=BAND_SYMBOLS,
        tied=tied,
    )


@dataclass(frozen=True)
class PairSpec:
    """One system pair to compare, labeled by expected difficulty."""

    system_a: str
    system_b: str
    difficulty: str
    origin: str

    def __post_init__(self):
        if self.system_a == self.system_b:
            raise ValueError(f"pair must name two distinct systems, got {self.system_a!r} twice")
        if self.difficulty not in ("Easy", "Hard"):
            raise ValueError(f"difficulty must be Easy or Hard, got {self.difficulty!r}")
        if self.origin not in ("configured", "generated"):
            raise ValueError(f"origin must be configured or generated, got {self.origin!r}")


def _overall_utility(summary: SystemSummary) -> float:
    # Overall aspect when rated, else the unweighted mean of aspect means.
    if "Overall" in summary.aspect_means:
        return summary.aspect_means["Overall"]
    if not summary.aspect_means:
        raise ValueError(f"system {summary.system_id!r} has no human ratings to rank by")
    return statistics.fmean(summary.aspect_means.values())


def make_pairs(
    summaries: Sequence[SystemSummary],
    mode: str,
    pair_lists: Mapping[str, Sequence[tuple[str, str]]] | None = None,
    k: int = 1,
    delta: float | None = None,
) -> list[PairSpec]:
    """Build the Easy/Hard system pairs to compare.

    configured: return the declared pair lists verbatim (Easy first).
    generated: rank systems by mean human overall score; Easy pairs cross
    the bottom-k with the top-k, Hard pairs are adjacent ranks whose
    utility gap is <= delta.  delta defaults to the 0.25 quantile of the
    adjacent gaps.
    """
    if mode == "configured":
        if pair_lists is None:
            raise ValueError("configured pair mode requires a dataset pair list")
        pairs = []
        for difficulty in ("Easy", "Hard"):
            for system_a, system_b in pair_lists.get(difficulty, ()):
                pairs.append(PairSpec(system_a, system_b, difficulty, origin="configured"))
        return pairs
    if mode != "generated":
        raise ValueError(f"pair mode must be configured or generated, got {mode!r}")

    if len(summaries) < 2:
        raise ValueError(f"need at least 2 systems to build pairs, got {len(summaries)}")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    ranked = sorted(summaries, key=lambda s: (_overall_utility(s), s.system_id))
    utilities = [_overall_utility(s) for s in ranked]
    names = [s.system_id for s in ranked]

    pairs: list[PairSpec] = []
    seen: set[tuple[str, str]] = set()
    bottom = names[:k]
    top = names[-k:]
    for low_name in bottom:
        for high_name in top:
            if low_name == high_name or (low_name, high_name) in seen:
                continue
            seen.add((low_name, high_name))
            pairs.append(PairSpec(low_name, high_name, "Easy", origin="generated"))

    gaps = [utilities[i + 1] - utilities[i] for i in range(len(utilities) - 1)]
    if delta is None:
        delta = float(np.quantile(np.asarray(gaps, dtype=float), 0.25))
    for i, gap in enumerate(gaps):
        if gap <= delta:
            pairs.append(PairSpec(names[i], names[i + 1], "Hard", origin="generated"))
    return pairs


def system_level_ks(
    records: Sequence[Record],
    pair: PairSpec,
    key: str,
) -> KsReport | Skipped:
    """KS distance between two systems' per-record score distributions.

    `key` may name a human aspect or a metric.  A side with fewer than two
    scores yields a Skipped entry.
    """
    sides = {}
    for name in (pair.system_a, pair.system_b):
        sides[name] = _key_values([r for r in records if r.system_id == name], key)
    for name in (pair.system_a, pair.system_b):
        if len(sides[name]) < 2:
            return Skipped(f"system {name!r} has {len(sides[name])} {key!r} scores; need >= 2")
    return ks_distance(
        sides[pair.system_a],
        sides[pair.system_b],
        label_a=pair.system_a,
        label_b=pair.system_b,
    )


def _system_utilities(records: Sequence[Record], key: str) -> dict[str, float]:
    values: dict[str, list[float]] = {}
    for record in records:
        value = record.human_ratings.get(key)
        if value is None:
            value = record.metric_scores.get(key)
        if value is not None and math.isfinite(value):
            values.setdefault(record.system_id, []).append(value)
    return {system: statistics.fmean(v) for system, v in values.items()}


def system_level_preference(
    records: Sequence[Record],
    key_human: str,
    key_metric: str,
    epsilon: float = DEFAULT_EPSILON,
) -> SimilarityScore:
    """Similarity between the system orders induced by two score columns.

    Systems are ranked by mean score under each key; both orders are
    linearized and compared.  Only systems carrying both keys participate;
    fewer than two such systems is an error.
    """
    human = _system_utilities(records, key_human)
    metric = _system_utilities(records, key_metric)
    shared = sorted(set(human) & set(metric))
    if len(shared) < 2:
        raise ValueError(
            f"need at least 2 systems with both {key_human!r} and {key_metric!r}, "
            f"got {len(shared)}"
        )
    order_human = preference_order(
        UtilityTable({s: human[s] for s in shared}, source=key_human), epsilon=epsilon
    )
    order_metric = preference_order(
        UtilityTable({s: metric[s] for s in shared}, source=key_metric), epsilon=epsilon
    )
    return preference_similarity(linearize(order_metric), linearize(order_human))


@dataclass(frozen=True)
class WinMatrix:
    """Pairwise win fractions: entry (A, B) is the fraction A beats B.

    Diagonal and cells with no comparisons hold nan and count 0.  Under
    half-credit ties, wins[A][B] + wins[B][A] = 1 wherever counts > 0.
    """

    systems: tuple[str, ...]
    wins: tuple[tuple[float, ...], ...]
    counts: tuple[tuple[int, ...], ...]

    def index(self, system: str) -> int:
        return self.systems.index(system)

    def win(self, system_a: str, system_b: str) -> float:
        return self.wins[self.index(system_a)][self.index(system_b)]

    def count(self, system_a: str, system_b: str) -> int:
        return self.counts[self.index(system_a)][self.index(system_b)]


def _pair_outcomes(scores_a: Sequence[float], scores_b: Sequence[float]) -> tuple[int, int, int]:
    # (wins for a, ties, total) over the full cross product, via sorted search.
    a = np.asarray(scores_a, dtype=float)
    b_sorted = np.sort(np.asarray(scores_b, dtype=float))
    less = int(np.searchsorted(b_sorted, a, side="left").sum())
    less_or_equal = int(np.searchsorted(b_sorted, a, side="right").sum())
    return less, less_or_equal - less, a.size * b_sorted.size


def win_matrix(
    records: Sequence[Record],
    key: str,
    pairing: str = "auto",
    tie_policy: str = "half",
) -> WinMatrix:
    """Fraction of comparisons each system wins against each other system.

    by_pair_group compares only records sharing a pair_group tag (matched
    prompts); cross_product compares every score pair.  pairing="auto"
    selects by_pair_group when any record carries a tag.  Ties count half
    a win under tie_policy="half" and are excluded under "drop"; a cell
    with no comparisons is nan with count 0.
    """
    if tie_policy not in ("half", "drop"):
        raise ValueError(f"tie_policy must be half or drop, got {tie_policy!r}")
    if pairing == "auto":
        pairing = (
            "by_pair_group"
            if any(record.pair_group is not None for record in records)
            else "cross_product"
        )
    if pairing not in ("by_pair_group", "cross_product"):
        raise ValueError(f"pairing must be by_pair_group or cross_product, got {pairing!r}")

    def score_of(record: Record) -> float | None:
        value = record.human_ratings.get(key)
        if value is None:
            value = record.metric_scores.get(key)
        if value is None or not math.isfinite(value):
            return None
        return value

    scored = [(record, score_of(record)) for record in records]
    systems = sorted({record.system_id for record, value in scored if value is not None})
    if len(systems) < 2:
        raise ValueError(f"need at least 2 systems with {key!r} scores, got {len(systems)}")
    index = {system: i for i, system in enumerate(systems)}
    n = len(systems)

    gt = np.zeros((n, n), dtype=np.int64)
    eq = np.zeros((n, n), dtype=np.int64)
    total = np.zeros((n, n), dtype=np.int64)

    if pairing == "cross_product":
        groups: list[dict[str, list[float]]] = [
            {
                system: [value for record, value in scored
                         if value is not None and record.system_id == system]
                for system in systems
            }
        ]
    else:
        by_group: dict[str, dict[str, list[float]]] = {}
        for record, value in scored:
            if value is None or record.pair_group is None:
                continue
            by_group.setdefault(record.pair_group, {}).setdefault(
                record.system_id, []
            ).append(value)
        groups = [by_group[tag] for tag in sorted(by_group)]

    for group in groups:
        present = sorted(name for name in group if group[name])
        for i_name in present:
            for j_name in present:
                if i_name >= j_name:
                    continue
                won, tied, count = _pair_outcomes(group[i_name], group[j_name])
                i, j = index[i_name], index[j_name]
                gt[i, j] += won
                eq[i, j] += tied
                total[i, j] += count

    # Mirror the upper triangle: B's wins over A are A's losses.
    gt = gt + (total - gt - eq).T
    eq = eq + eq.T
    total = total + total.T

    wins = np.full((n, n), math.nan)
    counts = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            if i == j or total[i, j] == 0:
                continue
            if tie_policy == "half":
                wins[i, j] = (gt[i, j] + 0.5 * eq[i, j]) / total[i, j]
                counts[i, j] = int(total[i, j])
            else:
                decided = total[i, j] - eq[i, j]
                counts[i, j] = int(decided)
                if decided > 0:
                    wins[i, j] = gt[i, j] / decided
    return WinMatrix(
        systems=tuple(systems),
        wins=tuple(tuple(float(v) for v in row) for row in wins),
        counts=tuple(tuple(int(v) for v in row) for row in counts),
    )


@dataclass(frozen=True)
class TransferCell:
    """Correlation of one metric against human scores on one dataset."""

    dataset_id: str
    task: str
    domain: str
    result: CorrelationResult


@dataclass(frozen=True)
class TransferResult:
    """Per-dataset correlations for one metric, grouped by domain and task."""

    metric: str
    method: str
    aspect_policy: str
    cells: tuple[TransferCell, ...]
    skipped: tuple[tuple[str, str], ...] = ()

    def _group_means(self, group_of: Callable[[TransferCell], str]) -> dict[str, float | None]:
        groups: dict[str, list[float]] = {}
        for cell in self.cells:
            groups.setdefault(group_of(cell), [])
            if cell.result.rho is not None:
                groups[group_of(cell)].append(cell.result.rho)
        return {
            name: (statistics.fmean(values) if values else None)
            for name, values in sorted(groups.items())
        }

    def domain_means(self) -> dict[str, float | None]:
        return self._group_means(lambda cell: cell.domain)

    def task_means(self) -> dict[str, float | None]:
        return self._group_means(lambda cell: cell.task)


def _transfer_values(
    records: Sequence[Record], metric: str, aspect_policy: str, aspects: Sequence[str]
) -> tuple[list[float], list[float]]:
    if aspect_policy == "auto":
        aspect_policy = "Overall" if "Overall" in aspects else "mean"
    human: list[float] = []
    scores: list[float] = []
    for record in records:
        score = record.metric_scores.get(metric)
        if score is None or not math.isfinite(score):
            continue
        if aspect_policy == "mean":
            ratings = [v for v in record.human_ratings.values() if math.isfinite(v)]
            if not ratings:
                continue
            value = statistics.fmean(ratings)
        else:
            rating = record.human_ratings.get(aspect_policy)
            if rating is None or not math.isfinite(rating):
                continue
            value = rating
        human.append(value)
        scores.append(score)
    return human, scores


def transfer_experiment(
    corpora: Sequence[tuple[DatasetSpec, Sequence[Record]]],
    metric: str,
    aspect_policy: str = "auto",
    method: str = "spearman",
) -> TransferResult:
    """Correlate one metric against human scores on each dataset.

    Each dataset must tag the metric in its metric_domains; untagged
    datasets are skipped with a warning.  aspect_policy selects the human
    column: a named aspect, "mean" over a record's aspects, or "auto"
    (the Overall aspect when the dataset declares it, else mean).
    """
    cells = []
    skipped = []
    for spec, records in corpora:
        domain = spec.metric_domains.get(metric)
        if domain is None:
            reason = f"metric {metric!r} is not tagged in metric_domains"
            logger.warning("transfer: skipping dataset %r: %s", spec.dataset_id, reason)
            skipped.append((spec.dataset_id, reason))
            continue
        human, scores = _transfer_values(records, metric, aspect_policy, spec.aspects)
        cells.append(
            TransferCell(
                dataset_id=spec.dataset_id,
                task=spec.task,
                domain=domain,
                result=correlation(human, scores, method=method),
            )
        )
    return TransferResult(
        metric=metric,
        method=method,
        aspect_policy=aspect_policy,
        cells=tuple(sorted(cells, key=lambda cell: cell.dataset_id)),
        skipped=tuple(sorted(skipped)),
    )


@dataclass(frozen=True)
class PairEvaluation:
    """One pair's KS report (or the reason it was skipped)."""

    pair: PairSpec
    report: KsReport | Skipped


@dataclass(frozen=True)
class ChecklistReport:
    """Every requested checklist cell, computed or explicitly skipped.

    Mappings are keyed by (dataset, metric, aspect) for aspect-level and
    system-preference sections and by (dataset, key) for system-level KS
    and win matrices, where key ranges over aspects and metrics alike.
    """

    datasets: tuple[str, ...]
    metrics: tuple[str, ...]
    aspects: Mapping[str, tuple[str, ...]]
    transfer: tuple[TransferResult | Skipped, ...]
    aspect_ks: Mapping[tuple[str, str, str], Mapping[str, KsReport | Skipped] | Skipped]
    aspect_pref: Mapping[tuple[str, str, str], AspectPreference | Skipped]
    system_ks: Mapping[tuple[str, str], tuple[PairEvaluation, ...] | Skipped]
    system_pref: Mapping[tuple[str, str, str], SimilarityScore | Skipped]
    win: Mapping[tuple[str, str], WinMatrix | Skipped]


def load_corpus(config: RunConfig) -> list[Record]:
    """Load every configured corpus file, then aggregate annotators if asked."""
    records: list[Record] = []
    for path in config.corpus_paths:
        file_format = None if config.corpus_format == "auto" else config.corpus_format
        records.extend(load_records(path, format=file_format, aliases=dict(config.aliases)))
    if config.aggregate is not None:
        records = aggregate_annotators(records, policy=config.aggregate)
    return records


def _guarded(fn: Callable[[], object]) -> object:
    # Pipeline preconditions surface as ValueError; report them as skips.
    try:
        return fn()
    except ValueError as exc:
        return Skipped(str(exc))


def run_checklist(config: RunConfig) -> ChecklistReport:
    """Run every assessment for every requested (dataset, metric, aspect).

    Corpus and config problems raise; per-cell pipeline failures become
    Skipped entries.  The report is deterministic: cells are assembled in
    canonical sorted order whether or not they were computed in parallel.
    """
    records = load_corpus(config)
    report = validate(records, list(config.dataset_specs.values()))
    if not report.ok:
        lines = [f"{locator}: {message}" for locator, message in report.errors]
        raise CorpusError("corpus validation failed:\n" + "\n".join(lines))

    by_dataset: dict[str, list[Record]] = {}
    for record in records:
        by_dataset.setdefault(record.dataset_id, []).append(record)

    datasets = sorted(set(config.dataset_specs) | set(by_dataset))
    if config.metrics:
        metrics = tuple(sorted(set(config.metrics)))
    else:
        metrics = tuple(sorted({m for record in records for m in record.metric_scores}))
    aspects_by_dataset: dict[str, tuple[str, ...]] = {}
    for dataset_id in datasets:
        if config.aspects:
            aspects_by_dataset[dataset_id] = tuple(config.aspects)
        elif dataset_id in config.dataset_specs:
            aspects_by_dataset[dataset_id] = tuple(config.dataset_specs[dataset_id].aspects)
        else:
            found = {
                a for record in by_dataset.get(dataset_id, ()) for a in record.human_ratings
            }
            aspects_by_dataset[dataset_id] = tuple(sorted(found))

    thresholds = QualityThresholds(low_below=config.low_below, high_above=config.high_above)

    # Build every cell as a thunk; evaluation order never affects assembly.
    tasks: list[tuple[str, tuple, Callable[[], object]]] = []

    corpora = [
        (config.dataset_specs[d], by_dataset.get(d, []))
        for d in datasets
        if d in config.dataset_specs
    ]
    for metric in metrics:
        tasks.append(
            (
                "transfer",
                (metric,),
                lambda metric=metric: transfer_experiment(
                    corpora,
                    metric,
                    aspect_policy=config.transfer_aspect,
                    method=config.correlation_method,
                ),
            )
        )

    pairs_by_dataset: dict[str, list[PairSpec] | Skipped] = {}
    for dataset_id in datasets:
        ds_records = by_dataset.get(dataset_id, [])
        spec = config.dataset_specs.get(dataset_id)
        pair_lists = spec.pair_lists if spec is not None else None
        mode = config.pair_mode
        if mode == "auto":
            mode = "configured" if pair_lists else "generated"
        result = _guarded(
            lambda ds=ds_records, m=mode, pl=pair_lists: make_pairs(
                system_summaries(ds), m, pair_lists=pl, k=config.pair_k, delta=config.pair_delta
            )
        )
        pairs_by_dataset[dataset_id] = result

        keys = aspects_by_dataset[dataset_id] + metrics
        for key in keys:
            tasks.append(
                (
                    "system_ks",
                    (dataset_id, key),
                    lambda ds=ds_records, d=dataset_id, k=key: _system_ks_cell(
                        ds, pairs_by_dataset[d], k
                    ),
                )
            )
            tasks.append(
                (
                    "win",
                    (dataset_id, key),
                    lambda ds=ds_records, k=key: win_matrix(
                        ds, k, pairing=config.win_pairing, tie_policy=config.win_ties
                    ),
                )
            )
        for metric in metrics:
            for aspect in aspects_by_dataset[dataset_id]:
                tasks.append(
                    (
                        "aspect_ks",
                        (dataset_id, metric, aspect),
                        lambda ds=ds_records, m=metric, a=aspect: aspect_level_ks(
                            ds, a, m, thresholds
                        ),
                    )
                )
                tasks.append(
                    (
                        "aspect_pref",
                        (dataset_id, metric, aspect),
                        lambda ds=ds_records, m=metric, a=aspect: aspect_level_preference(
                            ds, a, m, thresholds, epsilon=config.epsilon
                        ),
                    )
                )
                tasks.append(
                    (
                        "system_pref",
                        (dataset_id, metric, aspect),
                        lambda ds=ds_records, m=metric, a=aspect: system_level_preference(
                            ds, a, m, epsilon=config.epsilon
                        ),
                    )
                )

    thunks = [thunk for _, _, thunk in tasks]
    if config.parallel:
        with ThreadPoolExecutor() as executor:
            values = list(executor.map(_guarded, thunks))
    else:
        values = [_guarded(thunk) for thunk in thunks]

    sections: dict[str, dict] = {
        "transfer": {},
        "aspect_ks": {},
        "aspect_pref": {},
        "system_ks": {},
        "system_pref": {},
        "win": {},
    }
    for (section, cell_key, _), value in zip(tasks, values):
        sections[section][cell_key] = value

    def ordered(section: str) -> dict:
        return dict(sorted(sections[section].items()))

    transfer = tuple(sections["transfer"][(metric,)] for metric in metrics)
    return ChecklistReport(
        datasets=tuple(datasets),
        metrics=metrics,
        aspects=aspects_by_dataset,
        transfer=transfer,
        aspect_ks=ordered("aspect_ks"),
        aspect_pref=ordered("aspect_pref"),
        system_ks=ordered("system_ks"),
        system_pref=ordered("system_pref"),
        win=ordered("win"),
    )


def _system_ks_cell(
    records: Sequence[Record],
    pairs: list[PairSpec] | Skipped,
    key: str,
) -> tuple[PairEvaluation, ...] | Skipped:
    if isinstance(pairs, Skipped):
        return pairs
    return tuple(PairEvaluation(pair, system_level_ks(records, pair, key)) for pair in pairs)

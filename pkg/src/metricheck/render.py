"""Render a ChecklistReport to JSON, long-format CSV, or markdown.

Rendering is a pure function of the report: the same report yields the
same bytes, with no timestamps, paths, or environment details embedded.
CSV is the plot-ready long format (dataset, metric, aspect, assessment,
statistic, value, n) at full float precision; markdown mirrors the
row/column layouts of the per-assessment summary tables at 4 decimals;
JSON keeps the full nested structure.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Mapping, Sequence

from .checklist import ChecklistReport, Skipped, TransferResult
from .preference import SimilarityScore
from .stats import KsReport

CSV_HEADER = ("dataset", "metric", "aspect", "assessment", "statistic", "value", "n")
RENDER_FORMATS = ("json", "csv", "markdown")

_EXTENSIONS = {"json": "json", "csv": "csv", "markdown": "md"}


def _num(value: float | int | None) -> str:
    # Full-precision cell: repr round-trips doubles exactly.
    if value is None:
        return ""
    if isinstance(value, float) and math.isnan(value):
        return ""
    return repr(float(value)) if isinstance(value, float) else str(value)


def to_rows(report: ChecklistReport) -> list[tuple[str, str, str, str, str, str, str]]:
    """Flatten every computed statistic (and skip reason) to long-format rows."""
    rows: list[tuple[str, str, str, str, str, str, str]] = []

    def add(dataset, metric, aspect, assessment, statistic, value, n):
        rows.append((dataset, metric, aspect, assessment, statistic, value, n))

    for result in report.transfer:
        if isinstance(result, Skipped):
            add("", "", "", "transfer", "skip", result.reason, "")
            continue
        for cell in result.cells:
            stat = f"rho_{cell.result.method}"
            if cell.result.rho is None:
                add(cell.dataset_id, result.metric, result.aspect_policy, "transfer",
                    f"skip:{stat}", cell.result.reason or "", str(cell.result.n))
            else:
                add(cell.dataset_id, result.metric, result.aspect_policy, "transfer",
                    stat, _num(cell.result.rho), str(cell.result.n))
            add(cell.dataset_id, result.metric, result.aspect_policy, "transfer",
                "domain", cell.domain, "")
            add(cell.dataset_id, result.metric, result.aspect_policy, "transfer",
                "task", cell.task, "")
        for domain, mean in result.domain_means().items():
            add("", result.metric, result.aspect_policy, "transfer",
                f"domain_mean:{domain}", _num(mean), "")
        for task, mean in result.task_means().items():
            add("", result.metric, result.aspect_policy, "transfer",
                f"task_mean:{task}", _num(mean), "")
        for dataset_id, reason in result.skipped:
            add(dataset_id, result.metric, result.aspect_policy, "transfer",
                "skip", reason, "")

    for (dataset, metric, aspect), cell in report.aspect_ks.items():
        if isinstance(cell, Skipped):
            add(dataset, metric, aspect, "aspect_level_ks", "skip", cell.reason, "")
            continue
        for name in ("Lo-Hi", "Lo-Mod", "Hi-Mod"):
            entry = cell[name]
            if isinstance(entry, Skipped):
                add(dataset, metric, aspect, "aspect_level_ks", f"skip:{name}",
                    entry.reason, "")
            else:
                add(dataset, metric, aspect, "aspect_level_ks", f"d:{name}",
                    _num(entry.d), str(entry.n_a + entry.n_b))

    for (dataset, metric, aspect), cell in report.aspect_pref.items():
        if isinstance(cell, Skipped):
            add(dataset, metric, aspect, "aspect_level_preference", "skip", cell.reason, "")
            continue
        n = str(cell.similarity.len_a + cell.similarity.len_b)
        add(dataset, metric, aspect, "aspect_level_preference", "s",
            _num(cell.similarity.s), n)
        add(dataset, metric, aspect, "aspect_level_preference", "lev",
            str(cell.similarity.lev), n)
        add(dataset, metric, aspect, "aspect_level_preference", "sequence",
            "".join(cell.sequence), n)
        add(dataset, metric, aspect, "aspect_level_preference", "tied",
            str(int(cell.tied)), n)

    for (dataset, key), cell in report.system_ks.items():
        if isinstance(cell, Skipped):
            add(dataset, key, "", "system_level_ks", "skip", cell.reason, "")
            continue
        for evaluation in cell:
            pair = evaluation.pair
            tag = f"{pair.difficulty}:{pair.system_a}|{pair.system_b}"
            if isinstance(evaluation.report, Skipped):
                add(dataset, key, "", "system_level_ks", f"skip:{tag}",
                    evaluation.report.reason, "")
            else:
                add(dataset, key, "", "system_level_ks", f"d:{tag}",
                    _num(evaluation.report.d),
                    str(evaluation.report.n_a + evaluation.report.n_b))

    for (dataset, metric, aspect), cell in report.system_pref.items():
        if isinstance(cell, Skipped):
            add(dataset, metric, aspect, "system_level_preference", "skip", cell.reason, "")
            continue
        add(dataset, metric, aspect, "system_level_preference", "s",
            _num(cell.s), str(cell.len_a))
        add(dataset, metric, aspect, "system_level_preference", "lev",
            str(cell.lev), str(cell.len_a))

    for (dataset, key), cell in report.win.items():
        if isinstance(cell, Skipped):
            add(dataset, key, "", "win_matrix", "skip", cell.reason, "")
            continue
        for i, system_a in enumerate(cell.systems):
            for j, system_b in enumerate(cell.systems):
                if i == j:
                    continue
                add(dataset, key, "", "win_matrix", f"win:{system_a}|{system_b}",
                    _num(cell.wins[i][j]), str(cell.counts[i][j]))
    return rows


def _render_csv(report: ChecklistReport) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    writer.writerows(to_rows(report))
    return buffer.getvalue()


def _ks_json(entry: KsReport | Skipped) -> dict:
    if isinstance(entry, Skipped):
        return {"skipped": entry.reason}
    return {
        "label_a": entry.label_a,
        "label_b": entry.label_b,
        "d": entry.d,
        "n_a": entry.n_a,
        "n_b": entry.n_b,
    }


def _similarity_json(score: SimilarityScore) -> dict:
    return {"s": score.s, "lev": score.lev, "len_a": score.len_a, "len_b": score.len_b}


def _join(key: tuple[str, ...]) -> str:
    return "/".join(key)


def _jsonable(report: ChecklistReport) -> dict:
    transfer = []
    for result in report.transfer:
        if isinstance(result, Skipped):
            transfer.append({"skipped": result.reason})
            continue
        transfer.append(
            {
                "metric": result.metric,
                "method": result.method,
                "aspect_policy": result.aspect_policy,
                "cells": [
                    {
                        "dataset": cell.dataset_id,
                        "task": cell.task,
                        "domain": cell.domain,
                        "rho": cell.result.rho if cell.result.rho is None else float(cell.result.rho),
                        "n": cell.result.n,
                        "reason": cell.result.reason,
                    }
                    for cell in result.cells
                ],
                "domain_means": {
                    k: (None if v is None else float(v))
                    for k, v in result.domain_means().items()
                },
                "task_means": {
                    k: (None if v is None else float(v))
                    for k, v in result.task_means().items()
                },
                "skipped": [list(entry) for entry in result.skipped],
            }
        )

    aspect_ks = {}
    for key, cell in report.aspect_ks.items():
        if isinstance(cell, Skipped):
            aspect_ks[_join(key)] = {"skipped": cell.reason}
        else:
            aspect_ks[_join(key)] = {name: _ks_json(entry) for name, entry in cell.items()}

    aspect_pref = {}
    for key, cell in report.aspect_pref.items():
        if isinstance(cell, Skipped):
            aspect_pref[_join(key)] = {"skipped": cell.reason}
        else:
            aspect_pref[_join(key)] = {
                "sequence": "".join(cell.sequence),
                "canonical": "".join(cell.canonical),
                "tied": cell.tied,
                **_similarity_json(cell.similarity),
            }

    system_ks = {}
    for key, cell in report.system_ks.items():
        if isinstance(cell, Skipped):
            system_ks[_join(key)] = {"skipped": cell.reason}
        else:
            system_ks[_join(key)] = [
                {
                    "system_a": evaluation.pair.system_a,
                    "system_b": evaluation.pair.system_b,
                    "difficulty": evaluation.pair.difficulty,
                    "origin": evaluation.pair.origin,
                    **_ks_json(evaluation.report),
                }
                for evaluation in cell
            ]

    system_pref = {}
    for key, cell in report.system_pref.items():
        if isinstance(cell, Skipped):
            system_pref[_join(key)] = {"skipped": cell.reason}
        else:
            system_pref[_join(key)] = _similarity_json(cell)

    win = {}
    for key, cell in report.win.items():
        if isinstance(cell, Skipped):
            win[_join(key)] = {"skipped": cell.reason}
        else:
            win[_join(key)] = {
                "systems": list(cell.systems),
                "wins": [
                    [None if math.isnan(value) else value for value in row]
                    for row in cell.wins
                ],
                "counts": [list(row) for row in cell.counts],
            }

    return {
        "datasets": list(report.datasets),
        "metrics": list(report.metrics),
        "aspects": {dataset: list(aspects) for dataset, aspects in report.aspects.items()},
        "transfer": transfer,
        "aspect_ks": aspect_ks,
        "aspect_pref": aspect_pref,
        "system_ks": system_ks,
        "system_pref": system_pref,
        "win": win,
    }


def _render_json(report: ChecklistReport) -> str:
    return json.dumps(_jsonable(report), indent=2, sort_keys=True, allow_nan=False) + "\n"


def _fmt(value: float | None) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "n/a"
    return f"{value:.4f}"


def _table(header: Sequence[str], body: Sequence[Sequence[str]]) -> list[str]:
    lines = ["| " + " | ".join(header) + " |"]
    lines.append("|" + "|".join([" --- "] * len(header)) + "|")
    for row in body:
        lines.append("| " + " | ".join(row) + " |")
    lines.append("")
    return lines


def _render_markdown(report: ChecklistReport) -> str:
    lines: list[str] = ["# Metric preference checklist", ""]

    lines.append("## Transfer correlations")
    lines.append("")
    results = [r for r in report.transfer if isinstance(r, TransferResult)]
    if results:
        domains = sorted({d for r in results for d in r.domain_means()})
        body = []
        for result in results:
            means = result.domain_means()
            body.append([result.metric] + [_fmt(means.get(d)) for d in domains])
        lines.extend(_table(["metric"] + domains, body))

        datasets = sorted({cell.dataset_id for r in results for cell in r.cells})
        body = []
        for result in results:
            by_dataset = {cell.dataset_id: cell.result.rho for cell in result.cells}
            body.append(
                [result.metric] + [_fmt(by_dataset.get(d)) for d in datasets]
            )
        lines.extend(_table(["metric"] + datasets, body))
        skipped = [(r.metric, d, reason) for r in results for d, reason in r.skipped]
        for metric, dataset, reason in skipped:
            lines.append(f"- skipped {metric} on {dataset}: {reason}")
        if skipped:
            lines.append("")

    lines.append("## Aspect-level KS")
    lines.append("")
    comparisons = ("Lo-Hi", "Lo-Mod", "Hi-Mod")
    for dataset in report.datasets:
        cells = {k: v for k, v in report.aspect_ks.items() if k[0] == dataset}
        if not cells:
            continue
        lines.append(f"### {dataset}")
        lines.append("")
        body = []
        notes = []
        for (_, metric, aspect), cell in sorted(cells.items()):
            if isinstance(cell, Skipped):
                body.append([metric, aspect] + ["n/a"] * len(comparisons))
                notes.append(f"- {metric}/{aspect}: {cell.reason}")
                continue
            row = [metric, aspect]
            for name in comparisons:
                entry = cell[name]
                if isinstance(entry, Skipped):
                    row.append("n/a")
                    notes.append(f"- {metric}/{aspect} {name}: {entry.reason}")
                else:
                    row.append(_fmt(entry.d))
            body.append(row)
        lines.extend(_table(["metric", "aspect"] + list(comparisons), body))
        lines.extend(notes)
        if notes:
            lines.append("")

    lines.append("## Aspect-level preference")
    lines.append("")
    for dataset in report.datasets:
        cells = {k: v for k, v in report.aspect_pref.items() if k[0] == dataset}
        if not cells:
            continue
        lines.append(f"### {dataset}")
        lines.append("")
        body = []
        for (_, metric, aspect), cell in sorted(cells.items()):
            if isinstance(cell, Skipped):
                body.append([metric, aspect, "n/a", "n/a", cell.reason])
            else:
                body.append(
                    [
                        metric,
                        aspect,
                        "".join(cell.sequence),
                        _fmt(cell.similarity.s),
                        "tied" if cell.tied else "",
                    ]
                )
        lines.extend(_table(["metric", "aspect", "order", "s", "note"], body))

    lines.append("## System-level KS")
    lines.append("")
    for dataset in report.datasets:
        cells = {k: v for k, v in report.system_ks.items() if k[0] == dataset}
        keys = [k for k in report.aspects.get(dataset, ()) + report.metrics]
        pair_rows: dict[tuple[str, str, str], dict[str, str]] = {}
        notes = []
        for (_, key), cell in sorted(cells.items()):
            if isinstance(cell, Skipped):
                notes.append(f"- {key}: {cell.reason}")
                continue
            for evaluation in cell:
                pair = evaluation.pair
                row_key = (pair.difficulty, pair.system_a, pair.system_b)
                row = pair_rows.setdefault(row_key, {})
                if isinstance(evaluation.report, Skipped):
                    row[key] = "n/a"
                else:
                    row[key] = _fmt(evaluation.report.d)
        if not pair_rows and not notes:
            continue
        lines.append(f"### {dataset}")
        lines.append("")
        if pair_rows:
            body = []
            for (difficulty, system_a, system_b), row in sorted(pair_rows.items()):
                body.append(
                    [difficulty, f"{system_a} vs {system_b}"]
                    + [row.get(key, "n/a") for key in keys]
                )
            lines.extend(_table(["difficulty", "pair"] + list(keys), body))
        lines.extend(notes)
        if notes:
            lines.append("")

    lines.append("## System-level preference")
    lines.append("")
    for dataset in report.datasets:
        cells = {k: v for k, v in report.system_pref.items() if k[0] == dataset}
        if not cells:
            continue
        aspects = report.aspects.get(dataset, ())
        lines.append(f"### {dataset}")
        lines.append("")
        body = []
        for aspect in aspects:
            row = [aspect]
            for metric in report.metrics:
                cell = cells.get((dataset, metric, aspect))
                if cell is None or isinstance(cell, Skipped):
                    row.append("n/a")
                else:
                    row.append(_fmt(cell.s))
            body.append(row)
        lines.extend(_table(["aspect"] + list(report.metrics), body))

    lines.append("## Win matrices")
    lines.append("")
    for (dataset, key), cell in sorted(report.win.items()):
        lines.append(f"### {dataset} / {key}")
        lines.append("")
        if isinstance(cell, Skipped):
            lines.append(f"- skipped: {cell.reason}")
            lines.append("")
            continue
        body = []
        for i, system in enumerate(cell.systems):
            body.append([system] + [_fmt(value) for value in cell.wins[i]])
        lines.extend(_table(["system"] + list(cell.systems), body))

    return "\n".join(lines).rstrip("\n") + "\n"


def render(report: ChecklistReport, format: str = "json") -> str:
    """Render the report to one deterministic text document."""
    if format == "json":
        return _render_json(report)
    if format == "csv":
        return _render_csv(report)
    if format == "markdown":
        return _render_markdown(report)
    raise ValueError(f"format must be one of {RENDER_FORMATS}, got {format!r}")


def write_report(
    report: ChecklistReport,
    directory: str | Path,
    formats: Sequence[str] = ("json",),
) -> list[Path]:
    """Write one file per requested format into `directory`; return the paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for format in formats:
        path = directory / f"checklist.{_EXTENSIONS[format]}"
        path.write_text(render(report, format), encoding="utf-8")
        paths.append(path)
    return paths

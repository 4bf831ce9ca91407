"""Command-line interface: one verb per checklist assessment.

Verbs: validate, score, transfer, aspect-eval, aspect-pref, system-eval,
system-pref, win-matrix, run.  Every verb reads the same TOML config
(--config); assessment verbs render their section of the checklist and
`run` renders all of them.  Exit codes: 0 success, 1 config or corpus
validation failure, 2 unexpected runtime error.  Diagnostics go to stderr;
results go to stdout or to --out files.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path
from typing import Sequence

from .checklist import ChecklistReport, load_corpus, run_checklist
from .config import ConfigError, parse_config
from .corpus import CorpusError, serialize, validate
from .render import RENDER_FORMATS, render, write_report
from .textmetrics import bleu, rouge_n, tokenize

SECTION_BY_VERB = {
    "transfer": "transfer",
    "aspect-eval": "aspect_ks",
    "aspect-pref": "aspect_pref",
    "system-eval": "system_ks",
    "system-pref": "system_pref",
    "win-matrix": "win",
}

# Scores the `score` verb computes; names carry the variant so differently
# configured columns can never collide silently.
SCORE_COLUMNS = ("bleu4_add_one", "rouge1_f1_mean", "rouge2_f1_mean")


def _section_only(report: ChecklistReport, section: str) -> ChecklistReport:
    # Blank every other section so single-verb output stays focused.
    empty = {
        "transfer": (),
        "aspect_ks": {},
        "aspect_pref": {},
        "system_ks": {},
        "system_pref": {},
        "win": {},
    }
    return dataclasses.replace(
        report, **{name: value for name, value in empty.items() if name != section}
    )


def _emit(report: ChecklistReport, args) -> int:
    formats = args.format or None
    if args.out is not None:
        paths = write_report(report, args.out, formats=formats or ("json",))
        for path in paths:
            print(path)
    else:
        print(render(report, (formats or ("json",))[0]), end="")
    return 0


def cmd_validate(args) -> int:
    config = parse_config(args.config)
    records = load_corpus(config)
    report = validate(records, list(config.dataset_specs.values()))
    n_records = sum(report.counts.values())
    for locator, message in report.warnings:
        print(f"warning: {locator}: {message}", file=sys.stderr)
    for locator, message in report.errors:
        print(f"error: {locator}: {message}", file=sys.stderr)
    if not report.ok:
        print(f"{len(report.errors)} error(s) in {n_records} record(s)", file=sys.stderr)
        return 1
    print(f"ok: {n_records} record(s), {len(report.warnings)} warning(s)")
    return 0


def cmd_score(args) -> int:
    config = parse_config(args.config)
    records = load_corpus(config)
    scored = []
    skipped = 0
    for record in records:
        if not record.references:
            skipped += 1
            scored.append(record)
            continue
        hyp = tokenize(record.output_text)
        refs = [tokenize(reference) for reference in record.references]
        refs = [ref for ref in refs if ref]
        merged = dict(record.metric_scores)
        if refs:
            merged["bleu4_add_one"] = bleu(hyp, refs, max_n=4, smoothing="add_one")
            merged["rouge1_f1_mean"] = rouge_n(hyp, refs, n=1, aggregate="mean").f1
            merged["rouge2_f1_mean"] = rouge_n(hyp, refs, n=2, aggregate="mean").f1
        scored.append(dataclasses.replace(record, metric_scores=merged))
    out_dir = Path(args.out) if args.out is not None else config.output_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "scored.jsonl"
    serialize(scored, path, format="jsonl")
    if skipped:
        print(f"warning: {skipped} record(s) lack references; left unscored", file=sys.stderr)
    print(path)
    return 0


def cmd_run(args) -> int:
    config = parse_config(args.config)
    report = run_checklist(config)
    formats = tuple(args.format) if args.format else config.output_formats
    out_dir = Path(args.out) if args.out is not None else config.output_dir
    for path in write_report(report, out_dir, formats=formats):
        print(path)
    return 0


def make_section_command(section: str):
    def cmd(args) -> int:
        config = parse_config(args.config)
        report = run_checklist(config)
        return _emit(_section_only(report, section), args)

    return cmd


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="metricheck",
        description="Metric preference checklist over NLG benchmark corpora.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, help_text):
        command = sub.add_parser(name, help=help_text)
        command.add_argument("--config", required=True, help="TOML run configuration")
        command.add_argument("--out", default=None, help="output directory")
        command.add_argument(
            "--format",
            action="append",
            choices=RENDER_FORMATS,
            help="output format (repeatable; default json)",
        )
        command.set_defaults(handler=handler)
        return command

    add("validate", cmd_validate, "check corpus records against dataset specs")
    add("score", cmd_score, "compute surface metrics (BLEU, ROUGE) into scored.jsonl")
    add("transfer", make_section_command("transfer"), "cross-dataset correlation profile")
    add("aspect-eval", make_section_command("aspect_ks"), "KS between quality bands")
    add("aspect-pref", make_section_command("aspect_pref"), "band order vs human order")
    add("system-eval", make_section_command("system_ks"), "KS between paired systems")
    add("system-pref", make_section_command("system_pref"), "system ranking similarity")
    add("win-matrix", make_section_command("win"), "pairwise win fractions")
    add("run", cmd_run, "run every assessment and write the report files")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (ConfigError, CorpusError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - the CLI boundary reports, not raises
        print(f"unexpected error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

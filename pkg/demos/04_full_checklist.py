"""End-to-end run: synthetic corpus -> config -> checklist -> reports.

Generates a two-dataset JSONL corpus with three systems and two candidate
metrics, writes a TOML config next to it, runs the full checklist, and
renders the markdown report to stdout.  Pass a directory to keep the
generated files; by default everything lives in a temp dir.

Usage: python3 demos/04_full_checklist.py [workdir]
"""

import json
import random
import sys
import tempfile
from pathlib import Path

from metricheck import parse_config, render, run_checklist

CONFIG = """
schema_version = 1

[corpus]
paths = ["corpus.jsonl"]

[run]
metrics = ["faithful", "noisy"]
# Default bands call only an exact 3.0 Moderate; widen so all three
# band-vs-band comparisons have members.
low_below = 2.5
high_above = 3.5

[output]
formats = ["json", "csv", "markdown"]

[[dataset]]
id = "news"
task = "TextSumm"
aspects = ["Fluency", "Overall"]

[dataset.metric_domains]
faithful = "InDomain"
noisy = "SemanticShift"

[[dataset]]
id = "clinical"
task = "DiagGen"
aspects = ["Fluency"]

[dataset.metric_domains]
faithful = "DomainShift"
noisy = "DomainShift"
"""


def make_rows(rng: random.Random) -> list[dict]:
    rows = []
    levels = {"base": 2.0, "tuned": 3.2, "large": 4.3}
    for dataset in ("news", "clinical"):
        for system, level in levels.items():
            for i in range(60):
                fluency = min(5.0, max(1.0, level + rng.uniform(-0.8, 0.8)))
                row = {
                    "dataset": dataset,
                    "sample": f"s{i}",
                    "system": system,
                    "output": "generated text",
                    "human": {"Fluency": round(fluency, 3)},
                    "metrics": {
                        "faithful": round(fluency / 5 + rng.uniform(-0.03, 0.03), 6),
                        "noisy": round(rng.random(), 6),
                    },
                }
                if dataset == "news":
                    row["human"]["Overall"] = round(
                        min(5.0, max(1.0, fluency + rng.uniform(-0.4, 0.4))), 3
                    )
                rows.append(row)
    return rows


def run(workdir: Path) -> None:
    rng = random.Random(2026)
    corpus_path = workdir / "corpus.jsonl"
    corpus_path.write_text(
        "\n".join(json.dumps(row) for row in make_rows(rng)) + "\n"
    )
    config_path = workdir / "run.toml"
    config_path.write_text(CONFIG)

    config = parse_config(config_path)
    report = run_checklist(config)
    print(render(report, "markdown"))

    # Same report, machine-readable: the CLI equivalent is
    #   metricheck run --config run.toml --format json --out out/
    json_text = render(report, "json")
    print(f"json report: {len(json_text)} bytes, "
          f"{len(json.loads(json_text)['transfer'])} transfer entries")


def main() -> None:
    if len(sys.argv) > 1:
        workdir = Path(sys.argv[1])
        workdir.mkdir(parents=True, exist_ok=True)
        run(workdir)
        print(f"\nfiles kept in {workdir}")
    else:
        with tempfile.TemporaryDirectory() as tmp:
            run(Path(tmp))


if __name__ == "__main__":
    main()

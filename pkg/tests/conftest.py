"""Shared pytest hooks: the acceptance-criteria summary.

Acceptance tests are named test_cNN_*; after a run that touched any of
them, one PASS/FAIL line per criterion is appended to the terminal
summary.  A criterion passes only if every test belonging to it passed.
"""

import re

_CRITERIA = {
    "c01": "preference similarity worked examples at pinned tolerance, < 1 ms warm",
    "c02": "edit distance examples + exhaustive brute-force equivalence, < 5 s",
    "c03": "KS equals pooled-point brute force on 1,000 random pairs, < 10 s",
    "c04": "Pearson/Spearman match naive oracles within 1e-9 on 1,000 vectors, < 5 s",
    "c05": "quality bands partition aspect-bearing records; boundary cases hold",
    "c06": "perfect-metric fixture: similarity 1.0, rho 1.0, Lo-Hi KS 1.0, 0/1 wins",
    "c07": "win-matrix complementarity under half-credit ties",
    "c08": "surface-metric identities and worked examples",
    "c09": "end-to-end run on 10,000 records < 10 s, byte-identical reports",
    "c10": "report bytes identical with parallelism on and off",
}

_PATTERN = re.compile(r"::test_(c\d{2})_")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    outcomes: dict[str, list[str]] = {}
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            match = _PATTERN.search(getattr(report, "nodeid", ""))
            if match:
                outcomes.setdefault(match.group(1), []).append(status)
    if not outcomes:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for key, description in _CRITERIA.items():
        if key not in outcomes:
            continue
        verdict = "PASS" if all(s == "passed" for s in outcomes[key]) else "FAIL"
        terminalreporter.write_line(f"criterion {key[1:].lstrip('0'):>2}: {verdict}  {description}")

"""Utility-based preference orders and edit-distance similarity between them.

Systems are ranked by a scalar utility (the mean evaluation score under one
aspect or metric).  Ties within a tolerance merge into groups; groups flatten
to label sequences in ascending preference (worst system first), and two
sequences are compared with a length-normalized Levenshtein similarity:

    s = (len_a + len_b - 2 * lev(a, b)) / (len_a + len_b)

which is 1.0 for identical sequences and 0.0 for a reversed pair of equal
length 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Hashable, Mapping, Sequence

__all__ = [
    "UtilityTable",
    "PreferenceOrder",
    "SimilarityScore",
    "edit_distance",
    "preference_order",
    "linearize",
    "preference_similarity",
    "DEFAULT_EPSILON",
]

DEFAULT_EPSILON = 1e-9


def edit_distance(a: Sequence[Hashable], b: Sequence[Hashable]) -> int:
    """Exact unit-cost Levenshtein distance between two label sequences.

    Counts the minimum number of insertions, deletions, and substitutions
    required to turn ``a`` into ``b``.  Empty sequences are allowed.
    """
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    for i, x in enumerate(a, start=1):
        current = [i]
        for j, y in enumerate(b, start=1):
            cost = 0 if x == y else 1
            current.append(
                min(
                    previous[j] + 1,  # delete x
                    current[j - 1] + 1,  # insert y
                    previous[j - 1] + cost,  # substitute x -> y
                )
            )
        previous = current
    return previous[-1]


@dataclass(frozen=True)
class UtilityTable:
    """Mean evaluation score per system, plus where the scores came from.

    Args:
        values: map system label -> utility (mean score units).
        source: descriptor of the score column (aspect or metric name).
    """

    values: Mapping[str, float]
    source: str = ""


@dataclass(frozen=True)
class PreferenceOrder:
    """Ascending-utility order with tie groups.

    ``tie_groups`` lists groups worst-first; labels inside a group are sorted
    ascending and considered indiscernible at tolerance ``epsilon``.
    """

    tie_groups: tuple[tuple[str, ...], ...]
    epsilon: float


@dataclass(frozen=True)
class SimilarityScore:
    """Normalized edit similarity between two label sequences."""

    s: float
    lev: int
    len_a: int
    len_b: int


def preference_order(
    utilities: UtilityTable, epsilon: float = DEFAULT_EPSILON
) -> PreferenceOrder:
    """Sort systems ascending by utility, merging epsilon-close neighbors.

    Merging chains transitively: a run of systems whose consecutive gaps are
    each <= epsilon forms one tie group even if its extremes differ by more.
    """
    if not utilities.values:
        raise ValueError("utility table is empty")
    if epsilon < 0:
        raise ValueError(f"epsilon must be >= 0, got {epsilon!r}")
    for label, value in utilities.values.items():
        if not math.isfinite(value):
            raise ValueError(f"utility for {label!r} is not finite: {value!r}")
    ranked = sorted(utilities.values, key=lambda label: (utilities.values[label], label))
    groups: list[list[str]] = [[ranked[0]]]
    for label in ranked[1:]:
        gap = utilities.values[label] - utilities.values[groups[-1][-1]]
        if gap <= epsilon:
            groups[-1].append(label)
        else:
            groups.append([label])
    return PreferenceOrder(tuple(tuple(sorted(g)) for g in groups), epsilon)


def linearize(order: PreferenceOrder, tie_policy: str = "label_ascending") -> list[str]:
    """Flatten tie groups to one deterministic label sequence, worst first."""
    if tie_policy != "label_ascending":
        raise ValueError(f"unknown tie policy: {tie_policy!r}")
    return [label for group in order.tie_groups for label in group]


def preference_similarity(
    a: Sequence[str], b: Sequence[str]
) -> SimilarityScore:
    """Length-normalized Levenshtein similarity between two sequences.

    Unequal lengths are permitted; the score is reported unclamped and can
    be negative (e.g. one empty side gives -1.0).
    """
    total = len(a) + len(b)
    if total == 0:
        raise ValueError("both sequences are empty")
    lev = edit_distance(a, b)
    return SimilarityScore((total - 2 * lev) / total, lev, len(a), len(b))

"""Native surface metrics: tokenization, sentence BLEU, ROUGE-N, edit distance.

Only string/overlap metrics are computed here; model-based metric scores are
ingested from the corpus, never recomputed.
"""

from __future__ import annotations

import math
import re
import string
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .preference import edit_distance

__all__ = [
    "TokenizerOptions",
    "NgramScore",
    "tokenize",
    "bleu",
    "rouge_n",
    "token_edit_distance",
]

# Expansion happens before punctuation stripping so the abbreviation's dots
# are consumed by the rewrite, not deleted into "ie".
_ABBREVIATIONS = (
    (re.compile(r"\bi\.e\.", re.IGNORECASE), "id est"),
    (re.compile(r"\be\.g\.", re.IGNORECASE), "exempli gratia"),
)
_PUNCTUATION_TABLE = str.maketrans("", "", string.punctuation)


@dataclass(frozen=True)
class TokenizerOptions:
    """Switches for the whitespace tokenizer; all normalizations default on."""

    lowercase: bool = True
    strip_punctuation: bool = True
    latin_abbrev_expansion: bool = True


def tokenize(text: str, options: TokenizerOptions = TokenizerOptions()) -> list[str]:
    """Whitespace-split ``text`` after the enabled normalizations."""
    if options.latin_abbrev_expansion:
        for pattern, expansion in _ABBREVIATIONS:
            text = pattern.sub(expansion, text)
    if options.lowercase:
        text = text.lower()
    if options.strip_punctuation:
        text = text.translate(_PUNCTUATION_TABLE)
    return text.split()


@dataclass(frozen=True)
class NgramScore:
    """Precision/recall/F1 for one n-gram order, each in [0, 1]."""

    precision: float
    recall: float
    f1: float
    n: int


def _ngram_counts(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def bleu(
    hypothesis: Sequence[str],
    references: Sequence[Sequence[str]],
    max_n: int = 4,
    smoothing: str = "add_one",
) -> float:
    """Sentence BLEU: clipped n-gram precisions, geometric mean, brevity penalty.

    Clipping uses the maximum per-reference n-gram count across all
    references; the brevity penalty uses the reference length closest to the
    hypothesis length (ties toward the shorter reference).

    Args:
        hypothesis: candidate token list; empty gives 0.0.
        references: one or more non-empty reference token lists.
        max_n: highest n-gram order (>= 1).
        smoothing: "add_one" adds one to matched and total counts for orders
            above 1 (sentence-level zeros otherwise dominate); "none"
            reproduces textbook values and returns 0.0 whenever any order has
            no match.
    """
    if max_n < 1:
        raise ValueError(f"max_n must be >= 1, got {max_n}")
    if smoothing not in ("none", "add_one"):
        raise ValueError(f"unknown smoothing: {smoothing!r}")
    if not references or any(len(ref) == 0 for ref in references):
        raise ValueError("references must be non-empty token lists")
    hyp_len = len(hypothesis)
    if hyp_len == 0:
        return 0.0
    log_precision_sum = 0.0
    for n in range(1, max_n + 1):
        hyp_counts = _ngram_counts(hypothesis, n)
        total = max(hyp_len - n + 1, 0)
        matched = 0
        if hyp_counts:
            clip: Counter = Counter()
            for ref in references:
                ref_counts = _ngram_counts(ref, n)
                for gram in hyp_counts:
                    clip[gram] = max(clip[gram], ref_counts.get(gram, 0))
            matched = sum(min(count, clip[gram]) for gram, count in hyp_counts.items())
        if smoothing == "add_one" and n > 1:
            precision = (matched + 1) / (total + 1)
        else:
            if matched == 0:
                return 0.0
            precision = matched / total
        log_precision_sum += math.log(precision)
    closest_ref_len = min((abs(len(ref) - hyp_len), len(ref)) for ref in references)[1]
    brevity = min(1.0, math.exp(1.0 - closest_ref_len / hyp_len))
    return brevity * math.exp(log_precision_sum / max_n)


def rouge_n(
    hypothesis: Sequence[str],
    references: Sequence[Sequence[str]],
    n: int = 1,
    aggregate: str = "mean",
) -> NgramScore:
    """Clipped n-gram overlap scored per reference, then aggregated.

    Recall is matched n-grams over total reference n-grams; precision is the
    analogue over the hypothesis.  A reference shorter than ``n`` contributes
    zero n-grams.  ``aggregate`` is "mean" (componentwise mean over
    references) or "best" (the reference with the highest F1).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if aggregate not in ("mean", "best"):
        raise ValueError(f"unknown aggregate: {aggregate!r}")
    if not references or any(len(ref) == 0 for ref in references):
        raise ValueError("references must be non-empty token lists")
    hyp_counts = _ngram_counts(hypothesis, n)
    hyp_total = sum(hyp_counts.values())
    per_reference = []
    for ref in references:
        ref_counts = _ngram_counts(ref, n)
        ref_total = sum(ref_counts.values())
        matched = sum(
            min(count, ref_counts[gram])
            for gram, count in hyp_counts.items()
            if gram in ref_counts
        )
        precision = matched / hyp_total if hyp_total else 0.0
        recall = matched / ref_total if ref_total else 0.0
        f1 = (
            2 * precision * recall / (precision + recall)
            if precision + recall > 0
            else 0.0
        )
        per_reference.append((precision, recall, f1))
    if aggregate == "best":
        precision, recall, f1 = max(per_reference, key=lambda triple: triple[2])
    else:
        count = len(per_reference)
        precision = sum(t[0] for t in per_reference) / count
        recall = sum(t[1] for t in per_reference) / count
        f1 = sum(t[2] for t in per_reference) / count
    return NgramScore(precision, recall, f1, n)


def token_edit_distance(a: Sequence[str], b: Sequence[str]) -> int:
    """Unit-cost Levenshtein distance over token sequences."""
    return edit_distance(a, b)

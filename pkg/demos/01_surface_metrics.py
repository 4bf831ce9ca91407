"""N-gram overlap scores on a toy summarization pair.

Walks through tokenization, BLEU with and without add-one smoothing, and
ROUGE-N precision/recall/F1, printing each intermediate so the numbers
can be checked by hand.
"""

import math

from metricheck import TokenizerOptions, bleu, rouge_n, tokenize


def main() -> None:
    hypothesis_text = "The cat sat."
    reference_text = "The cat sat on the mat."

    hypothesis = tokenize(hypothesis_text)
    reference = tokenize(reference_text)
    print(f"hypothesis tokens: {hypothesis}")
    print(f"reference tokens:  {reference}")

    # A hypothesis always scores 1.0 against itself, any order, any smoothing.
    print(f"\nBLEU-4 self score: {bleu(hypothesis, [hypothesis])}")

    # Up to bigrams, unsmoothed: both precisions are 1.0, so the score is
    # pure brevity penalty, exp(1 - 6/3) = exp(-1).
    score = bleu(hypothesis, [reference], max_n=2, smoothing="none")
    print(f"BLEU-2 vs reference (no smoothing): {score:.6f}")
    print(f"exp(-1) for comparison:             {math.exp(-1):.6f}")

    smoothed = bleu(hypothesis, [reference], max_n=4)
    print(f"BLEU-4 vs reference (add-one):      {smoothed:.6f}")

    rouge1 = rouge_n(hypothesis, [reference], n=1)
    print(f"\nROUGE-1 precision={rouge1.precision:.4f} "
          f"recall={rouge1.recall:.4f} f1={rouge1.f1:.4f}")
    rouge2 = rouge_n(hypothesis, [reference], n=2)
    print(f"ROUGE-2 precision={rouge2.precision:.4f} "
          f"recall={rouge2.recall:.4f} f1={rouge2.f1:.4f}")

    # Tokenization knobs: keep case and punctuation to see the counts move.
    strict = TokenizerOptions(lowercase=False, strip_punctuation=False)
    print(f"\nstrict tokens: {tokenize(hypothesis_text, strict)}")
    strict_rouge = rouge_n(
        tokenize(hypothesis_text, strict), [tokenize(reference_text, strict)], n=1
    )
    print(f"ROUGE-1 with strict tokens: recall={strict_rouge.recall:.4f}")


if __name__ == "__main__":
    main()

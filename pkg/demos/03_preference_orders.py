"""Does the metric prefer the same systems that people prefer?

Ranks systems by mean human rating and by mean metric score, flattens the
two orders to label sequences (worst system first), and scores their
agreement with a length-normalized edit similarity: 1.0 for identical
orders, lower as the metric shuffles systems out of place.
"""

import random

from metricheck import (
    Record,
    UtilityTable,
    linearize,
    preference_order,
    preference_similarity,
    system_level_preference,
    system_summaries,
)

QUALITY = {"alpha": 2.0, "bravo": 3.0, "charlie": 3.8, "delta": 4.6}


def build_corpus(rng: random.Random, metric_flips: bool) -> list[Record]:
    records = []
    for system, level in QUALITY.items():
        for i in range(40):
            rating = level + rng.uniform(-0.3, 0.3)
            metric = (6.0 - rating) if metric_flips else rating
            records.append(
                Record(
                    dataset_id="demo",
                    sample_id=f"s{i}",
                    system_id=system,
                    output_text="generated text",
                    human_ratings={"Adequacy": rating},
                    metric_scores={"score": metric + rng.uniform(-0.05, 0.05)},
                )
            )
    return records


def show_order(records: list[Record]) -> None:
    for summary in system_summaries(records):
        print(f"  {summary.system_id}: human={summary.aspect_means['Adequacy']:.3f} "
              f"metric={summary.metric_means['score']:.3f}")


def main() -> None:
    rng = random.Random(11)

    print("faithful metric:")
    records = build_corpus(rng, metric_flips=False)
    show_order(records)
    score = system_level_preference(records, "Adequacy", "score")
    print(f"  similarity s = {score.s:.3f} (edit distance {score.lev})")

    print("\nanti-correlated metric:")
    records = build_corpus(rng, metric_flips=True)
    show_order(records)
    score = system_level_preference(records, "Adequacy", "score")
    print(f"  similarity s = {score.s:.3f} (edit distance {score.lev})")

    # The pieces are usable directly.  Ties within epsilon merge into one
    # group; linearization breaks them by label so runs stay deterministic.
    order = preference_order(
        UtilityTable({"a": 1.0, "b": 1.0 + 5e-10, "c": 2.0}, source="by hand"),
        epsilon=1e-9,
    )
    print(f"\ntie groups: {order.tie_groups}")
    print(f"flattened:  {linearize(order)}")

    worked = preference_similarity(list("cdabe"), list("abcde"))
    print(f"\ncdabe vs abcde: lev={worked.lev} s={worked.s}")


if __name__ == "__main__":
    main()

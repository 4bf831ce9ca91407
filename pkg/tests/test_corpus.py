"""Tests for corpus ingestion, validation, aggregation, and summaries."""

import json
import tempfile
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from metricheck.corpus import (
    CorpusError,
    DatasetSpec,
    Record,
    aggregate_annotators,
    load_records,
    normalize_aspect,
    serialize,
    system_summaries,
    validate,
)


def make_record(**overrides):
    base = dict(
        dataset_id="d1",
        sample_id="s1",
        system_id="sysA",
        output_text="some output",
        human_ratings={"Fluency": 4.0},
        metric_scores={"bleu": 0.3},
    )
    base.update(overrides)
    return Record(**base)


IDS = st.text(alphabet="abcdefg", min_size=1, max_size=4)
SCORES = st.dictionaries(
    st.sampled_from(["bleu", "rouge1", "pplx"]),
    st.floats(-10, 10, allow_nan=False, allow_infinity=False),
    max_size=3,
)
RATINGS = st.dictionaries(
    st.sampled_from(["Fluency", "Coherence", "Overall"]),
    st.floats(1, 5, allow_nan=False, allow_infinity=False),
    max_size=3,
)


@st.composite
def corpora(draw):
    keys = draw(
        st.sets(st.tuples(IDS, IDS, IDS), min_size=1, max_size=12)
    )
    records = []
    for dataset_id, sample_id, system_id in sorted(keys):
        records.append(
            Record(
                dataset_id=dataset_id,
                sample_id=sample_id,
                system_id=system_id,
                output_text=draw(st.text(alphabet="xyz ", min_size=1, max_size=8).filter(str.strip)),
                source_text=draw(st.none() | st.text(alphabet="pq", min_size=1, max_size=4)),
                references=tuple(draw(st.lists(st.text(alphabet="rs t", min_size=1, max_size=6).filter(str.strip), max_size=2))),
                human_ratings=draw(RATINGS),
                metric_scores=draw(SCORES),
                pair_group=draw(st.none() | IDS),
            )
        )
    return records


class TestLoadRecords:
    def test_jsonl_line_maps_fields(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        path.write_text(
            json.dumps(
                {
                    "dataset": "newsroom",
                    "sample": "s1",
                    "system": "lede3",
                    "output": "a summary",
                    "human": {"Fluency": 4},
                    "metrics": {"bleu": 0.31},
                }
            )
            + "\n"
        )
        records = load_records(path)
        assert len(records) == 1
        record = records[0]
        assert record.key == ("newsroom", "s1", "lede3")
        assert record.human_ratings == {"Fluency": 4.0}
        assert record.metric_scores == {"bleu": 0.31}

    def test_empty_file_warns(self, tmp_path, caplog):
        path = tmp_path / "empty.jsonl"
        path.write_text("")
        with caplog.at_level("WARNING"):
            assert load_records(path) == []
        assert "no records" in caplog.text

    def test_unknown_field_warns(self, tmp_path, caplog):
        path = tmp_path / "corpus.jsonl"
        path.write_text(
            '{"dataset": "d", "sample": "s", "system": "x", "output": "o", "extra_field": 1}\n'
        )
        with caplog.at_level("WARNING"):
            records = load_records(path)
        assert len(records) == 1
        assert "extra_field" in caplog.text

    def test_malformed_line_names_location(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        path.write_text(
            '{"dataset": "d", "sample": "s", "system": "x", "output": "o"}\n'
            '{"dataset": "d", "sample": "s2", "system": "x"}\n'
        )
        with pytest.raises(CorpusError, match=r":2.*output"):
            load_records(path)

    def test_bad_json_names_line(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        path.write_text("not json\n")
        with pytest.raises(CorpusError, match=":1"):
            load_records(path)

    def test_non_numeric_rating_rejected(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        path.write_text(
            '{"dataset": "d", "sample": "s", "system": "x", "output": "o", "human": {"Fluency": "high"}}\n'
        )
        with pytest.raises(CorpusError, match="human.Fluency"):
            load_records(path)

    def test_duplicate_key_rejected(self, tmp_path):
        line = '{"dataset": "d", "sample": "s", "system": "x", "output": "o"}\n'
        path = tmp_path / "corpus.jsonl"
        path.write_text(line + line)
        with pytest.raises(CorpusError, match="duplicate"):
            load_records(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(CorpusError, match="not found"):
            load_records(tmp_path / "absent.jsonl")

    def test_unknown_extension_needs_format(self, tmp_path):
        path = tmp_path / "corpus.dat"
        path.write_text("")
        with pytest.raises(CorpusError, match="format"):
            load_records(path)

    def test_csv_dotted_headers(self, tmp_path):
        path = tmp_path / "corpus.csv"
        path.write_text(
            "dataset,sample,system,output,references,human.Fluency,metrics.bleu\n"
            'd1,s1,sysA,hello,first ||| second,4.5,0.25\n'
        )
        records = load_records(path)
        assert records[0].human_ratings == {"Fluency": 4.5}
        assert records[0].metric_scores == {"bleu": 0.25}
        assert records[0].references == ("first", "second")

    def test_csv_bad_number_names_field(self, tmp_path):
        path = tmp_path / "corpus.csv"
        path.write_text("dataset,sample,system,output,human.Fluency\nd,s,x,o,abc\n")
        with pytest.raises(CorpusError, match="human.Fluency"):
            load_records(path)

    def test_aspect_aliases_applied_on_load(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        path.write_text(
            '{"dataset": "d", "sample": "s", "system": "x", "output": "o", '
            '"human": {"MaintainsContext": 3, "understandable": 2, "fluency": 5}}\n'
        )
        records = load_records(path)
        assert set(records[0].human_ratings) == {"Coherence", "Understandability", "Fluency"}

    def test_user_alias_overrides(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        path.write_text(
            '{"dataset": "d", "sample": "s", "system": "x", "output": "o", "human": {"informative": 3}}\n'
        )
        records = load_records(path, aliases={"informative": "Informativeness"})
        assert set(records[0].human_ratings) == {"Informativeness"}


class TestSerializeRoundTrip:
    @given(corpora())
    def test_jsonl_round_trip(self, records):
        with tempfile.TemporaryDirectory() as tmpdir:
            path = Path(tmpdir) / "corpus.jsonl"
            serialize(records, path, format="jsonl")
            assert load_records(path) == records

    @given(corpora())
    def test_csv_round_trip(self, records):
        with tempfile.TemporaryDirectory() as tmpdir:
            path = Path(tmpdir) / "corpus.csv"
            serialize(records, path, format="csv")
            assert load_records(path) == records


class TestNormalizeAspect:
    def test_case_and_separator_insensitive(self):
        assert normalize_aspect("maintains_context") == "Coherence"
        assert normalize_aspect("Maintains Context") == "Coherence"
        assert normalize_aspect("ENGAGING") == "Engagingness"
        assert normalize_aspect("uses knowledge") == "Groundedness"

    def test_unknown_name_passes_through(self):
        assert normalize_aspect("Novelty") == "Novelty"


class TestValidate:
    def test_all_valid(self):
        spec = DatasetSpec(dataset_id="d1", aspects=("Fluency",), metric_domains={"bleu": "InDomain"})
        report = validate([make_record()], [spec])
        assert report.ok
        assert report.counts == {"d1": 1}

    def test_rating_out_of_bounds(self):
        spec = DatasetSpec(dataset_id="d1", aspects=("Fluency",))
        report = validate([make_record(human_ratings={"Fluency": 7.0})], [spec])
        assert not report.ok
        assert any("7.0" in message for _, message in report.errors)

    def test_rating_zero_below_minimum(self):
        spec = DatasetSpec(dataset_id="d1", aspects=("Fluency",))
        report = validate([make_record(human_ratings={"Fluency": 0.0})], [spec])
        assert len(report.errors) == 1

    def test_pair_list_unknown_system(self):
        spec = DatasetSpec(
            dataset_id="d1",
            aspects=("Fluency",),
            pair_lists={"Easy": (("sysA", "ghost"),)},
        )
        report = validate([make_record()], [spec])
        assert any("ghost" in message for _, message in report.errors)

    def test_untagged_dataset_warns_and_uses_default_bounds(self):
        report = validate([make_record(human_ratings={"Fluency": 6.0})], [])
        assert any("no dataset spec" in message for _, message in report.warnings)
        assert any("6.0" in message for _, message in report.errors)

    def test_absent_metric_domain_warns(self):
        spec = DatasetSpec(dataset_id="d1", aspects=("Fluency",), metric_domains={"pplx": "DomainShift"})
        report = validate([make_record()], [spec])
        assert any("pplx" in message for _, message in report.warnings)

    def test_empty_output_is_error(self):
        report = validate([make_record(output_text="   ")], [DatasetSpec(dataset_id="d1")])
        assert any("empty" in message for _, message in report.errors)

    def test_undeclared_aspect_warns(self):
        spec = DatasetSpec(dataset_id="d1", aspects=("Coherence",))
        report = validate([make_record()], [spec])
        assert any("Fluency" in message for _, message in report.warnings)
        assert report.ok

    def test_duplicate_key_reported(self):
        records = [make_record(), make_record()]
        report = validate(records, [DatasetSpec(dataset_id="d1", aspects=("Fluency",))])
        assert any("duplicate" in message for _, message in report.errors)


class TestDatasetSpec:
    def test_bad_task_rejected(self):
        with pytest.raises(ValueError, match="task"):
            DatasetSpec(dataset_id="d", task="Poetry")

    def test_bad_bounds_rejected(self):
        with pytest.raises(ValueError, match="rating_min"):
            DatasetSpec(dataset_id="d", rating_min=5, rating_max=1)

    def test_bad_domain_rejected(self):
        with pytest.raises(ValueError, match="domain"):
            DatasetSpec(dataset_id="d", metric_domains={"bleu": "Sideways"})

    def test_bad_difficulty_rejected(self):
        with pytest.raises(ValueError, match="difficulty"):
            DatasetSpec(dataset_id="d", pair_lists={"Medium": ()})


class TestAggregateAnnotators:
    def test_mean_of_two_annotators(self):
        rows = [
            make_record(sample_id="s1#a1", human_ratings={"Fluency": 4.0}),
            make_record(sample_id="s1#a2", human_ratings={"Fluency": 5.0}),
        ]
        merged = aggregate_annotators(rows, policy="mean")
        assert len(merged) == 1
        assert merged[0].sample_id == "s1"
        assert merged[0].human_ratings == {"Fluency": 4.5}

    def test_median_policy(self):
        rows = [
            make_record(sample_id="s1#a1", human_ratings={"Fluency": 1.0}),
            make_record(sample_id="s1#a2", human_ratings={"Fluency": 2.0}),
            make_record(sample_id="s1#a3", human_ratings={"Fluency": 5.0}),
        ]
        merged = aggregate_annotators(rows, policy="median")
        assert merged[0].human_ratings == {"Fluency": 2.0}

    def test_single_row_unchanged(self):
        row = make_record()
        assert aggregate_annotators([row]) == [row]

    def test_conflicting_metric_scores_rejected(self):
        rows = [
            make_record(sample_id="s1#a1", metric_scores={"bleu": 0.3}),
            make_record(sample_id="s1#a2", metric_scores={"bleu": 0.4}),
        ]
        with pytest.raises(ValueError, match="bleu"):
            aggregate_annotators(rows)

    def test_metric_union_without_conflict(self):
        rows = [
            make_record(sample_id="s1#a1", metric_scores={"bleu": 0.3}),
            make_record(sample_id="s1#a2", metric_scores={"rouge1": 0.6, "bleu": 0.3}),
        ]
        merged = aggregate_annotators(rows)
        assert merged[0].metric_scores == {"bleu": 0.3, "rouge1": 0.6}

    def test_aspect_union(self):
        rows = [
            make_record(sample_id="s1#a1", human_ratings={"Fluency": 4.0}),
            make_record(sample_id="s1#a2", human_ratings={"Coherence": 2.0}),
        ]
        merged = aggregate_annotators(rows)
        assert merged[0].human_ratings == {"Fluency": 4.0, "Coherence": 2.0}

    def test_unknown_policy_rejected(self):
        with pytest.raises(ValueError, match="policy"):
            aggregate_annotators([make_record()], policy="max")

    @given(corpora())
    def test_idempotent(self, records):
        once = aggregate_annotators(records)
        assert aggregate_annotators(once) == once

    def test_idempotent_with_suffixes(self):
        rows = [
            make_record(sample_id="s1#a1", human_ratings={"Fluency": 4.0}),
            make_record(sample_id="s1#a2", human_ratings={"Fluency": 5.0}),
            make_record(sample_id="s2", human_ratings={"Fluency": 3.0}),
        ]
        once = aggregate_annotators(rows)
        assert aggregate_annotators(once) == once
        assert sorted(r.sample_id for r in once) == ["s1", "s2"]


class TestSystemSummaries:
    def test_mean_and_count(self):
        rows = [
            make_record(sample_id="s1", human_ratings={"Fluency": 4.0}),
            make_record(sample_id="s2", human_ratings={"Fluency": 5.0}),
        ]
        (summary,) = system_summaries(rows)
        assert summary.aspect_means == {"Fluency": 4.5}
        assert summary.aspect_n == {"Fluency": 2}
        assert summary.n_records == 2

    def test_missing_aspect_key_absent(self):
        rows = [make_record(human_ratings={})]
        (summary,) = system_summaries(rows)
        assert summary.aspect_means == {}

    def test_disjoint_aspects_per_system(self):
        rows = [
            make_record(system_id="A", human_ratings={"Fluency": 4.0}),
            make_record(system_id="B", human_ratings={"Coherence": 2.0}),
        ]
        first, second = system_summaries(rows)
        assert first.system_id == "A" and set(first.aspect_means) == {"Fluency"}
        assert second.system_id == "B" and set(second.aspect_means) == {"Coherence"}

    def test_non_finite_scores_skipped(self):
        rows = [
            make_record(sample_id="s1", metric_scores={"bleu": 0.5}),
            make_record(sample_id="s2", metric_scores={"bleu": float("nan")}),
        ]
        (summary,) = system_summaries(rows)
        assert summary.metric_means == {"bleu": 0.5}
        assert summary.metric_n == {"bleu": 1}

    @given(corpora())
    def test_invariant_under_reordering(self, records):
        assert system_summaries(records) == system_summaries(list(reversed(records)))

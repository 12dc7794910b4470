import pytest

from discourse_signal.annotation import (
    NEGATIVE,
    NEUTRAL,
    POSITIVE,
    AnnotationSet,
    build_training_set,
    distribution_report,
    majority_distribution_table,
    majority_vote,
    mean_label,
    raw_majority_distribution,
    read_annotations,
)
from discourse_signal.errors import ParseError, SchemaError, ValidationError

from conftest import ann, make_corpus


def test_ratings_validated():
    with pytest.raises(ValidationError):
        ann("d1", 3)
    with pytest.raises(ValidationError):
        ann("d1")
    with pytest.raises(ValidationError):
        AnnotationSet("d1", (1, 1), worker_ids=("w1",))


def test_majority_vote_collapses_extremes():
    # 2 and 1 both count as positive after collapsing
    assert majority_vote(ann("d1", 2, 1, -1)).value == POSITIVE
    assert majority_vote(ann("d1", -2, -2, 1)).value == NEGATIVE


def test_majority_vote_tie_is_neutral():
    assert majority_vote(ann("d1", 1, -1)).value == NEUTRAL
    assert majority_vote(ann("d1", 2, 1, -2, -1, 0)).value == NEUTRAL


def test_mean_label_uses_sign_of_sum():
    assert mean_label(ann("d1", 2, -1)).value == POSITIVE
    assert mean_label(ann("d1", -2, 1)).value == NEGATIVE
    assert mean_label(ann("d1", 1, -1)).value == NEUTRAL


def test_mean_label_reports_mean_score():
    label = mean_label(ann("d1", 2, 1, 0))
    assert label.mean_score == 1.0
    assert majority_vote(ann("d1", 1)).mean_score is None


def test_disagreement_fixture_splits_the_two_rules():
    # the canonical case where the vote ties but the mean leans negative
    ratings = (-2, -1, 0, 0, 1)
    assert majority_vote(ann("d1", *ratings)).value == NEUTRAL
    label = mean_label(ann("d1", *ratings))
    assert label.value == NEGATIVE
    assert label.mean_score == -0.4


def test_raw_distribution_keeps_extreme_buckets():
    counts = raw_majority_distribution([ann("d1", 2, 2, 1), ann("d2", -2, -2, 0)])
    assert counts == {-2: 1, -1: 0, 0: 0, 1: 0, 2: 1}


def test_raw_distribution_tie_prefers_value_nearest_zero():
    counts = raw_majority_distribution([ann("d1", 0, 0, 2, 2)])
    assert counts[0] == 1
    counts = raw_majority_distribution([ann("d1", 2, 2, -1, -1)])
    assert counts[-1] == 1


def test_raw_distribution_symmetric_tie_is_neutral():
    counts = raw_majority_distribution([ann("d1", 1, 1, -1, -1, 0)])
    assert counts == {-2: 0, -1: 0, 0: 1, 1: 0, 2: 0}


def test_read_annotations_groups_by_doc(tmp_path):
    path = tmp_path / "ann.csv"
    path.write_text(
        "doc_id,worker_id,rating\n"
        "d2,w1,1\n"
        "d1,w2,-1\n"
        "d2,w3,2\n"
    )
    sets = read_annotations(path)
    assert [a.doc_id for a in sets] == ["d2", "d1"]
    assert sets[0].ratings == (1, 2)
    assert sets[0].worker_ids == ("w1", "w3")


def test_read_annotations_missing_column(tmp_path):
    path = tmp_path / "ann.csv"
    path.write_text("doc_id,rating\nd1,1\n")
    with pytest.raises(SchemaError) as exc:
        read_annotations(path)
    assert "worker_id" in str(exc.value)


def test_read_annotations_bad_rating_has_line_number(tmp_path):
    path = tmp_path / "ann.csv"
    path.write_text("doc_id,worker_id,rating\nd1,w1,1\nd1,w2,huge\n")
    with pytest.raises(ParseError) as exc:
        read_annotations(path)
    assert "line 3" in str(exc.value)


def test_read_annotations_out_of_range_rating(tmp_path):
    path = tmp_path / "ann.csv"
    path.write_text("doc_id,worker_id,rating\nd1,w1,5\n")
    with pytest.raises(ParseError) as exc:
        read_annotations(path)
    assert "line 2" in str(exc.value)


def test_build_training_set_drops_neutral():
    corpus = make_corpus(n=3)
    sets = [ann("d0", 1, 1), ann("d1", 1, -1), ann("d2", -2, -1)]
    ts = build_training_set(corpus, sets, method="mean")
    assert ts.positive_count == 1
    assert ts.negative_count == 1
    assert len(ts.pairs) == 2
    assert ts.pairs[0][1] == POSITIVE
    assert ts.pairs[1][1] == NEGATIVE
    assert ts.channel == "news"


def test_build_training_set_pairs_use_summaries():
    corpus = make_corpus(n=1)
    ts = build_training_set(corpus, [ann("d0", 2)], method="majority")
    assert ts.pairs == [("title 0 text here", POSITIVE)]


def test_build_training_set_unknown_docs_are_named():
    corpus = make_corpus(n=1)
    with pytest.raises(ValidationError) as exc:
        build_training_set(corpus, [ann("zz", 1), ann("aa", 1)])
    assert "aa, zz" in str(exc.value)


def test_build_training_set_unknown_method():
    with pytest.raises(ValueError):
        build_training_set(make_corpus(n=1), [ann("d0", 1)], method="median")


def test_balance_percentages():
    corpus = make_corpus(n=4)
    sets = [ann("d0", 1), ann("d1", 1), ann("d2", 1), ann("d3", -1)]
    ts = build_training_set(corpus, sets)
    assert ts.balance() == (75.0, 25.0)


def test_distribution_report_counts_and_workers():
    sets = [
        AnnotationSet("d1", (1, -1, 0), ("w1", "w1", "w2")),
        AnnotationSet("d2", (2,), ("w1",)),
    ]
    rep = distribution_report(sets, {"d1": "siteA", "d2": "siteB"})
    assert rep.n_annotations == 4
    assert rep.n_workers == 2
    assert rep.totals == {-2: 0, -1: 1, 0: 1, 1: 1, 2: 1}
    assert rep.per_source["siteA"][1] == 1
    assert rep.per_source["siteB"][2] == 1
    # w1 did 3, w2 did 1
    assert rep.worker_mean == 2.0
    assert rep.worker_hist == [(1, 20, 2)]
    assert rep.percent(1) == 25.0


def test_distribution_report_histogram_bins():
    sets = [AnnotationSet(f"d{i}", (1,), (f"w{i % 2}",)) for i in range(45)]
    rep = distribution_report(sets, {f"d{i}": "s" for i in range(45)}, bin_width=20)
    # w0 rated 23 docs, w1 rated 22
    assert rep.worker_hist == [(1, 20, 0), (21, 40, 2)]


def test_distribution_report_unknown_source():
    with pytest.raises(ValidationError):
        distribution_report([ann("d1", 1)], {})


def test_distribution_report_renders_total_row():
    rep = distribution_report([ann("d1", 1, 1, -1, 0)], {"d1": "siteA"})
    text = rep.to_text()
    assert "50.0%" in text
    csv_out = rep.to_csv()
    assert csv_out.splitlines()[0] == "source,- -,-,0,+,+ +,total"
    assert csv_out.splitlines()[1].startswith("siteA,0,1,1,2,0,4")


def test_majority_distribution_table_renders():
    counts, csv_out, text = majority_distribution_table(
        [ann("d1", 2, 2), ann("d2", -1), ann("d3", -1, 0, 0)]
    )
    assert counts == {-2: 0, -1: 1, 0: 1, 1: 0, 2: 1}
    assert "33.3%" in csv_out
    assert text.splitlines()[0].split() == ["-", "-", "-", "0", "+", "+", "+"]

import random

import pytest

from goodarm.core import load_instance, save_instance
from goodarm.ingest import (
    PRESETS,
    ConversionError,
    TransformSpec,
    ZeroGapWarning,
    convert,
    load_scores,
    rank_threshold,
)


def test_rank_rule_on_raw_scores():
    scores = [5, 4, 3, 2]
    xi = rank_threshold(scores, 2)
    assert xi == 3.5
    assert [s for s in scores if s >= xi] == [5, 4]


def test_threshold_by_rank():
    # raw scores above 1 are not valid Bernoulli means, so scale by 10
    inst = convert([5, 4, 3, 2], TransformSpec(divide_by=10, threshold_rank=2))
    assert inst.threshold == pytest.approx(0.35)
    assert inst.good_arms == [0, 1]


def test_threshold_rank_raw_scale():
    # the same rule on scores already in [0, 1]: midpoint of 2nd and 3rd largest
    inst = convert([0.5, 0.4, 0.3, 0.2], TransformSpec(threshold_rank=2))
    assert inst.threshold == pytest.approx(0.35)
    assert inst.m == 2


def test_raw_scores_out_of_range():
    with pytest.raises(ConversionError, match="item 0"):
        convert([5, 4, 3, 2], TransformSpec(divide_by=1, threshold_rank=2))


def test_jester_recipe():
    spec = PRESETS["jester"]
    for r in (-10.0, -3.3, 0.0, 4.2, 10.0):
        assert spec.apply(r) == pytest.approx(r / 20 + 0.5, abs=1e-15)


def test_movielens_recipe():
    rng = random.Random(0)
    scores = [rng.uniform(0, 5) for _ in range(400)]
    inst = convert(scores, PRESETS["movielens"])
    assert all(0 <= m <= 0.05 for m in inst.arm_means)
    assert inst.m == 168


def test_covertype_recipe():
    freqs = [0.365, 0.488, 0.062, 0.005, 0.016, 0.030, 0.035]
    inst = convert(freqs, PRESETS["covertype"])
    assert inst.K == 7 and inst.m == 3
    assert inst.threshold == pytest.approx((0.0062 + 0.0035) / 2)


def test_tie_warns_zero_gap():
    with pytest.warns(ZeroGapWarning):
        inst = convert([0.9, 0.5, 0.5, 0.1], TransformSpec(threshold_rank=2))
    assert inst.threshold == 0.5


@pytest.mark.parametrize("scores,k", [([0.5], 1), ([0.5, 0.4], 2), ([0.5, 0.4], 0)])
def test_bad_rank_or_size(scores, k):
    with pytest.raises(ConversionError):
        convert(scores, TransformSpec(threshold_rank=k))


def test_permutation_invariance():
    rng = random.Random(4)
    scores = [rng.uniform(-10, 10) for _ in range(30)]
    perm = list(range(30))
    rng.shuffle(perm)
    a = convert(scores, PRESETS["jester"])
    b = convert([scores[i] for i in perm], PRESETS["jester"])
    assert a.threshold == b.threshold
    assert b.arm_means == tuple(a.arm_means[i] for i in perm)


def test_round_trip_file(tmp_path):
    inst = convert([0.11, 0.52, 0.33], TransformSpec(threshold_rank=1), "tri")
    save_instance(inst, tmp_path / "tri.toml")
    assert load_instance(tmp_path / "tri.toml") == inst


class TestLoadScores:
    def test_four_lines(self, tmp_path):
        p = tmp_path / "s.csv"
        p.write_text("a,4.0\nb,3.5\nc,1\nd,-2\n")
        assert load_scores(p) == [4.0, 3.5, 1.0, -2.0]

    def test_header_and_name(self, tmp_path):
        p = tmp_path / "s.tsv"
        p.write_text("id\tscore\nx\t0.1\ny\t0.2\n")
        assert load_scores(p, "score", delimiter="\t", skip_header=1) == [0.1, 0.2]

    def test_empty(self, tmp_path):
        p = tmp_path / "e.csv"
        p.write_text("")
        with pytest.raises(ConversionError, match="no scores"):
            load_scores(p)

    def test_bad_row_named(self, tmp_path):
        p = tmp_path / "b.csv"
        p.write_text("a,1\nb,oops\nc,3\n")
        with pytest.raises(ConversionError, match="line\\(s\\) 2"):
            load_scores(p)

    def test_missing_column_name(self, tmp_path):
        p = tmp_path / "h.csv"
        p.write_text("id,score\na,1\n")
        with pytest.raises(ConversionError, match="no column named"):
            load_scores(p, "rating", skip_header=1)

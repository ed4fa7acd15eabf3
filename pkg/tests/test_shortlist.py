import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lexrerank.align import NULL, TranslationTable
from lexrerank.corpus import ParallelCorpus, Vocabulary, build_vocab
from lexrerank.shortlist import (build_shortlist, coverage, export_triples,
                                 read_shortlist, sentence_candidates, write_shortlist)


def random_table(rng, sources=6, targets=12):
    rows = {}
    for f in range(sources):
        cands = rng.sample(range(targets), rng.randint(1, targets))
        # coarse weights so probability ties actually occur
        w = [rng.randint(1, 4) for _ in cands]
        rows[f"f{f}"] = {f"e{c}": x / sum(w) for c, x in zip(cands, w)}
    rows[NULL] = {"e0": 1.0}
    return TranslationTable(rows)


def brute_prefix(row, k):
    full = sorted(row.items(), key=lambda kv: (-kv[1], kv[0]))
    return tuple(full[:k])


TABLE = TranslationTable({"a": {"x": 0.6, "y": 0.3, "z": 0.1}, "b": {"y": 0.5, "w": 0.5}})
CORPUS = ParallelCorpus.from_strings([("a b", "x w q"), ("a c", "z y")])


def test_sort_and_cut():
    sl = build_shortlist(TranslationTable({"a": {"x": 0.5, "y": 0.3, "z": 0.2}}), k=2)
    assert sl.per_source["a"] == (("x", 0.5), ("y", 0.3))


def test_default_configuration():
    sl = build_shortlist(TABLE)
    assert sl.k == 10 and sl.frequent_f == 0
    assert sl.per_source["a"] == (("x", 0.6), ("y", 0.3), ("z", 0.1))
    assert NULL not in sl.per_source


def test_tie_break_is_lexicographic():
    assert build_shortlist(TABLE, k=1).per_source["b"] == (("w", 0.5),)


def test_invalid_k():
    with pytest.raises(ValueError):
        build_shortlist(TABLE, k=0)
    with pytest.raises(ValueError):
        build_shortlist(TABLE, k=3, frequent_f=2)


@given(st.integers(0, 10_000))
def test_top_k_equals_brute_force_prefix(seed):
    table = random_table(random.Random(seed))
    for k in range(1, 14):
        sl = build_shortlist(table, k)
        for f, row in table.probs.items():
            if f != NULL:
                assert sl.per_source[f] == brute_prefix(row, k)


def test_frequent_targets_always_included():
    counts = Vocabulary({"the": 9, "a": 9, "cat": 2})
    sl = build_shortlist(TABLE, k=1, frequent_f=2, target_counts=counts)
    assert sl.always_include == ("</s>", "<unk>", "a", "the")
    assert sentence_candidates(sl, ()) == list(sl.always_include)


def test_sentence_candidates():
    sl = build_shortlist(TABLE, k=2, reserved=())
    assert sentence_candidates(sl, ()) == []
    assert sentence_candidates(sl, ("a",)) == ["x", "y"]
    assert sentence_candidates(sl, ("a", "a", "b", "zz")) == ["x", "y", "w"]


def test_coverage_matches_enumeration():
    sl = build_shortlist(TABLE, k=2)
    report = coverage(sl, CORPUS)
    # enumerate by hand: pair 1 allows {x, y, w}; pair 2 allows {x, y}
    expected_hits = [sum(e in {"x", "y", "w"} for e in ("x", "w", "q")),
                     sum(e in {"x", "y"} for e in ("z", "y"))]
    assert (report.reachable_tokens, report.total_tokens) == (sum(expected_hits), 5)
    assert report.coverage == 3 / 5
    assert report.per_sentence == (2 / 3, 1 / 2)


def test_coverage_extremes():
    corpus = ParallelCorpus.from_strings([("a b", "x y w z")])
    counts = build_vocab(corpus.targets)
    full = build_shortlist(TABLE, k=100, frequent_f=len(counts), target_counts=counts)
    assert coverage(full, corpus).coverage == 1.0
    disjoint = build_shortlist(TABLE, k=5, reserved=())
    assert coverage(disjoint, ParallelCorpus.from_strings([("a b", "q r")])).coverage == 0.0
    with pytest.raises(ValueError):
        coverage(full, ParallelCorpus(()))


@given(st.integers(0, 10_000))
def test_coverage_monotone_in_k_and_f(seed):
    rng = random.Random(seed)
    table = random_table(rng)
    corpus = ParallelCorpus(tuple(
        (tuple(f"f{rng.randrange(8)}" for _ in range(3)), tuple(f"e{rng.randrange(14)}" for _ in range(3)))
        for _ in range(10)))
    counts = build_vocab(corpus.targets)
    prev_k = -1.0
    for k in range(1, 14):
        prev_f = -1.0
        for f in range(0, 8):
            c = coverage(build_shortlist(table, k, f, counts), corpus).coverage
            assert c >= prev_f
            prev_f = c
        c0 = coverage(build_shortlist(table, k, 0, counts), corpus).coverage
        assert c0 >= prev_k
        prev_k = c0


def test_k50_lists_are_supersets_of_k10():
    table = random_table(random.Random(1), sources=4, targets=80)
    small, large = build_shortlist(table, 10), build_shortlist(table, 50)
    for f, cands in small.per_source.items():
        assert cands == large.per_source[f][:len(cands)]
        assert len(large.per_source[f]) <= 50


def test_file_round_trip(tmp_path):
    table = random_table(random.Random(2))
    sl = build_shortlist(table, 4, 2, Vocabulary({"e1": 5, "e2": 3, "e3": 1}))
    write_shortlist(sl, tmp_path / "sl")
    again = read_shortlist(tmp_path / "sl")
    assert again == sl
    assert list(again.per_source) == list(sl.per_source)
    assert (tmp_path / "sl").read_text().startswith("#shortlist k=4 f=2\n")


def test_export_triples(tmp_path):
    export_triples(build_shortlist(TABLE, 2), tmp_path / "lex")
    lines = (tmp_path / "lex").read_text().splitlines()
    assert lines == ["a x 0.59999999999999998", "a y 0.29999999999999999",
                     "b w 0.5", "b y 0.5"]

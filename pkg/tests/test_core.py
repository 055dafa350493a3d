from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from binstretch.core import (
    Config,
    Multiset,
    Score,
    canonicalize,
    distinct_bin_moves,
    place,
)


def test_config_validation():
    Config(1, 1)
    with pytest.raises(ValueError):
        Config(0, 3)
    with pytest.raises(ValueError):
        Config(2, 0)
    assert Config(2, 3).load_cap == 6


@pytest.mark.parametrize("raw,expected", [
    ([0, 0], (0, 0)),
    ([1, 3], (3, 1)),
    ([2, 5, 2], (5, 2, 2)),
])
def test_canonicalize_examples(raw, expected):
    assert canonicalize(raw) == expected
    assert canonicalize(expected) == expected  # idempotent


@pytest.mark.parametrize("loads,expected", [
    ((0, 0), (0,)),
    ((3, 1, 1), (0, 1)),
    ((4, 3, 2), (0, 1, 2)),
])
def test_distinct_bin_moves_examples(loads, expected):
    assert distinct_bin_moves(loads) == expected


@given(st.lists(st.integers(min_value=0, max_value=12), min_size=1, max_size=6),
       st.randoms())
def test_canonicalize_permutation_invariant(loads, rng):
    shuffled = loads[:]
    rng.shuffle(shuffled)
    assert canonicalize(shuffled) == canonicalize(loads)
    assert list(canonicalize(loads)) == sorted(loads, reverse=True)


@given(st.lists(st.integers(min_value=0, max_value=9), min_size=1, max_size=5),
       st.integers(min_value=1, max_value=9))
def test_equal_load_bins_collapse(loads, item):
    canon = canonicalize(loads)
    reps = distinct_bin_moves(canon)
    successors = {place(canon, i, item) for i in range(len(canon))}
    rep_successors = {place(canon, r, item) for r in reps}
    assert successors == rep_successors
    assert len(rep_successors) == len(reps)


def test_score_ordering_and_equality():
    assert Score(4, 3) == Fraction(4, 3)
    assert Score(8, 6) == Score(4, 3)
    assert hash(Score(8, 6)) == hash(Score(4, 3))
    assert Score(4, 3) > Score(1, 1)
    assert Score(4, 3) < Score(3, 2)
    assert Score(4, 3) <= Fraction(4, 3) <= Score(4, 3)
    assert Score(0, 5) == 0
    with pytest.raises(ValueError):
        Score(-1, 3)
    with pytest.raises(ValueError):
        Score(1, 0)


@given(st.integers(min_value=0, max_value=60), st.integers(min_value=1, max_value=30),
       st.integers(min_value=0, max_value=60), st.integers(min_value=1, max_value=30))
def test_score_order_matches_fractions(a, b, c, d):
    x, y = Score(a, b), Score(c, d)
    fx, fy = Fraction(a, b), Fraction(c, d)
    assert (x < y) == (fx < fy)
    assert (x == y) == (fx == fy)
    assert (x >= y) == (fx >= fy)


def test_score_rendering():
    assert str(Score(4, 3)) == "4/3"
    assert Score(8, 6).reduced() == "4/3"
    assert Score(4, 3).decimal(4) == "1.3333"
    assert Score(3, 2).decimal(4) == "1.5000"
    # half-even at the rounding digit
    assert Score(1, 8).decimal(2) == "0.12"
    assert Score(3, 8).decimal(2) == "0.38"


def test_multiset_basics():
    ms = Multiset([3, 1, 1])
    assert ms.pairs == ((1, 2), (3, 1))
    assert ms.total() == 5
    assert ms.size() == 3
    assert ms.values_desc() == (3, 1, 1)
    assert ms.get(1) == 2 and ms.get(7) == 0
    assert ms.add(1).get(1) == 3
    assert ms.remove(1).pairs == ((1, 1), (3, 1))
    assert ms.remove(1, 2).pairs == ((3, 1),)
    assert ms.shift(1).pairs == ((2, 2), (4, 1))
    assert Multiset([1, 3, 1]) == ms
    assert hash(Multiset([1, 3, 1])) == hash(ms)
    assert not Multiset()
    with pytest.raises(KeyError):
        ms.remove(2)
    with pytest.raises(ValueError):
        Multiset([-1])

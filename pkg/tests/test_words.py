from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from ietmorph.errors import AlphabetMismatch, EmptyWord, IncompleteLanguage
from ietmorph.words import (
    FactorSet,
    PointedWord,
    balance_defect,
    complexity_csv,
    complexity_profile,
    empirical_densities,
    factors,
    is_factor_subset,
    metric_distance,
    prefix_closure,
)

ternary = st.text(alphabet="ABC", min_size=1, max_size=60)
binary = st.text(alphabet="01", min_size=2, max_size=60)


def test_pointed_word_indexing():
    w = PointedWord.from_text("ABC|CBA")
    assert w.letter(0) == "C" and w.letter(-1) == "C" and w.letter(-3) == "A"
    assert str(w) == "ABC|CBA" and w.text == "ABCCBA" and w.offset == 3
    assert PointedWord.from_sides("AB", "C") == PointedWord.from_text("AB|C")


def test_alphabet_checks():
    with pytest.raises(AlphabetMismatch):
        PointedWord("D", "A")
    with pytest.raises(AlphabetMismatch):
        balance_defect(PointedWord.from_text("|ABC"), 2)
    with pytest.raises(EmptyWord):
        empirical_densities(PointedWord("", ""))


def test_fibonacci_word_is_sturmian():
    w = "0"
    prev = "1"
    while len(w) < 3000:
        w, prev = w + prev, w
    word = PointedWord.from_text("|" + w)
    assert complexity_profile(word, 12) == [n + 1 for n in range(1, 13)]
    assert balance_defect(word, 200) == 1


def test_metric_distance():
    u = PointedWord.from_text("AB|CA")
    assert metric_distance(u, u) == 0
    assert metric_distance(u, PointedWord.from_text("AB|CB")) == Fraction(1, 2)
    assert metric_distance(u, PointedWord.from_text("AC|CA")) == Fraction(1, 2)
    assert metric_distance(u, PointedWord.from_text("AB|BA")) == 1


def test_factor_subset_reports_shortest_witness():
    lang = prefix_closure(factors("ABABAB", 3))
    ok, bad = is_factor_subset("ABAAB", lang, 3)
    assert not ok and bad == "AA"
    assert is_factor_subset("BABA", lang, 3) == (True, None)
    with pytest.raises(IncompleteLanguage):
        is_factor_subset("AB", [FactorSet(2, frozenset())], 2)


def test_complexity_csv():
    assert complexity_csv([2, 3]) == "n,complexity\n1,2\n2,3\n"


@given(ternary, st.integers(1, 8))
def test_factors_match_brute_force(s, n):
    assume(len(s) >= n)
    expected = {s[i : i + n] for i in range(len(s) - n + 1)}
    assert set(factors(s, n).factors) == expected


@given(binary)
def test_balance_matches_brute_force(s):
    n_max = len(s)
    worst = 0
    for n in range(1, n_max + 1):
        counts = [s[i : i + n].count("0") for i in range(len(s) - n + 1)]
        worst = max(worst, max(counts) - min(counts))
    assert balance_defect(PointedWord.from_text("|" + s), n_max) == worst


@given(ternary)
def test_densities_sum_to_one(s):
    dens = empirical_densities(PointedWord.from_text("|" + s))
    assert sum(dens) == 1
    assert all(x >= 0 for x in dens)


@given(ternary, st.integers(1, 6))
def test_complexity_is_nondecreasing_for_long_windows(s, n):
    assume(len(s) > n)
    # every factor of length n that is not a suffix extends to the right
    prof = complexity_profile(s, n + 1)
    assert prof[n] >= prof[n - 1] - 1

from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ietmorph.errors import AlphabetMismatch, FieldMismatch, NotAFixedPointSeed
from ietmorph.morphism import (
    SIGMA,
    Morphism,
    apply,
    char_poly,
    compose,
    det,
    eigenvalues,
    find_fixed_points,
    fixed_point_window,
    format_matrix,
    incidence_matrix,
    is_primitive,
    mat_mul,
    parse_matrix,
    perron_data,
    power,
    vec_mat,
)
from ietmorph.qfield import QuadReal
from ietmorph.words import PointedWord

PHI0 = Morphism.parse("A->B;B->BCB;C->CAC")
TAU = (1 + QuadReal.sqrt(5)) / 2

images = st.text(alphabet="ABC", min_size=1, max_size=4)
morphisms = st.builds(lambda a, b, c: Morphism((a, b, c)), images, images, images)
words = st.text(alphabet="ABC", max_size=20)


def counts(word: str, alphabet: str = "ABC") -> tuple[int, ...]:
    return tuple(word.count(a) for a in alphabet)


def test_parse_and_format():
    m = Morphism.parse("A->AC; B->BC; C->C")
    assert m.images == ("AC", "BC", "C") and str(m) == "A->AC;B->BC;C->C"
    assert Morphism.parse("0->10;1->110").alphabet == "01"
    assert format_matrix(parse_matrix("0,2,1;2,3,5;3,0,5")) == "0,2,1;2,3,5;3,0,5"
    with pytest.raises(ValueError):
        Morphism.parse("A->;B->B;C->C")


def test_sigma_changes_alphabet():
    assert SIGMA("ABCA") == "00110"
    assert apply(SIGMA, PointedWord.from_text("AB|C")) == PointedWord.from_text("001|1")
    assert incidence_matrix(SIGMA) == ((1, 0), (1, 1), (0, 1))
    with pytest.raises(AlphabetMismatch):
        power(SIGMA, 2)


def test_phi0_matrix_and_spectrum():
    mat = incidence_matrix(PHI0)
    assert mat == ((0, 1, 0), (0, 2, 1), (1, 0, 2))
    assert det(mat) == 1
    assert is_primitive(PHI0) == (True, 3)
    assert char_poly(mat) == [1, -4, 4, -1]
    assert eigenvalues(mat) == sorted([QuadReal(1), TAU**2, TAU**-2])
    pd = perron_data(mat)
    assert pd.value == TAU**2
    assert pd.left == (1, TAU, TAU**2)
    assert vec_mat(pd.left, mat) == tuple(pd.value * x for x in pd.left)


def test_non_primitive():
    assert is_primitive(Morphism.parse("A->AC;B->BC;C->C")) == (False, None)


def test_irrational_cubic_spectrum_is_rejected():
    with pytest.raises(FieldMismatch):
        eigenvalues(((0, 1, 0), (0, 0, 1), (1, 1, 0)))


def test_fixed_points_of_phi0():
    found = {(p, f"{w.left[0]}|{w.right[0]}") for p, w in find_fixed_points(PHI0, max_power=2, min_len=50)}
    assert (1, "B|B") in found and (1, "B|C") in found
    w = fixed_point_window(PHI0, "B", "C", 200)
    assert apply(PHI0, w).right.startswith(w.right) and apply(PHI0, w).left.startswith(w.left)
    with pytest.raises(NotAFixedPointSeed):
        fixed_point_window(PHI0, "A", "A", 10)


@given(morphisms, words, words)
def test_morphism_is_a_monoid_homomorphism(m, u, v):
    assert m(u + v) == m(u) + m(v)
    assert counts(m(u)) == vec_mat(counts(u), incidence_matrix(m))


@given(morphisms, morphisms, words)
def test_composition(phi, psi, w):
    assert compose(phi, psi)(w) == phi(psi(w))
    assert incidence_matrix(compose(phi, psi)) == mat_mul(incidence_matrix(psi), incidence_matrix(phi))


@given(morphisms, st.integers(0, 3))
def test_power(m, k):
    w = "ABC"
    expected = w
    for _ in range(k):
        expected = m(expected)
    assert power(m, k)(w) == expected

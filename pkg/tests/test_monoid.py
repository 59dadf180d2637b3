from __future__ import annotations

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ietmorph.errors import BoundTooLarge, NotInClass
from ietmorph.monoid import (
    E,
    degeneracy_transport_check,
    e3n_membership,
    enumerate_e3n,
    lattice_checks,
    left_eigen_check,
    matrix_report,
    passes_theorem_a,
    row_sum_check,
    spectrum_report,
    symplectic_like_check,
)
from ietmorph.morphism import det, incidence_matrix, mat_mul, mat_vec, Morphism
from ietmorph.qfield import QuadReal

PHI = incidence_matrix(Morphism.parse("A->AC;B->BC;C->C"))
XI = incidence_matrix(Morphism.parse("A->C;B->B;C->A"))
PHI0 = incidence_matrix(Morphism.parse("A->B;B->BCB;C->CAC"))
COUNTER = ((0, 2, 1), (2, 3, 5), (3, 0, 5))
SINGULAR = ((0, 0, 1), (0, 1, 1), (0, 1, 0))
GENERATORS = [PHI, XI, PHI0]


def test_generators_pass_everything():
    for m in GENERATORS + [COUNTER, ((1, 0, 0), (0, 1, 0), (0, 0, 1))]:
        r = matrix_report(m)
        assert r.symplectic_sign is not None and r.left_eigen_ok and r.row_sum_ok and r.lattice_ok and r.e3n_member


def test_xi_reverses_orientation():
    assert symplectic_like_check(XI) == -1 and det(XI) == -1
    assert symplectic_like_check(PHI) == 1


def test_all_ones_fails():
    r = matrix_report(((1, 1, 1),) * 3)
    assert r.symplectic_sign is None and not r.lattice_ok and not r.e3n_member


def test_singular_specimen_and_witness():
    assert symplectic_like_check(SINGULAR) is not None and det(SINGULAR) == 0
    assert all(lattice_checks(SINGULAR)) and not e3n_membership(SINGULAR)
    w = degeneracy_transport_check(SINGULAR)
    assert w.case == 1
    assert mat_vec(SINGULAR, (w.K, w.K + w.L, w.L)) == mat_vec(SINGULAR, (1, 1, 1))


def test_unimodular_witness():
    w = degeneracy_transport_check(PHI0)
    v = mat_vec(PHI0, (1, 1, 1))
    assert w.case == 2 and v == (w.sign + w.K, w.sign + w.K + w.L, w.sign + w.L)
    with pytest.raises(NotInClass):
        degeneracy_transport_check(((1, 1, 1),) * 3)


def test_enumeration_agrees_with_naive_loop():
    assert enumerate_e3n(2) == enumerate_e3n(2, naive=True)
    assert len(enumerate_e3n(2)) == 38
    assert len(enumerate_e3n(3)) == 138
    assert COUNTER not in enumerate_e3n(3)
    with pytest.raises(BoundTooLarge):
        enumerate_e3n(7)


def test_naive_enumeration_matches_definition_at_bound_one():
    brute = []
    for entries in itertools.product(range(2), repeat=9):
        m = (entries[0:3], entries[3:6], entries[6:9])
        mem = mat_mul(mat_mul(m, E), tuple(zip(*m)))
        if abs(det(m)) == 1 and mem in (E, tuple(tuple(-x for x in r) for r in E)):
            brute.append(m)
    assert sorted(brute) == enumerate_e3n(1)


def test_spectrum_of_counterexample():
    s = spectrum_report(COUNTER)
    assert s.split_eigenvalue == 1 and s.quadratic_factor() == "x^2-7x+1" and s.discriminant == 45
    r5 = QuadReal.sqrt(5)
    assert s.perron == (7 + 3 * r5) / 2


def test_spectrum_of_phi0():
    s = spectrum_report(PHI0)
    tau = (1 + QuadReal.sqrt(5)) / 2
    assert s.perron == tau**2 and s.constant == 1 and s.trace == 3


@given(st.lists(st.sampled_from(GENERATORS), min_size=1, max_size=6))
def test_products_stay_in_class(factors):
    m = factors[0]
    for f in factors[1:]:
        m = mat_mul(m, f)
    assert e3n_membership(m)
    assert passes_theorem_a(m)
    assert left_eigen_check(m) and row_sum_check(m)
    sign = 1
    for f in factors:
        sign *= symplectic_like_check(f)
    assert symplectic_like_check(m) == sign

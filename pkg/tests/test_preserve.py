from __future__ import annotations

import random

import pytest

from ietmorph.errors import AlphabetMismatch, NotInClass, NotPrimitive, TransportOutOfCone
from ietmorph.iet import Iet2Params, Iet3Params, classify
from ietmorph.monoid import e3n_membership
from ietmorph.morphism import Morphism, incidence_matrix
from ietmorph.preserve import (
    eigen_params,
    fixed_point_3iet_check,
    predicted_params,
    sample_intercept,
    sample_params,
    test_preservation as run_preservation,
    theorem_b_check,
    transport_expression,
)
from ietmorph.qfield import QuadReal

R2 = QuadReal.sqrt(2)
TAU = (1 + QuadReal.sqrt(5)) / 2
PHI = Morphism.parse("A->AC;B->BC;C->C")
XI = Morphism.parse("A->C;B->B;C->A")
PHI0 = Morphism.parse("A->B;B->BCB;C->CAC")
SMALL = dict(trials=3, window_len=6000, factor_len=10)


def test_transport_expressions():
    assert transport_expression(incidence_matrix(PHI)) == ("alpha", "beta", "alpha+beta+gamma")
    assert transport_expression(incidence_matrix(XI)) == ("gamma", "beta", "alpha")
    assert transport_expression(incidence_matrix(PHI0)) == ("gamma", "alpha+2*beta", "beta+2*gamma")
    p = predicted_params(incidence_matrix(PHI0), Iet3Params(1, R2, 2))
    assert p.lengths == (2, 1 + 2 * R2, R2 + 4)
    with pytest.raises(TransportOutOfCone):
        predicted_params(((1, 0, 0), (0, 1, 0), (0, 0, 0)), Iet3Params(1, R2, 2))


def test_sampling_is_reproducible_and_valid():
    a = [sample_params(random.Random(5)) for _ in range(3)]
    b = [sample_params(random.Random(5)) for _ in range(3)]
    assert a == b
    rng = random.Random(1)
    for _ in range(10):
        p = sample_params(rng)
        assert classify(p).kind == "NonDegenerate"
        assert 0 <= sample_intercept(rng, p) < p.total


@pytest.mark.parametrize("m", [PHI, XI, PHI0, Morphism.parse("A->A;B->B;C->C")])
def test_known_morphisms_are_consistent(m):
    rep = run_preservation(m, **SMALL)
    assert rep.verdict == "Consistent" and rep.witness is None


def test_corrupted_morphism_is_falsified():
    rep = run_preservation(Morphism.parse("A->AB;B->BC;C->C"), **SMALL)
    assert rep.verdict == "Falsified" and rep.witness == "AB" and rep.failing_trial == 0


def test_class_membership_is_not_sufficient():
    m = Morphism.parse("A->BBC;B->AABBBCCCCC;C->AAACCCCC")
    assert e3n_membership(incidence_matrix(m))
    assert run_preservation(m, **SMALL).verdict == "Falsified"


def test_report_is_deterministic_and_serializable():
    a = run_preservation(PHI, trials=2, window_len=2000, factor_len=8, seed=3).to_json()
    b = run_preservation(PHI, trials=2, window_len=2000, factor_len=8, seed=3).to_json()
    assert a == b and a["seed"] == 3 and a["matrix"]["det"] == 1


def test_harness_needs_ternary_morphisms():
    with pytest.raises(AlphabetMismatch):
        run_preservation(Morphism.parse("0->01;1->0"), **SMALL)


def test_theorem_b():
    rep = theorem_b_check(incidence_matrix(PHI0), samples=5)
    assert rep.ok and rep.det == 1
    deg = theorem_b_check(incidence_matrix(PHI), params=[Iet3Params(1, R2, 2)])
    assert deg.samples[0].image.kind == "Degenerate"
    singular = theorem_b_check(((0, 1, 0), (1, 1, 2), (1, 0, 2)), samples=5)
    assert singular.ok and singular.det == 0 and singular.witness.case == 1
    with pytest.raises(NotInClass):
        theorem_b_check(((1, 1, 1),) * 3)


def test_fixed_points():
    assert eigen_params(PHI0).lengths == (1, TAU, TAU**2)
    rep = fixed_point_3iet_check(PHI0, factor_len=12)
    assert rep.contained and rep.power == 1 and rep.seed == "B|C"
    fib = Morphism.parse("0->10;1->110")
    p = eigen_params(fib)
    assert isinstance(p, Iet2Params) and p.slope == TAU - 1
    assert fixed_point_3iet_check(fib, factor_len=12).contained
    with pytest.raises(NotPrimitive):
        fixed_point_3iet_check(PHI)

from __future__ import annotations

from decimal import Decimal, getcontext
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ietmorph.errors import ExactnessRequired, OutOfDomain
from ietmorph.iet import (
    Closure,
    Iet2Params,
    Iet3Params,
    classify,
    images_tile,
    is_minimal,
    language,
    s_coding,
    sigma_project,
    t2_code,
    t3_apply,
    t3_code,
    t3_inverse,
    window_language,
)
from ietmorph.qfield import Approx, QuadReal
from ietmorph.words import complexity_profile

getcontext().prec = 60
R2 = QuadReal.sqrt(2)
R5 = QuadReal.sqrt(5)
NONDEG = Iet3Params(1, R2, R2)
DEG = Iet3Params(1, R2, 2)

# first 60 letters from T^n(x0), frozen from a 60-digit Decimal reference exchange
FROZEN = {
    (NONDEG, Fraction(0)): "ACACACBBBCACACACBBBCACACACBBBCACACBBBBCACACBBBBCACACBBBCACAC",
    (NONDEG, Fraction(1, 2)): "ACACBBBCACACACBBBCACACBBBBCACACBBBBCACACBBBCACACACBBBCACACAC",
    (DEG, Fraction(0)): "ACBBCACBCACBBCACBCACBBCACBCACBCACBBCACBCACBBCACBCACBCACBBCAC",
}
FIB_LOWER = "0101101011011010110101101101011011010110"


def dec(x) -> Decimal:
    if isinstance(x, QuadReal):
        a, b = x.a, x.b
        return Decimal(a.numerator) / a.denominator + Decimal(b.numerator) / b.denominator * Decimal(x.d).sqrt()
    x = Fraction(x)
    return Decimal(x.numerator) / x.denominator


def reference_code(lengths, closure: Closure, x0, n: int) -> str:
    """Independent reversal exchange of three intervals in high precision decimals."""
    a, b, g = (dec(v) for v in lengths)
    x = dec(x0)
    out = []
    for _ in range(n):
        if closure is Closure.LEFT:
            k = 0 if x < a else 1 if x < a + b else 2
        else:
            k = 0 if x <= a else 1 if x <= a + b else 2
        x = x + (b + g, g - a, -a - b)[k]
        out.append("ABC"[k])
    return "".join(out)


@st.composite
def params(draw, closure=None):
    vals = []
    for _ in range(3):
        # |b| sqrt2 < 1/2 <= a keeps every length positive
        a = Fraction(draw(st.integers(1, 12)), 2)
        b = Fraction(draw(st.integers(-1, 1)), 3)
        vals.append(a + b * R2)
    return Iet3Params(*vals, closure=closure or draw(st.sampled_from(list(Closure))))


@pytest.mark.parametrize(("key", "expected"), list(FROZEN.items()))
def test_frozen_codings(key, expected):
    p, x0 = key
    assert t3_code(p, x0, 0, 59).word.right == expected
    assert reference_code(p.lengths, p.closure, x0, 60) == expected


def test_frozen_rotation():
    tau_inv = (R5 - 1) / 2
    assert t2_code(Iet2Params(tau_inv), 0, 39).right == FIB_LOWER


def test_negative_indices_follow_the_inverse():
    w = t3_code(NONDEG, Fraction(1, 2), -30, 29)
    x = w.point(0)
    for k in range(1, 31):
        x = t3_inverse(NONDEG, x)
        assert w.point(-k) == x
    assert len(w.word.left) == 30 and w.n_lo == -30 and w.n_hi == 29


def test_right_closure_starts_at_total():
    p = Iet3Params(1, R2, R2, Closure.RIGHT)
    total = 1 + 2 * R2
    assert t3_code(p, total, 0, 39).word.right == reference_code(p.lengths, Closure.RIGHT, total, 40)


@settings(max_examples=40, deadline=None)
@given(params(), st.fractions(0, 1))
def test_coding_matches_reference(p, t):
    x0 = t * p.total
    if p.closure is Closure.RIGHT and x0 == 0:
        x0 = p.total
    if p.closure is Closure.LEFT and x0 == p.total:
        x0 = 0
    assert t3_code(p, x0, 0, 39).word.right == reference_code(p.lengths, p.closure, x0, 40)


@settings(max_examples=60, deadline=None)
@given(params(Closure.LEFT), st.fractions(0, 1))
def test_inverse_undoes_map(p, t):
    x = t * p.total
    if x == p.total:
        x = 0
    y = t3_apply(p, x)
    assert 0 <= y < p.total
    assert t3_inverse(p, y) == x


@settings(max_examples=60, deadline=None)
@given(params())
def test_images_tile(p):
    assert images_tile(p)


def test_classification_examples():
    assert classify(DEG).to_json() == {"class": "Degenerate", "K": -1, "L": 2}
    assert classify(NONDEG).kind == "NonDegenerate"
    assert classify(Iet3Params(1, 2, 3)).to_json() == {"class": "Periodic", "K": 5, "L": -3}
    assert not is_minimal(Iet3Params(1, 2, 3))
    with pytest.raises(ExactnessRequired):
        classify(Iet3Params(Approx(1.0), Approx(1.4), Approx(1.4)))


@settings(max_examples=80, deadline=None)
@given(params())
def test_classification_witnesses(p):
    a, b, g = p.lengths
    u, v, s = a + b, b + g, a + b + g
    got = classify(p)
    if got.kind == "Periodic":
        assert got.K * u + got.L * v == 0 and got.K and got.L
    elif got.kind == "Degenerate":
        assert got.K * u + got.L * v == s
    else:
        for K in range(-12, 13):
            for L in range(-12, 13):
                assert K * u + L * v != s
                assert not (K and L and K * u + L * v == 0)


def test_complexity_of_codings():
    w = t3_code(NONDEG, Fraction(1, 2), -3000, 2999).word
    assert complexity_profile(w, 12) == [2 * n + 1 for n in range(1, 13)]
    deg = t3_code(DEG, 0, -3000, 2999).word
    assert complexity_profile(deg, 12)[5:] == [n + 3 for n in range(6, 13)]


@pytest.mark.parametrize("p", [NONDEG, DEG, Iet3Params(1, R2, R2, Closure.RIGHT), Iet3Params(2 + R2, 1, R2 - 1)])
def test_exact_language_matches_long_window(p):
    for n in (1, 4, 9):
        assert language(p, n) == window_language(p, n, window_len=30_000)


def test_rotation_language_is_sturmian():
    p = Iet2Params((R5 - 1) / 2)
    assert [len(language(p, n)) for n in range(1, 8)] == [n + 1 for n in range(1, 8)]


@settings(max_examples=40, deadline=None)
@given(st.fractions(Fraction(1, 50), Fraction(49, 50)), st.fractions(0, Fraction(99, 100)), st.sampled_from(["lower", "upper"]))
def test_mechanical_words(alpha_q, rho, kind):
    alpha = alpha_q / 3 + R2 / 5  # irrational slope in (0, 1)
    w = t2_code(Iet2Params(alpha, rho, kind), 0, 29).right
    import math

    rnd = math.floor if kind == "lower" else math.ceil
    expected = "".join(str(rnd((n + 1) * alpha + rho) - rnd(n * alpha + rho)) for n in range(30))
    assert w == expected


def test_sigma_projection_matches_s_coding():
    for x0 in (Fraction(0), Fraction(1, 3), R2):
        w = t3_code(NONDEG, x0, -100, 99).word
        sw = sigma_project(w)
        ref = s_coding(NONDEG, x0, -len(sw.left), len(sw.right) - 1).word
        assert sw == ref


def test_approximate_coding_agrees_on_generic_points():
    p = Iet3Params(Approx(1.0), Approx(float(R2)), Approx(float(R2)))
    w = t3_code(p, Approx(0.5), 0, 199)
    assert w.approximate
    assert w.word.right == t3_code(NONDEG, Fraction(1, 2), 0, 199).word.right


def test_domain_checks():
    with pytest.raises(OutOfDomain):
        Iet3Params(1, 0, 1)
    with pytest.raises(OutOfDomain):
        Iet2Params(R2)
    with pytest.raises(OutOfDomain):
        t3_code(NONDEG, 10, 0, 3)

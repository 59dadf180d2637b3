"""Cut-and-project sets ``Sigma_{eps,eta}(Omega) = {a + b*eta : a - b*eps in Omega}``.

Counting and listing walk over the integer ``b`` and take every integer
``a`` allowed by both intervals, so results are exact and the loop is
bounded by the widths of the window and of ``Omega``.
"""

from __future__ import annotations

import bisect
import csv
import io
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import (
    ConversionBug,
    ExactnessRequired,
    HypothesisFailed,
    NoFixedPointFound,
    NotAUnit,
    NotPrimitive,
    OutOfDomain,
    ParseError,
    SingularRenorm,
)
from .iet import Closure, Iet3Params
from .morphism import Morphism, find_fixed_points, fixed_point_window, incidence_matrix, is_primitive, perron_data, power
from .qfield import Number, QuadReal, RealParam, _floor_raw, _sgn, _split_top_level, exact, is_exact, parse, to_raw
from .words import PointedWord

GAP_LETTERS = "ABC"


# -- intervals -----------------------------------------------------------------


@dataclass(frozen=True)
class Interval:
    lo: QuadReal
    hi: QuadReal
    lo_closed: bool = False
    hi_closed: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "lo", exact(self.lo))
        object.__setattr__(self, "hi", exact(self.hi))

    @classmethod
    def parse(cls, text: str) -> Interval:
        """Parse ``(a,b]``, ``[a,b)`` and the like."""
        s = text.strip()
        if len(s) < 5 or s[0] not in "([" or s[-1] not in ")]":
            raise ParseError(f"bad interval {text!r}")
        parts = _split_top_level(s[1:-1], ",")
        if len(parts) != 2:
            raise ParseError(f"bad interval {text!r}")
        return cls(parse(parts[0]), parse(parts[1]), s[0] == "[", s[-1] == "]")

    def __str__(self) -> str:
        return f"{'[' if self.lo_closed else '('}{self.lo},{self.hi}{']' if self.hi_closed else ')'}"

    @property
    def width(self) -> QuadReal:
        return self.hi - self.lo

    def is_empty(self) -> bool:
        if self.lo < self.hi:
            return False
        return not (self.lo == self.hi and self.lo_closed and self.hi_closed)

    def contains(self, x: Number) -> bool:
        x = exact(x)
        above = x > self.lo or (self.lo_closed and x == self.lo)
        below = x < self.hi or (self.hi_closed and x == self.hi)
        return above and below

    def scale(self, f: Number) -> Interval:
        f = exact(f)
        if not f:
            raise ValueError("scaling by zero")
        if f.sign() > 0:
            return Interval(self.lo * f, self.hi * f, self.lo_closed, self.hi_closed)
        return Interval(self.hi * f, self.lo * f, self.hi_closed, self.lo_closed)

    def shift(self, t: Number) -> Interval:
        return Interval(self.lo + t, self.hi + t, self.lo_closed, self.hi_closed)


def half_open(lo: Number, hi: Number) -> Interval:
    """The interval ``(lo, hi]``."""
    return Interval(exact(lo), exact(hi), False, True)


# -- exact counting ------------------------------------------------------------


def _lower_int(p: int, q: int, r: int, d: int, closed: bool) -> int:
    # least integer >= x (closed) or > x (open)
    if closed:
        return -_floor_raw(-p, -q, r, d)
    return _floor_raw(p, q, r, d) + 1


def _upper_int(p: int, q: int, r: int, d: int, closed: bool) -> int:
    # greatest integer <= x (closed) or < x (open)
    if closed:
        return _floor_raw(p, q, r, d)
    return -_floor_raw(-p, -q, r, d) - 1


def _walk(eps: Number, eta: Number, omega: Interval, window: Interval, collect: bool):
    eps, eta = exact(eps), exact(eta)
    total = eps + eta
    if not total:
        raise OutOfDomain("eps == -eta gives a degenerate projection")
    if omega.is_empty() or window.is_empty():
        return [] if collect else 0
    d, r, raw = to_raw([eps, eta, omega.lo, omega.hi, window.lo, window.hi])
    (pe, qe), (pn, qn), (pol, qol), (poh, qoh), (pjl, qjl), (pjh, qjh) = raw
    # a + b*eta in window and a - b*eps in omega force b*(eps+eta) into [J.lo - O.hi, J.hi - O.lo]
    ends = sorted([(window.lo - omega.hi) / total, (window.hi - omega.lo) / total])
    b_lo, b_hi = math.floor(ends[0]), math.ceil(ends[1])
    out = [] if collect else 0
    for b in range(b_lo, b_hi + 1):
        lo = max(
            _lower_int(pol + b * pe, qol + b * qe, r, d, omega.lo_closed),
            _lower_int(pjl - b * pn, qjl - b * qn, r, d, window.lo_closed),
        )
        hi = min(
            _upper_int(poh + b * pe, qoh + b * qe, r, d, omega.hi_closed),
            _upper_int(pjh - b * pn, qjh - b * qn, r, d, window.hi_closed),
        )
        if hi < lo:
            continue
        if collect:
            out.extend(QuadReal.raw(a * r + b * pn, b * qn, r, d) for a in range(lo, hi + 1))
        else:
            out += hi - lo + 1
    return sorted(out) if collect else out


def count_in(eps: Number, eta: Number, omega: Interval, window: Interval) -> int:
    """``#(window  intersect  Sigma_{eps,eta}(omega))``."""
    return _walk(eps, eta, omega, window, False)


def points_in(eps: Number, eta: Number, omega: Interval, window: Interval) -> list[QuadReal]:
    """Sorted points of ``Sigma_{eps,eta}(omega)`` inside ``window``."""
    return _walk(eps, eta, omega, window, True)


def duality_check(eps: Number, eta: Number, omega1: Interval, omega2: Interval) -> tuple[int, int]:
    """Both sides of ``#(O1 & Sigma_{e,n}(O2)) == #(O2 & Sigma_{n,e}(O1))``."""
    return count_in(eps, eta, omega2, omega1), count_in(eta, eps, omega1, omega2)


# -- correspondence with 3iet words ----------------------------------------------


@dataclass(frozen=True)
class CapParams:
    eps: QuadReal
    eta: QuadReal
    omega: Interval

    def __post_init__(self) -> None:
        if exact(self.eta).sign() <= 0:
            raise OutOfDomain("eta must be positive")
        if not exact(self.eps) + self.eta:
            raise OutOfDomain("eps == -eta")
        if self.omega.is_empty():
            raise OutOfDomain("empty acceptance window")


@dataclass(frozen=True)
class ConversionResult:
    eps: QuadReal
    l: QuadReal
    c: QuadReal
    scale: QuadReal  # alpha + 2 beta + gamma

    @property
    def omega(self) -> Interval:
        return half_open(self.c - self.l, self.c)

    def cap_params(self, eta: Number) -> CapParams:
        return CapParams(self.eps, exact(eta), self.omega)


def from_iet(p: Iet3Params, x0: RealParam) -> ConversionResult:
    """Normalized ``eps, l, c`` with ``Omega = (c - l, c]`` for a left-closed 3iet."""
    if not p.exact or not is_exact(x0):
        raise ExactnessRequired("conversion needs exact parameters")
    if p.closure is not Closure.LEFT:
        raise OutOfDomain("the conversion is stated for the left-closed exchange")
    a, b, g = (exact(x) for x in p.lengths)
    x0 = exact(x0)
    if x0.sign() < 0 or x0 >= a + b + g:
        raise OutOfDomain("x0 outside [0, alpha+beta+gamma)")
    s = a + 2 * b + g
    res = ConversionResult((b + g) / s, (a + b + g) / s, x0 / s, s)
    one = exact(1)
    ok = (
        0 < res.eps < 1
        and max(res.eps, one - res.eps) < res.l <= 1
        and res.omega.contains(0)
    )
    if not ok:
        raise ConversionBug(f"normalized parameters violate their constraints: {res}")
    return res


@dataclass(frozen=True)
class CapSet:
    """Consecutive points ``t_k`` of a C&P set with the letters coding their gaps."""

    points: tuple[QuadReal, ...]
    indices: tuple[int, ...]  # the n of y_n for each point
    labels: str  # labels[k] codes points[k+1] - points[k]
    origin: int | None  # position of the point 0, if present

    def gap_word(self) -> PointedWord:
        """Gap letters split at the origin: ``... | label(t_0, t_1) ...``."""
        if self.origin is None:
            raise OutOfDomain("0 is not among the points")
        return PointedWord.from_sides(self.labels[: self.origin], self.labels[self.origin :])


def gap_letter(gap: QuadReal, eta: QuadReal) -> str:
    if gap == eta:
        return "A"
    if gap == 1 + 2 * eta:
        return "B"
    if gap == 1 + eta:
        return "C"
    raise ConversionBug(f"gap {gap} is not one of eta, 1+2eta, 1+eta")


def generate(conv: ConversionResult, eta: Number, n_lo: int, n_hi: int) -> CapSet:
    """Points ``floor(c + n eps) + n eta`` with ``{c + n eps}`` in ``[0, l)``."""
    eta = exact(eta)
    d, r, raw = to_raw([conv.c, conv.eps, conv.l, eta])
    (pc, qc), (pe, qe), (pl, ql), (pn, qn) = raw
    pts, idx = [], []
    for n in range(n_lo, n_hi + 1):
        p, q = pc + n * pe, qc + n * qe
        fl = _floor_raw(p, q, r, d)
        # fractional part below l
        if _sgn(p - fl * r - pl, q - ql, d) < 0:
            pts.append(QuadReal.raw(fl * r + n * pn, n * qn, r, d))
            idx.append(n)
    labels = "".join(gap_letter(b - a, eta) for a, b in zip(pts, pts[1:]))
    origin = idx.index(0) if 0 in idx else None
    return CapSet(tuple(pts), tuple(idx), labels, origin)


def tilde_T(conv: ConversionResult, x: Number) -> QuadReal:
    """The induced exchange on ``[0, l)`` stepping from a point's star to its right neighbour's."""
    x = exact(x)
    eps, l = conv.eps, conv.l
    if x.sign() < 0 or x >= l:
        raise OutOfDomain("x outside [0, l)")
    if x < l - eps:
        return x + eps
    if x < 1 - eps:
        return x + 2 * eps - 1
    return x + eps - 1


def star(conv: ConversionResult, n: int) -> QuadReal:
    """``{c + n eps}``."""
    v = conv.c + n * conv.eps
    return v - math.floor(v)


# -- counting identities -------------------------------------------------------------


def _module_coords(x: QuadReal, eps: QuadReal) -> tuple[Fraction, Fraction]:
    # x = m + n eps over Q, eps irrational
    n = x.b / eps.b
    return x.a - n * eps.a, n


def unit_matrix(lam: Number, eps: Number) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
    """Matrix of ``x -> lam x`` on ``Z + eps Z`` in the basis ``(1, eps)``."""
    lam, eps = exact(lam), exact(eps)
    if eps.is_rational():
        raise NotAUnit("eps must be irrational")
    if not lam.is_rational() and lam.d != eps.d:
        raise NotAUnit("lam and eps live in different fields")
    return _module_coords(lam, eps), _module_coords(lam * eps, eps)


def is_compatible_unit(lam: Number, eps: Number) -> bool:
    """``lam (Z + eps Z) == Z + eps Z``."""
    rows = unit_matrix(lam, eps)
    if any(x.denominator != 1 for row in rows for x in row):
        return False
    (a, b), (c, d) = rows
    return abs(a * d - b * c) == 1


def unit_scaling_check(eps: Number, lam: Number, omega: Interval, window: Interval) -> bool:
    """``lam' Sigma_{eps,-eps'}(Omega) == Sigma_{eps,-eps'}(lam Omega)`` inside ``window``."""
    eps, lam = exact(eps), exact(lam)
    if abs(lam.norm()) != 1 or not is_compatible_unit(lam, eps):
        raise NotAUnit(f"{lam} is not a unit preserving Z + eps Z")
    eta = -eps.conjugate()
    lam_c = lam.conjugate()
    lhs = [lam_c * y for y in points_in(eps, eta, omega, window.scale(1 / lam_c))]
    rhs = points_in(eps, eta, omega.scale(lam), window)
    return sorted(lhs) == rhs


def renorm_params(eps_hat: Number, eta_hat: Number, form: str = "corrected") -> tuple[QuadReal, QuadReal, QuadReal, QuadReal]:
    """``(window scale, point scale, eps, eta)`` of the renormalization identity.

    ``corrected`` is ``Sigma_{e,n}((1+2e) O) = (1-2n) Sigma_{e/(1+2e), n/(1-2n)}(O)``,
    obtained from the unimodular change ``b -> b - 2a``.  ``printed`` swaps the
    signs in the two denominators; it is kept for comparison and does not
    hold in general.
    """
    e, n = exact(eps_hat), exact(eta_hat)
    f, g = 1 + 2 * e, 1 - 2 * n
    if not f or not g:
        raise SingularRenorm("1 + 2 eps or 1 - 2 eta vanishes")
    if form == "corrected":
        return f, g, e / f, n / g
    if form == "printed":
        de, dn = 1 - 2 * e, 1 + 2 * n
        if not de or not dn:
            raise SingularRenorm("1 - 2 eps or 1 + 2 eta vanishes")
        return f, g, e / de, n / dn
    raise ValueError(f"unknown form {form!r}")


def renorm_check(
    eps_hat: Number,
    eta_hat: Number,
    omega_hat: Interval,
    window: Interval,
    form: str = "corrected",
    rhs_omega: Interval | None = None,
) -> bool:
    """Compare both sides of the renormalization identity inside ``window``.

    ``rhs_omega`` replaces the window on the right side only, which lets a
    caller inject a deliberate mismatch.
    """
    if window.is_empty():
        return True
    f, g, e1, n1 = renorm_params(eps_hat, eta_hat, form)
    lhs = points_in(eps_hat, eta_hat, omega_hat.scale(f), window)
    rhs = sorted(g * y for y in points_in(e1, n1, rhs_omega or omega_hat, window.scale(1 / g)))
    return lhs == rhs


def q_count(eps_t: Number, eta_t: Number, J: Interval, z: Number) -> int:
    """``Q(J, z) = #(J & Sigma_{eps,eta}((z-1, z]))``."""
    z = exact(z)
    return count_in(eps_t, eta_t, half_open(z - 1, z), J)


def q_bound(eps_t: Number, eta_t: Number) -> QuadReal:
    """``R = 2 (1 + 1/|eps + eta|)``."""
    s = exact(eps_t) + eta_t
    return 2 * (1 + 1 / abs(s))


@dataclass(frozen=True)
class PnReport:
    max_diff: int
    bound: QuadReal
    per_n: tuple[int, ...]
    chain_ok: bool
    eps_tilde: QuadReal
    eta_tilde: QuadReal

    def to_json(self) -> dict:
        return {
            "max_diff": self.max_diff,
            "R": str(self.bound),
            "R_float": float(self.bound),
            "per_n": list(self.per_n),
            "chain_ok": self.chain_ok,
            "eps_tilde": str(self.eps_tilde),
            "eta_tilde": str(self.eta_tilde),
        }


def check_pn_hypotheses(eps: QuadReal, lam: QuadReal) -> None:
    if eps.is_rational() or not 0 < eps < 1 or eps.conjugate().sign() >= 0:
        raise HypothesisFailed("eps must be a quadratic irrational in (0,1) with negative conjugate")
    if not 0 < lam < 1 or lam.conjugate() <= 1:
        raise HypothesisFailed("lam must lie in (0,1) with conjugate above 1")
    if abs(lam.norm()) != 1 or not is_compatible_unit(lam, eps):
        raise HypothesisFailed("lam must be a unit preserving Z + eps Z")


def pn_count(eps: QuadReal, omega: Interval, n: int, x: Number, lam_c: QuadReal) -> int:
    """``P_n(x) = #((x, x + (1+2 eta) Lambda^n] & Sigma_{eps,eta}(Omega))`` with ``eta = -eps'``."""
    eta = -eps.conjugate()
    x = exact(x)
    return count_in(eps, eta, omega, half_open(x, x + (1 + 2 * eta) * lam_c**n))


def pn_via_q(eps: QuadReal, omega: Interval, n: int, x: Number, lam: QuadReal) -> int:
    """The same count rewritten as ``Q(J, z)`` through duality, unit scaling and renormalization."""
    eta = -eps.conjugate()
    lam_c = lam.conjugate()
    eps_t, eta_t = eta / (1 + 2 * eta), eps / (1 - 2 * eps)
    J = omega.scale(lam_c**n / (1 - 2 * eps))
    z = lam**n * exact(x) / (1 + 2 * eta) + 1
    return q_count(eps_t, eta_t, J, z)


def pn_experiment(
    eps: Number,
    lam: Number,
    omega: Interval,
    n_max: int = 6,
    samples: int = 8,
    seed: int = 0,
    check_chain: bool = True,
) -> PnReport:
    """Largest ``|P_n(x) - P_n(y)|`` over sampled pairs, with the bound ``R``."""
    eps, lam = exact(eps), exact(lam)
    check_pn_hypotheses(eps, lam)
    eta = -eps.conjugate()
    lam_c = lam.conjugate()
    eps_t, eta_t = eta / (1 + 2 * eta), eps / (1 - 2 * eps)
    bound = q_bound(eps_t, eta_t)
    rng = random.Random(seed)
    per_n = []
    chain_ok = True
    for n in range(n_max + 1):
        worst = 0
        for _ in range(samples):
            x = exact(Fraction(rng.randint(-10**4, 10**4), 97))
            y = exact(Fraction(rng.randint(-10**4, 10**4), 89))
            px = pn_count(eps, omega, n, x, lam_c)
            py = pn_count(eps, omega, n, y, lam_c)
            if check_chain:
                chain_ok = chain_ok and px == pn_via_q(eps, omega, n, x, lam)
            worst = max(worst, abs(px - py))
        per_n.append(worst)
    return PnReport(max(per_n), bound, tuple(per_n), chain_ok, eps_t, eta_t)


# -- self-similar geometric representation ---------------------------------------


@dataclass(frozen=True)
class SelfSimilarReport:
    power: int
    seed: str
    factor: QuadReal
    lengths: tuple[QuadReal, ...]
    gaps_checked: int
    inclusion_ok: bool
    counts_ok: bool

    @property
    def ok(self) -> bool:
        return self.inclusion_ok and self.counts_ok

    def to_json(self) -> dict:
        return {
            "power": self.power,
            "seed": self.seed,
            "Lambda": str(self.factor),
            "lengths": [str(x) for x in self.lengths],
            "gaps_checked": self.gaps_checked,
            "inclusion_ok": self.inclusion_ok,
            "counts_ok": self.counts_ok,
        }


def geometric_points(w: PointedWord, lengths: Sequence[QuadReal]) -> tuple[list[QuadReal], int]:
    """Points ``t_n`` with ``t_0 = 0`` and gaps ``l(u_n)``; returns the points and the index of 0."""
    ell = dict(zip(w.alphabet, lengths))
    right = [exact(0)]
    for a in w.right:
        right.append(right[-1] + ell[a])
    left = []
    cur = exact(0)
    for a in w.left:
        cur = cur - ell[a]
        left.append(cur)
    return left[::-1] + right, len(left)


def selfsimilar_check(m: Morphism, gaps: int = 500, max_power: int = 9) -> SelfSimilarReport:
    """Check ``Lambda Sigma within Sigma`` and the gap counts on ``gaps`` gaps around 0."""
    ok, _ = is_primitive(m)
    if not ok:
        raise NotPrimitive(f"{m} is not primitive")
    half = gaps // 2
    pd = perron_data(incidence_matrix(m))
    for p, w in find_fixed_points(m, max_power, min_len=1):
        break
    else:
        raise NoFixedPointFound(f"no fixed point of a power <= {max_power}")
    mp = power(m, p)
    seed = f"{w.left[0]}|{w.right[0]}"
    factor = pd.value**p
    # the image of n letters has at most n * (longest image) letters
    need = max(len(img) for img in mp.images) * (half + 2)
    w = fixed_point_window(mp, w.left[0], w.right[0], need)
    pts, zero = geometric_points(w, pd.right)
    point_set = set(pts)
    inclusion_ok = True
    counts_ok = True
    for k in range(-half, gaps - half):
        i = zero + k
        a, b = pts[i], pts[i + 1]
        la, lb = factor * a, factor * b
        if la not in point_set:
            inclusion_ok = False
        inside = bisect.bisect_right(pts, lb) - bisect.bisect_right(pts, la)
        if inside != len(mp.image(w.letter(k))):
            counts_ok = False
    return SelfSimilarReport(p, seed, factor, pd.right, gaps, inclusion_ok, counts_ok)


# -- output ---------------------------------------------------------------------


def capset_csv(cs: CapSet) -> str:
    """Columns ``n, t_n, t_n_float, gap``; ``gap`` codes ``t_{n+1} - t_n`` (empty on the last row)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "t_n", "t_n_float", "gap"])
    base = cs.origin or 0
    for k, t in enumerate(cs.points):
        label = cs.labels[k] if k < len(cs.labels) else ""
        writer.writerow([k - base, str(t), f"{float(t):.12g}", label])
    return buf.getvalue()


def capset_svg(points: Sequence[QuadReal], labels: str, factor: QuadReal | None = None, width: int = 900) -> str:
    """Two rows: the points with their gap letters, and below them the points scaled by ``factor``."""
    xs = [float(p) for p in points]
    rows = [xs]
    if factor is not None:
        rows.append([float(factor) * x for x in xs])
    lo = min(min(r) for r in rows)
    hi = max(max(r) for r in rows)
    span = (hi - lo) or 1.0
    pad = 20

    def sx(v: float) -> float:
        return pad + (v - lo) / span * (width - 2 * pad)

    height = 60 + 60 * (len(rows) - 1)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">']
    for r, row in enumerate(rows):
        y = 30 + 60 * r
        out.append(f'<line x1="{pad}" y1="{y}" x2="{width - pad}" y2="{y}" stroke="black"/>')
        for v in row:
            out.append(f'<circle cx="{sx(v):.2f}" cy="{y}" r="2.5"/>')
        if r == 0:
            for k, letter in enumerate(labels[: len(row) - 1]):
                mid = (sx(row[k]) + sx(row[k + 1])) / 2
                out.append(f'<text x="{mid:.2f}" y="{y - 8}" font-size="10" text-anchor="middle">{letter}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"

"""Two- and three-interval exchange transformations and their codings.

Both maps are instances of one *reversal exchange*: the domain of length
``l_0 + ... + l_{r-1}`` is cut into consecutive intervals which are put
back in reverse order.  The interval ``i`` moves by
``sum(l_j, j > i) - sum(l_j, j < i)``; the inverse is the reversal exchange
with the lengths reversed.

Exact parameters run on integer coordinates over a common denominator,
so long orbits never build up :class:`~ietmorph.qfield.QuadReal` objects.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

from .errors import AlphabetMismatch, ExactnessRequired, OutOfDomain
from .qfield import Approx, QuadReal, RealParam, _sgn, exact, is_exact, to_raw
from .words import BINARY, TERNARY, FactorSet, PointedWord, factors


class Closure(enum.Enum):
    LEFT = "left"  # domain [0, S), intervals [a, b)
    RIGHT = "right"  # domain (0, S], intervals (a, b]


@dataclass(frozen=True)
class Iet3Params:
    alpha: RealParam
    beta: RealParam
    gamma: RealParam
    closure: Closure = Closure.LEFT

    def __post_init__(self) -> None:
        for name in ("alpha", "beta", "gamma"):
            if float(getattr(self, name)) <= 0:
                raise OutOfDomain(f"{name} must be positive")

    @property
    def lengths(self) -> tuple[RealParam, RealParam, RealParam]:
        return self.alpha, self.beta, self.gamma

    @property
    def exact(self) -> bool:
        return all(is_exact(x) for x in self.lengths)

    @property
    def total(self) -> RealParam:
        if self.exact:
            return exact(self.alpha) + self.beta + self.gamma
        return Approx(sum(float(x) for x in self.lengths))

    def scaled(self, factor: RealParam) -> Iet3Params:
        return Iet3Params(*(exact(x) * factor for x in self.lengths), closure=self.closure)


@dataclass(frozen=True)
class Iet2Params:
    """Rotation by ``slope`` on the unit circle, coded as a lower or upper mechanical word."""

    slope: RealParam
    intercept: RealParam = 0
    kind: str = "lower"

    def __post_init__(self) -> None:
        if not 0 < float(self.slope) < 1:
            raise OutOfDomain("slope must lie in (0, 1)")
        if not 0 <= float(self.intercept) < 1:
            raise OutOfDomain("intercept must lie in [0, 1)")
        if self.kind not in ("lower", "upper"):
            raise ValueError("kind is 'lower' or 'upper'")


@dataclass(frozen=True)
class IetClass:
    kind: str  # "Periodic", "Degenerate" or "NonDegenerate"
    K: int | None = None
    L: int | None = None

    def to_json(self) -> dict:
        return {"class": self.kind, "K": self.K, "L": self.L}


@dataclass(frozen=True)
class OrbitWindow:
    """Coding window ``u_{n_lo} ... u_{n_hi}`` together with the orbit points."""

    word: PointedWord
    n_lo: int
    _points: tuple = field(repr=False)
    _denominator: int = field(default=1, repr=False)
    _d: int = field(default=1, repr=False)
    approximate: bool = False
    tie_warning: bool = False

    @property
    def n_hi(self) -> int:
        return self.n_lo + len(self.word) - 1

    def point(self, n: int) -> RealParam:
        raw = self._points[n - self.n_lo]
        if self.approximate:
            return raw
        return QuadReal.raw(raw[0], raw[1], self._denominator, self._d)

    @property
    def points(self) -> list[RealParam]:
        return [self.point(n) for n in range(self.n_lo, self.n_hi + 1)]


# -- reversal exchange engine -------------------------------------------------


class _ExactExchange:
    """Reversal exchange on integer coordinates ``(p, q)`` meaning ``(p + q*sqrt(d)) / r``."""

    def __init__(self, lengths: Sequence[RealParam], closure: Closure, extra: Sequence[RealParam] = ()) -> None:
        self.d, self.r, raw = to_raw([*lengths, *extra])
        ls = raw[: len(lengths)]
        self.extra = raw[len(lengths) :]
        self.closure = closure
        self.bounds = [(0, 0)]
        for p, q in ls:
            bp, bq = self.bounds[-1]
            self.bounds.append((bp + p, bq + q))
        tp, tq = self.bounds[-1]
        self.shifts = []
        for i in range(len(ls)):
            before = self.bounds[i]
            after = (tp - self.bounds[i + 1][0], tq - self.bounds[i + 1][1])
            self.shifts.append((after[0] - before[0], after[1] - before[1]))

    def _cmp(self, x: tuple[int, int], b: tuple[int, int]) -> int:
        return _sgn(x[0] - b[0], x[1] - b[1], self.d)

    def index(self, x: tuple[int, int]) -> int:
        b = self.bounds
        if self.closure is Closure.LEFT:
            if self._cmp(x, b[0]) < 0 or self._cmp(x, b[-1]) >= 0:
                raise OutOfDomain("point outside [0, S)")
            for i in range(len(b) - 2):
                if self._cmp(x, b[i + 1]) < 0:
                    return i
            return len(b) - 2
        if self._cmp(x, b[0]) <= 0 or self._cmp(x, b[-1]) > 0:
            raise OutOfDomain("point outside (0, S]")
        for i in range(len(b) - 2):
            if self._cmp(x, b[i + 1]) <= 0:
                return i
        return len(b) - 2

    def step(self, x: tuple[int, int]) -> tuple[int, tuple[int, int]]:
        i = self.index(x)
        s = self.shifts[i]
        return i, (x[0] + s[0], x[1] + s[1])

    def value(self, x: tuple[int, int]) -> QuadReal:
        return QuadReal.raw(x[0], x[1], self.r, self.d)


class _FloatExchange:
    """Float version; points within ``tol`` of a cut go to the lower interval."""

    def __init__(self, lengths: Sequence[RealParam], closure: Closure, tol: float) -> None:
        self.closure = closure
        self.tol = tol
        self.bounds = [0.0]
        for x in lengths:
            self.bounds.append(self.bounds[-1] + float(x))
        total = self.bounds[-1]
        self.shifts = [(total - self.bounds[i + 1]) - self.bounds[i] for i in range(len(lengths))]
        self.tie = False

    def index(self, x: float) -> int:
        b = self.bounds
        if x < b[0] - self.tol or x > b[-1] + self.tol:
            raise OutOfDomain("point outside the domain")
        for i in range(len(b) - 2):
            if abs(x - b[i + 1]) <= self.tol:
                self.tie = True
                return i
            if x < b[i + 1]:
                return i
        return len(b) - 2

    def step(self, x: float) -> tuple[int, float]:
        i = self.index(x)
        return i, x + self.shifts[i]


def _tol(values: Sequence[RealParam]) -> float:
    return max((v.tol for v in values if isinstance(v, Approx)), default=1e-12)


def _code(
    lengths: Sequence[RealParam], closure: Closure, x0: RealParam, n_lo: int, n_hi: int, letters: str
) -> OrbitWindow:
    if n_lo > 0 or n_hi < 0:
        raise ValueError("window must contain index 0")
    rev = list(reversed(lengths))
    if all(is_exact(v) for v in (*lengths, x0)):
        fwd = _ExactExchange(lengths, closure, [x0])
        bwd = _ExactExchange(rev, closure, [x0])
        start = fwd.extra[0]
        right_pts, right = [], []
        x = start
        for _ in range(n_hi + 1):
            right_pts.append(x)
            i, x = fwd.step(x)
            right.append(letters[i])
        left_pts, left = [], []
        x = start
        n_back = len(lengths) - 1
        for _ in range(-n_lo):
            j, x = bwd.step(x)
            # the preimage lies in the interval mirrored from j
            left.append(letters[n_back - j])
            left_pts.append(x)
        pts = tuple(reversed(left_pts)) + tuple(right_pts)
        word = PointedWord("".join(left), "".join(right), letters)
        return OrbitWindow(word, n_lo, pts, fwd.r, fwd.d)
    tol = _tol([*lengths, x0])
    fwd_f = _FloatExchange(lengths, closure, tol)
    bwd_f = _FloatExchange(rev, closure, tol)
    right_f, right = [], []
    x = float(x0)
    for _ in range(n_hi + 1):
        right_f.append(x)
        i, x = fwd_f.step(x)
        right.append(letters[i])
    left_f, left = [], []
    x = float(x0)
    for _ in range(-n_lo):
        j, x = bwd_f.step(x)
        left.append(letters[len(lengths) - 1 - j])
        left_f.append(x)
    pts_f = tuple(reversed(left_f)) + tuple(right_f)
    word = PointedWord("".join(left), "".join(right), letters)
    return OrbitWindow(word, n_lo, pts_f, approximate=True, tie_warning=fwd_f.tie or bwd_f.tie)


def _apply(lengths: Sequence[RealParam], closure: Closure, x: RealParam) -> RealParam:
    if all(is_exact(v) for v in (*lengths, x)):
        eng = _ExactExchange(lengths, closure, [x])
        return eng.value(eng.step(eng.extra[0])[1])
    eng_f = _FloatExchange(lengths, closure, _tol([*lengths, x]))
    return eng_f.step(float(x))[1]


# -- public operations --------------------------------------------------------


def t3_apply(p: Iet3Params, x: RealParam) -> RealParam:
    return _apply(p.lengths, p.closure, x)


def t3_inverse(p: Iet3Params, x: RealParam) -> RealParam:
    return _apply(tuple(reversed(p.lengths)), p.closure, x)


def t3_code(p: Iet3Params, x0: RealParam, n_lo: int, n_hi: int) -> OrbitWindow:
    """Coding ``u_n`` = letter of the interval containing ``T^n(x0)``."""
    return _code(p.lengths, p.closure, x0, n_lo, n_hi, TERNARY)


def _two_interval(p: Iet2Params) -> tuple[tuple[RealParam, RealParam], Closure, RealParam]:
    one = exact(1) if is_exact(p.slope) else 1.0
    if is_exact(p.slope):
        lengths = (one - p.slope, exact(p.slope))
    else:
        lengths = (Approx(1 - float(p.slope), _tol([p.slope])), p.slope)
    if p.kind == "lower":
        return lengths, Closure.LEFT, p.intercept
    start = p.intercept if float(p.intercept) != 0 else one
    return lengths, Closure.RIGHT, start


def t2_code(p: Iet2Params, n_lo: int, n_hi: int) -> PointedWord:
    """Lower or upper mechanical word with the given slope and intercept."""
    lengths, closure, start = _two_interval(p)
    return _code(lengths, closure, start, n_lo, n_hi, BINARY).word


def s_coding(p: Iet3Params, x0: RealParam, n_lo: int, n_hi: int) -> OrbitWindow:
    """Coding of the exchange of two intervals of lengths ``alpha+beta`` and ``beta+gamma``."""
    a, b, c = p.lengths
    if p.exact:
        lengths = (exact(a) + b, exact(b) + c)
    else:
        lengths = (Approx(float(a) + float(b)), Approx(float(b) + float(c)))
    return _code(lengths, p.closure, x0, n_lo, n_hi, BINARY)


def sigma_project(w: PointedWord) -> PointedWord:
    """Image under ``A -> 0, B -> 01, C -> 1``."""
    from .morphism import SIGMA, apply

    if w.alphabet != TERNARY:
        raise AlphabetMismatch("sigma acts on words over A, B, C")
    return apply(SIGMA, w)


def classify(p: Iet3Params) -> IetClass:
    """Periodic, degenerate or non-degenerate, decided exactly.

    With ``u = alpha+beta`` and ``v = beta+gamma``: periodic when
    ``K u + L v = 0`` for nonzero integers, degenerate when
    ``alpha+beta+gamma = K u + L v`` for integers.
    """
    if not p.exact:
        raise ExactnessRequired("classification needs exact parameters")
    a, b, c = (exact(x) for x in p.lengths)
    u, v, s = a + b, b + c, a + b + c
    u1, u2, v1, v2, s1, s2 = u.a, u.b, v.a, v.b, s.a, s.b
    det = u1 * v2 - u2 * v1
    if det == 0:
        ratio = u / v
        if not ratio.is_rational():
            raise AssertionError("dependent vectors with irrational ratio")
        r = ratio.a
        return IetClass("Periodic", r.denominator, -r.numerator)
    K = (s1 * v2 - s2 * v1) / det
    L = (u1 * s2 - u2 * s1) / det
    if K.denominator == 1 and L.denominator == 1:
        return IetClass("Degenerate", int(K), int(L))
    return IetClass("NonDegenerate")


def is_minimal(p: Iet3Params) -> bool:
    return classify(p).kind != "Periodic"


def images_tile(p: Iet3Params) -> bool:
    """Check that ``T(I_C), T(I_B), T(I_A)`` are consecutive and cover the domain exactly."""
    a, b, c = (exact(x) for x in p.lengths)
    ia, ib, ic = (exact(0), a), (a, a + b), (a + b, a + b + c)
    shift = {"A": b + c, "B": c - a, "C": -a - b}
    images = [(ic[0] + shift["C"], ic[1] + shift["C"]), (ib[0] + shift["B"], ib[1] + shift["B"]), (ia[0] + shift["A"], ia[1] + shift["A"])]
    ok = images[0][0] == 0 and images[-1][1] == a + b + c
    return ok and all(images[i][1] == images[i + 1][0] for i in range(2))


# -- languages ----------------------------------------------------------------


def _exchange_language(lengths: Sequence[RealParam], closure: Closure, letters: str, n: int) -> FactorSet:
    """Length-``n`` codings over all starting points of the domain.

    The cylinders of length ``n`` are cut out by the preimages
    ``T^-k(b)`` of the inner interval ends ``b`` for ``0 <= k < n``; the
    coding is constant on each cell, so coding one end point per cell gives
    every factor.  For a minimal map this is the language of every orbit.
    """
    if n == 0:
        return FactorSet(0, frozenset({""}))
    fwd = _ExactExchange(lengths, closure)
    bwd = _ExactExchange(list(reversed(lengths)), closure)
    cuts = set()
    for b in fwd.bounds[1:-1]:
        x = b
        for _ in range(n):
            cuts.add(x)
            x = bwd.step(x)[1]
    # left-closed cells are coded from their left ends, right-closed ones from their right ends
    edge = fwd.bounds[0] if closure is Closure.LEFT else fwd.bounds[-1]
    out = set()
    for x in cuts | {edge}:
        word = []
        for _ in range(n):
            i, x = fwd.step(x)
            word.append(letters[i])
        out.add("".join(word))
    return FactorSet(n, frozenset(out))


def language(p: Iet3Params | Iet2Params, n: int) -> FactorSet:
    """Exact set of length-``n`` factors of the codings of the exchange.

    For aperiodic parameters every orbit has this language.
    """
    if isinstance(p, Iet2Params):
        if not is_exact(p.slope):
            raise ExactnessRequired("the exact language needs an exact slope")
        lengths, closure, _ = _two_interval(p)
        return _exchange_language(lengths, closure, BINARY, n)
    if not p.exact:
        raise ExactnessRequired("the exact language needs exact parameters")
    return _exchange_language(p.lengths, p.closure, TERNARY, n)


def window_language(p: Iet3Params, n: int, x0: RealParam | None = None, window_len: int | None = None) -> FactorSet:
    """Factors of a long symmetric coding window, ``3000 * n`` letters by default.

    ``x0`` defaults to the closed end of the domain.
    """
    if x0 is None:
        x0 = 0 if p.closure is Closure.LEFT else p.total
    length = window_len or 3000 * max(n, 1)
    half = length // 2
    w = t3_code(p, x0, -half, length - half - 1).word
    return factors(w, n)


def parse_closure(text: str) -> Closure:
    try:
        return Closure(text.lower())
    except ValueError as exc:
        raise ValueError(f"closure is 'left' or 'right', got {text!r}") from exc


def params_from_values(values: Sequence[RealParam], closure: Closure = Closure.LEFT) -> Iet3Params:
    if len(values) != 3:
        raise ValueError("three lengths required")
    return Iet3Params(*values, closure=closure)


__all__ = [
    "Closure",
    "Iet2Params",
    "Iet3Params",
    "IetClass",
    "OrbitWindow",
    "classify",
    "images_tile",
    "is_minimal",
    "language",
    "s_coding",
    "sigma_project",
    "t2_code",
    "t3_apply",
    "t3_code",
    "t3_inverse",
    "window_language",
]

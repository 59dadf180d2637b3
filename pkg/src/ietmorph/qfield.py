"""Exact arithmetic in real quadratic fields Q(sqrt d).

A :class:`QuadReal` stores ``(p + q*sqrt(d)) / r`` with integers ``p, q``,
``r > 0`` and ``gcd(p, q, r) == 1``.  Rational values carry ``q == 0`` and the
sentinel ``d == 1``; they combine freely with any field.  Mixing two different
irrational fields raises :class:`IncompatibleField`.
"""

from __future__ import annotations

import ast
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from .errors import DivByZero, IncompatibleField, ParseError

RATIONAL_D = 1

Rational = Fraction
Number = Union["QuadReal", Fraction, int]


def squarefree_part(n: int) -> tuple[int, int]:
    """Split ``n > 0`` as ``k*k*s`` with ``s`` squarefree; returns ``(k, s)``."""
    if n <= 0:
        raise ValueError("squarefree_part needs a positive integer")
    k, s = 1, 1
    m = n
    f = 2
    while f * f <= m:
        e = 0
        while m % f == 0:
            m //= f
            e += 1
        k *= f ** (e // 2)
        if e % 2:
            s *= f
        f += 1
    return k, s * m


def _sgn(p: int, q: int, d: int) -> int:
    # sign of p + q*sqrt(d) for squarefree d >= 2 (or q == 0)
    if q == 0:
        return (p > 0) - (p < 0)
    if p >= 0 and q > 0:
        return 1
    if p <= 0 and q < 0:
        return -1
    t = p * p - q * q * d
    if p > 0:
        return 1 if t > 0 else -1
    return -1 if t > 0 else 1


def _floor_raw(p: int, q: int, r: int, d: int) -> int:
    # floor((p + q*sqrt(d)) / r) with r > 0, using floor((p+s)/r) == floor((p+floor(s))/r)
    if q == 0:
        return p // r
    s = math.isqrt(q * q * d)
    if q < 0:
        s = -s - 1
    return (p + s) // r


class QuadReal:
    """An exact real number ``a + b*sqrt(d)`` with rational ``a`` and ``b``."""

    __slots__ = ("_p", "_q", "_r", "_d")

    def __init__(self, a: Fraction | int = 0, b: Fraction | int = 0, d: int = RATIONAL_D) -> None:
        a = Fraction(a)
        b = Fraction(b)
        if b != 0:
            if d < 2:
                raise ValueError("irrational part needs d >= 2")
            k, s = squarefree_part(d)
            if s == 1:
                a, b, d = a + b * k, Fraction(0), RATIONAL_D
            else:
                b, d = b * k, s
        r = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
        self._set(a.numerator * (r // a.denominator), b.numerator * (r // b.denominator), r, d)

    def _set(self, p: int, q: int, r: int, d: int) -> None:
        g = math.gcd(math.gcd(p, q), r)
        if g > 1:
            p //= g
            q //= g
            r //= g
        if q == 0:
            d = RATIONAL_D
        self._p, self._q, self._r, self._d = p, q, r, d

    @classmethod
    def raw(cls, p: int, q: int, r: int, d: int) -> QuadReal:
        """Build from integer coordinates ``(p + q*sqrt(d)) / r``; ``d`` must be squarefree."""
        if r == 0:
            raise DivByZero("zero denominator")
        if r < 0:
            p, q, r = -p, -q, -r
        obj = cls.__new__(cls)
        obj._set(p, q, r, d)
        return obj

    @classmethod
    def sqrt(cls, n: int | Fraction) -> QuadReal:
        n = Fraction(n)
        if n < 0:
            raise ValueError("square root of a negative number")
        if n == 0:
            return cls(0)
        # sqrt(u/v) = sqrt(u*v)/v
        k, s = squarefree_part(n.numerator * n.denominator)
        if s == 1:
            return cls(Fraction(k, n.denominator))
        return cls(0, Fraction(k, n.denominator), s)

    # -- coordinates ---------------------------------------------------------

    @property
    def a(self) -> Fraction:
        return Fraction(self._p, self._r)

    @property
    def b(self) -> Fraction:
        return Fraction(self._q, self._r)

    @property
    def d(self) -> int:
        return self._d

    @property
    def coords(self) -> tuple[int, int, int, int]:
        return self._p, self._q, self._r, self._d

    def is_rational(self) -> bool:
        return self._q == 0

    # -- arithmetic ----------------------------------------------------------

    def _field(self, other: QuadReal) -> int:
        if self._q == 0:
            return other._d
        if other._q == 0 or other._d == self._d:
            return self._d
        raise IncompatibleField(f"sqrt({self._d}) and sqrt({other._d}) do not share a field")

    def __add__(self, other: object) -> QuadReal:
        o = _coerce(other)
        if o is None:
            return NotImplemented
        d = self._field(o)
        return QuadReal.raw(self._p * o._r + o._p * self._r, self._q * o._r + o._q * self._r, self._r * o._r, d)

    __radd__ = __add__

    def __neg__(self) -> QuadReal:
        return QuadReal.raw(-self._p, -self._q, self._r, self._d)

    def __pos__(self) -> QuadReal:
        return self

    def __sub__(self, other: object) -> QuadReal:
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> QuadReal:
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other: object) -> QuadReal:
        o = _coerce(other)
        if o is None:
            return NotImplemented
        d = self._field(o)
        p = self._p * o._p + self._q * o._q * d
        q = self._p * o._q + self._q * o._p
        return QuadReal.raw(p, q, self._r * o._r, d)

    __rmul__ = __mul__

    def inverse(self) -> QuadReal:
        n = self._p * self._p - self._q * self._q * self._d
        if n == 0:
            raise DivByZero("division by zero")
        # r / (p + q sqrt d) = r (p - q sqrt d) / n
        return QuadReal.raw(self._r * self._p, -self._r * self._q, n, self._d)

    def __truediv__(self, other: object) -> QuadReal:
        o = _coerce(other)
        if o is None:
            return NotImplemented
        self._field(o)
        return self * o.inverse()

    def __rtruediv__(self, other: object) -> QuadReal:
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int) -> QuadReal:
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        result = QuadReal(1)
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> QuadReal:
        return QuadReal.raw(self._p, -self._q, self._r, self._d)

    def norm(self) -> Fraction:
        return Fraction(self._p * self._p - self._q * self._q * self._d, self._r * self._r)

    def trace(self) -> Fraction:
        return Fraction(2 * self._p, self._r)

    # -- order ---------------------------------------------------------------

    def sign(self) -> int:
        return _sgn(self._p, self._q, self._d)

    def _cmp(self, other: object) -> int | None:
        o = _coerce(other)
        if o is None:
            return None
        return (self - o).sign()

    def __eq__(self, other: object) -> bool:
        o = _coerce(other)
        if o is None:
            return NotImplemented
        if self._q == 0 and o._q == 0:
            return self._p == o._p and self._r == o._r
        return (self._p, self._q, self._r, self._d) == (o._p, o._q, o._r, o._d)

    def __hash__(self) -> int:
        if self._q == 0:
            return hash(Fraction(self._p, self._r))
        return hash((self._p, self._q, self._r, self._d))

    def __lt__(self, other: object) -> bool:
        c = self._cmp(other)
        return NotImplemented if c is None else c < 0

    def __le__(self, other: object) -> bool:
        c = self._cmp(other)
        return NotImplemented if c is None else c <= 0

    def __gt__(self, other: object) -> bool:
        c = self._cmp(other)
        return NotImplemented if c is None else c > 0

    def __ge__(self, other: object) -> bool:
        c = self._cmp(other)
        return NotImplemented if c is None else c >= 0

    def __bool__(self) -> bool:
        return self._p != 0 or self._q != 0

    def __abs__(self) -> QuadReal:
        return -self if self.sign() < 0 else self

    def __floor__(self) -> int:
        return _floor_raw(self._p, self._q, self._r, self._d)

    def __ceil__(self) -> int:
        return -_floor_raw(-self._p, -self._q, self._r, self._d)

    def __float__(self) -> float:
        if self._q == 0:
            return float(Fraction(self._p, self._r))
        return float(Fraction(self._p, self._r)) + float(Fraction(self._q, self._r)) * math.sqrt(self._d)

    # -- text ----------------------------------------------------------------

    def __str__(self) -> str:
        a, b = self.a, self.b
        if b == 0:
            return str(a)
        rad = f"sqrt({self._d})"
        if b == 1:
            irr = rad
        elif b == -1:
            irr = "-" + rad
        else:
            irr = f"{b}*{rad}"
        if a == 0:
            return irr
        return f"{a}+{irr}" if b > 0 else f"{a}{irr}"

    def __repr__(self) -> str:
        return f"QuadReal({self})"

    def to_json(self) -> dict:
        return {"a": str(self.a), "b": str(self.b), "d": self._d}

    @classmethod
    def from_json(cls, obj: dict) -> QuadReal:
        return cls(Fraction(obj["a"]), Fraction(obj["b"]), int(obj["d"]))


def _coerce(x: object) -> QuadReal | None:
    if isinstance(x, QuadReal):
        return x
    if isinstance(x, int):
        return QuadReal.raw(x, 0, 1, RATIONAL_D)
    if isinstance(x, Fraction):
        return QuadReal.raw(x.numerator, 0, x.denominator, RATIONAL_D)
    return None


def exact(x: Number) -> QuadReal:
    """Convert an int, Fraction or QuadReal to a QuadReal."""
    q = _coerce(x)
    if q is None:
        raise TypeError(f"not an exact number: {x!r}")
    return q


def common_field(values: Iterable[Number]) -> int:
    """Return the shared ``d`` of the values (``1`` if all rational)."""
    d = RATIONAL_D
    for v in values:
        q = exact(v)
        if q.d != RATIONAL_D:
            if d != RATIONAL_D and d != q.d:
                raise IncompatibleField(f"sqrt({d}) and sqrt({q.d}) do not share a field")
            d = q.d
    return d


def to_raw(values: Iterable[Number]) -> tuple[int, int, list[tuple[int, int]]]:
    """Put values over a common denominator: returns ``(d, r, [(p_i, q_i)])``."""
    qs = [exact(v) for v in values]
    d = common_field(qs)
    r = 1
    for q in qs:
        r = r * q._r // math.gcd(r, q._r)
    return d, r, [(q._p * (r // q._r), q._q * (r // q._r)) for q in qs]


# -- operation-level API -----------------------------------------------------


def arith(x: Number, y: Number, op: str) -> QuadReal:
    x, y = exact(x), exact(y)
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown operation {op!r}")


def sign(x: Number) -> int:
    return exact(x).sign()


def floor_frac(x: Number) -> tuple[int, QuadReal]:
    """Return ``(floor(x), x - floor(x))`` exactly."""
    x = exact(x)
    k = math.floor(x)
    return k, x - k


def conjugate(x: Number) -> QuadReal:
    return exact(x).conjugate()


def rational_decompose(x: Number) -> tuple[Fraction, Fraction]:
    x = exact(x)
    return x.a, x.b


# -- parsing -----------------------------------------------------------------

_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
}


def parse(text: str) -> QuadReal:
    """Parse an exact number such as ``3/2``, ``1/2+3/4*sqrt(2)``, ``(1+sqrt5)/2``.

    ``sqrtN`` is shorthand for ``sqrt(N)``; ``^`` and ``**`` take integer
    exponents.  Decimal literals are read exactly (``0.1 == 1/10``).
    """
    src = text.strip().replace("^", "**").replace("√", "sqrt")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse number {text!r}") from exc

    def ev(node: ast.AST) -> QuadReal:
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
            seg = ast.get_source_segment(src, node)
            return exact(Fraction(seg if seg is not None else str(node.value)))
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.BinOp) and isinstance(node.op, ast.Pow):
            e = ev(node.right)
            if not e.is_rational() or e.a.denominator != 1:
                raise ParseError("exponent must be an integer")
            return ev(node.left) ** int(e.a)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id == "sqrt" and len(node.args) == 1:
            arg = ev(node.args[0])
            if not arg.is_rational():
                raise ParseError("sqrt argument must be rational")
            return QuadReal.sqrt(arg.a)
        if isinstance(node, ast.Name) and node.id.startswith("sqrt") and node.id[4:].isdigit():
            return QuadReal.sqrt(int(node.id[4:]))
        raise ParseError(f"unsupported syntax in {text!r}")

    try:
        return ev(tree)
    except (ZeroDivisionError, IncompatibleField, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"cannot evaluate {text!r}: {exc}") from exc


def parse_list(text: str) -> list[QuadReal]:
    """Parse a comma separated list of exact numbers."""
    return [parse(part) for part in _split_top_level(text, ",")]


def _split_top_level(text: str, sep: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p for p in (s.strip() for s in parts) if p]


@dataclass(frozen=True)
class Approx:
    """A floating point parameter, allowed for word generation only."""

    value: float
    tol: float = 1e-12

    def __float__(self) -> float:
        return self.value


RealParam = Union[QuadReal, Fraction, int, Approx]


def is_exact(x: object) -> bool:
    return isinstance(x, (QuadReal, Fraction, int)) and not isinstance(x, bool)

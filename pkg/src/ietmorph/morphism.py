"""Morphisms of the free monoid, their incidence matrices and fixed points."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import (
    AlphabetMismatch,
    DegenerateTransport,
    FieldMismatch,
    NotAFixedPointSeed,
    ParseError,
)
from .qfield import QuadReal, exact
from .words import BINARY, TERNARY, PointedWord, guess_alphabet

Mat = tuple[tuple[int, ...], ...]

# -- integer matrices ---------------------------------------------------------


def as_mat(rows: Sequence[Sequence[int]]) -> Mat:
    return tuple(tuple(int(x) for x in row) for row in rows)


def identity(n: int) -> Mat:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(m: Mat) -> Mat:
    return tuple(zip(*m))


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple:
    bt = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def mat_pow(m: Mat, k: int) -> Mat:
    result = identity(len(m))
    base = m
    while k:
        if k & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        k >>= 1
    return result


def vec_mat(v: Sequence, m: Sequence[Sequence]) -> tuple:
    """Row vector times matrix."""
    return tuple(sum((v[i] * m[i][j] for i in range(len(v))), 0) for j in range(len(m[0])))


def mat_vec(m: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(sum((row[j] * v[j] for j in range(len(v))), 0) for row in m)


def det(m: Sequence[Sequence]) -> int:
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    return sum(
        (-1) ** j * m[0][j] * det([row[:j] + row[j + 1 :] for row in m[1:]]) for j in range(n)
    )


def is_positive(m: Mat) -> bool:
    return all(x > 0 for row in m for x in row)


def parse_matrix(text: str) -> Mat:
    """Parse ``"0,2,1;2,3,5;3,0,5"``."""
    try:
        rows = [[int(x) for x in r.split(",")] for r in text.strip().split(";") if r.strip()]
    except ValueError as exc:
        raise ParseError(f"bad matrix {text!r}") from exc
    if not rows or any(len(r) != len(rows) for r in rows):
        raise ParseError(f"matrix must be square: {text!r}")
    return as_mat(rows)


def format_matrix(m: Mat) -> str:
    return ";".join(",".join(str(x) for x in row) for row in m)


# -- morphisms ----------------------------------------------------------------


@dataclass(frozen=True)
class Morphism:
    """A non-erasing morphism given by the images of the letters."""

    images: tuple[str, ...]
    alphabet: str = TERNARY
    target: str = ""  # image alphabet; empty means the source alphabet

    def __post_init__(self) -> None:
        if not self.target:
            object.__setattr__(self, "target", self.alphabet)
        if len(self.images) != len(self.alphabet):
            raise AlphabetMismatch("one image per letter required")
        for img in self.images:
            if not img:
                raise ValueError("erasing morphisms are not supported")
            if set(img) - set(self.target):
                raise AlphabetMismatch(f"image {img!r} leaves alphabet {self.target!r}")

    @property
    def endo(self) -> bool:
        return self.target == self.alphabet

    @classmethod
    def from_dict(cls, mapping: dict[str, str], alphabet: str | None = None) -> Morphism:
        alphabet = alphabet or guess_alphabet("".join(mapping) + "".join(mapping.values()))
        missing = set(alphabet) - set(mapping)
        if missing:
            raise AlphabetMismatch(f"no image for {sorted(missing)}")
        return cls(tuple(mapping[a] for a in alphabet), alphabet)

    @classmethod
    def parse(cls, text: str) -> Morphism:
        """Parse ``"A->AC;B->BC;C->C"``."""
        mapping = {}
        for part in text.replace(",", ";").split(";"):
            part = part.strip()
            if not part:
                continue
            if "->" not in part:
                raise ParseError(f"bad morphism rule {part!r}")
            src, img = (s.strip() for s in part.split("->", 1))
            if len(src) != 1:
                raise ParseError(f"rule source must be one letter: {part!r}")
            mapping[src] = img
        letters = "".join(mapping) + "".join(mapping.values())
        if set(letters) <= set(BINARY):
            alphabet = BINARY
        elif set(letters) <= set(TERNARY):
            alphabet = TERNARY
        else:
            alphabet = "".join(sorted(mapping))
        return cls.from_dict(mapping, alphabet)

    def image(self, a: str) -> str:
        return self.images[self.alphabet.index(a)]

    def __call__(self, word: str) -> str:
        return word.translate(self._table)

    @property
    def _table(self) -> dict[int, str]:
        return {ord(a): img for a, img in zip(self.alphabet, self.images)}

    def __str__(self) -> str:
        return ";".join(f"{a}->{img}" for a, img in zip(self.alphabet, self.images))

    def to_json(self) -> dict:
        return {a: img for a, img in zip(self.alphabet, self.images)}


def identity_morphism(alphabet: str = TERNARY) -> Morphism:
    return Morphism(tuple(alphabet), alphabet)


SIGMA = Morphism(("0", "01", "1"), TERNARY, BINARY)


def incidence_matrix(m: Morphism) -> Mat:
    """Row ``i`` counts the letters of the image of the ``i``-th letter."""
    return tuple(tuple(img.count(b) for b in m.target) for img in m.images)


def apply(m: Morphism, w: PointedWord) -> PointedWord:
    if w.alphabet != m.alphabet and set(w.text) - set(m.alphabet):
        raise AlphabetMismatch(f"word over {w.alphabet!r}, morphism over {m.alphabet!r}")
    table = m._table
    left = w.left[::-1].translate(table)
    return PointedWord(left[::-1], w.right.translate(table), m.target)


def compose(phi: Morphism, psi: Morphism) -> Morphism:
    """The morphism ``a -> phi(psi(a))``."""
    if psi.target != phi.alphabet:
        raise AlphabetMismatch("composition needs matching alphabets")
    return Morphism(tuple(phi(img) for img in psi.images), psi.alphabet, phi.target)


def power(m: Morphism, p: int) -> Morphism:
    if not m.endo:
        raise AlphabetMismatch("powers need an endomorphism")
    result = identity_morphism(m.alphabet)
    for _ in range(p):
        result = compose(m, result)
    return result


def is_primitive(m: Morphism | Mat, max_power: int | None = None) -> tuple[bool, int | None]:
    """Return ``(True, k)`` for the least ``k`` with ``M^k > 0``, else ``(False, None)``.

    The search stops at ``2 * n**2``, well above the ``(n-1)**2 + 1`` bound.
    """
    mat = incidence_matrix(m) if isinstance(m, Morphism) else m
    n = len(mat)
    limit = max_power or 2 * n * n
    cur = mat
    for k in range(1, limit + 1):
        if is_positive(cur):
            return True, k
        cur = mat_mul(cur, mat)
    return False, None


def density_transport(mat: Mat, rho: Sequence) -> tuple:
    """Normalized left action ``rho M / (rho M 1)``."""
    image = vec_mat(rho, mat)
    total = sum(image, 0)
    if total == 0:
        raise DegenerateTransport("rho M vanishes")
    return tuple(x / total if isinstance(x, QuadReal) else Fraction(x) / total for x in image)


def fixed_point_window(m: Morphism, seed_left: str, seed_right: str, min_len: int) -> PointedWord:
    """Window of ``lim m^n(seed_left) | m^n(seed_right)`` with both sides ``>= min_len``."""
    if not m.endo:
        raise AlphabetMismatch("fixed points need an endomorphism")
    if not m.image(seed_right).startswith(seed_right) or not m.image(seed_left).endswith(seed_left):
        raise NotAFixedPointSeed(f"{seed_left}|{seed_right} is not a fixed point seed of {m}")
    left, right = seed_left, seed_right
    while len(left) < min_len or len(right) < min_len:
        new_left, new_right = m(left), m(right)
        if (len(left) < min_len and len(new_left) == len(left)) or (
            len(right) < min_len and len(new_right) == len(right)
        ):
            raise NotAFixedPointSeed(f"{seed_left}|{seed_right} does not grow under {m}")
        left, right = new_left, new_right
    return PointedWord.from_sides(left, right, m.alphabet)


def find_fixed_points(m: Morphism, max_power: int = 9, min_len: int = 100) -> Iterator[tuple[int, PointedWord]]:
    """Yield ``(p, window)`` for every growing seed pair of ``m**p``, ``p <= max_power``."""
    for p in range(1, max_power + 1):
        mp = power(m, p)
        for a in mp.alphabet:
            for b in mp.alphabet:
                try:
                    yield p, fixed_point_window(mp, a, b, min_len)
                except NotAFixedPointSeed:
                    continue


# -- spectra in quadratic fields ----------------------------------------------


def char_poly(mat: Mat) -> list[int]:
    """Coefficients ``[1, c1, ..., cn]`` of ``det(xI - M)``."""
    n = len(mat)
    tr = sum(mat[i][i] for i in range(n))
    if n == 1:
        return [1, -tr]
    if n == 2:
        return [1, -tr, det(mat)]
    if n == 3:
        c2 = sum(det([[mat[i][i], mat[i][j]], [mat[j][i], mat[j][j]]]) for i in range(3) for j in range(i + 1, 3))
        return [1, -tr, c2, -det(mat)]
    raise ValueError("only matrices up to 3x3 are supported")


def _poly_eval(coeffs: Sequence[int], x: int) -> int:
    acc = 0
    for c in coeffs:
        acc = acc * x + c
    return acc


def _deflate(coeffs: Sequence[int], root: int) -> list[int]:
    out = [coeffs[0]]
    for c in coeffs[1:-1]:
        out.append(c + out[-1] * root)
    return out


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small = [k for k in range(1, math.isqrt(n) + 1) if n % k == 0]
    return sorted(set(small + [n // k for k in small]))


def quadratic_roots(b: int, c: int) -> list[QuadReal]:
    """Real roots of ``x^2 + b x + c``; raises FieldMismatch when complex."""
    disc = b * b - 4 * c
    if disc < 0:
        raise FieldMismatch("complex eigenvalues")
    s = QuadReal.sqrt(disc)
    return [(-b - s) / 2, (-b + s) / 2]


def eigenvalues(mat: Mat) -> list[QuadReal]:
    """All eigenvalues, provided they live in one real quadratic field."""
    coeffs = char_poly(mat)
    roots: list[QuadReal] = []
    while len(coeffs) > 3:
        cand = [0] if coeffs[-1] == 0 else [s * k for k in _divisors(coeffs[-1]) for s in (1, -1)]
        for r in cand:
            if _poly_eval(coeffs, r) == 0:
                roots.append(exact(r))
                coeffs = _deflate(coeffs, r)
                break
        else:
            raise FieldMismatch("characteristic polynomial has no rational root")
    if len(coeffs) == 3:
        roots.extend(quadratic_roots(coeffs[1], coeffs[2]))
    elif len(coeffs) == 2:
        roots.append(exact(-coeffs[1]))
    fields = {r.d for r in roots if not r.is_rational()}
    if len(fields) > 1:
        raise FieldMismatch("eigenvalues in different quadratic fields")
    return sorted(roots)


def null_vector(rows: Sequence[Sequence[QuadReal]]) -> list[QuadReal]:
    """A nonzero vector of the kernel of a singular square matrix (exact elimination)."""
    a = [[exact(x) for x in row] for row in rows]
    n = len(a)
    pivots: list[int] = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, n) if a[i][col]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = a[r][col].inverse()
        a[r] = [x * inv for x in a[r]]
        for i in range(n):
            if i != r and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    if not free:
        raise FieldMismatch("matrix is not singular")
    f = free[0]
    vec = [exact(0)] * n
    vec[f] = exact(1)
    for i, col in enumerate(pivots):
        vec[col] = -a[i][f]
    return vec


@dataclass(frozen=True)
class PerronData:
    value: QuadReal
    left: tuple[QuadReal, ...]
    right: tuple[QuadReal, ...]


def _normalize_positive(vec: Sequence[QuadReal]) -> tuple[QuadReal, ...]:
    first = next(x for x in vec if x)
    out = tuple(x / first for x in vec)
    if any(x.sign() <= 0 for x in out):
        raise FieldMismatch("Perron eigenvector is not positive")
    return out


def perron_data(mat: Mat) -> PerronData:
    """Dominant eigenvalue with left and right eigenvectors scaled to first entry 1."""
    lam = max(eigenvalues(mat))
    n = len(mat)
    shifted = [[mat[i][j] - (lam if i == j else 0) for j in range(n)] for i in range(n)]
    right = _normalize_positive(null_vector(shifted))
    left = _normalize_positive(null_vector([list(col) for col in zip(*shifted)]))
    return PerronData(lam, left, right)

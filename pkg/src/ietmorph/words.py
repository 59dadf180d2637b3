"""Finite windows of pointed biinfinite words and their combinatorics.

A :class:`PointedWord` holds the letters ``u_{-k} ... u_{-1} | u_0 ... u_m``.
Complexity, balance and densities computed here describe the window only;
for an infinite word they are lower bounds or approximations.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import AlphabetMismatch, EmptyWord, IncompleteLanguage, WindowTooShort

TERNARY = "ABC"
BINARY = "01"


def guess_alphabet(text: str) -> str:
    letters = set(text) - {"|"}
    if letters <= set(BINARY):
        return BINARY
    if letters <= set(TERNARY):
        return TERNARY
    return "".join(sorted(letters))


@dataclass(frozen=True)
class PointedWord:
    """Window of a pointed biinfinite word.

    ``left`` is stored nearest-to-center first, so ``left[0]`` is ``u_{-1}``.
    ``right[0]`` is ``u_0``.
    """

    left: str
    right: str
    alphabet: str = TERNARY

    def __post_init__(self) -> None:
        bad = (set(self.left) | set(self.right)) - set(self.alphabet)
        if bad:
            raise AlphabetMismatch(f"letters {sorted(bad)} not in alphabet {self.alphabet!r}")

    @classmethod
    def from_text(cls, text: str, alphabet: str | None = None) -> PointedWord:
        """Parse ``LEFT|RIGHT``; without a bar the whole text is the right part."""
        if "|" in text:
            lhs, rhs = text.split("|", 1)
        else:
            lhs, rhs = "", text
        return cls(lhs[::-1], rhs, alphabet or guess_alphabet(lhs + rhs))

    @classmethod
    def from_sides(cls, left_natural: str, right: str, alphabet: str | None = None) -> PointedWord:
        """Build from the left part in reading order and the right part."""
        return cls(left_natural[::-1], right, alphabet or guess_alphabet(left_natural + right))

    @property
    def text(self) -> str:
        return self.left[::-1] + self.right

    @property
    def offset(self) -> int:
        return len(self.left)

    def __len__(self) -> int:
        return len(self.left) + len(self.right)

    def __str__(self) -> str:
        return f"{self.left[::-1]}|{self.right}"

    def letter(self, i: int) -> str:
        if i >= 0:
            return self.right[i]
        return self.left[-i - 1]

    def defined(self, i: int) -> bool:
        return -len(self.left) <= i < len(self.right)


@dataclass(frozen=True)
class FactorSet:
    length: int
    factors: frozenset[str]

    def __len__(self) -> int:
        return len(self.factors)

    def __contains__(self, w: object) -> bool:
        return w in self.factors

    def to_text(self) -> str:
        return "\n".join(sorted(self.factors))


def _text_of(w: PointedWord | str) -> str:
    return w.text if isinstance(w, PointedWord) else w


def factors(w: PointedWord | str, n: int) -> FactorSet:
    s = _text_of(w)
    if n < 0 or n > len(s):
        raise WindowTooShort(f"factor length {n} exceeds window length {len(s)}")
    if n == 0:
        return FactorSet(0, frozenset({""}))
    return FactorSet(n, frozenset(s[i : i + n] for i in range(len(s) - n + 1)))


def factor_sets(w: PointedWord | str, n_max: int) -> list[FactorSet]:
    """Factor sets for lengths ``1..n_max`` from a single pass at ``n_max``."""
    s = _text_of(w)
    if n_max > len(s):
        raise WindowTooShort(f"factor length {n_max} exceeds window length {len(s)}")
    if n_max <= 0:
        return []
    top = factors(s, n_max).factors
    out = []
    tail_start = len(s) - n_max + 1
    for n in range(1, n_max):
        fs = {f[:n] for f in top}
        fs.update(s[i : i + n] for i in range(tail_start, len(s) - n + 1))
        out.append(FactorSet(n, frozenset(fs)))
    out.append(FactorSet(n_max, top))
    return out


def complexity_profile(w: PointedWord | str, n_max: int) -> list[int]:
    """``[C(1), ..., C(n_max)]`` of the window (a lower bound for the infinite word)."""
    return [len(fs) for fs in factor_sets(w, n_max)]


def balance_defect(w: PointedWord, n_max: int) -> int:
    """Largest difference in the number of 0s between equal-length factors."""
    if set(w.alphabet) != set(BINARY):
        raise AlphabetMismatch("balance is defined for binary words")
    s = w.text
    n_max = min(n_max, len(s))
    zeros = np.frombuffer(s.encode("ascii"), dtype=np.uint8) == ord("0")
    prefix = np.concatenate(([0], np.cumsum(zeros, dtype=np.int64)))
    worst = 0
    for n in range(1, n_max + 1):
        counts = prefix[n:] - prefix[:-n]
        worst = max(worst, int(counts.max() - counts.min()))
    return worst


def empirical_densities(w: PointedWord) -> tuple[Fraction, ...]:
    s = w.text
    if not s:
        raise EmptyWord("density of an empty window")
    return tuple(Fraction(s.count(a), len(s)) for a in w.alphabet)


def metric_distance(u: PointedWord, v: PointedWord) -> Fraction:
    """``1/(1+j)`` for the first ``j`` where ``u_j != v_j`` or ``u_-j != v_-j``.

    Positions outside either window are ignored, so windows agreeing on
    their common support are at distance 0.
    """
    if u.alphabet != v.alphabet:
        raise AlphabetMismatch("words over different alphabets")
    reach = max(len(u.left), len(u.right), len(v.left), len(v.right))
    for j in range(reach + 1):
        for i in (j, -j):
            if u.defined(i) and v.defined(i) and u.letter(i) != v.letter(i):
                return Fraction(1, 1 + j)
    return Fraction(0)


def is_factor_subset(
    w: PointedWord | str, lang: Sequence[FactorSet], n_max: int
) -> tuple[bool, str | None]:
    """Check every factor of ``w`` of length ``<= n_max`` lies in ``lang``.

    Returns ``(True, None)`` or ``(False, shortest offending factor)``.
    """
    by_len = {fs.length: fs for fs in lang}
    missing = [n for n in range(1, n_max + 1) if n not in by_len]
    if missing:
        raise IncompleteLanguage(f"language lacks lengths {missing}")
    s = _text_of(w)
    n_top = min(n_max, len(s))
    for fs in factor_sets(s, n_top):
        bad = fs.factors - by_len[fs.length].factors
        if bad:
            return False, min(bad)
    return True, None


def prefix_closure(top: FactorSet) -> list[FactorSet]:
    """Factor sets of lengths ``1..n`` of a language given by its length-``n`` layer.

    Valid for languages of biinfinite words, where every factor extends to
    the right.
    """
    return [FactorSet(k, frozenset(f[:k] for f in top.factors)) for k in range(1, top.length)] + [top]


def complexity_csv(profile: Iterable[int]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "complexity"])
    for n, c in enumerate(profile, start=1):
        writer.writerow([n, c])
    return buf.getvalue()

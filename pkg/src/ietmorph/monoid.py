"""Integer 3x3 matrix predicates for incidence matrices of 3iet preserving morphisms.

The invariant plane ``P`` is spanned by ``x1 = (1,1,0)`` and ``x2 = (0,1,1)``;
a vector ``v`` lies in ``P`` iff ``v[1] == v[0] + v[2]``, and then its
coordinates in that basis are ``(v[0], v[2])``.  ``S`` is the lattice
``Z x1 + Z x2``.
"""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass

from .errors import BoundTooLarge, NotInClass
from .morphism import Mat, char_poly, det, mat_mul, mat_vec, transpose, vec_mat
from .qfield import QuadReal, exact

E: Mat = ((0, 1, 1), (-1, 0, 1), (-1, -1, 0))
KERNEL = (1, -1, 1)
X1 = (1, 1, 0)
X2 = (0, 1, 1)
ONES = (1, 1, 1)
ENUM_CAP = 6

if transpose(E) != tuple(tuple(-x for x in row) for row in E) or det(E) != 0:
    raise RuntimeError("E must be antisymmetric with zero determinant")


def _neg(m: Mat) -> Mat:
    return tuple(tuple(-x for x in row) for row in m)


def symplectic_like_check(m: Mat) -> int | None:
    """``s`` with ``M E M^T == s E`` for ``s`` in ``{+1, -1}``, else ``None``."""
    prod = mat_mul(mat_mul(m, E), transpose(m))
    if prod == E:
        return 1
    if prod == _neg(E):
        return -1
    return None


def det3(m: Mat) -> int:
    return det(m)


def left_eigen_check(m: Mat) -> bool:
    """``(1,-1,1) M == +-det(M) (1,-1,1)``."""
    row = vec_mat(KERNEL, m)
    d = det(m)
    return row in (tuple(d * k for k in KERNEL), tuple(-d * k for k in KERNEL))


def row_sum_check(m: Mat) -> bool:
    """Rows one and three together outweigh row two by ``+-det(M)``."""
    sums = [sum(row) for row in m]
    diff = sums[0] + sums[2] - sums[1]
    return abs(diff) == abs(det(m))


def in_plane(v: tuple[int, ...]) -> bool:
    return v[1] == v[0] + v[2]


def coordinate_matrix(m: Mat) -> Mat:
    """Action of ``M`` on ``P``: columns are the coordinates of ``M x1`` and ``M x2``."""
    return (
        (m[0][0] + m[0][1], m[0][1] + m[0][2]),
        (m[2][0] + m[2][1], m[2][1] + m[2][2]),
    )


def small_delta(m: Mat) -> int | None:
    dd = det(coordinate_matrix(m))
    return dd if dd in (1, -1) else None


@dataclass(frozen=True)
class LatticeChecks:
    subspace_ok: bool
    basis_ok: bool
    translate_ok: bool
    delta: int | None

    def __iter__(self):
        return iter((self.subspace_ok, self.basis_ok, self.translate_ok))


def lattice_checks(m: Mat) -> LatticeChecks:
    subspace_ok = in_plane(mat_vec(m, X1)) and in_plane(mat_vec(m, X2))
    delta = small_delta(m)
    basis_ok = subspace_ok and delta is not None
    dd = det(m)
    translate_ok = False
    if basis_ok:
        s = delta * dd
        translate_ok = in_plane(tuple(x - s for x in mat_vec(m, ONES)))
    return LatticeChecks(subspace_ok, basis_ok, translate_ok, delta)


def e3n_membership(m: Mat) -> bool:
    return all(x >= 0 for row in m for x in row) and abs(det(m)) == 1 and symplectic_like_check(m) is not None


@dataclass(frozen=True)
class MatrixReport:
    det: int
    symplectic_sign: int | None
    delta: int | None
    left_eigen_ok: bool
    row_sum_ok: bool
    lattice_ok: bool
    e3n_member: bool

    def to_json(self) -> dict:
        return asdict(self)


def matrix_report(m: Mat) -> MatrixReport:
    lc = lattice_checks(m)
    return MatrixReport(
        det=det(m),
        symplectic_sign=symplectic_like_check(m),
        delta=lc.delta,
        left_eigen_ok=left_eigen_check(m),
        row_sum_ok=row_sum_check(m),
        lattice_ok=all(lc),
        e3n_member=e3n_membership(m),
    )


def passes_theorem_a(m: Mat) -> bool:
    """The symplectic-like identity plus the three lattice facts that drive class transport."""
    return symplectic_like_check(m) is not None and all(lattice_checks(m))


def structured_matrix(top: tuple[int, int, int], bottom: tuple[int, int, int], s: int) -> Mat:
    """Middle row fixed by ``(1,-1,1) M = s (1,-1,1)``."""
    mid = (top[0] + bottom[0] - s, top[1] + bottom[1] + s, top[2] + bottom[2] - s)
    return (top, mid, bottom)


def enumerate_e3n(bound: int, naive: bool = False, cap: int = ENUM_CAP) -> list[Mat]:
    """All members of E(3,N) with entries ``<= bound``, sorted lexicographically.

    The default walk fixes rows one and three and the sign ``s = +-1`` of
    the left eigenvector ``(1,-1,1)``, which pins row two; ``naive`` loops
    over all nine entries instead and serves as a cross-check.
    """
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    if bound > cap:
        raise BoundTooLarge(f"bound {bound} exceeds the cap {cap}")
    rng = range(bound + 1)
    found = set()
    if naive:
        for entries in itertools.product(rng, repeat=9):
            m = (entries[0:3], entries[3:6], entries[6:9])
            if e3n_membership(m):
                found.add(m)
    else:
        for top in itertools.product(rng, repeat=3):
            for bottom in itertools.product(rng, repeat=3):
                for s in (1, -1):
                    m = structured_matrix(top, bottom, s)
                    if all(0 <= x <= bound for x in m[1]) and e3n_membership(m):
                        found.add(m)
    return sorted(found)


# -- spectra -------------------------------------------------------------------


@dataclass(frozen=True)
class SpectrumReport:
    split_eigenvalue: int
    trace: int
    constant: int
    discriminant: int
    eigenvalues: tuple[QuadReal, ...]
    perron: QuadReal | None

    def quadratic_factor(self) -> str:
        return f"x^2{-self.trace:+d}x{self.constant:+d}"

    def to_json(self) -> dict:
        return {
            "split_eigenvalue": self.split_eigenvalue,
            "quadratic_factor": self.quadratic_factor(),
            "discriminant": self.discriminant,
            "eigenvalues": [str(x) for x in self.eigenvalues],
            "perron": None if self.perron is None else str(self.perron),
        }


def spectrum_report(m: Mat) -> SpectrumReport:
    """Split the eigenvalue of ``(1,-1,1)`` off the characteristic polynomial.

    What remains is ``x^2 - t x + c`` with ``c = +-1`` for the class.
    """
    if not left_eigen_check(m):
        raise NotInClass("(1,-1,1) is not a left eigenvector")
    s = vec_mat(KERNEL, m)[0]
    coeffs = char_poly(m)
    # synthetic division by (x - s)
    q0 = coeffs[0]
    q1 = coeffs[1] + s * q0
    q2 = coeffs[2] + s * q1
    rem = coeffs[3] + s * q2
    if rem != 0 or q2 not in (1, -1):
        raise NotInClass("characteristic polynomial does not split as expected")
    t, c = -q1, q2
    disc = t * t - 4 * c
    if disc >= 0:
        root = QuadReal.sqrt(disc)
        pair = ((exact(t) - root) / 2, (exact(t) + root) / 2)
        perron = pair[1] if disc > 0 else None
    else:
        pair = ()
        perron = None
    eig = tuple(sorted((exact(s), *pair)))
    return SpectrumReport(s, t, c, disc, eig, perron)


# -- lattice witnesses -----------------------------------------------------------


@dataclass(frozen=True)
class TransportWitness:
    """Integers with ``M(1,1,1) = sign (1,1,1) + K x1 + L x2`` or, for singular ``M``,
    ``M(1,1,1) = M(K, K+L, L)``."""

    case: int  # 1 for det 0, 2 for det +-1
    K: int
    L: int
    sign: int

    def to_json(self) -> dict:
        return asdict(self)


def degeneracy_transport_check(m: Mat) -> TransportWitness:
    """Exhibit the lattice witness and verify it exactly."""
    lc = lattice_checks(m)
    if not all(lc):
        raise NotInClass("matrix fails the lattice conditions")
    dd = det(m)
    v = mat_vec(m, ONES)
    if dd == 0:
        (c11, c12), (c21, c22) = coordinate_matrix(m)
        delta = lc.delta
        # inverse of an integer matrix with determinant delta = +-1
        K = delta * (c22 * v[0] - c12 * v[2])
        L = delta * (-c21 * v[0] + c11 * v[2])
        if mat_vec(m, (K, K + L, L)) != v:
            raise NotInClass("lattice witness failed")
        return TransportWitness(1, K, L, 0)
    if abs(dd) != 1:
        raise NotInClass("determinant is neither 0 nor +-1")
    s = lc.delta * dd
    K, L = v[0] - s, v[2] - s
    if tuple(s + x for x in (K, K + L, L)) != v:
        raise NotInClass("lattice witness failed")
    return TransportWitness(2, K, L, s)

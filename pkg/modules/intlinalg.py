"""
Integer Linear Algebra Module
Provides exact integer matrix algorithms: Hermite and Smith normal forms,
kernel lattices, rank, lattice membership and equality, congruence sublattices.

Matrices are numpy arrays of dtype=object holding Python ints, so entries
never overflow. Hermite normal form is the row-style upper echelon form:
pivots are positive, move strictly right going down, and the entries above
each pivot are reduced into [0, pivot).
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import List, Optional, Sequence, Tuple

import numpy as np
from sympy import Matrix
from sympy.core.intfunc import igcdex
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors

from modules.error_handler import DimensionMismatch

logger = logging.getLogger(__name__)


def int_matrix(rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> np.ndarray:
    """Build an object-dtype integer matrix; cols is needed when there are no rows"""
    rows = [[int(x) for x in row] for row in rows]
    if not rows:
        return np.zeros((0, cols or 0), dtype=object)
    width = len(rows[0])
    if any(len(row) != width for row in rows):
        raise DimensionMismatch("ragged integer matrix")
    matrix = np.empty((len(rows), width), dtype=object)
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            matrix[i, j] = x
    return matrix


def identity(n: int) -> np.ndarray:
    return int_matrix([[1 if i == j else 0 for j in range(n)] for i in range(n)], cols=n)


def exgcd(a: int, b: int) -> np.ndarray:
    """
    2x2 integer matrix E of determinant 1 with E @ [a, b] = [gcd(a, b), 0].
    If both are zero E is the identity.
    """
    a, b = int(a), int(b)
    if a == 0 and b == 0:
        return identity(2)
    x, y, g = igcdex(a, b)
    return int_matrix([[x, y], [-b // g, a // g]])


def hnf(M: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Row Hermite normal form.

    Returns (H, U) with H = U @ M and U unimodular. H is upper echelon: each
    pivot is positive and strictly right of the one above, entries above a
    pivot lie in [0, pivot), zero rows come last. The nonzero rows of H span
    the row lattice of M; this is the transpose of the lower column form of
    M^T. Lattice, kernel and lattice_coordinates read bases in this form.
    """
    H = np.array(M, dtype=object).copy()
    rows, cols = H.shape
    U = identity(rows)

    pivot_row = 0
    for col in range(cols):
        if pivot_row >= rows:
            break
        for i in range(pivot_row + 1, rows):
            if H[i, col] == 0:
                continue
            E = exgcd(H[pivot_row, col], H[i, col])
            H[[pivot_row, i]] = E @ H[[pivot_row, i]]
            U[[pivot_row, i]] = E @ U[[pivot_row, i]]
        if H[pivot_row, col] == 0:
            continue
        if H[pivot_row, col] < 0:
            H[pivot_row] = -H[pivot_row]
            U[pivot_row] = -U[pivot_row]
        pivot = H[pivot_row, col]
        for i in range(pivot_row):
            q = H[i, col] // pivot
            if q:
                H[i] = H[i] - q * H[pivot_row]
                U[i] = U[i] - q * U[pivot_row]
        pivot_row += 1

    return H, U


def is_hnf(H: np.ndarray) -> bool:
    """Shape predicate of the row Hermite normal form"""
    last_pivot = -1
    seen_zero_row = False
    for i in range(H.shape[0]):
        nonzero = [j for j in range(H.shape[1]) if H[i, j] != 0]
        if not nonzero:
            seen_zero_row = True
            continue
        if seen_zero_row:
            return False
        p = nonzero[0]
        if p <= last_pivot or H[i, p] <= 0:
            return False
        if any(not (0 <= H[k, p] < H[i, p]) for k in range(i)):
            return False
        last_pivot = p
    return True


def rank(M: np.ndarray) -> int:
    """Rank over Q: number of nonzero rows of the Hermite form"""
    H, _ = hnf(M)
    return sum(1 for i in range(H.shape[0]) if any(H[i, j] != 0 for j in range(H.shape[1])))


def snf_invariants(M: np.ndarray) -> List[int]:
    """Nonzero Smith invariants d_1 | d_2 | ... of M"""
    rows, cols = M.shape
    if rows == 0 or cols == 0:
        return []
    dm = DomainMatrix([[ZZ(int(x)) for x in row] for row in M.tolist()], (rows, cols), ZZ)
    return [abs(int(d)) for d in invariant_factors(dm) if d != 0]


def determinant(M: np.ndarray) -> int:
    if M.shape[0] == 0:
        return 1
    return int(Matrix(M.tolist()).det())


@dataclass(frozen=True)
class Lattice:
    """Sublattice of Z^ambient_dim given by linearly independent basis rows"""

    ambient_dim: int
    basis: Tuple[Tuple[int, ...], ...] = ()

    def __post_init__(self):
        basis = tuple(tuple(int(x) for x in v) for v in self.basis)
        if any(len(v) != self.ambient_dim for v in basis):
            raise DimensionMismatch(f"lattice vectors must have length {self.ambient_dim}")
        object.__setattr__(self, "basis", basis)

    @classmethod
    def from_generators(cls, ambient_dim: int, vectors: Sequence[Sequence[int]]) -> "Lattice":
        """Lattice spanned by arbitrary integer vectors, with a canonical HNF basis"""
        if not vectors:
            return cls(ambient_dim, ())
        H, _ = hnf(int_matrix(vectors, cols=ambient_dim))
        basis = [tuple(H[i]) for i in range(H.shape[0]) if any(x != 0 for x in H[i])]
        return cls(ambient_dim, tuple(basis))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def matrix(self) -> np.ndarray:
        return int_matrix(self.basis, cols=self.ambient_dim)

    def canonical(self) -> "Lattice":
        return Lattice.from_generators(self.ambient_dim, self.basis)

    def to_json(self) -> List[List[int]]:
        return [list(v) for v in self.basis]


def kernel(M: np.ndarray) -> Lattice:
    """Saturated basis of {v in Z^cols : M v = 0}, in canonical HNF"""
    M = np.array(M, dtype=object)
    cols = M.shape[1]
    if M.shape[0] == 0:
        return Lattice(cols, tuple(tuple(row) for row in identity(cols)))

    H, U = hnf(M.T)
    zero_rows = [i for i in range(H.shape[0]) if all(x == 0 for x in H[i])]
    return Lattice.from_generators(cols, [tuple(U[i]) for i in zero_rows])


def lattice_coordinates(L: Lattice, v: Sequence[int]) -> Optional[List[int]]:
    """Integer coefficients c with sum c_i basis_i = v, or None if v is not in L"""
    if len(v) != L.ambient_dim:
        raise DimensionMismatch(f"vector of length {len(v)} against lattice in Z^{L.ambient_dim}")
    if L.rank == 0:
        return [] if all(x == 0 for x in v) else None

    H, U = hnf(L.matrix())
    remaining = [int(x) for x in v]
    coeffs = []
    for i in range(H.shape[0]):
        pivot_col = next(j for j in range(H.shape[1]) if H[i, j] != 0)
        q, r = divmod(remaining[pivot_col], H[i, pivot_col])
        if r != 0:
            return None
        coeffs.append(q)
        remaining = [a - q * b for a, b in zip(remaining, H[i])]
    if any(remaining):
        return None
    # c H = v and H = U B, so (c U) B = v
    return [sum(coeffs[k] * U[k, j] for k in range(len(coeffs))) for j in range(U.shape[1])]


def lattice_contains(L: Lattice, v: Sequence[int]) -> bool:
    return lattice_coordinates(L, v) is not None


def lattice_equal(L1: Lattice, L2: Lattice) -> bool:
    """True iff the two lattices coincide"""
    if L1.ambient_dim != L2.ambient_dim:
        raise DimensionMismatch(f"lattices in Z^{L1.ambient_dim} and Z^{L2.ambient_dim}")
    return L1.canonical().basis == L2.canonical().basis


def lattice_index(sub: Lattice, L: Lattice) -> int:
    """Index [L : sub] for a sublattice of the same rank"""
    if sub.ambient_dim != L.ambient_dim:
        raise DimensionMismatch("lattices live in different ambient spaces")
    if sub.rank != L.rank:
        raise ValueError("index is only finite for sublattices of equal rank")
    coordinates = []
    for v in sub.basis:
        c = lattice_coordinates(L, v)
        if c is None:
            raise ValueError("not a sublattice")
        coordinates.append(c)
    return abs(determinant(int_matrix(coordinates, cols=L.rank)))


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def congruence_sublattice(L: Lattice, phases: Sequence[Fraction]) -> Lattice:
    """
    Sublattice {v in L : sum v_i * phases_i = 0 mod 1}.

    With s_j the phase sum of the j-th basis vector and D the common
    denominator, c is admissible iff sum c_j * (D s_j) + e * D = 0 for some
    integer e, i.e. (c, e) lies in the kernel of the row [D s_1 .. D s_k, D].
    """
    if len(phases) != L.ambient_dim:
        raise DimensionMismatch(f"{len(phases)} phases for a lattice in Z^{L.ambient_dim}")
    if L.rank == 0:
        return L

    sums = [sum((Fraction(x) * Fraction(p) for x, p in zip(v, phases)), Fraction(0)) % 1
            for v in L.basis]
    if all(s == 0 for s in sums):
        return L.canonical()

    D = 1
    for s in sums:
        D = _lcm(D, s.denominator)
    row = [int(s * D) for s in sums] + [D]
    solutions = kernel(int_matrix([row]))

    vectors = []
    for sol in solutions.basis:
        c = sol[:-1]
        vectors.append([sum(c[j] * L.basis[j][i] for j in range(L.rank))
                        for i in range(L.ambient_dim)])
    return Lattice.from_generators(L.ambient_dim, vectors)

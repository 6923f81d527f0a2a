"""
Spectral Module
Provides the characteristic polynomial, rational eigenvalues, Jordan structure
with an explicit rational Jordan basis, the multiplicative semisimple x unipotent
decomposition and the split into nilpotent and invertible blocks.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Any, Dict, List, Sequence, Tuple, Union

import sympy
from sympy import ImmutableMatrix, Matrix, eye, zeros

from modules.error_handler import (
    EigenvaluesNotRational, InputError, NotSquare, SingularInput,
    SingularInverse,
)
from modules.exact import UniPoly, format_rational, from_sympy, parse_rational, rational_roots, to_sympy
from modules.performance import performance

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class JordanBlockSpec:
    """Standard Jordan block: eigenvalue on the diagonal, 1 on the superdiagonal"""

    eigenvalue: Fraction
    size: int

    def __post_init__(self):
        if self.size < 1:
            raise ValueError(f"Jordan block size must be positive, got {self.size}")
        object.__setattr__(self, "eigenvalue", Fraction(self.eigenvalue))


@dataclass(frozen=True)
class JordanData:
    """M = P J P^-1 with J assembled from the canonically ordered blocks"""

    blocks: Tuple[JordanBlockSpec, ...]
    P: ImmutableMatrix
    P_inv: ImmutableMatrix
    nu: int

    @property
    def n(self) -> int:
        return sum(b.size for b in self.blocks)

    @property
    def J(self) -> ImmutableMatrix:
        return jordan_matrix(self.blocks)

    @property
    def has_zero_eigenvalue(self) -> bool:
        return any(b.eigenvalue == 0 for b in self.blocks)


# Matrix plumbing -----------------------------------------------------------

def rational_matrix(rows: Sequence[Sequence[Any]]) -> ImmutableMatrix:
    """Square matrix of exact rationals from nested lists of "p/q" strings or numbers"""
    if not isinstance(rows, (list, tuple)) or any(not isinstance(r, (list, tuple)) for r in rows):
        raise InputError("matrix entries must be a list of rows")
    rows = [list(r) for r in rows]
    if not rows:
        raise InputError("empty matrix")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise InputError("ragged matrix rows")
    return ImmutableMatrix([[to_sympy(parse_rational(x)) for x in r] for r in rows])


def parse_matrix_json(data: Any) -> ImmutableMatrix:
    """Accept {"n": int, "entries": [[...], ...]} or a bare list of rows"""
    if isinstance(data, dict):
        if "entries" not in data:
            raise InputError('matrix JSON needs an "entries" field')
        M = rational_matrix(data["entries"])
        if "n" in data and (M.rows != data["n"] or M.cols != data["n"]):
            raise InputError(f'"n" is {data["n"]} but entries are {M.rows}x{M.cols}')
    elif isinstance(data, list):
        M = rational_matrix(data)
    else:
        raise InputError("matrix JSON must be an object or a list of rows")
    if not M.is_square:
        raise NotSquare(f"matrix is {M.rows}x{M.cols}")
    return M


def matrix_to_json(M: Matrix) -> Dict[str, Any]:
    return {
        "n": M.rows,
        "entries": [[format_rational(from_sympy(M[i, j])) for j in range(M.cols)]
                    for i in range(M.rows)],
    }


def matrix_entries(M: Matrix) -> List[Fraction]:
    """Row-major entries as Fractions"""
    return [from_sympy(M[i, j]) for i in range(M.rows) for j in range(M.cols)]


def is_invertible(M: Matrix) -> bool:
    return M.det() != 0


def matrix_power(M: Matrix, k: int) -> ImmutableMatrix:
    """M^k for any integer k; negative k needs M invertible"""
    if k < 0:
        if not is_invertible(M):
            raise SingularInverse("negative power of a singular matrix")
        return ImmutableMatrix(M.inv() ** (-k))
    return ImmutableMatrix(M ** k)


def jordan_matrix(blocks: Sequence[JordanBlockSpec]) -> ImmutableMatrix:
    n = sum(b.size for b in blocks)
    J = zeros(n, n)
    offset = 0
    for b in blocks:
        for i in range(b.size):
            J[offset + i, offset + i] = to_sympy(b.eigenvalue)
            if i + 1 < b.size:
                J[offset + i, offset + i + 1] = 1
        offset += b.size
    return ImmutableMatrix(J)


def unipotent_block(size: int, superdiagonal: Fraction) -> ImmutableMatrix:
    """1 on the diagonal, the given value on the superdiagonal"""
    U = eye(size)
    for i in range(size - 1):
        U[i, i + 1] = to_sympy(Fraction(superdiagonal))
    return ImmutableMatrix(U)


# Characteristic polynomial and Jordan form ---------------------------------

def char_poly(M: Matrix) -> UniPoly:
    """det(tI - M) by the division-free Berkowitz recursion"""
    if not M.is_square:
        raise NotSquare(f"matrix is {M.rows}x{M.cols}")
    t = sympy.Dummy("t")
    return UniPoly.from_sympy(Matrix(M).charpoly(t))


def _rank(vectors: Sequence[Matrix]) -> int:
    if not vectors:
        return 0
    return Matrix.hstack(*vectors).rank()


@performance.measure_time("jordan")
def jordan(M: Matrix) -> JordanData:
    """
    Rational Jordan form with an explicit basis.

    Block sizes come from the rank sequence of (M - lambda I)^k; chains are
    lifted from the top level down, each new top taken from ker B^k outside
    ker B^(k-1) plus the vectors already used at that level.
    """
    if not M.is_square:
        raise NotSquare(f"matrix is {M.rows}x{M.cols}")
    M = Matrix(M)
    n = M.rows

    roots, cofactor = rational_roots(char_poly(M))
    if cofactor.degree > 0:
        raise EigenvaluesNotRational(
            f"characteristic polynomial has the factor {cofactor} without rational roots",
            cofactor=cofactor,
        )

    blocks: List[JordanBlockSpec] = []
    columns: List[Matrix] = []
    for eigenvalue in sorted(roots):
        multiplicity = roots[eigenvalue]
        B = M - to_sympy(eigenvalue) * eye(n)

        powers = [eye(n)]
        ranks = [n]
        while ranks[-1] > n - multiplicity:
            powers.append(powers[-1] * B)
            ranks.append(powers[-1].rank())
        largest = len(ranks) - 1

        at_least = {k: ranks[k - 1] - ranks[k] for k in range(1, largest + 1)}
        at_least[largest + 1] = 0
        kernels = [[]] + [powers[k].nullspace() for k in range(1, largest + 1)]

        chains: List[Tuple[Matrix, int]] = []
        for size in range(largest, 0, -1):
            needed = at_least[size] - at_least[size + 1]
            if needed == 0:
                continue
            used = list(kernels[size - 1])
            used += [powers[s - size] * top for top, s in chains]
            base_rank = _rank(used)
            tops = []
            for v in kernels[size]:
                if len(tops) == needed:
                    break
                if _rank(used + [v]) == base_rank + 1:
                    used.append(v)
                    base_rank += 1
                    tops.append(v)
            if len(tops) != needed:
                raise ArithmeticError(f"could not lift Jordan chains for eigenvalue {eigenvalue}")
            chains.extend((v, size) for v in tops)

        for top, size in chains:
            columns.extend(powers[size - 1 - i] * top for i in range(size))
            blocks.append(JordanBlockSpec(eigenvalue, size))

    P = Matrix.hstack(*columns)
    P_inv = P.inv()
    J = jordan_matrix(blocks)
    if P * J * P_inv != M:
        raise ArithmeticError("Jordan basis does not reconstruct the input")

    nu = max((b.size for b in blocks if b.eigenvalue == 0), default=0)
    logger.info(
        f"Jordan form: {', '.join(f'({format_rational(b.eigenvalue)}, {b.size})' for b in blocks)}; nu={nu}"
    )
    return JordanData(tuple(blocks), ImmutableMatrix(P), ImmutableMatrix(P_inv), nu)


def block_sizes_from_ranks(M: Matrix, eigenvalue: Fraction) -> Dict[int, int]:
    """Number of blocks of each size, read off rank((M - lambda I)^k)"""
    n = M.rows
    B = Matrix(M) - to_sympy(eigenvalue) * eye(n)
    ranks = [n]
    power = eye(n)
    while True:
        power = power * B
        ranks.append(power.rank())
        if ranks[-1] == ranks[-2]:
            break
    at_least = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))] + [0]
    return {k + 1: at_least[k] - at_least[k + 1]
            for k in range(len(at_least) - 1) if at_least[k] - at_least[k + 1]}


# Decompositions ------------------------------------------------------------

def _blocks_of(data: Union[JordanData, Sequence[JordanBlockSpec]]) -> Tuple[JordanBlockSpec, ...]:
    return tuple(data.blocks) if isinstance(data, JordanData) else tuple(data)


def su_decompose(data: Union[JordanData, Sequence[JordanBlockSpec]]) -> Tuple[ImmutableMatrix, ImmutableMatrix]:
    """
    Multiplicative Jordan decomposition in Jordan coordinates: J = M_s M_u,
    M_s diagonal, M_u unipotent with 1/lambda on each block superdiagonal.
    """
    blocks = _blocks_of(data)
    if any(b.eigenvalue == 0 for b in blocks):
        raise SingularInput("semisimple/unipotent split needs nonzero eigenvalues")

    n = sum(b.size for b in blocks)
    M_s = zeros(n, n)
    M_u = zeros(n, n)
    offset = 0
    for b in blocks:
        U = unipotent_block(b.size, 1 / b.eigenvalue)
        for i in range(b.size):
            M_s[offset + i, offset + i] = to_sympy(b.eigenvalue)
            for j in range(b.size):
                M_u[offset + i, offset + j] = U[i, j]
        offset += b.size
    return ImmutableMatrix(M_s), ImmutableMatrix(M_u)


def split_nilpotent(data: Union[JordanData, Sequence[JordanBlockSpec]]) -> Tuple[
        Tuple[JordanBlockSpec, ...], Tuple[JordanBlockSpec, ...], List[int]]:
    """
    Partition blocks into eigenvalue-0 blocks and invertible blocks.
    The permutation lists old coordinates in their new order, nilpotent first.
    """
    blocks = _blocks_of(data)
    nilpotent, invertible = [], []
    nil_coords, inv_coords = [], []
    offset = 0
    for b in blocks:
        coords = list(range(offset, offset + b.size))
        if b.eigenvalue == 0:
            nilpotent.append(b)
            nil_coords.extend(coords)
        else:
            invertible.append(b)
            inv_coords.extend(coords)
        offset += b.size
    return tuple(nilpotent), tuple(invertible), nil_coords + inv_coords


# Jordan block powers -------------------------------------------------------

def jordan_block_power(m: int, lam: Fraction, k: int) -> ImmutableMatrix:
    """k-th power of the m x m block with 1 on the diagonal and lam above it"""
    return ImmutableMatrix(unipotent_block(m, lam) ** k)


def binomial_entries_hold(power: Matrix, lam: Fraction, k: int) -> bool:
    """Entry (i, j) of the k-th power equals C(k, j - i) lam^(j - i)"""
    lam = to_sympy(Fraction(lam))
    m = power.rows
    for i in range(m):
        for j in range(m):
            expected = sympy.binomial(k, j - i) * lam ** (j - i) if j >= i else 0
            if power[i, j] != expected:
                return False
    return True


def falling_factorial_identity(power: Matrix, lam: Fraction) -> bool:
    """r! a_(1, r+1) equals the product of (a_12 - i lam) over i < r, for every r < m"""
    lam = to_sympy(Fraction(lam))
    m = power.rows
    if m < 2:
        return True
    a12 = power[0, 1]
    for r in range(1, m):
        product = sympy.Integer(1)
        for i in range(r):
            product *= a12 - i * lam
        if factorial(r) * power[0, r] != product:
            return False
    return True

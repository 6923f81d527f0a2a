"""
Toric Module
Provides lattice ideals of toric varieties, the realization of a point
configuration as a diagonal matrix whose cyclic closure is that toric
variety, parametric implicitization of monomial maps, and the degree of a
toric variety read off as the normalized volume of its polytope.
"""

import logging
import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial import ConvexHull
from sympy import prime

from modules.error_handler import DimensionMismatch, DimensionTooLarge, InputError
from modules.intlinalg import Lattice, determinant, int_matrix, kernel, lattice_coordinates, rank
from modules.mgroup import SymbolicScalar
from modules.multipoly import GREVLEX, Ideal, OrderTag, eliminate, fresh_variable, make_ring, saturate
from modules.performance import performance

logger = logging.getLogger(__name__)

MAX_VOLUME_DIMENSION = 3


@dataclass(frozen=True)
class ToricData:
    """The toric variety of a point configuration: points are the columns of A"""

    points: Tuple[Tuple[int, ...], ...]
    A: np.ndarray
    kernel: Lattice
    dimension: int
    ideal: Ideal
    degree: Optional[int] = None


def default_variables(n_vars: int) -> Tuple[str, ...]:
    return tuple(f"x_{i}" for i in range(1, n_vars + 1))


def binomial(ring, v: Sequence[int]):
    """x^(v+) - x^(v-) in the given ring"""
    positive = tuple(max(int(x), 0) for x in v)
    negative = tuple(max(-int(x), 0) for x in v)
    one = ring.domain.one
    if positive == negative:
        return ring.zero
    return ring.from_dict({positive: one, negative: -one})


@performance.measure_time("lattice_ideal")
def lattice_ideal(L: Lattice, n_vars: int, variables: Optional[Sequence[str]] = None,
                  order: OrderTag = GREVLEX) -> Ideal:
    """
    Full lattice ideal <x^b - x^c : b - c in L>.

    Starts from the binomials of a basis and saturates by one variable at a
    time, which is the same as saturating by the product of all of them.
    """
    if L.ambient_dim != n_vars:
        raise DimensionMismatch(f"lattice in Z^{L.ambient_dim} for {n_vars} variable(s)")
    variables = tuple(variables) if variables is not None else default_variables(n_vars)
    if len(variables) != n_vars:
        raise DimensionMismatch(f"{len(variables)} variable name(s) for {n_vars} variable(s)")

    if L.rank == 0:
        return Ideal(variables, (), order)

    ring = make_ring(variables, order)
    ideal = Ideal(variables, [binomial(ring, v) for v in L.basis], order)
    for x in ring.gens:
        ideal = saturate(ideal, x)
        if ideal.is_unit():
            break

    logger.debug(f"lattice ideal of rank-{L.rank} lattice in {n_vars} variable(s): "
                 f"{len(ideal.groebner_basis())} generator(s)")
    return ideal


def _is_integer(x) -> bool:
    return isinstance(x, numbers.Integral) and not isinstance(x, bool)


def _check_points(points: Sequence[Sequence[int]]) -> Tuple[Tuple[int, ...], ...]:
    if not points:
        raise InputError("a point configuration needs at least one point")
    if any(not isinstance(p, (list, tuple)) for p in points):
        raise InputError("points must be lists of integers")
    bad = [x for p in points for x in p if not _is_integer(x)]
    if bad:
        raise InputError(f"point coordinates must be integers, got {bad[0]!r}")
    pts = tuple(tuple(int(x) for x in p) for p in points)
    width = len(pts[0])
    if any(len(p) != width for p in pts):
        raise InputError("points of different dimensions")
    return pts


def exponent_matrix(points: Sequence[Sequence[int]]) -> np.ndarray:
    """Matrix whose columns are the points"""
    pts = _check_points(points)
    width = len(pts[0])
    return int_matrix([[p[j] for p in pts] for j in range(width)], cols=len(pts))


def toric_from_points(points: Sequence[Sequence[int]],
                      variables: Optional[Sequence[str]] = None,
                      order: OrderTag = GREVLEX) -> ToricData:
    pts = _check_points(points)
    A = exponent_matrix(pts)
    relations = kernel(A)
    ideal = lattice_ideal(relations, len(pts), variables, order)

    try:
        degree = degree_by_volume(pts)
    except DimensionTooLarge as e:
        logger.info(f"degree not reported: {e}")
        degree = None

    data = ToricData(
        points=pts,
        A=A,
        kernel=relations,
        dimension=rank(A),
        ideal=ideal,
        degree=degree,
    )
    logger.info(f"toric variety of {len(pts)} point(s): dimension {data.dimension}, degree {degree}")
    return data


def realize_as_matrix(points: Sequence[Sequence[int]]) -> List[SymbolicScalar]:
    """
    Diagonal entries a_i = prod_j c_j^(alpha_ij), c_j the first r primes.
    The relation lattice of <a_1, ..., a_n> is the kernel of A.
    """
    pts = _check_points(points)
    primes = [prime(j + 1) for j in range(len(pts[0]))]
    entries = []
    for p in pts:
        value = Fraction(1)
        for c, alpha in zip(primes, p):
            value *= Fraction(c) ** alpha
        entries.append(SymbolicScalar(value))
    logger.debug(f"realized {len(pts)} point(s) with primes {primes}")
    return entries


def affine_hull_coordinates(points: Sequence[Sequence[int]]) -> List[List[int]]:
    """
    Coordinates of p - p_0 in a basis of the saturated lattice spanned by
    the differences, so the result is full-dimensional.
    """
    pts = _check_points(points)
    width = len(pts[0])
    origin = pts[0]
    diffs = [[a - b for a, b in zip(p, origin)] for p in pts]

    normals = kernel(int_matrix(diffs, cols=width))
    hull_lattice = kernel(normals.matrix())
    coordinates = []
    for d in diffs:
        c = lattice_coordinates(hull_lattice, d)
        if c is None:
            raise ArithmeticError(f"difference {d} fell outside its own affine hull")
        coordinates.append(c)
    return coordinates


def degree_by_volume(points: Sequence[Sequence[int]]) -> int:
    """
    Normalized volume of conv(points) inside its affine hull lattice.

    The hull facets come from qhull; each facet simplex is coned to a hull
    vertex and the absolute determinants are summed exactly.
    """
    coordinates = affine_hull_coordinates(points)
    dim = len(coordinates[0])
    if dim == 0:
        return 1
    if dim > MAX_VOLUME_DIMENSION:
        raise DimensionTooLarge(f"affine hull of dimension {dim} exceeds {MAX_VOLUME_DIMENSION}")
    if dim == 1:
        values = [c[0] for c in coordinates]
        return max(values) - min(values)

    unique = sorted(set(tuple(c) for c in coordinates))
    hull = ConvexHull(np.array(unique, dtype=float))
    apex = unique[hull.vertices[0]]

    volume = 0
    for facet in hull.simplices:
        rows = [[unique[i][k] - apex[k] for k in range(dim)] for i in facet]
        volume += abs(determinant(int_matrix(rows, cols=dim)))
    return volume


@performance.measure_time("implicitize")
def implicitize(points: Sequence[Sequence[int]], variables: Optional[Sequence[str]] = None,
                order: OrderTag = GREVLEX) -> Ideal:
    """
    Ideal of the closure of the image of t -> (t^a_1, ..., t^a_n) on the torus.

    Negative exponents go through witnesses w_j with z_j w_j = 1; all
    parameters are then eliminated.
    """
    pts = _check_points(points)
    n = len(pts)
    r = len(pts[0])
    variables = tuple(variables) if variables is not None else default_variables(n)

    taken = set(variables)
    z_names, w_names = [], []
    for j in range(1, r + 1):
        z = fresh_variable(f"z_{j}", taken)
        taken.add(z)
        w = fresh_variable(f"w_{j}", taken)
        taken.add(w)
        z_names.append(z)
        w_names.append(w)

    params = tuple(z_names) + tuple(w_names)
    all_variables = params + variables
    ring = make_ring(all_variables, order)
    gens = ring.gens
    z_gens, w_gens, x_gens = gens[:r], gens[r:2 * r], gens[2 * r:]

    generators = [z * w - 1 for z, w in zip(z_gens, w_gens)]
    for x, p in zip(x_gens, pts):
        monomial = ring.one
        for j, alpha in enumerate(p):
            if alpha > 0:
                monomial *= z_gens[j] ** alpha
            elif alpha < 0:
                monomial *= w_gens[j] ** (-alpha)
        generators.append(x - monomial)

    return eliminate(Ideal(all_variables, generators, order), params)

"""
Closure Module
Provides the Zariski closure of a cyclic matrix group or semigroup: isolated
points from the nilpotent part, the semisimple torus closure, the unipotent
curve, their product, and the exact power-evaluation oracle.

All closure ideals are first built in Jordan coordinates, where every
matrix in the closure is block diagonal with upper triangular Toeplitz
blocks, and then carried to the input coordinates by X -> P^-1 X P.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import List, Optional, Sequence, Tuple, Union

from sympy import ImmutableMatrix, Matrix, eye, zeros
from sympy.functions.combinatorial.numbers import stirling

from modules.error_handler import (
    DimensionMismatch, GroupModeOnSingular, InputError, NotSquare, NotUnipotent,
    SingularInverse, ZeroMatrix,
)
from modules.exact import UniPoly, from_qq, from_sympy, to_qq, to_sympy
from modules.intlinalg import Lattice, kernel
from modules.mgroup import MultGroupData, SymbolicScalar, build_group, power_group
from modules.multipoly import (
    GREVLEX, Ideal, eliminate, evaluate, format_poly, ideal_equal, intersect_all,
    make_ring, matrix_variables, point_ideal, substitute_ideal,
)
from modules.performance import performance
from modules.spectral import (
    JordanBlockSpec, is_invertible, jordan, matrix_entries, matrix_power, split_nilpotent,
    su_decompose, unipotent_block,
)
from modules.toric import ToricData, lattice_ideal, toric_from_points

logger = logging.getLogger(__name__)

GROUP = "group"
SEMIGROUP = "semigroup"
MODES = (GROUP, SEMIGROUP)


def check_mode(mode: str) -> str:
    if mode not in MODES:
        raise InputError(f"mode must be one of {', '.join(MODES)}, got {mode!r}")
    return mode


# Block layout --------------------------------------------------------------

@dataclass(frozen=True)
class BlockFrame:
    """
    Block layout of a matrix in Jordan coordinates.

    A live block (nonzero eigenvalue) is upper triangular Toeplitz and its
    first row carries the free coordinates; every other entry is pinned to
    zero or to a first-row entry.
    """

    sizes: Tuple[int, ...]
    live: Tuple[bool, ...]

    @classmethod
    def from_blocks(cls, blocks: Sequence[JordanBlockSpec]) -> "BlockFrame":
        return cls(tuple(b.size for b in blocks), tuple(b.eigenvalue != 0 for b in blocks))

    @classmethod
    def diagonal(cls, n: int) -> "BlockFrame":
        return cls((1,) * n, (True,) * n)

    @property
    def n(self) -> int:
        return sum(self.sizes)

    @property
    def offsets(self) -> Tuple[int, ...]:
        offsets, total = [], 0
        for size in self.sizes:
            offsets.append(total)
            total += size
        return tuple(offsets)

    @property
    def variables(self) -> Tuple[str, ...]:
        return matrix_variables(self.n)

    @property
    def live_blocks(self) -> List[int]:
        return [l for l, alive in enumerate(self.live) if alive]

    def free_variable(self, block: int, d: int) -> str:
        o = self.offsets[block]
        return f"x_{o + 1}_{o + d + 1}"

    def free_variables(self) -> Tuple[str, ...]:
        return tuple(self.free_variable(l, d)
                     for l in self.live_blocks for d in range(self.sizes[l]))

    def diagonal_variables(self) -> Tuple[str, ...]:
        return tuple(self.free_variable(l, 0) for l in self.live_blocks)

    def linear_equations(self):
        """Generators pinning every non-free coordinate, in the n^2-variable ring"""
        ring = make_ring(self.variables, GREVLEX)
        n = self.n
        owner = []
        for l, size in enumerate(self.sizes):
            owner.extend([l] * size)

        x = lambda i, j: ring.gens[i * n + j]
        equations = []
        for i in range(n):
            for j in range(n):
                l = owner[i]
                if owner[j] == l and self.live[l] and j >= i:
                    o = self.offsets[l]
                    if i == o:
                        continue
                    equations.append(x(i, j) - x(o, o + j - i))
                else:
                    equations.append(x(i, j))
        return equations

    def embed(self, free_ideal: Ideal, pinned: Sequence[str] = ()) -> Ideal:
        """Ideal over all n^2 coordinates: free_ideal plus the layout equations"""
        ring = make_ring(self.variables, GREVLEX)
        generators = [g.set_ring(ring) for g in free_ideal.generators]
        generators += [ring.gens[self.variables.index(v)] for v in pinned]
        return Ideal(self.variables, generators + self.linear_equations(), GREVLEX)


def _univariate(ring, t, poly: UniPoly):
    value = ring.zero
    for e, c in enumerate(poly.coefficients):
        if c:
            value += to_qq(c) * t ** e
    return value


def _torus_monomial(ring, z_gens, w_gens, exponents: Sequence[int]):
    value = ring.one
    for z, w, alpha in zip(z_gens, w_gens, exponents):
        if alpha > 0:
            value *= z ** alpha
        elif alpha < 0:
            value *= w ** (-alpha)
    return value


# Unipotent curve -----------------------------------------------------------

@dataclass(frozen=True)
class CurveData:
    """Closure of <M_u> for a unipotent M_u in Jordan coordinates"""

    block_sizes: Tuple[int, ...]
    superdiagonals: Tuple[Fraction, ...]
    frame: BlockFrame
    free_ideal: Ideal
    curve_ideal: Ideal
    linear_space_equations: Tuple
    parametrization: Tuple[UniPoly, ...]

    @property
    def max_size(self) -> int:
        return max(self.block_sizes)

    @property
    def is_trivial(self) -> bool:
        return self.max_size == 1

    def evaluate(self, k: int) -> ImmutableMatrix:
        """The parametrization at t = k"""
        n = self.frame.n
        return ImmutableMatrix(n, n, [to_sympy(p.evaluate(k)) for p in self.parametrization])


def _expected_unipotent(block_sizes: Sequence[int], superdiagonals: Sequence[Fraction]) -> Matrix:
    n = sum(block_sizes)
    U = zeros(n, n)
    offset = 0
    for size, mu in zip(block_sizes, superdiagonals):
        block = unipotent_block(size, mu)
        U[offset:offset + size, offset:offset + size] = block
        offset += size
    return U


@performance.measure_time("unipotent_closure")
def unipotent_closure(m_u: Matrix, block_sizes: Sequence[int]) -> CurveData:
    """
    Curve through the powers of M_u.

    Each block entry at distance d above the diagonal is C(t, d) mu^d with mu
    the block's superdiagonal; t is eliminated. An identity M_u gives the
    trivial curve (a single point).
    """
    m_u = Matrix(m_u)
    block_sizes = tuple(int(s) for s in block_sizes)
    n = m_u.rows
    if not m_u.is_square:
        raise NotSquare(f"matrix is {m_u.rows}x{m_u.cols}")
    if sum(block_sizes) != n:
        raise DimensionMismatch(f"block sizes {block_sizes} do not fill a {n}x{n} matrix")
    if (m_u - eye(n)) ** n != zeros(n, n):
        raise NotUnipotent("M_u - I is not nilpotent")

    superdiagonals = []
    offset = 0
    for size in block_sizes:
        mu = from_sympy(m_u[offset, offset + 1]) if size > 1 else Fraction(1)
        if mu == 0:
            raise NotUnipotent(f"block at {offset} has a zero superdiagonal")
        superdiagonals.append(mu)
        offset += size
    if m_u != _expected_unipotent(block_sizes, superdiagonals):
        raise NotUnipotent("unipotent part is not in Jordan coordinates")

    frame = BlockFrame(block_sizes, (True,) * len(block_sizes))
    free = frame.free_variables()

    owner = []
    for l, size in enumerate(block_sizes):
        owner.extend([l] * size)
    parametrization = []
    for i in range(n):
        for j in range(n):
            l = owner[i]
            if owner[j] == l and j >= i:
                d = j - i
                parametrization.append(UniPoly.binomial(d).scale(superdiagonals[l] ** d))
            else:
                parametrization.append(UniPoly())

    if max(block_sizes) == 1:
        ring = make_ring(free, GREVLEX)
        free_ideal = Ideal(free, [y - 1 for y in ring.gens], GREVLEX)
    else:
        variables = ("t",) + free
        ring = make_ring(variables, GREVLEX)
        t = ring.gens[0]
        generators = []
        for l, size in enumerate(block_sizes):
            for d in range(size):
                y = ring.gens[variables.index(frame.free_variable(l, d))]
                entry = UniPoly.binomial(d).scale(superdiagonals[l] ** d)
                generators.append(y - _univariate(ring, t, entry))
        free_ideal = eliminate(Ideal(variables, generators, GREVLEX), ["t"])

    curve_ideal = frame.embed(free_ideal)
    linear = [g for g in free_ideal.groebner_basis() if max(sum(m) for m in g.itermonoms()) <= 1]
    linear += frame.linear_equations()

    logger.info(f"unipotent curve for blocks {block_sizes}: degree {max(block_sizes) - 1}")
    return CurveData(
        block_sizes=block_sizes,
        superdiagonals=tuple(superdiagonals),
        frame=frame,
        free_ideal=free_ideal,
        curve_ideal=curve_ideal,
        linear_space_equations=tuple(linear),
        parametrization=tuple(parametrization),
    )


def coordinate_change_unipotent(m: int, superdiagonal: Fraction) -> ImmutableMatrix:
    """
    Phi with Phi @ (C(t, d) mu^d)_d = (t^j)_j, moving the free first-row
    coordinates of a unipotent block onto the rational normal curve.
    Phi[j][d] = S(j, d) d! / mu^d with S the Stirling numbers of the second kind.
    """
    mu = to_sympy(Fraction(superdiagonal))
    if mu == 0:
        raise NotUnipotent("superdiagonal must be nonzero")
    Phi = zeros(m, m)
    factorial = 1
    for d in range(m):
        if d:
            factorial *= d
        for j in range(d, m):
            Phi[j, d] = stirling(j, d) * factorial / mu ** d
    return ImmutableMatrix(Phi)


def curve_in_standard_coordinates(curve: CurveData, block: int = 0) -> Ideal:
    """Ideal of one block's curve after the coordinate change onto (1, t, ..., t^(m-1))"""
    frame = curve.frame
    size = frame.sizes[block]
    names = tuple(frame.free_variable(block, d) for d in range(size))
    others = [v for v in frame.free_variables() if v not in names]
    projected = eliminate(curve.free_ideal, others) if others else curve.free_ideal
    projected = Ideal(names, projected.generators, GREVLEX)

    inverse = coordinate_change_unipotent(size, curve.superdiagonals[block]).inv()
    S = [[from_sympy(inverse[i, j]) for j in range(size)] for i in range(size)]
    return substitute_ideal(projected, S)


# Semisimple and product closures -------------------------------------------

@dataclass(frozen=True)
class SemisimpleClosure:
    """Closure of <M_s>: the union of the cosets M_s^i Y_0, i < torsion order"""

    group: MultGroupData
    frame: BlockFrame
    exponents: Tuple[Tuple[int, ...], ...]
    free_ideal: Ideal
    free_components: Optional[Tuple[Ideal, ...]]
    toric: ToricData

    def _pinned(self) -> List[str]:
        diagonal = set(self.frame.diagonal_variables())
        return [v for v in self.frame.free_variables() if v not in diagonal]

    @cached_property
    def ideal(self) -> Ideal:
        return self.frame.embed(self.free_ideal, self._pinned())

    @cached_property
    def component_ideals(self) -> Optional[List[Ideal]]:
        if self.free_components is None:
            return None
        return [self.frame.embed(c, self._pinned()) for c in self.free_components]


def semisimple_closure(G: MultGroupData, n: int, mode: str = SEMIGROUP,
                       frame: Optional[BlockFrame] = None) -> SemisimpleClosure:
    """
    The full ideal is the lattice ideal of the relation lattice on the
    diagonal. Component i is the lattice ideal of the torsionfree power
    group, rescaled by the i-th powers of the generators; it is left out
    when those powers are not rational.
    """
    check_mode(mode)
    frame = frame or BlockFrame.diagonal(n)
    if frame.n != n:
        raise DimensionMismatch(f"frame of size {frame.n} for an {n}x{n} matrix")
    diagonal = frame.diagonal_variables()
    if len(diagonal) != len(G.generators):
        raise DimensionMismatch(f"{len(G.generators)} generator(s) for {len(diagonal)} live block(s)")

    q = G.torsion_order
    torsionfree = power_group(G, q)
    torus = kernel(torsionfree.relation_lattice.matrix())
    exponents = tuple(tuple(v[l] for v in torus.basis) for l in range(len(diagonal)))
    toric = toric_from_points(exponents, diagonal)

    full = toric.ideal if q == 1 else lattice_ideal(G.relation_lattice, len(diagonal), diagonal)

    components: Optional[List[Ideal]] = []
    for i in range(q):
        scalings = G.scalings(i)
        if scalings is None:
            logger.info(f"coset {i} has non-real scalings; component ideals not reported")
            components = None
            break
        S = [[(1 / s if a == b else Fraction(0)) for b, _ in enumerate(scalings)]
             for a, s in enumerate(scalings)]
        components.append(toric.ideal if i == 0 else substitute_ideal(toric.ideal, S))

    logger.info(f"semisimple closure: rank {G.rank}, torsion {q}, {len(diagonal)} diagonal coordinate(s)")
    return SemisimpleClosure(
        group=G,
        frame=frame,
        exponents=exponents,
        free_ideal=full,
        free_components=tuple(components) if components is not None else None,
        toric=toric,
    )


@performance.measure_time("product_closure")
def product_closure(semisimple: SemisimpleClosure,
                    curve: Optional[CurveData]) -> Tuple[Ideal, Optional[List[Ideal]]]:
    """
    Ideal of {S U : S in closure <M_s>, U in closure <M_u>} in Jordan
    coordinates, with one component ideal per torsion coset.

    Coset i is parametrized by y_(l,d) = a_l^i z^(E_l) C(t, d) mu_l^d, where
    the rows E_l span the torus of the identity component; negative
    exponents go through witnesses w_j with z_j w_j = 1.
    """
    if curve is None or curve.is_trivial:
        return semisimple.ideal, semisimple.component_ideals

    frame = semisimple.frame
    live = frame.live_blocks
    if tuple(frame.sizes[l] for l in live) != curve.block_sizes:
        raise DimensionMismatch(f"curve blocks {curve.block_sizes} do not match the frame")

    G = semisimple.group
    r = len(semisimple.exponents[0]) if semisimple.exponents else 0
    params = tuple(f"z_{j}" for j in range(1, r + 1)) + tuple(f"w_{j}" for j in range(1, r + 1)) + ("t",)
    free = frame.free_variables()
    variables = params + free
    ring = make_ring(variables, GREVLEX)
    z_gens, w_gens, t = ring.gens[:r], ring.gens[r:2 * r], ring.gens[2 * r]

    binomials = [UniPoly.binomial(d) for d in range(max(curve.block_sizes))]
    cosets = []
    for i in range(G.torsion_order):
        scalings = G.scalings(i)
        if scalings is None:
            raise ValueError("product closure needs rational eigenvalues")
        generators = [z * w - 1 for z, w in zip(z_gens, w_gens)]
        for index, l in enumerate(live):
            torus = to_qq(scalings[index]) * _torus_monomial(ring, z_gens, w_gens,
                                                             semisimple.exponents[index])
            mu = curve.superdiagonals[index]
            for d in range(frame.sizes[l]):
                y = ring.gens[variables.index(frame.free_variable(l, d))]
                generators.append(y - torus * _univariate(ring, t, binomials[d].scale(mu ** d)))
        cosets.append(eliminate(Ideal(variables, generators, GREVLEX), params))
        logger.debug(f"coset {i}: {len(cosets[-1].generators)} generator(s)")

    full = intersect_all(cosets)
    return frame.embed(full), [frame.embed(c) for c in cosets]


# Reports -------------------------------------------------------------------

@dataclass(frozen=True)
class ClosureReport:
    """Closure of <M> = isolated points plus a union of torsion-many components"""

    mode: str
    n: int
    nu: int
    has_zero_eigenvalue: bool
    rank_G: int
    torsion_order: int
    diagonalizable_part: bool
    dimension: int
    num_components: int
    isolated_points: Tuple[ImmutableMatrix, ...]
    ideal: Ideal
    jordan_ideal: Ideal
    component_ideals: Optional[Tuple[Ideal, ...]] = None
    toric: Optional[ToricData] = None
    relation_lattice: Optional[Lattice] = None
    blocks: Tuple[JordanBlockSpec, ...] = ()


def conjugation_substitution(A: Matrix, B: Matrix) -> List[List[Fraction]]:
    """S with vec(A X B) = S vec(X), vec taken row-major"""
    n = A.rows
    a = [[from_sympy(A[i, j]) for j in range(n)] for i in range(n)]
    b = [[from_sympy(B[i, j]) for j in range(n)] for i in range(n)]
    return [[a[r][i] * b[j][c] for i in range(n) for j in range(n)]
            for r in range(n) for c in range(n)]


def _transport(ideal: Ideal, S: Optional[List[List[Fraction]]]) -> Ideal:
    return ideal if S is None else substitute_ideal(ideal, S)


@performance.measure_time("closure_pipeline")
def closure_pipeline(M: Matrix, mode: str = SEMIGROUP) -> ClosureReport:
    """
    Zariski closure of {M^k : k >= 1}, or of {M^k : k in Z} in group mode.

    X_0 holds M^k for 1 <= k < nu (and the zero matrix when every eigenvalue
    is zero); X_1 is zero on the nilpotent blocks and the closure of the
    invertible part elsewhere.
    """
    check_mode(mode)
    M = ImmutableMatrix(M)
    if not M.is_square:
        raise NotSquare(f"matrix is {M.rows}x{M.cols}")
    if M.is_zero_matrix:
        raise ZeroMatrix("the closure of the zero matrix is not considered")
    if mode == GROUP and not is_invertible(M):
        raise GroupModeOnSingular("group mode needs an invertible matrix")

    data = jordan(M)
    n = data.n
    _, invertible, _ = split_nilpotent(data)
    frame = BlockFrame.from_blocks(data.blocks)
    variables = frame.variables
    J = data.J
    nu = data.nu

    isolated_powers = list(range(1, nu))
    jordan_points = [matrix_power(J, k) for k in isolated_powers]
    points = [matrix_power(M, k) for k in isolated_powers]
    if not invertible:
        jordan_points.append(ImmutableMatrix(zeros(n, n)))
        points.append(ImmutableMatrix(zeros(n, n)))

    pieces = [point_ideal(variables, matrix_entries(p)) for p in jordan_points]
    components = None
    toric = None
    lattice = None
    if invertible:
        G = build_group([b.eigenvalue for b in invertible])
        semisimple = semisimple_closure(G, n, mode, frame)
        _, m_u = su_decompose(invertible)
        curve = unipotent_closure(m_u, [b.size for b in invertible])
        x1, components = product_closure(semisimple, curve)
        pieces.insert(0, x1)
        rank_G, torsion = G.rank, G.torsion_order
        diagonalizable = curve.is_trivial
        dimension = rank_G + (0 if diagonalizable else 1)
        num_components = torsion
        toric = semisimple.toric
        lattice = G.relation_lattice
    else:
        rank_G, torsion = 0, 1
        diagonalizable = True
        dimension = 0
        num_components = 0

    jordan_ideal = intersect_all(pieces)

    if data.P == eye(n):
        S = None
    else:
        S = conjugation_substitution(data.P_inv, data.P)
    ideal = _transport(jordan_ideal, S)
    if components is not None:
        components = tuple(_transport(c, S) for c in components)

    report = ClosureReport(
        mode=mode,
        n=n,
        nu=nu,
        has_zero_eigenvalue=data.has_zero_eigenvalue,
        rank_G=rank_G,
        torsion_order=torsion,
        diagonalizable_part=diagonalizable,
        dimension=dimension,
        num_components=num_components,
        isolated_points=tuple(points),
        ideal=ideal,
        jordan_ideal=jordan_ideal,
        component_ideals=components,
        toric=toric,
        relation_lattice=lattice,
        blocks=data.blocks,
    )
    logger.info(
        f"closure ({mode}) of a {n}x{n} matrix: dimension {dimension}, "
        f"{num_components} component(s), {len(points)} isolated point(s)"
    )
    return report


def symbolic_diagonal_pipeline(eigs: Sequence[Union[SymbolicScalar, str, int, Fraction]],
                               mode: str = SEMIGROUP) -> ClosureReport:
    """Closure for diag(eigs) with eigenvalues given as modulus times a root of unity"""
    check_mode(mode)
    eigs = [e if isinstance(e, SymbolicScalar) else SymbolicScalar.from_rational(e) for e in eigs]
    if not eigs:
        raise InputError("symbolic diagonal needs at least one eigenvalue")

    n = len(eigs)
    G = build_group(eigs)
    semisimple = semisimple_closure(G, n, mode)
    components = semisimple.component_ideals
    report = ClosureReport(
        mode=mode,
        n=n,
        nu=0,
        has_zero_eigenvalue=False,
        rank_G=G.rank,
        torsion_order=G.torsion_order,
        diagonalizable_part=True,
        dimension=G.rank,
        num_components=G.torsion_order,
        isolated_points=(),
        ideal=semisimple.ideal,
        jordan_ideal=semisimple.ideal,
        component_ideals=tuple(components) if components is not None else None,
        toric=semisimple.toric,
        relation_lattice=G.relation_lattice,
    )
    logger.info(f"symbolic closure of diag({', '.join(str(e) for e in eigs)}): "
                f"rank {G.rank}, torsion {G.torsion_order}")
    return report


def conjugate_closure(closure: Union[ClosureReport, Ideal], g: Matrix) -> Ideal:
    """Carry a closure ideal along X -> g X g^-1"""
    ideal = closure.ideal if isinstance(closure, ClosureReport) else closure
    g = Matrix(g)
    if not is_invertible(g):
        raise SingularInverse("conjugation needs an invertible matrix")
    return substitute_ideal(ideal, conjugation_substitution(g.inv(), g))


# Verification --------------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    """Pass, or the first point where a generator did not vanish"""

    passed: bool
    checked: int = 0
    point: Optional[str] = None
    generator: Optional[str] = None
    value: Optional[str] = None

    def __bool__(self) -> bool:
        return self.passed

    def __str__(self) -> str:
        if self.passed:
            return f"Pass ({self.checked} point(s) checked)"
        return f"Fail at {self.point}: {self.generator} evaluates to {self.value}"


def _first_nonvanishing(basis, point: Sequence[Fraction]):
    for g in basis:
        value = evaluate(g, point)
        if value != 0:
            return g, value
    return None


@performance.measure_time("verify_oracle")
def verify_oracle(M: Matrix, report: ClosureReport, K: int, mode: Optional[str] = None) -> Verdict:
    """
    Evaluate every basis element at M^k for k = 1..K (and M^-k in group
    mode) and at every isolated point, exactly.
    """
    mode = check_mode(mode or report.mode)
    if K < 1:
        raise InputError(f"oracle depth must be at least 1, got {K}")
    M = Matrix(M)
    basis = report.ideal.groebner_basis()
    checked = 0

    sequences = [("M^", M)]
    if mode == GROUP:
        if not is_invertible(M):
            raise SingularInverse("group-mode oracle on a singular matrix")
        sequences.append(("M^-", M.inv()))

    for label, step in sequences:
        power = eye(M.rows)
        for k in range(1, K + 1):
            power = power * step
            hit = _first_nonvanishing(basis, matrix_entries(power))
            checked += 1
            if hit is not None:
                g, value = hit
                logger.warning(f"oracle counterexample at {label}{k}: {format_poly(g)} = {value}")
                return Verdict(False, checked, f"{label}{k}", format_poly(g), str(value))

    for index, p in enumerate(report.isolated_points, start=1):
        hit = _first_nonvanishing(basis, matrix_entries(p))
        checked += 1
        if hit is not None:
            g, value = hit
            return Verdict(False, checked, f"isolated point {index}", format_poly(g), str(value))

    logger.info(f"oracle passed on {checked} point(s)")
    return Verdict(True, checked)


def verify_symbolic(eigs: Sequence[SymbolicScalar], report: ClosureReport, K: int) -> Verdict:
    """
    Oracle for symbolic diagonals: a term touching an off-diagonal coordinate
    vanishes, and what is left must be a binomial whose two terms agree as
    symbolic scalars on diag(eigs)^k for 0 < |k| <= K.
    """
    if K < 1:
        raise InputError(f"oracle depth must be at least 1, got {K}")
    eigs = [e if isinstance(e, SymbolicScalar) else SymbolicScalar.from_rational(e) for e in eigs]
    n = len(eigs)
    diagonal = [i * n + i for i in range(n)]
    basis = report.ideal.groebner_basis()
    checked = 0

    for k in [k for j in range(1, K + 1) for k in (j, -j)]:
        values = [e ** k for e in eigs]
        for g in basis:
            terms = []
            for monom, coeff in g.terms():
                if any(e for index, e in enumerate(monom) if index not in diagonal):
                    continue
                value = SymbolicScalar(Fraction(1))
                for i, position in enumerate(diagonal):
                    if monom[position]:
                        value = value * values[i] ** monom[position]
                terms.append((from_qq(coeff), value))

            if len(terms) > 2:
                raise ValueError(f"symbolic oracle handles binomials only: {format_poly(g)}")
            if len(terms) == 0:
                continue
            vanishes = False
            if len(terms) == 2:
                (c1, v1), (c2, v2) = terms
                vanishes = v1 * SymbolicScalar.from_rational(c1) == v2 * SymbolicScalar.from_rational(-c2)
            if not vanishes:
                return Verdict(False, checked + 1, f"diag^{k}", format_poly(g), "nonzero")
        checked += 1

    return Verdict(True, checked)


def power_closure_check(M: Matrix, q: int) -> bool:
    """Whether <M> and <M^q> have the same closure"""
    if q == 0:
        raise InputError("power check needs a nonzero exponent")
    if q == 1:
        return True
    base = closure_pipeline(M, GROUP)
    powered = closure_pipeline(matrix_power(Matrix(M), q), GROUP)
    same = ideal_equal(base.ideal, powered.ideal)
    logger.info(f"closure of M^{q} {'equals' if same else 'differs from'} the closure of M")
    return same


def modes_agree(M: Matrix) -> bool:
    """For invertible M the group and semigroup closures coincide"""
    return ideal_equal(closure_pipeline(M, GROUP).ideal, closure_pipeline(M, SEMIGROUP).ideal)

"""
Multivariate Polynomial Module
Provides polynomial rings over Q with lex / grevlex / block elimination
orders, a Buchberger Groebner engine, and the ideal toolbox: normal form,
membership, elimination, saturation, intersection, equality, linear
substitution, plus the ASCII polynomial grammar.
"""

import logging
from fractions import Fraction
from functools import lru_cache
from operator import itemgetter
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

import sympy
from sympy.parsing.sympy_parser import parse_expr
from sympy.polys.domains import QQ
from sympy.polys.orderings import ProductOrder, grevlex, lex
from sympy.polys.rings import PolyElement, PolyRing

from modules.error_handler import BudgetExceeded, DimensionMismatch, InputError, RingMismatch
from modules.exact import format_rational, from_qq, to_qq
from modules.performance import performance
from modules.settings import get_settings

logger = logging.getLogger(__name__)

OrderTag = Union[str, Tuple[str, int]]

LEX = "lex"
GREVLEX = "grevlex"
# ideal_equal compares reduced bases in this order
CANONICAL_ORDER = LEX


def block_order(k: int) -> Tuple[str, int]:
    """Elimination order: grevlex on the first k variables, then grevlex on the rest"""
    return ("block", k)


def _monomial_order(order: OrderTag):
    if order == LEX:
        return lex
    if order == GREVLEX:
        return grevlex
    if isinstance(order, tuple) and len(order) == 2 and order[0] == "block":
        k = int(order[1])
        return ProductOrder(
            (grevlex, itemgetter(slice(None, k))),
            (grevlex, itemgetter(slice(k, None))),
        )
    raise ValueError(f"unknown monomial order {order!r}")


@lru_cache(maxsize=None)
def make_ring(variables: Tuple[str, ...], order: OrderTag = GREVLEX) -> PolyRing:
    """Polynomial ring Q[variables] with the given order, cached per (variables, order)"""
    if not variables:
        raise ValueError("a polynomial ring needs at least one variable")
    if len(set(variables)) != len(variables):
        raise ValueError(f"duplicate variable names in {variables}")
    return PolyRing([sympy.Symbol(v) for v in variables], QQ, _monomial_order(order))


def variable_names(ring: PolyRing) -> Tuple[str, ...]:
    return tuple(str(s) for s in ring.symbols)


def fresh_variable(stem: str, taken: Iterable[str]) -> str:
    """A variable name not in taken, derived from stem"""
    taken = set(taken)
    if stem not in taken:
        return stem
    index = 1
    while f"{stem}_{index}" in taken:
        index += 1
    return f"{stem}_{index}"


def matrix_variables(n: int) -> Tuple[str, ...]:
    """x_<row>_<col>, row-major, 1-indexed"""
    return tuple(f"x_{i}_{j}" for i in range(1, n + 1) for j in range(1, n + 1))


def leading_key(ring: PolyRing):
    return lambda p: ring.order(p.LM)


class Ideal:
    """Ideal of Q[variables] given by generators, with write-once cached reduced bases"""

    def __init__(self, variables: Sequence[str], generators: Iterable[PolyElement] = (),
                 order: OrderTag = GREVLEX):
        self.variables = tuple(variables)
        self.order = order
        self.ring = make_ring(self.variables, order)
        self.generators = tuple(
            g.set_ring(self.ring) for g in generators if g
        )
        self._bases: Dict[OrderTag, Tuple[PolyElement, ...]] = {}

    def __repr__(self) -> str:
        return f"Ideal({len(self.generators)} generator(s) in {len(self.variables)} variable(s))"

    @classmethod
    def unit(cls, variables: Sequence[str], order: OrderTag = GREVLEX) -> "Ideal":
        ring = make_ring(tuple(variables), order)
        return cls(variables, [ring.one], order)

    def with_order(self, order: OrderTag) -> "Ideal":
        return Ideal(self.variables, self.generators, order)

    def groebner_basis(self, order: Optional[OrderTag] = None) -> Tuple[PolyElement, ...]:
        """Reduced Groebner basis in the requested order (default: the ideal's own)"""
        order = self.order if order is None else order
        if order not in self._bases:
            self._bases[order] = buchberger(self, order)
        return self._bases[order]

    def _prime(self, order: OrderTag, basis: Sequence[PolyElement]):
        if order not in self._bases:
            self._bases[order] = tuple(basis)

    def is_zero(self) -> bool:
        return not self.groebner_basis()

    def is_unit(self) -> bool:
        basis = self.groebner_basis()
        return len(basis) == 1 and basis[0] == basis[0].ring.one

    def gens(self) -> Tuple[PolyElement, ...]:
        return self.ring.gens

    def gen(self, name: str) -> PolyElement:
        return self.ring.gens[self.variables.index(name)]


# Groebner engine -----------------------------------------------------------

def spoly(p1: PolyElement, p2: PolyElement) -> PolyElement:
    """S-polynomial of two monic polynomials"""
    ring = p1.ring
    lcm = ring.monomial_lcm(p1.LM, p2.LM)
    m1 = ring.monomial_div(lcm, p1.LM)
    m2 = ring.monomial_div(lcm, p2.LM)
    return p1.mul_monom(m1) - p2.mul_monom(m2)


def _autoreduce(polys: List[PolyElement]) -> List[PolyElement]:
    """Reduce each input against the ones before it until nothing changes"""
    current = [p.monic() for p in polys if p]
    while True:
        reduced = []
        for i, p in enumerate(current):
            r = p.rem(current[:i]) if i else p
            if r:
                reduced.append(r.monic())
        if reduced == current:
            return current
        current = reduced


class _BuchbergerState:
    """Working basis, active indices and critical pairs"""

    def __init__(self, ring: PolyRing, budget: int):
        self.ring = ring
        self.budget = budget
        self.basis: List[PolyElement] = []
        self.active: Set[int] = set()
        self.pairs: Set[Tuple[int, int]] = set()
        self.discarded_pairs = 0

    def lcm(self, i: int, j: int):
        return self.ring.monomial_lcm(self.basis[i].LM, self.basis[j].LM)

    def update(self, h: PolyElement):
        """Add h to the basis, pruning pairs with the coprime and chain criteria"""
        ring = self.ring
        monomial_lcm = ring.monomial_lcm
        monomial_mul = ring.monomial_mul
        monomial_div = ring.monomial_div

        ih = len(self.basis)
        self.basis.append(h)
        if len(self.basis) > self.budget:
            raise BudgetExceeded(
                f"Groebner basis exceeded {self.budget} polynomials; input is beyond desk scale"
            )
        mh = h.LM

        candidates = list(self.active)
        kept: List[int] = []
        for position, ig in enumerate(candidates):
            mg = self.basis[ig].LM
            lcm_hg = monomial_lcm(mh, mg)
            coprime = monomial_mul(mh, mg) == lcm_hg
            rest = candidates[position + 1:]
            dominated = any(
                monomial_div(lcm_hg, monomial_lcm(mh, self.basis[ip].LM)) is not None
                for ip in rest + kept
            )
            if coprime or not dominated:
                kept.append(ig)
            else:
                self.discarded_pairs += 1

        new_pairs = set()
        for ig in kept:
            mg = self.basis[ig].LM
            if monomial_mul(mh, mg) != monomial_lcm(mh, mg):
                new_pairs.add((ig, ih))
            else:
                self.discarded_pairs += 1

        surviving = set()
        for ig1, ig2 in self.pairs:
            mg1, mg2 = self.basis[ig1].LM, self.basis[ig2].LM
            lcm12 = monomial_lcm(mg1, mg2)
            if (monomial_div(lcm12, mh) is None
                    or monomial_lcm(mg1, mh) == lcm12
                    or monomial_lcm(mg2, mh) == lcm12):
                surviving.add((ig1, ig2))
            else:
                self.discarded_pairs += 1
        self.pairs = surviving | new_pairs

        self.active = {ig for ig in self.active if monomial_div(self.basis[ig].LM, mh) is None}
        self.active.add(ih)

    def select(self) -> Tuple[int, int]:
        """Normal strategy: smallest lcm of leading monomials"""
        order = self.ring.order
        return min(self.pairs, key=lambda pair: (order(self.lcm(*pair)), pair))

    def step(self, pair: Tuple[int, int]) -> Optional[PolyElement]:
        self.pairs.discard(pair)
        s = spoly(self.basis[pair[0]], self.basis[pair[1]])
        divisors = sorted((self.basis[i] for i in self.active), key=leading_key(self.ring))
        r = s.rem(divisors)
        if r:
            r = r.monic()
            self.update(r)
        return r

    def reduced_basis(self) -> Tuple[PolyElement, ...]:
        minimal = [self.basis[i] for i in sorted(self.active)]
        reduced = []
        for i, g in enumerate(minimal):
            others = minimal[:i] + minimal[i + 1:]
            r = g.rem(others) if others else g
            if r:
                reduced.append(r.monic())
        return tuple(sorted(reduced, key=leading_key(self.ring), reverse=True))


@performance.measure_time("groebner")
def buchberger(ideal: Ideal, order: Optional[OrderTag] = None) -> Tuple[PolyElement, ...]:
    """
    Reduced Groebner basis of the ideal in the given order.

    Deterministic: monic elements sorted by leading monomial, largest first.
    The zero ideal has the empty basis.
    """
    order = ideal.order if order is None else order
    ring = make_ring(ideal.variables, order)
    polys = _autoreduce([g.set_ring(ring) for g in ideal.generators])
    if not polys:
        return ()
    if any(p == ring.one for p in polys):
        return (ring.one,)

    state = _BuchbergerState(ring, get_settings().groebner_max_basis)
    for p in sorted(polys, key=leading_key(ring)):
        state.update(p)

    while state.pairs:
        r = state.step(state.select())
        if r is not None and r == ring.one:
            logger.debug("Groebner basis collapsed to the unit ideal")
            return (ring.one,)

    basis = state.reduced_basis()
    logger.debug(
        f"Groebner basis over {len(ideal.variables)} variable(s) in {order}: "
        f"{len(basis)} element(s), {state.discarded_pairs} pair(s) skipped by criteria"
    )
    return basis


# Ideal toolbox -------------------------------------------------------------

def _check_same_ring(I: Ideal, J: Ideal):
    if I.variables != J.variables:
        raise RingMismatch(f"ideals over {I.variables} and {J.variables}")


def normal_form(f: PolyElement, I: Ideal) -> PolyElement:
    """Remainder of f modulo the reduced basis of I, in I's ring"""
    f = f.set_ring(I.ring)
    basis = I.groebner_basis()
    if not basis:
        return f
    return f.rem(list(basis))


def ideal_contains(I: Ideal, f: PolyElement) -> bool:
    return not normal_form(f, I)


def ideal_contains_ideal(I: Ideal, J: Ideal) -> bool:
    """J is a subset of I"""
    _check_same_ring(I, J)
    return all(ideal_contains(I, g) for g in J.generators)


@performance.measure_time("eliminate")
def eliminate(I: Ideal, drop_vars: Iterable[str]) -> Ideal:
    """I intersected with Q[remaining variables], via a block elimination order"""
    drop = [v for v in I.variables if v in set(drop_vars)]
    keep = tuple(v for v in I.variables if v not in drop)
    if not drop:
        return Ideal(I.variables, I.generators, I.order)
    if not keep:
        raise ValueError("cannot eliminate every variable")

    k = len(drop)
    work = Ideal(tuple(drop) + keep, I.generators, block_order(k))
    basis = work.groebner_basis()

    survivors = [g for g in basis if all(not any(m[:k]) for m in g.itermonoms())]
    target = make_ring(keep, GREVLEX)
    survivors = [g.set_ring(target) for g in survivors]
    result = Ideal(keep, survivors, I.order)
    if I.order == GREVLEX:
        # the second block of the product order is grevlex, so this is already reduced
        result._prime(GREVLEX, tuple(sorted(result.generators, key=leading_key(result.ring),
                                            reverse=True)))
    return result


def saturate(I: Ideal, f: PolyElement) -> Ideal:
    """(I : f^inf) via I + <t f - 1> and elimination of t"""
    f = f.set_ring(I.ring)
    if not f:
        raise ValueError("saturation by the zero polynomial")
    if f.is_ground:
        return Ideal(I.variables, I.generators, I.order)

    t = fresh_variable("s", I.variables)
    variables = (t,) + I.variables
    ring = make_ring(variables, I.order)
    tt = ring.gens[0]
    generators = [g.set_ring(ring) for g in I.generators] + [tt * f.set_ring(ring) - 1]
    return eliminate(Ideal(variables, generators, I.order), [t])


def intersect(I: Ideal, J: Ideal) -> Ideal:
    """I and J intersected, via t I + (1 - t) J and elimination of t"""
    _check_same_ring(I, J)
    if I.is_unit():
        return Ideal(J.variables, J.generators, J.order)
    if J.is_unit():
        return Ideal(I.variables, I.generators, I.order)
    if I.is_zero() or J.is_zero():
        return Ideal(I.variables, (), I.order)

    t = fresh_variable("t", I.variables)
    variables = (t,) + I.variables
    ring = make_ring(variables, I.order)
    tt = ring.gens[0]
    generators = [tt * g.set_ring(ring) for g in I.groebner_basis()]
    generators += [(1 - tt) * h.set_ring(ring) for h in J.groebner_basis()]
    return eliminate(Ideal(variables, generators, I.order), [t])


def intersect_all(ideals: Sequence[Ideal]) -> Ideal:
    if not ideals:
        raise ValueError("intersection of no ideals")
    result = ideals[0]
    for J in ideals[1:]:
        result = intersect(result, J)
    return result


def ideal_equal(I: Ideal, J: Ideal) -> bool:
    """Equality of ideals by comparing reduced lex bases"""
    _check_same_ring(I, J)
    return I.groebner_basis(CANONICAL_ORDER) == J.groebner_basis(CANONICAL_ORDER)


def ideal_sum(I: Ideal, J: Ideal) -> Ideal:
    _check_same_ring(I, J)
    return Ideal(I.variables, I.generators + J.generators, I.order)


def point_ideal(variables: Sequence[str], point: Sequence[Fraction],
                order: OrderTag = GREVLEX) -> Ideal:
    """Maximal ideal of a rational point"""
    if len(point) != len(variables):
        raise DimensionMismatch(f"point of length {len(point)} in {len(variables)} variables")
    ring = make_ring(tuple(variables), order)
    return Ideal(variables, [x - to_qq(c) for x, c in zip(ring.gens, point)], order)


# Substitution and evaluation -----------------------------------------------

def substitute_linear(f: PolyElement, S: Sequence[Sequence[Fraction]]) -> PolyElement:
    """Replace variable i by the linear form sum_j S[i][j] x_j"""
    ring = f.ring
    n = ring.ngens
    if len(S) != n or any(len(row) != n for row in S):
        raise DimensionMismatch(f"substitution matrix must be {n}x{n}")

    forms = []
    for row in S:
        form = ring.zero
        for x, c in zip(ring.gens, row):
            if c:
                form += x * to_qq(Fraction(c))
        forms.append(form)
    return f.compose(list(zip(ring.gens, forms)))


def substitute_ideal(I: Ideal, S: Sequence[Sequence[Fraction]]) -> Ideal:
    return Ideal(I.variables, [substitute_linear(g, S) for g in I.generators], I.order)


def rename_variables(f: PolyElement, names: Sequence[str]) -> PolyElement:
    """Same polynomial over positionally renamed variables"""
    ring = make_ring(tuple(names), GREVLEX)
    if ring.ngens != f.ring.ngens:
        raise DimensionMismatch("renaming must keep the number of variables")
    return ring.from_dict(dict(f))


def evaluate(f: PolyElement, point: Sequence[Fraction]) -> Fraction:
    """Exact value at a rational point, variables in ring order"""
    if len(point) != f.ring.ngens:
        raise DimensionMismatch(f"point of length {len(point)} for {f.ring.ngens} variables")
    values = [to_qq(Fraction(c)) for c in point]
    total = QQ.zero
    for monom, coeff in f.iterterms():
        term = coeff
        for value, e in zip(values, monom):
            if e:
                term *= value ** e
        total += term
    return from_qq(total)


# ASCII grammar -------------------------------------------------------------

def format_poly(f: PolyElement) -> str:
    """Render like "3/2*x_1_2^2*x_2_2 - 1", terms in the ring's order"""
    if not f:
        return "0"
    names = variable_names(f.ring)
    pieces = []
    for monom, coeff in f.terms():
        c = from_qq(coeff)
        factors = []
        for name, e in zip(names, monom):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        magnitude = abs(c)
        if not factors:
            body = format_rational(magnitude)
        elif magnitude == 1:
            body = "*".join(factors)
        else:
            body = format_rational(magnitude) + "*" + "*".join(factors)
        pieces.append(("-" if c < 0 else "+", body))

    text = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text


def parse_poly(text: str, variables: Sequence[str], order: OrderTag = GREVLEX) -> PolyElement:
    """Parse the ASCII grammar ("^" for powers) into Q[variables]"""
    ring = make_ring(tuple(variables), order)
    local = {name: sympy.Symbol(name) for name in variables}
    try:
        expr = parse_expr(text.replace("^", "**"), local_dict=local)
    except Exception as e:
        raise InputError(f"cannot parse polynomial {text!r}: {e}")

    unknown = {str(s) for s in expr.free_symbols} - set(variables)
    if unknown:
        raise InputError(f"polynomial {text!r} uses unknown variables {sorted(unknown)}")
    try:
        return ring.from_expr(expr)
    except ValueError as e:
        raise InputError(f"not a polynomial over Q: {text!r} ({e})")


def basis_strings(I: Ideal, order: OrderTag = GREVLEX) -> List[str]:
    """Reduced basis in the given order, rendered in the ASCII grammar"""
    return [format_poly(g) for g in I.groebner_basis(order)]

"""
Exact Module
Provides exact rationals, dense univariate polynomials over Q, rational root
extraction and coprime-base factorization of finite rational multisets.
"""

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, factorial
from typing import Dict, Iterable, List, Sequence, Tuple, Union

import sympy
from sympy import divisors
from sympy.polys.domains import QQ

from modules.error_handler import InputError, ZeroInput

logger = logging.getLogger(__name__)

Rational = Fraction
RationalLike = Union[int, Fraction, str]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rational(value: RationalLike) -> Fraction:
    """Parse "p/q", "p", an int or a Fraction into a reduced Fraction"""
    if isinstance(value, bool):
        raise InputError(f"expected a rational, got {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, sympy.Rational):
        return from_sympy(value)
    if not isinstance(value, str):
        raise InputError(f"expected a rational string, got {value!r}")

    match = _RATIONAL_RE.match(value)
    if not match:
        raise InputError(f"not a rational number: {value!r}")

    numerator, denominator = match.group(1), match.group(2)
    if denominator is not None and int(denominator) == 0:
        raise InputError(f"zero denominator in {value!r}")
    return Fraction(int(numerator), int(denominator or 1))


def format_rational(value: Fraction) -> str:
    """Serialize as "p/q" or "p", sign on the numerator"""
    return str(Fraction(value))


def to_sympy(value: Fraction) -> sympy.Rational:
    return sympy.Rational(value.numerator, value.denominator)


def from_sympy(value) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


def to_qq(value: Fraction):
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def from_qq(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


@dataclass(frozen=True)
class UniPoly:
    """Dense polynomial over Q, lowest degree first"""

    coefficients: Tuple[Fraction, ...] = ()

    def __post_init__(self):
        coeffs = [Fraction(c) for c in self.coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @classmethod
    def constant(cls, value: RationalLike) -> "UniPoly":
        return cls((parse_rational(value),))

    @classmethod
    def monomial(cls, degree: int, coefficient: RationalLike = 1) -> "UniPoly":
        return cls((Fraction(0),) * degree + (parse_rational(coefficient),))

    @classmethod
    def binomial(cls, d: int) -> "UniPoly":
        """C(t, d) = t(t-1)...(t-d+1)/d! as a polynomial in t"""
        result = cls.constant(1)
        for i in range(d):
            result = result * cls((Fraction(-i), Fraction(1)))
        return result.scale(Fraction(1, factorial(d)))

    @classmethod
    def from_sympy(cls, poly: sympy.Poly) -> "UniPoly":
        return cls(tuple(from_sympy(c) for c in reversed(poly.all_coeffs())))

    def to_sympy(self, symbol: sympy.Symbol) -> sympy.Poly:
        coeffs = [to_sympy(c) for c in reversed(self.coefficients)] or [sympy.Integer(0)]
        return sympy.Poly(coeffs, symbol, domain="QQ")

    @property
    def degree(self) -> int:
        """Degree, -1 for the zero polynomial"""
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def leading_coefficient(self) -> Fraction:
        return self.coefficients[-1] if self.coefficients else Fraction(0)

    def evaluate(self, x: RationalLike) -> Fraction:
        """Horner evaluation, exact"""
        x = parse_rational(x)
        value = Fraction(0)
        for c in reversed(self.coefficients):
            value = value * x + c
        return value

    __call__ = evaluate

    def scale(self, factor: Fraction) -> "UniPoly":
        return UniPoly(tuple(c * factor for c in self.coefficients))

    def __add__(self, other: "UniPoly") -> "UniPoly":
        size = max(len(self.coefficients), len(other.coefficients))
        a = self.coefficients + (Fraction(0),) * (size - len(self.coefficients))
        b = other.coefficients + (Fraction(0),) * (size - len(other.coefficients))
        return UniPoly(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self) -> "UniPoly":
        return self.scale(Fraction(-1))

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __mul__(self, other: "UniPoly") -> "UniPoly":
        if self.is_zero() or other.is_zero():
            return UniPoly()
        product = [Fraction(0)] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                product[i + j] += a * b
        return UniPoly(tuple(product))

    def __pow__(self, exponent: int) -> "UniPoly":
        result = UniPoly.constant(1)
        for _ in range(exponent):
            result = result * self
        return result

    def __divmod__(self, other: "UniPoly") -> Tuple["UniPoly", "UniPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        remainder = list(self.coefficients)
        quotient = [Fraction(0)] * max(0, len(remainder) - other.degree)
        lead = other.leading_coefficient
        while len(remainder) - 1 >= other.degree and any(remainder):
            shift = len(remainder) - 1 - other.degree
            factor = remainder[-1] / lead
            quotient[shift] = factor
            for i, c in enumerate(other.coefficients):
                remainder[shift + i] -= factor * c
            remainder.pop()
        return UniPoly(tuple(quotient)), UniPoly(tuple(remainder))

    def __str__(self) -> str:
        return format_univariate(self)


def format_univariate(poly: UniPoly, variable: str = "t") -> str:
    if poly.is_zero():
        return "0"
    parts = []
    for degree in range(poly.degree, -1, -1):
        c = poly.coefficients[degree]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        magnitude = abs(c)
        if degree == 0:
            body = format_rational(magnitude)
        else:
            power = variable if degree == 1 else f"{variable}^{degree}"
            body = power if magnitude == 1 else f"{format_rational(magnitude)}*{power}"
        parts.append((sign, body))

    first_sign, first_body = parts[0]
    text = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


def _divide_linear(coefficients: List[Fraction], root: Fraction) -> Tuple[List[Fraction], Fraction]:
    """Synthetic division by (t - root); returns quotient and remainder"""
    quotient = [Fraction(0)] * (len(coefficients) - 1)
    carry = Fraction(0)
    for i in range(len(coefficients) - 1, 0, -1):
        carry = carry * root + coefficients[i]
        quotient[i - 1] = carry
    remainder = carry * root + coefficients[0]
    return quotient, remainder


def rational_roots(p: UniPoly) -> Tuple[Dict[Fraction, int], UniPoly]:
    """
    All rational roots of p with multiplicities, plus the cofactor left
    after dividing them out.

    Candidates are the fractions a/b with a dividing the trailing and b the
    leading coefficient of the denominator-cleared polynomial.
    """
    if p.is_zero():
        raise ZeroInput("rational_roots of the zero polynomial")

    roots: Dict[Fraction, int] = {}
    coeffs = list(p.coefficients)

    zero_multiplicity = 0
    while coeffs[0] == 0:
        coeffs.pop(0)
        zero_multiplicity += 1
    if zero_multiplicity:
        roots[Fraction(0)] = zero_multiplicity

    denominator_lcm = 1
    for c in coeffs:
        denominator_lcm = denominator_lcm * c.denominator // gcd(denominator_lcm, c.denominator)
    integer_coeffs = [int(c * denominator_lcm) for c in coeffs]

    candidates = set()
    if len(integer_coeffs) > 1:
        for a in divisors(abs(integer_coeffs[0])):
            for b in divisors(abs(integer_coeffs[-1])):
                candidates.add(Fraction(a, b))
                candidates.add(Fraction(-a, b))

    for candidate in sorted(candidates):
        while len(coeffs) > 1:
            quotient, remainder = _divide_linear(coeffs, candidate)
            if remainder != 0:
                break
            coeffs = quotient
            roots[candidate] = roots.get(candidate, 0) + 1

    cofactor = UniPoly(tuple(coeffs))
    logger.debug(f"rational_roots({p}): {len(roots)} distinct root(s), cofactor {cofactor}")
    return roots, cofactor


@dataclass(frozen=True)
class CoprimeBase:
    """Pairwise coprime integers > 1"""

    elements: Tuple[int, ...] = ()

    def __post_init__(self):
        elements = tuple(int(e) for e in self.elements)
        for i, a in enumerate(elements):
            if a <= 1:
                raise ValueError(f"coprime base element must exceed 1, got {a}")
            for b in elements[i + 1:]:
                if gcd(a, b) != 1:
                    raise ValueError(f"coprime base elements {a} and {b} share a factor")
        object.__setattr__(self, "elements", elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def reconstruct(self, exponents: Sequence[int], sign: int = 1) -> Fraction:
        value = Fraction(sign)
        for base, e in zip(self.elements, exponents):
            value *= Fraction(base) ** e
        return value


def _refine(values: Iterable[int]) -> List[int]:
    """Pairwise-coprime refinement by repeated gcd splitting"""
    base: List[int] = []
    pending = [v for v in values if v > 1]
    while pending:
        v = pending.pop()
        for index, b in enumerate(base):
            g = gcd(v, b)
            if g > 1:
                del base[index]
                pending.extend(x for x in (g, b // g, v // g) if x > 1)
                break
        else:
            base.append(v)
    return sorted(base)


def _valuation(n: int, base: int) -> int:
    count = 0
    while n % base == 0:
        n //= base
        count += 1
    return count


def coprime_base(xs: Sequence[RationalLike]) -> Tuple[CoprimeBase, List[List[int]], List[int]]:
    """
    Factor every x over a common pairwise-coprime base:
    x_i = signs[i] * prod_j base[j] ** exps[i][j].
    """
    values = [parse_rational(x) for x in xs]
    if any(v == 0 for v in values):
        raise ZeroInput("coprime_base needs nonzero rationals")

    pool = []
    for v in values:
        pool.append(abs(v.numerator))
        pool.append(v.denominator)
    base = CoprimeBase(tuple(_refine(pool)))

    exps = []
    signs = []
    for v in values:
        numerator, denominator = abs(v.numerator), v.denominator
        exps.append([_valuation(numerator, b) - _valuation(denominator, b) for b in base])
        signs.append(-1 if v < 0 else 1)

    return base, exps, signs

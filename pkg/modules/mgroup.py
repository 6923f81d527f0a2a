"""
Multiplicative Group Module
Provides the group G generated by nonzero eigenvalues as a finitely generated
abelian group: rank, torsion order and the full relation lattice
{k : prod a_i^k_i = 1}.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from modules.error_handler import InputError, ZeroEigenvalue
from modules.exact import CoprimeBase, coprime_base, format_rational, parse_rational
from modules.intlinalg import Lattice, congruence_sublattice, int_matrix, kernel, rank
from modules.performance import performance

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class SymbolicScalar:
    """modulus * exp(2 pi i phase): a positive rational times a root of unity"""

    modulus: Fraction
    phase: Fraction = Fraction(0)

    def __post_init__(self):
        modulus = Fraction(self.modulus)
        if modulus <= 0:
            raise ValueError(f"modulus must be positive, got {modulus}")
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "phase", Fraction(self.phase) % 1)

    @classmethod
    def from_rational(cls, value: Any, phase: Any = 0) -> "SymbolicScalar":
        """value * exp(2 pi i phase); a negative value moves its sign into the phase"""
        value = parse_rational(value)
        phase = parse_rational(phase)
        if value == 0:
            raise ZeroEigenvalue("zero has no place in a multiplicative group")
        if value < 0:
            return cls(-value, phase + HALF)
        return cls(value, phase)

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "SymbolicScalar":
        if not isinstance(data, dict) or "rational" not in data:
            raise InputError('symbolic eigenvalue needs a "rational" field')
        return cls.from_rational(data["rational"], data.get("phase", "0"))

    def to_json(self) -> Dict[str, str]:
        return {"rational": format_rational(self.modulus), "phase": format_rational(self.phase)}

    def __mul__(self, other: "SymbolicScalar") -> "SymbolicScalar":
        return SymbolicScalar(self.modulus * other.modulus, self.phase + other.phase)

    def __pow__(self, k: int) -> "SymbolicScalar":
        return SymbolicScalar(self.modulus ** k, self.phase * k)

    def is_one(self) -> bool:
        return self.modulus == 1 and self.phase == 0

    def as_rational(self) -> Optional[Fraction]:
        """The value when it is real, else None"""
        if self.phase == 0:
            return self.modulus
        if self.phase == HALF:
            return -self.modulus
        return None

    def __str__(self) -> str:
        if self.phase == 0:
            return format_rational(self.modulus)
        return f"{format_rational(self.modulus)}*e^(2pi*i*{format_rational(self.phase)})"


@dataclass(frozen=True)
class MultGroupData:
    """Finitely generated subgroup of C* given by its generators"""

    generators: Tuple[SymbolicScalar, ...]
    base: CoprimeBase
    exponent_matrix: np.ndarray
    rank: int
    torsion_order: int
    relation_lattice: Lattice
    kernel: Lattice

    @property
    def is_torsionfree(self) -> bool:
        return self.torsion_order == 1

    def scalings(self, i: int) -> Optional[List[Fraction]]:
        """Rational values of the i-th powers of the generators, None if any is not real"""
        values = [(g ** i).as_rational() for g in self.generators]
        return None if any(v is None for v in values) else values


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


@performance.measure_time("build_group")
def build_group(eigs: Sequence[SymbolicScalar]) -> MultGroupData:
    """Rank, torsion order and relation lattice of the group generated by eigs"""
    eigs = tuple(e if isinstance(e, SymbolicScalar) else SymbolicScalar.from_rational(e)
                 for e in eigs)

    base, exps, _ = coprime_base([e.modulus for e in eigs])
    n = len(eigs)
    # columns are generators, rows are base elements
    A = int_matrix([[exps[i][j] for i in range(n)] for j in range(len(base))], cols=n)

    moduli_relations = kernel(A)
    phases = [e.phase for e in eigs]
    relations = congruence_sublattice(moduli_relations, phases)

    torsion = 1
    for v in moduli_relations.basis:
        s = sum((x * p for x, p in zip(v, phases)), Fraction(0)) % 1
        torsion = _lcm(torsion, s.denominator)

    group = MultGroupData(
        generators=eigs,
        base=base,
        exponent_matrix=A,
        rank=rank(A),
        torsion_order=torsion,
        relation_lattice=relations,
        kernel=moduli_relations,
    )
    logger.debug(
        f"G = <{', '.join(str(e) for e in eigs)}>: rank {group.rank}, torsion {torsion}, "
        f"relations {relations.to_json()}"
    )
    return group


def power_group(G: MultGroupData, q: int) -> MultGroupData:
    """The group generated by the q-th powers of the generators"""
    if q < 1:
        raise ValueError(f"power_group needs q >= 1, got {q}")
    if q == 1:
        return G
    return build_group([g ** q for g in G.generators])


def evaluate_relation(G: MultGroupData, v: Sequence[int]) -> SymbolicScalar:
    """prod g_i ** v_i as a symbolic scalar"""
    value = SymbolicScalar(Fraction(1))
    for g, k in zip(G.generators, v):
        value = value * (g ** k)
    return value

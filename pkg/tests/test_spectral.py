"""
Tests for characteristic polynomials, Jordan structure and decompositions
"""
from fractions import Fraction

import pytest
from sympy import ImmutableMatrix, Rational, diag

from modules.error_handler import (
    EigenvaluesNotRational, InputError, NotSquare, SingularInput,
    SingularInverse,
)
from modules.exact import UniPoly
from modules.spectral import (
    JordanBlockSpec, binomial_entries_hold, block_sizes_from_ranks, char_poly,
    falling_factorial_identity, jordan, jordan_block_power, jordan_matrix, matrix_entries,
    matrix_power, matrix_to_json, parse_matrix_json, split_nilpotent, su_decompose,
)


class TestMatrixInput:
    """Matrix JSON parsing and serialization."""

    def test_bare_rows(self):
        """Test a list of rows with rational strings."""
        M = parse_matrix_json([["1/2", 0], [3, "-4"]])
        assert M == ImmutableMatrix([[Rational(1, 2), 0], [3, -4]])

    def test_object_form(self):
        """Test the {"n", "entries"} form and the size check."""
        assert parse_matrix_json({"n": 1, "entries": [[5]]}) == ImmutableMatrix([[5]])
        with pytest.raises(InputError):
            parse_matrix_json({"n": 3, "entries": [[1, 2], [3, 4]]})

    def test_rejects(self):
        """Test non-square, ragged and malformed inputs."""
        with pytest.raises(NotSquare):
            parse_matrix_json([[1, 2]])
        with pytest.raises(InputError):
            parse_matrix_json([[1, 2], [3]])
        with pytest.raises(InputError):
            parse_matrix_json("[[1]]")
        with pytest.raises(InputError):
            parse_matrix_json([[0.5]])

    def test_to_json(self):
        """Test that entries serialize as rational strings."""
        data = matrix_to_json(ImmutableMatrix([[Rational(-3, 2), 1], [0, 2]]))
        assert data == {"n": 2, "entries": [["-3/2", "1"], ["0", "2"]]}
        assert matrix_entries(ImmutableMatrix([[1, 2], [3, 4]])) == [1, 2, 3, 4]


class TestJordan:
    """Characteristic polynomial and Jordan form."""

    def test_char_poly(self, example_matrix):
        """Test det(tI - M) = t^2 - 6t + 8."""
        assert char_poly(example_matrix) == UniPoly((8, -6, 1))

    def test_diagonalizable(self, example_matrix):
        """Test the Jordan data of a matrix with eigenvalues 2 and 4."""
        data = jordan(example_matrix)
        assert data.blocks == (JordanBlockSpec(2, 1), JordanBlockSpec(4, 1))
        assert data.P * data.J * data.P_inv == example_matrix
        assert data.nu == 0
        assert not data.has_zero_eigenvalue

    def test_conjugated_block(self):
        """Test that a conjugated 3x3 block with eigenvalue 2 is recovered."""
        J = jordan_matrix([JordanBlockSpec(2, 3)])
        P = ImmutableMatrix([[1, 1, 0], [0, 1, 1], [0, 0, 1]])
        data = jordan(P * J * P.inv())
        assert data.blocks == (JordanBlockSpec(2, 3),)
        assert data.P * data.J * data.P_inv == P * J * P.inv()

    def test_mixed_blocks(self):
        """Test a nilpotent block next to an invertible eigenvalue."""
        M = ImmutableMatrix([[0, 1, 0], [0, 0, 0], [0, 0, 2]])
        data = jordan(M)
        assert data.blocks == (JordanBlockSpec(0, 2), JordanBlockSpec(2, 1))
        assert data.nu == 2
        assert data.has_zero_eigenvalue

    def test_blocks_sorted_by_eigenvalue(self):
        """Test the canonical block order."""
        data = jordan(diag(3, -1, Rational(1, 2)))
        assert [b.eigenvalue for b in data.blocks] == [-1, Fraction(1, 2), 3]

    def test_non_rational(self):
        """Test that a rotation is refused with its irreducible factor."""
        with pytest.raises(EigenvaluesNotRational) as info:
            jordan(ImmutableMatrix([[0, -1], [1, 0]]))
        assert info.value.cofactor.degree == 2

    def test_block_sizes_from_ranks(self):
        """Test block counts read off the rank sequence."""
        M = jordan_matrix([JordanBlockSpec(1, 2), JordanBlockSpec(1, 1), JordanBlockSpec(5, 1)])
        assert block_sizes_from_ranks(M, Fraction(1)) == {2: 1, 1: 1}


class TestDecompositions:
    """Semisimple times unipotent, and the nilpotent split."""

    def test_su_decompose(self):
        """Test J = M_s M_u for a 2x2 block with eigenvalue 2."""
        M_s, M_u = su_decompose([JordanBlockSpec(2, 2)])
        assert M_s == diag(2, 2)
        assert M_u == ImmutableMatrix([[1, Rational(1, 2)], [0, 1]])
        assert M_s * M_u == jordan_matrix([JordanBlockSpec(2, 2)])

    def test_su_decompose_singular(self):
        """Test that a zero eigenvalue is refused."""
        with pytest.raises(SingularInput):
            su_decompose([JordanBlockSpec(0, 1)])

    def test_split_nilpotent(self):
        """Test that nilpotent coordinates move first."""
        blocks = [JordanBlockSpec(-1, 1), JordanBlockSpec(0, 2), JordanBlockSpec(3, 1)]
        nilpotent, invertible, perm = split_nilpotent(blocks)
        assert nilpotent == (JordanBlockSpec(0, 2),)
        assert invertible == (JordanBlockSpec(-1, 1), JordanBlockSpec(3, 1))
        assert perm == [1, 2, 0, 3]

    def test_matrix_power(self, example_matrix):
        """Test negative powers and the singular refusal."""
        assert matrix_power(example_matrix, -1) * example_matrix == diag(1, 1)
        assert matrix_power(example_matrix, 0) == diag(1, 1)
        with pytest.raises(SingularInverse):
            matrix_power(ImmutableMatrix([[0, 1], [0, 0]]), -1)


class TestBlockPowers:
    """Closed forms of powers of unipotent blocks."""

    @pytest.mark.parametrize("lam", [Fraction(1), Fraction(2), Fraction(1, 3), Fraction(-2)])
    def test_identities(self, lam):
        """Test binomial entries and the falling-factorial relation for m <= 5, k <= 10."""
        for m in range(1, 6):
            for k in range(0, 11):
                power = jordan_block_power(m, lam, k)
                assert binomial_entries_hold(power, lam, k)
                assert falling_factorial_identity(power, lam)

    def test_identity_detects_wrong_entry(self):
        """Test that a perturbed power fails the binomial check."""
        power = jordan_block_power(3, Fraction(1), 4).as_mutable()
        power[0, 2] += 1
        assert not binomial_entries_hold(power, Fraction(1), 4)
        assert not falling_factorial_identity(power, Fraction(1))


if __name__ == "__main__":
    pytest.main([__file__])

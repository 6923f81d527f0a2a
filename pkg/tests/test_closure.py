"""
Tests for block frames, unipotent curves, semisimple and product closures,
the closure pipeline and the power-evaluation oracle
"""
import random
from dataclasses import replace
from fractions import Fraction

import pytest
from sympy import ImmutableMatrix, Matrix, Rational, binomial, diag, zeros

from modules.closure import (
    GROUP, SEMIGROUP, BlockFrame, check_mode, closure_pipeline, conjugate_closure,
    coordinate_change_unipotent, curve_in_standard_coordinates, modes_agree, power_closure_check,
    product_closure, semisimple_closure, symbolic_diagonal_pipeline, unipotent_closure,
    verify_oracle, verify_symbolic,
)
from modules.error_handler import (
    DimensionMismatch, EigenvaluesNotRational, GroupModeOnSingular, InputError, NotSquare,
    NotUnipotent, ZeroMatrix,
)
from modules.mgroup import SymbolicScalar, build_group
from modules.multipoly import Ideal, evaluate, ideal_contains, ideal_equal, intersect_all, parse_poly
from modules.spectral import (
    JordanBlockSpec, jordan_matrix, matrix_entries, su_decompose, unipotent_block,
)
from test_acceptance import random_unimodular

VARS2 = ("x_1_1", "x_1_2", "x_2_1", "x_2_2")
VARS3 = tuple(f"x_{i}_{j}" for i in range(1, 4) for j in range(1, 4))


def ideal(variables, *texts):
    return Ideal(variables, [parse_poly(t, variables) for t in texts])


def vanishes_on(I, M):
    point = matrix_entries(M)
    return all(evaluate(g, point) == 0 for g in I.groebner_basis())


class TestBlockFrame:
    """Free and pinned coordinates of a Jordan layout."""

    def test_free_variables(self):
        """Test that only live blocks contribute first-row coordinates."""
        frame = BlockFrame((2, 1), (True, False))
        assert frame.n == 3
        assert frame.offsets == (0, 2)
        assert frame.free_variables() == ("x_1_1", "x_1_2")
        assert frame.diagonal_variables() == ("x_1_1",)

    def test_linear_equations(self):
        """Test that every non-free coordinate is pinned exactly once."""
        frame = BlockFrame((2, 1), (True, False))
        equations = frame.linear_equations()
        assert len(equations) == 9 - 2
        I = Ideal(frame.variables, equations)
        assert ideal_contains(I, parse_poly("x_2_2 - x_1_1", VARS3))
        assert ideal_contains(I, parse_poly("x_3_3", VARS3))

    def test_diagonal(self):
        """Test the all-diagonal frame."""
        frame = BlockFrame.diagonal(2)
        assert frame.free_variables() == ("x_1_1", "x_2_2")
        assert len(frame.linear_equations()) == 2

    def test_check_mode(self):
        """Test the mode guard."""
        assert check_mode(GROUP) == GROUP
        with pytest.raises(InputError):
            check_mode("monoid")


class TestUnipotentCurve:
    """Closure of powers of a unipotent matrix."""

    def test_parametrization_matches_powers(self):
        """Test that the curve at t = k is M_u^k for two blocks."""
        _, m_u = su_decompose([JordanBlockSpec(2, 3), JordanBlockSpec(3, 2)])
        curve = unipotent_closure(m_u, [3, 2])
        assert curve.superdiagonals == (Fraction(1, 2), Fraction(1, 3))
        assert not curve.is_trivial
        for k in range(0, 7):
            assert curve.evaluate(k) == m_u ** k

    def test_ideal_vanishes_on_powers(self):
        """Test that the curve ideal vanishes on positive and negative powers."""
        m_u = unipotent_block(3, Fraction(2))
        curve = unipotent_closure(m_u, [3])
        for k in range(-3, 7):
            assert vanishes_on(curve.curve_ideal, Matrix(m_u) ** k)
        assert not vanishes_on(curve.curve_ideal, unipotent_block(3, Fraction(1)))

    def test_trivial_curve(self):
        """Test that the identity gives a single point."""
        curve = unipotent_closure(ImmutableMatrix(diag(1, 1)), [1, 1])
        assert curve.is_trivial
        assert ideal_equal(curve.curve_ideal, ideal(VARS2, "x_1_1 - 1", "x_1_2", "x_2_1", "x_2_2 - 1"))

    def test_linear_span(self):
        """Test that a 2x2 block gives the line x_1_1 = x_2_2 = 1, x_2_1 = 0."""
        curve = unipotent_closure(unipotent_block(2, Fraction(1)), [2])
        span = Ideal(VARS2, curve.linear_space_equations)
        assert ideal_equal(span, ideal(VARS2, "x_1_1 - 1", "x_2_1", "x_2_2 - 1"))
        assert ideal_equal(curve.curve_ideal, span)

    def test_rejects(self):
        """Test non-unipotent inputs and layout mismatches."""
        with pytest.raises(NotUnipotent):
            unipotent_closure(Matrix([[2, 0], [0, 1]]), [1, 1])
        with pytest.raises(NotUnipotent):
            unipotent_closure(Matrix([[1, 0], [0, 1]]), [2])
        with pytest.raises(NotUnipotent):
            unipotent_closure(Matrix([[1, 0], [1, 1]]), [2])
        with pytest.raises(DimensionMismatch):
            unipotent_closure(Matrix([[1, 1], [0, 1]]), [1])
        with pytest.raises(NotSquare):
            unipotent_closure(Matrix([[1, 1]]), [1])

    def test_coordinate_change(self):
        """Test Phi (C(k, d) mu^d)_d = (k^j)_j."""
        mu = Fraction(5)
        Phi = coordinate_change_unipotent(4, mu)
        for k in range(-2, 6):
            column = Matrix([binomial(k, d) * Rational(5) ** d for d in range(4)])
            assert Phi * column == Matrix([Rational(k) ** j for j in range(4)])

    def test_standard_twisted_cubic(self):
        """Test that a 4x4 block curve becomes the affine twisted cubic."""
        _, m_u = su_decompose([JordanBlockSpec(Fraction(1, 5), 4)])
        curve = unipotent_closure(m_u, [4])
        names = ("x_1_1", "x_1_2", "x_1_3", "x_1_4")
        expected = ideal(names, "x_1_1 - 1", "x_1_2^2 - x_1_1*x_1_3",
                         "x_1_2*x_1_3 - x_1_1*x_1_4", "x_1_3^2 - x_1_2*x_1_4")
        assert ideal_equal(curve_in_standard_coordinates(curve), expected)


class TestSemisimpleClosure:
    """Torus closures and their torsion cosets."""

    def test_two_and_four(self):
        """Test diag(2, 4): x_1_1^2 = x_2_2 off a diagonal frame."""
        ss = semisimple_closure(build_group([2, 4]), 2)
        assert ideal_equal(ss.ideal, ideal(VARS2, "x_1_1^2 - x_2_2", "x_1_2", "x_2_1"))
        assert len(ss.component_ideals) == 1

    def test_torsion_cosets(self):
        """Test diag(-1, 2): two components x_1_1 = 1 and x_1_1 = -1."""
        ss = semisimple_closure(build_group([-1, 2]), 2)
        assert ideal_equal(ss.ideal, ideal(VARS2, "x_1_1^2 - 1", "x_1_2", "x_2_1"))
        first, second = ss.component_ideals
        assert ideal_equal(first, ideal(VARS2, "x_1_1 - 1", "x_1_2", "x_2_1"))
        assert ideal_equal(second, ideal(VARS2, "x_1_1 + 1", "x_1_2", "x_2_1"))
        assert ideal_equal(intersect_all([first, second]), ss.ideal)

    def test_root_of_unity_has_no_rational_components(self):
        """Test that non-real cosets leave the component ideals out."""
        ss = semisimple_closure(build_group([SymbolicScalar(Fraction(1), Fraction(1, 4))]), 1)
        assert ss.component_ideals is None
        assert ideal_equal(ss.ideal, ideal(("x_1_1",), "x_1_1^4 - 1"))

    def test_frame_mismatch(self):
        """Test that the frame must fit the matrix and the generators."""
        with pytest.raises(DimensionMismatch):
            semisimple_closure(build_group([2]), 2)

    def test_product_with_trivial_torus(self):
        """Test M = [[1, 1], [0, 1]]: the semisimple part is the identity."""
        frame = BlockFrame((2,), (True,))
        ss = semisimple_closure(build_group([1]), 2, frame=frame)
        curve = unipotent_closure(unipotent_block(2, Fraction(1)), [2])
        full, components = product_closure(ss, curve)
        expected = ideal(VARS2, "x_1_1 - 1", "x_2_1", "x_2_2 - 1")
        assert ideal_equal(full, expected)
        assert len(components) == 1

    def test_product_with_sign(self):
        """Test J(-1, 2): two parallel lines through +-I."""
        frame = BlockFrame((2,), (True,))
        ss = semisimple_closure(build_group([-1]), 2, frame=frame)
        _, m_u = su_decompose([JordanBlockSpec(-1, 2)])
        curve = unipotent_closure(m_u, [2])
        full, components = product_closure(ss, curve)
        assert ideal_equal(full, ideal(VARS2, "x_1_1^2 - 1", "x_2_1", "x_2_2 - x_1_1"))
        assert len(components) == 2
        J = jordan_matrix([JordanBlockSpec(-1, 2)])
        for k in range(-3, 5):
            assert vanishes_on(full, Matrix(J) ** k)


class TestClosurePipeline:
    """Closures of concrete matrices."""

    def test_example_jordan_ideal(self, example_matrix):
        """Test the Jordan-coordinate ideal of [[10, -8], [6, -4]]."""
        report = closure_pipeline(example_matrix, GROUP)
        assert report.dimension == 1
        assert report.num_components == 1
        assert report.rank_G == 1
        assert report.diagonalizable_part
        assert ideal_equal(report.jordan_ideal, ideal(VARS2, "x_1_1^2 - x_2_2", "x_1_2", "x_2_1"))
        for k in range(1, 6):
            assert vanishes_on(report.ideal, Matrix(example_matrix) ** k)

    def test_nilpotent(self):
        """Test that a nilpotent block closes to its finitely many powers."""
        M = jordan_matrix([JordanBlockSpec(0, 3)])
        report = closure_pipeline(M)
        assert report.nu == 3
        assert report.dimension == 0
        assert report.num_components == 0
        assert len(report.isolated_points) == 3
        assert vanishes_on(report.ideal, zeros(3, 3))
        assert not vanishes_on(report.ideal, Matrix.eye(3))

    def test_zero_block_of_size_one(self):
        """Test diag(0, 2): no isolated points, a line in x_2_2."""
        report = closure_pipeline(diag(0, 2))
        assert report.nu == 1
        assert report.isolated_points == ()
        assert report.dimension == 1
        assert ideal_equal(report.ideal, ideal(VARS2, "x_1_1", "x_1_2", "x_2_1"))

    def test_matches_symbolic(self):
        """Test that the rational and symbolic routes agree on diag(2, 4)."""
        rational = closure_pipeline(diag(2, 4))
        symbolic = symbolic_diagonal_pipeline([2, 4])
        assert ideal_equal(rational.ideal, symbolic.ideal)

    def test_conjugation(self, example_matrix):
        """Test that conjugating the closure equals the closure of the conjugate."""
        g = Matrix([[1, 1], [0, 1]])
        conjugated = closure_pipeline(g * example_matrix * g.inv(), GROUP)
        moved = conjugate_closure(closure_pipeline(example_matrix, GROUP), g)
        assert ideal_equal(conjugated.ideal, moved)

    @pytest.mark.parametrize("seed", [7, 11, 19])
    def test_conjugation_random(self, seed, example_matrix, point_and_line_matrix):
        """Test conjugation invariance for seeded random unimodular g."""
        rng = random.Random(seed)
        for M, mode in ((example_matrix, GROUP), (point_and_line_matrix, SEMIGROUP)):
            g = random_unimodular(rng, M.rows)
            conjugated = closure_pipeline(ImmutableMatrix(g * M * g.inv()), mode)
            moved = conjugate_closure(closure_pipeline(M, mode), g)
            assert ideal_equal(conjugated.ideal, moved)

    def test_rejects(self):
        """Test the refusals of the pipeline."""
        with pytest.raises(ZeroMatrix):
            closure_pipeline(zeros(2, 2))
        with pytest.raises(GroupModeOnSingular):
            closure_pipeline(Matrix([[0, 1], [0, 0]]), GROUP)
        with pytest.raises(EigenvaluesNotRational):
            closure_pipeline(Matrix([[0, -1], [1, 0]]))
        with pytest.raises(NotSquare):
            closure_pipeline(Matrix([[1, 2]]))


class TestSymbolicPipeline:
    """Diagonal matrices with root-of-unity eigenvalues."""

    def test_fourth_root_of_unity(self):
        """Test diag(i): four points on the unit circle."""
        eigs = [SymbolicScalar(Fraction(1), Fraction(1, 4))]
        report = symbolic_diagonal_pipeline(eigs)
        assert report.torsion_order == 4
        assert report.num_components == 4
        assert report.dimension == 0
        assert report.component_ideals is None
        assert ideal_equal(report.ideal, ideal(("x_1_1",), "x_1_1^4 - 1"))
        assert verify_symbolic(eigs, report, 10)

    def test_wrong_eigenvalue_fails(self):
        """Test that the symbolic oracle catches a third root of unity."""
        report = symbolic_diagonal_pipeline([SymbolicScalar(Fraction(1), Fraction(1, 4))])
        verdict = verify_symbolic([SymbolicScalar(Fraction(1), Fraction(1, 3))], report, 5)
        assert not verdict
        assert verdict.point == "diag^1"

    def test_sign_and_two(self):
        """Test diag(-1, 2): rank 1, torsion 2."""
        report = symbolic_diagonal_pipeline(["-1", "2"])
        assert report.dimension == 1
        assert report.num_components == 2
        assert len(report.component_ideals) == 2

    def test_empty(self):
        """Test that at least one eigenvalue is needed."""
        with pytest.raises(InputError):
            symbolic_diagonal_pipeline([])


class TestOracle:
    """Exact evaluation of closure ideals on powers."""

    def test_passes(self, example_matrix):
        """Test group-mode evaluation on M^k and M^-k."""
        report = closure_pipeline(example_matrix, GROUP)
        verdict = verify_oracle(example_matrix, report, 10)
        assert verdict
        assert verdict.checked == 20
        assert str(verdict).startswith("Pass")

    def test_planted_failure(self, example_matrix):
        """Test that an ideal too large for the orbit is caught at M^1."""
        report = closure_pipeline(example_matrix, GROUP)
        wrong = replace(report, ideal=ideal(VARS2, "x_1_1"))
        verdict = verify_oracle(example_matrix, wrong, 10)
        assert not verdict
        assert verdict.point == "M^1"
        assert verdict.generator == "x_1_1"
        assert verdict.value == "10"

    def test_isolated_points_checked(self):
        """Test that isolated points are part of the evaluation."""
        M = Matrix([[0, 1, 0], [0, 0, 0], [0, 0, 2]])
        report = closure_pipeline(M)
        verdict = verify_oracle(M, report, 5)
        assert verdict
        assert verdict.checked == 5 + 1

    def test_depth(self, example_matrix):
        """Test that the depth must be positive."""
        report = closure_pipeline(example_matrix)
        with pytest.raises(InputError):
            verify_oracle(example_matrix, report, 0)


class TestPowerCheck:
    """Closures of M and M^q."""

    def test_torsionfree(self, example_matrix):
        """Test that a torsionfree group keeps its closure under squaring."""
        assert power_closure_check(example_matrix, 2)
        assert power_closure_check(example_matrix, 1)

    def test_torsion(self):
        """Test that diag(-1, 2) loses a component under squaring."""
        assert not power_closure_check(diag(-1, 2), 2)

    def test_zero_exponent(self, example_matrix):
        """Test that q = 0 is refused."""
        with pytest.raises(InputError):
            power_closure_check(example_matrix, 0)

    def test_modes_agree(self, example_matrix):
        """Test that group and semigroup closures of an invertible matrix coincide."""
        assert modes_agree(example_matrix)
        assert closure_pipeline(example_matrix, SEMIGROUP).mode == SEMIGROUP


if __name__ == "__main__":
    pytest.main([__file__])

# tests/test_spectral.py
import pytest
from fractions import Fraction

from src.features.exact import RationalMatrix, mat_det, mat_mul
from src.features.graph import distance_partition, quotient_matrix, sphere_size
from src.features.spectral import (
    det_q_closed,
    distance_i_quotient_theoretical,
    dual_transform,
    entry31_closed,
    jordan_triple,
    krawtchouk,
    krawtchouk_closed_n,
    prop1_matrix,
    s_prime_matrix,
    spectral_context,
)
from src.utils.error_handler import InvalidParameterError


class TestJordanTriple:
    def test_prop1_matrix(self):
        """Test the quotient matrix."""
        assert prop1_matrix(6, 4) == RationalMatrix([[0, 18, 0], [1, 2, 15], [0, 6, 12]])
        assert prop1_matrix(4, 2).row_sums() == [4, 4, 4]

    def test_identities_over_grid(self):
        """Test matrix identities over a parameter grid."""
        for n in range(2, 41):
            for q in range(2, 17):
                triple = jordan_triple(n, q)
                s_prime = s_prime_matrix(n, q)
                assert mat_mul(s_prime, triple.Q) == mat_mul(triple.Q, triple.J)
                assert mat_mul(triple.Q, triple.Qinv) == RationalMatrix.identity(3)
                assert mat_det(triple.Q) == det_q_closed(n, q)

    def test_det_q_4_2(self):
        """Test a determinant."""
        assert det_q_closed(4, 2) == Fraction(-8, 3)

    def test_eigenvalues(self):
        """Test eigenvalues."""
        assert jordan_triple(5, 3).J == RationalMatrix.diagonal([3, 5, 0])
        assert jordan_triple(5, 4).J == RationalMatrix.diagonal([Fraction(13, 4), 5, 0])
        assert spectral_context(6, 4).eigen_integral
        assert not spectral_context(5, 4).eigen_integral

    def test_dual_transform_shape(self):
        """Test the dual transform shape."""
        with pytest.raises(InvalidParameterError):
            dual_transform(RationalMatrix([[1, 2]]), 2, 2)

    def test_small_parameters_rejected(self):
        """Test small parameters."""
        with pytest.raises(InvalidParameterError):
            jordan_triple(1, 2)


class TestKrawtchouk:
    def test_value(self):
        """Test Krawtchouk values."""
        assert krawtchouk(6, 0, 4, 6) == 729

    def test_degree_n_closed_form(self):
        """Test the degree-n closed form."""
        for q in range(2, 10):
            for n in range(0, 21):
                for x in range(0, n + 1):
                    assert krawtchouk(n, x, q, n) == krawtchouk_closed_n(x, q, n)

    def test_at_zero_is_sphere_size(self):
        """Test the value at zero."""
        for q in range(2, 6):
            for n in range(1, 16):
                for r in range(0, n + 1):
                    assert krawtchouk(r, 0, q, n) == sphere_size(n, q, r)

    def test_degree_range(self):
        """Test the degree range."""
        with pytest.raises(InvalidParameterError):
            krawtchouk(5, 0, 2, 4)


class TestDistanceQuotients:
    def test_distance_one_recovers_prop1(self):
        """Test that distance 1 gives the quotient matrix."""
        for n, q in [(4, 2), (6, 4), (8, 2), (10, 8), (11, 3)]:
            assert distance_i_quotient_theoretical(n, q, 1) == prop1_matrix(n, q)

    def test_distance_n(self):
        """Test distance n."""
        assert distance_i_quotient_theoretical(4, 2, 4) == RationalMatrix.identity(3)
        assert distance_i_quotient_theoretical(8, 2, 8) == RationalMatrix.identity(3)
        assert distance_i_quotient_theoretical(6, 4, 6)[2, 0] == 11

    def test_non_integral_eigenvalue(self):
        """Test a non-integral eigenvalue."""
        with pytest.raises(InvalidParameterError):
            distance_i_quotient_theoretical(5, 4, 1)

    @pytest.mark.parametrize("fixture_name,n,q", [
        ("repetition4", 4, 2),
        ("hexacode", 6, 4),
    ])
    def test_enumeration_agrees(self, request, fixture_name, n, q):
        """Test against enumeration."""
        code = request.getfixturevalue(fixture_name)
        record = distance_partition(code.ranks(), n, q)
        for i in range(1, n + 1):
            assert quotient_matrix(record.partition, n, q, i) == distance_i_quotient_theoretical(n, q, i)

    @pytest.mark.slow
    def test_enumeration_agrees_h8_2(self):
        """Test against enumeration in H(8,2)."""
        from src.features.codes import construct_extended_binary_hamming
        code = construct_extended_binary_hamming(3)
        record = distance_partition(code.ranks(), 8, 2)
        for i in range(1, 9):
            assert quotient_matrix(record.partition, 8, 2, i) == distance_i_quotient_theoretical(8, 2, i)


class TestEntry31:
    def test_matches_matrix_product(self):
        """Test against the matrix product."""
        for q in range(2, 10):
            for n in range(2, 61):
                if (n - 2) % q:
                    continue
                assert entry31_closed(n, q) == distance_i_quotient_theoretical(n, q, n)[2, 0]

    def test_values(self):
        """Test entry values."""
        assert entry31_closed(6, 4) == 11
        assert entry31_closed(8, 2) == 0
        assert entry31_closed(22, 4).denominator != 1

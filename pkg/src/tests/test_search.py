# tests/test_search.py
import pytest
from fractions import Fraction

from src.features.codes import (
    verify_extended_perfect_fast,
    verify_extended_perfect_prop1,
    verify_extended_perfect_puncture,
)
from src.features.search import SearchTask, count_extended_perfect, exhaustive_search, search_space_bits
from src.utils.error_handler import IntractableSearchError, InvalidParameterError


class TestSearchTask:
    def test_target_size(self):
        """Test target sizes."""
        assert SearchTask(4, 2).target_size == 2
        assert SearchTask(6, 4).target_size == 64
        assert SearchTask(3, 2).target_size == Fraction(4, 3)

    def test_invalid(self):
        """Test invalid tasks."""
        with pytest.raises(InvalidParameterError):
            SearchTask(1, 2)


class TestExhaustiveSearch:
    def test_h4_2_all_codes(self):
        """Test every code in H(4,2)."""
        result = exhaustive_search(SearchTask(4, 2, normalize=False))
        assert result.count == 8
        assert len(result.codes) == 8
        for code in result.codes:
            (u, v) = code.word_list()
            assert all(a != b for a, b in zip(u, v))
            for route in (verify_extended_perfect_prop1, verify_extended_perfect_puncture,
                          verify_extended_perfect_fast):
                assert route(code).accepted

    def test_lexicographic_order(self):
        """Test result order."""
        result = exhaustive_search(SearchTask(4, 2, normalize=False))
        lists = [code.word_list() for code in result.codes]
        assert lists == sorted(lists)

    def test_normalized_h4_2(self):
        """Test the normalized search in H(4,2)."""
        result = exhaustive_search(SearchTask(4, 2))
        assert result.count == 1
        assert result.codes[0].word_list() == [(0, 0, 0, 0), (1, 1, 1, 1)]
        assert result.normalized

    def test_non_integral_target(self):
        """Test a non-integral target size."""
        result = exhaustive_search(SearchTask(3, 2))
        assert result.count == 0
        assert "not an integer" in result.reason

    def test_pool_cap(self):
        """Test the pool cap."""
        with pytest.raises(IntractableSearchError):
            exhaustive_search(SearchTask(4, 2, normalize=False), pool_cap=10)

    def test_search_space_estimate(self):
        """Pools under the size cap still fail fast when the subset count is astronomical."""
        with pytest.raises(IntractableSearchError) as exc:
            exhaustive_search(SearchTask(6, 4, count_only=True))
        assert exc.value.estimate_bits == search_space_bits(3402, 63)
        assert exc.value.estimate_bits > 64

    def test_search_space_cap_is_configurable(self):
        """The subset-count cap applies before any backtracking."""
        assert search_space_bits(16, 2) == 7
        with pytest.raises(IntractableSearchError):
            exhaustive_search(SearchTask(4, 2, normalize=False), space_bits_cap=6)
        assert exhaustive_search(SearchTask(4, 2, normalize=False), space_bits_cap=7).count == 8

    def test_workers_do_not_change_result(self):
        """Test that workers do not change the result."""
        one = exhaustive_search(SearchTask(4, 2, normalize=False), workers=1)
        many = exhaustive_search(SearchTask(4, 2, normalize=False), workers=4)
        assert [c.word_list() for c in one.codes] == [c.word_list() for c in many.codes]

    def test_to_dict(self):
        """Test result serialization."""
        data = exhaustive_search(SearchTask(4, 2, count_only=True)).to_dict()
        assert data["count"] == 1
        assert data["target_size"] == "2"
        assert data["scope"] == "labeled codes containing the zero word"


class TestCounts:
    def test_h4_2(self):
        """Test the count in H(4,2)."""
        assert count_extended_perfect(4, 2) == 8

    @pytest.mark.parametrize("q", [2, 3, 4, 5])
    def test_length_two(self, q):
        """Test counts at length two."""
        assert count_extended_perfect(2, q) == q * q
        assert count_extended_perfect(2, q, normalize=True) == 1

    @pytest.mark.parametrize("n,q", [(2, 3), (4, 2), (3, 3)])
    def test_normalization_identity(self, n, q):
        """Test the normalized and unnormalized counts against each other."""
        task = SearchTask(n, q)
        everything = count_extended_perfect(n, q)
        with_zero = count_extended_perfect(n, q, normalize=True)
        assert (everything == 0) == (with_zero == 0)
        if task.target_size.denominator == 1:
            assert everything * task.target_size == q ** n * with_zero

    @pytest.mark.slow
    def test_h5_3_has_no_code(self):
        """Test that H(5,3) has no code."""
        assert count_extended_perfect(5, 3, normalize=True) == 0

"""
Unit tests for local_model.py
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.core.errors import ContractViolation, PreconditionError
from src.core.local_model import (
    BiTensorElement,
    FiltrationCoordinates,
    PairedModuleElement,
    alpha,
    alpha_subtop_reduction,
    alpha_top_reduction,
    basis_element,
    classify_symmetry,
    connection,
    coordinates,
    expand,
    filtration_level,
    is_symmetric,
    monomial,
    multiplication_map,
    multiply,
    power,
    random_element,
    swap,
    unit,
    wedge_kernel_check,
    wedge_kernel_report,
    zero,
)
from src.core.modp import PrimeChar

PRIMES = [2, 3, 5, 7]


def _random_pair(p, seed):
    rng = np.random.default_rng([seed, p])
    return random_element(p, rng), random_element(p, rng)


class TestBiTensorElement:
    """Test element construction and arithmetic"""

    def test_shape_is_validated(self):
        with pytest.raises(ContractViolation):
            BiTensorElement(PrimeChar(3), np.zeros((2, 3, 2)))

    def test_coefficients_reduced_and_frozen(self):
        x = BiTensorElement(PrimeChar(3), np.full((3, 3, 2), 4))
        assert int(x.coeffs[0, 0, 0]) == 1
        with pytest.raises(ValueError):
            x.coeffs[0, 0, 0] = 2

    def test_mixed_parameters_rejected(self):
        with pytest.raises(ContractViolation):
            unit(3) + unit(5)
        with pytest.raises(ContractViolation):
            unit(3, trunc=2) + unit(3, trunc=3)

    def test_monomial_index_checked(self):
        with pytest.raises(PreconditionError):
            monomial(3, 3, 0)

    def test_scalar_multiplication(self):
        assert monomial(5, 1, 2) * 3 == monomial(5, 1, 2, coeff=3)
        assert 2 * monomial(5, 1, 2) == monomial(5, 1, 2, coeff=2)

    def test_to_dict(self):
        x = monomial(3, 1, 2) + monomial(3, 0, 0, s_power=1, coeff=2)
        assert x.to_dict() == {"0,0": [0, 2], "1,2": [1, 0]}

    def test_hash_consistent_with_eq(self):
        assert hash(alpha(5)) == hash(alpha(5) + zero(5))


class TestMultiply:
    """Test ring structure"""

    def test_t_power_folds_to_s(self):
        # t^2 · t = t^3 = s on the left for p = 3
        x = multiply(monomial(3, 2, 0), monomial(3, 1, 0))
        assert x == monomial(3, 0, 0, s_power=1)

    def test_s_is_central_across_factors(self):
        # (t^2⊗1)(t⊗1) = s·1⊗1 = (1⊗t^2)(1⊗t)
        left = multiply(monomial(3, 2, 0), monomial(3, 1, 0))
        right = multiply(monomial(3, 0, 2), monomial(3, 0, 1))
        assert left == right

    def test_truncation_drops_s_squared(self):
        x = monomial(2, 1, 1)
        # (t⊗t)^2 = s⊗s → s^2 = 0 at M = 2
        assert multiply(x, x).is_zero()
        assert not multiply(monomial(2, 1, 1, trunc=3), monomial(2, 1, 1, trunc=3)).is_zero()

    @pytest.mark.parametrize("p", PRIMES)
    def test_commutative_and_associative(self, p):
        rng = np.random.default_rng(p)
        x, y, z = (random_element(p, rng) for _ in range(3))
        assert multiply(x, y) == multiply(y, x)
        assert multiply(multiply(x, y), z) == multiply(x, multiply(y, z))

    @pytest.mark.parametrize("p", PRIMES)
    def test_unit_is_identity(self, p):
        x, _ = _random_pair(p, 7)
        assert multiply(unit(p), x) == x


class TestAlpha:
    """Test α and its powers"""

    @pytest.mark.parametrize("p", PRIMES)
    def test_nilpotent_of_order_p(self, p):
        a = alpha(p)
        assert power(a, p).is_zero()
        assert not power(a, p - 1).is_zero()

    @pytest.mark.parametrize("p", PRIMES)
    def test_basis_element_matches_product(self, p):
        a = alpha(p)
        for k in range(p):
            for m in range(p):
                direct = basis_element(p, k, m)
                assert direct == multiply(monomial(p, k, 0), power(a, m))

    def test_alpha_char_two(self):
        assert alpha(2) == monomial(2, 0, 1) + monomial(2, 1, 0)


class TestConnection:
    """Test the canonical connection"""

    @pytest.mark.parametrize("p", PRIMES)
    def test_alpha_powers(self, p):
        a = alpha(p)
        for l in range(1, p):
            assert connection(power(a, l)) == power(a, l - 1) * (-l)

    def test_constants_horizontal(self):
        assert connection(unit(5)).is_zero()
        assert connection(monomial(5, 0, 3, s_power=1)).is_zero()

    def test_left_derivative(self):
        assert connection(monomial(5, 3, 2)) == monomial(5, 2, 2, coeff=3)

    @settings(max_examples=40, deadline=None)
    @given(p=st.sampled_from(PRIMES), seed=st.integers(min_value=0, max_value=2**32 - 1))
    def test_leibniz(self, p, seed):
        x, y = _random_pair(p, seed)
        assert connection(multiply(x, y)) == multiply(connection(x), y) + multiply(x, connection(y))


class TestSwap:
    """Test the swap involution"""

    @pytest.mark.parametrize("p", PRIMES)
    def test_alpha_sign(self, p):
        a = alpha(p)
        for l in range(p):
            assert swap(power(a, l)) == power(a, l) * ((-1) ** l)

    @settings(max_examples=25, deadline=None)
    @given(p=st.sampled_from(PRIMES), seed=st.integers(min_value=0, max_value=2**32 - 1))
    def test_ring_involution(self, p, seed):
        x, y = _random_pair(p, seed)
        assert swap(swap(x)) == x
        assert swap(multiply(x, y)) == multiply(swap(x), swap(y))


class TestCoordinates:
    """Test coordinates and filtration levels"""

    @pytest.mark.parametrize("p", PRIMES)
    def test_basis_elements(self, p):
        for k in range(p):
            for m in range(p):
                c = coordinates(basis_element(p, k, m))
                expected = np.zeros((p, p, 2), dtype=np.int64)
                expected[k, m, 0] = 1
                assert np.array_equal(c.coeffs, expected)
                assert c.level() == m

    @pytest.mark.parametrize("p", PRIMES)
    def test_round_trip(self, p):
        rng = np.random.default_rng(p + 100)
        for _ in range(10):
            x = random_element(p, rng)
            assert expand(coordinates(x)) == x

    def test_zero_level(self):
        assert filtration_level(zero(5)) == 5
        c = FiltrationCoordinates(PrimeChar(3), np.zeros((3, 3, 2), dtype=np.int64))
        assert c.level() == 3

    def test_s_multiple_keeps_level(self):
        x = basis_element(5, 2, 3)
        s_times = multiply(monomial(5, 0, 0, s_power=1), basis_element(5, 1, 3))
        assert filtration_level(x) == 3
        assert filtration_level(s_times) == 3

    @pytest.mark.parametrize("p", PRIMES)
    def test_connection_lowers_level_by_at_most_one(self, p):
        for m in range(p):
            for k in range(p):
                assert filtration_level(connection(basis_element(p, k, m))) >= m - 1

    @pytest.mark.parametrize("p", PRIMES)
    def test_multiplication_kernel(self, p):
        for k in range(p):
            image = multiplication_map(basis_element(p, k, 0))
            assert image[k, 0] == 1 and image.sum() == 1
            for m in range(1, p):
                assert not np.any(multiplication_map(basis_element(p, k, m)))


class TestSymmetry:
    """Test the symmetry classification"""

    @pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
    def test_classification_matches(self, p):
        report = classify_symmetry(p)
        assert report.matches
        assert len(report.symmetric_rows(p - 1)) == p

    @pytest.mark.parametrize("p", [3, 5, 7])
    def test_subtop_never_symmetric_in_odd_characteristic(self, p):
        assert classify_symmetry(p).symmetric_rows(p - 2) == []

    def test_subtop_char_two(self):
        rows = classify_symmetry(2).symmetric_rows(0)
        assert [row.k for row in rows] == [0]

    def test_top_reduction_example(self):
        # p = 3, k = 1: t^2⊗t + t⊗t^2 + s·1⊗1
        x = monomial(3, 1, 2) + monomial(3, 2, 1) + monomial(3, 0, 0, s_power=1)
        assert basis_element(3, 1, 2) == x
        assert alpha_top_reduction(3, 1) == x
        assert is_symmetric(x)

    def test_subtop_reduction_example(self):
        # p = 3, k = 1: t⊗t + 2·t^2⊗1
        x = monomial(3, 1, 1) + monomial(3, 2, 0, coeff=2)
        assert basis_element(3, 1, 1) == x
        assert alpha_subtop_reduction(3, 1) == x
        assert not is_symmetric(x)

    @pytest.mark.parametrize("p", [3, 5, 7])
    def test_reduction_identities(self, p):
        for k in range(p):
            assert alpha_top_reduction(p, k) == basis_element(p, k, p - 1)
            assert alpha_subtop_reduction(p, k) == basis_element(p, k, p - 2)


class TestWedgeKernel:
    """Test the rank-r kernel check"""

    @pytest.mark.parametrize("p,r", [(2, 2), (2, 3), (3, 2), (3, 3), (5, 2), (5, 3)])
    def test_passes(self, p, r):
        report = wedge_kernel_report(p, r)
        assert report.passed
        assert report.symmetric_count == p * r * (r + 1) // 2
        assert report.antisymmetric_count == p * r * (r - 1) // 2
        assert report.fixed_dimension == report.expected_symmetric

    def test_char_two_counts(self):
        report = wedge_kernel_report(2, 2)
        assert (report.symmetric_count, report.antisymmetric_count) == (6, 2)
        assert report.antisymmetrized_independent is None
        assert report.complement_independent

    @pytest.mark.parametrize("p,r,expected", [(2, 3, (12, 6)), (5, 3, (30, 15))])
    def test_rank_three_counts(self, p, r, expected):
        report = wedge_kernel_report(p, r)
        assert (report.symmetric_count, report.antisymmetric_count) == expected
        assert (report.expected_symmetric, report.expected_antisymmetric) == expected
        assert report.passed

    def test_odd_characteristic_checks_antisymmetrized(self):
        assert wedge_kernel_report(3, 2).antisymmetrized_independent is True

    def test_rank_one_rejected(self):
        with pytest.raises(PreconditionError):
            wedge_kernel_report(3, 1)

    def test_boolean_wrapper(self):
        assert wedge_kernel_check(3, 2)


class TestPairedModuleElement:
    """Test arithmetic guards on E⊗E elements"""

    def test_add_is_componentwise(self):
        x = PairedModuleElement.from_symbols(0, 1, 2, alpha(3))
        y = PairedModuleElement.from_symbols(1, 0, 2, alpha(3))
        assert (x + y).swap() == y.swap() + x.swap()
        assert (x - x) == PairedModuleElement.from_symbols(0, 0, 2, zero(3))

    def test_rank_mismatch_rejected(self):
        x = PairedModuleElement.from_symbols(0, 1, 2, alpha(3))
        y = PairedModuleElement.from_symbols(0, 1, 3, alpha(3))
        with pytest.raises(ContractViolation):
            x + y
        with pytest.raises(ContractViolation):
            x - y

    def test_truncation_mismatch_rejected(self):
        x = PairedModuleElement.from_symbols(0, 1, 2, alpha(3, trunc=2))
        y = PairedModuleElement.from_symbols(0, 1, 2, alpha(3, trunc=3))
        with pytest.raises(ContractViolation):
            x + y

    def test_prime_mismatch_rejected(self):
        x = PairedModuleElement.from_symbols(0, 0, 2, unit(3))
        y = PairedModuleElement.from_symbols(0, 0, 2, unit(5))
        with pytest.raises(ContractViolation):
            x - y

import pytest

from ehrlimit.core.algebra import (
    IntPolynomial,
    SeriesPrefix,
    binom,
    expand_rational_prefix,
    geometric_polynomial,
    poly_add,
    poly_mul,
    poly_pow,
    prefix_agree,
    prefix_product,
)
from ehrlimit.utils.errors import ParameterError, TruncationError


def test_binom_extended_convention():
    assert binom(5, 2) == 10
    assert binom(0, 0) == 1
    assert binom(3, -1) == 0
    assert binom(3, 4) == 0
    assert binom(-1, 0) == 0


def test_polynomial_trims_and_prints():
    p = IntPolynomial((1, 1, 4, 0, 0))
    assert p.coeffs == (1, 1, 4)
    assert p.degree == 2
    assert str(p) == "1 + z + 4z^2"
    assert str(IntPolynomial()) == "0"
    assert IntPolynomial((0,)).is_zero
    with pytest.raises(ValueError):
        IntPolynomial().degree


def test_polynomial_evaluation_and_coefficients():
    p = IntPolynomial((1, 7, 15, 14, 15, 7, 1))
    assert p(1) == 60
    assert p(0) == 1
    assert p.coefficient(10) == 0
    assert p.padded(3) == [1, 7, 15]
    assert p.padded(9)[-2:] == [0, 0]


def test_products_and_sums():
    a = IntPolynomial((1, 1))
    assert poly_mul(a, a).coeffs == (1, 2, 1)
    assert (a * IntPolynomial((1, 1, 1))).coeffs == (1, 2, 2, 1)
    assert poly_mul(a, IntPolynomial()).is_zero
    assert poly_add(a, IntPolynomial((0, 0, 3))).coeffs == (1, 1, 3)
    assert (a + IntPolynomial((-1, -1))).is_zero
    assert poly_pow(a, 4).coeffs == (1, 4, 6, 4, 1)
    assert poly_pow(a, 0) == IntPolynomial.one()
    with pytest.raises(ParameterError):
        poly_pow(a, -1)


def test_geometric_polynomial():
    assert geometric_polynomial(0).coeffs == (1,)
    assert geometric_polynomial(5).coeffs == (1,) * 6
    with pytest.raises(ParameterError):
        geometric_polynomial(-1)


def test_series_prefix_validation():
    prefix = SeriesPrefix((1, 2, 3))
    assert prefix.stability == ("exact",) * 3
    assert prefix.degree_bound == 2
    with pytest.raises(ParameterError):
        SeriesPrefix(())
    with pytest.raises(ParameterError):
        SeriesPrefix((1, 2), ("exact",))
    with pytest.raises(ParameterError):
        SeriesPrefix((1,), ("guessed",))


def test_truncate():
    prefix = SeriesPrefix.tagged((1, 1, 4, 20), "certified")
    assert prefix.truncate(1).coeffs == (1, 1)
    assert prefix.truncate(1).stability == ("certified", "certified")
    with pytest.raises(TruncationError):
        prefix.truncate(4)


def test_expand_rational_prefix():
    assert expand_rational_prefix(IntPolynomial.one(), 2, 3).coeffs == (1, 2, 3, 4)
    assert expand_rational_prefix(IntPolynomial((1, 1)), 1, 4).coeffs == (1, 2, 2, 2, 2)
    # S_2: 1 + z + z^2 over (1 - z)^3 counts 1, 4, 10, 19
    assert expand_rational_prefix(IntPolynomial((1, 1, 1)), 3, 3).coeffs == (1, 4, 10, 19)
    assert expand_rational_prefix(IntPolynomial((1, 2, 3)), 0, 4).coeffs == (1, 2, 3, 0, 0)
    with pytest.raises(ParameterError):
        expand_rational_prefix(IntPolynomial.one(), 1, -1)


def test_prefix_agree():
    a = SeriesPrefix.exact((1, 1, 4, 20))
    b = SeriesPrefix.exact((1, 1, 4, 21))
    assert prefix_agree(a, b, 2)
    assert not prefix_agree(a, b, 3)
    with pytest.raises(TruncationError):
        prefix_agree(a, SeriesPrefix.exact((1, 1)), 2)


def test_prefix_product_keeps_weakest_tag():
    a = SeriesPrefix((1, 1, 1), ("exact", "exact", "exact"))
    b = SeriesPrefix((1, 1, 4, 20), ("certified", "certified", "empirical", "empirical"))
    product = prefix_product(a, b)
    assert product.coeffs == (1, 2, 6)
    assert product.stability == ("certified", "certified", "empirical")

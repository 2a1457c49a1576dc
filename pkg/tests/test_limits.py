import json

import pytest

from ehrlimit.core.algebra import IntPolynomial, geometric_polynomial, poly_mul, prefix_product
from ehrlimit.core.closedform import free_sum_member_hstar
from ehrlimit.core.limits import (
    LimitReport,
    certified_dimension,
    family_member,
    free_sum_limit_prefix,
    limit_prefix_certified,
    member_hstar,
    stabilize_empirical,
)
from ehrlimit.core.simplex import FamilySpec
from ehrlimit.utils.errors import BudgetExceededError, ParameterError, PreconditionError


def test_certified_dimension():
    assert certified_dimension((2,), 2, bidiagonal=True) == 11
    assert certified_dimension((2,), 0, bidiagonal=True) == 3
    assert certified_dimension((3, 2), 1) == 8
    assert certified_dimension((4, 3, 2), 0) == 3
    with pytest.raises(PreconditionError):
        certified_dimension((4, 2), 1)


def test_certified_bidiagonal():
    report = limit_prefix_certified(FamilySpec("bidiagonal", m=2), 3)
    assert report.prefix.coeffs == (1, 1, 4, 20)
    assert report.modes == ("certified",) * 4
    assert report.certificate_dimension == 15
    assert report.window is None


def test_certified_bidiagonal_degree_five():
    report = limit_prefix_certified(FamilySpec("bidiagonal", m=2), 5)
    assert report.certificate_dimension == 23
    assert report.prefix.coeffs == (1, 1, 4, 20, 84, 356)


def test_certified_prefix_survives_higher_dimensions():
    for m, top in ((2, 2), (3, 1)):
        for r in range(top + 1):
            report = limit_prefix_certified(FamilySpec("bidiagonal", m=m), r, spot_checks=2)
            D = report.certificate_dimension
            assert report.dimensions == (D, D + 1, D + 2)


def test_certified_multidiagonal_with_spot_checks():
    report = limit_prefix_certified(FamilySpec("multidiagonal", a=(3, 2)), 1)
    assert report.certificate_dimension == 8
    assert report.dimensions == (8, 9, 10)
    assert report.prefix.coeffs[0] == 1
    assert len(set(report.rows)) == 1


def test_certified_preconditions():
    with pytest.raises(PreconditionError):
        limit_prefix_certified(FamilySpec("multidiagonal", a=(4, 2)), 1)
    with pytest.raises(PreconditionError):
        limit_prefix_certified(FamilySpec("qn"), 2)


def test_certified_budget():
    with pytest.raises(BudgetExceededError) as info:
        limit_prefix_certified(FamilySpec("bidiagonal", m=2), 5, budget=1000)
    assert info.value.required == 2 ** 21


def test_certified_and_empirical_agree():
    spec = FamilySpec("bidiagonal", m=2)
    for r in range(4):
        certified = limit_prefix_certified(spec, r)
        empirical = stabilize_empirical(spec, r, window=3)
        assert certified.prefix.coeffs == empirical.prefix.coeffs


def test_certified_and_empirical_agree_for_m3():
    spec = FamilySpec("bidiagonal", m=3)
    expected = {0: ((1,), 3), 1: ((1, 2), 9), 2: ((1, 2, 18), 15)}
    for r, (coeffs, dimension) in expected.items():
        certified = limit_prefix_certified(spec, r)
        empirical = stabilize_empirical(spec, r, window=3)
        assert certified.certificate_dimension == dimension
        assert certified.prefix.coeffs == empirical.prefix.coeffs == coeffs


def test_empirical_bidiagonal():
    report = stabilize_empirical(FamilySpec("bidiagonal", m=2), 5, window=3)
    assert report.stabilized
    assert report.prefix.coeffs == (1, 1, 4, 20, 84, 356)
    assert report.modes == ("empirical",) * 6
    assert report.dimensions[-1] == 16
    assert report.dimensions[0] == 3


def test_empirical_q_of_n():
    report = stabilize_empirical(FamilySpec("qn"), 8, window=2)
    assert report.prefix.coeffs == (1, 7, 15, 14, 16, 14, 16, 14, 16)
    assert report.dimensions == (2, 3, 4, 5, 6)


def test_empirical_crosspolytope_never_settles():
    report = stabilize_empirical(FamilySpec("crosspolytope"), 1, window=3, d_max=10)
    assert not report.stabilized
    assert report.unstable == (1,)
    assert report.prefix.coeffs == (1, 10)


def test_empirical_multidiagonal():
    report = stabilize_empirical(FamilySpec("multidiagonal", a=(3, 2)), 2, window=3, d_max=12)
    assert report.stabilized
    assert report.dimensions[-1] <= 12


def test_empirical_argument_checks():
    with pytest.raises(ParameterError):
        stabilize_empirical(FamilySpec("bidiagonal", m=2), 2, window=1)
    with pytest.raises(ParameterError):
        stabilize_empirical(FamilySpec("delta", q=(1, 2)), 2)


def test_join_family_limit_is_product():
    left, right = FamilySpec("S"), FamilySpec("bidiagonal", m=2)
    joined = stabilize_empirical(FamilySpec("join", parts=(left, right)), 2, window=3)
    product = prefix_product(stabilize_empirical(left, 2).prefix, stabilize_empirical(right, 2).prefix)
    assert joined.prefix.coeffs == product.coeffs == (1, 2, 6)


def test_free_sum_limit_prefix():
    assert free_sum_limit_prefix(IntPolynomial((1, 1)), 1, 4).coeffs == (1, 2, 2, 2, 2)
    assert free_sum_limit_prefix(IntPolynomial.one(), 2, 3).coeffs == (1, 2, 3, 4)
    expected = poly_mul(IntPolynomial((1, 1)), geometric_polynomial(6)).padded(7)
    assert list(free_sum_limit_prefix(IntPolynomial((1, 1)), 1, 6).coeffs) == expected
    with pytest.raises(ParameterError):
        free_sum_limit_prefix(IntPolynomial((2, 1)), 1, 3)


def test_free_sum_family_members():
    spec = FamilySpec("free_sum", q=(1,), k=2, d=3)
    assert member_hstar(spec) == free_sum_member_hstar(IntPolynomial((1, 1)), 2, 3)
    report = stabilize_empirical(FamilySpec("free_sum", q=(1,), k=1), 3, window=2)
    assert report.prefix.coeffs == free_sum_limit_prefix(IntPolynomial((1, 1)), 1, 3).coeffs


def test_member_hstar_uses_family_construction():
    assert member_hstar(FamilySpec("S", d=4)).coeffs == (1,) * 5
    assert member_hstar(FamilySpec("bidiagonal", m=2, d=4)).coeffs == (1, 1, 2)
    assert member_hstar(FamilySpec("delta", q=(1, 1))).coeffs == (1, 1, 1)
    assert family_member(FamilySpec("crosspolytope", d=2)).label == "C_2"
    with pytest.raises(ParameterError):
        family_member(FamilySpec("S"))


def test_report_serialization_and_table():
    report = stabilize_empirical(FamilySpec("bidiagonal", m=2), 2, window=3)
    data = json.loads(report.to_json())
    assert list(data) == ["family", "prefix", "modes", "dimensions", "window", "unstable", "certificate_dimension"]
    assert data["family"] == {"kind": "bidiagonal", "m": 2}
    assert json.dumps(data) == report.to_json()
    table = report.table
    assert table.dims == ("dimension", "degree")
    assert table.shape == (len(report.dimensions), 3)
    assert int(table.sel(dimension=report.dimensions[-1], degree=2)) == 4
    assert isinstance(report, LimitReport)

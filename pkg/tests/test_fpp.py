import random
from collections import Counter
from fractions import Fraction

import pytest

from ehrlimit.core import fpp
from ehrlimit.core.closedform import f_kh, q_of_n_hstar, thm_m2_coefficient
from ehrlimit.core.simplex import (
    from_columns,
    make_bidiagonal,
    make_delta_one_q,
    make_multidiagonal,
    make_q_of_n,
    make_S,
)
from ehrlimit.utils.errors import (
    BudgetExceededError,
    ParameterError,
    PreconditionError,
    UnsupportedFormError,
)


def _random_triangular(rng, dim):
    rows = []
    for i in range(dim):
        row = [0] * dim
        row[i] = rng.randint(1, 4)
        for j in range(i + 1, dim):
            row[j] = rng.randint(-3, 3)
        rows.append(row)
    return from_columns(rows, label="random")


def test_S_d_is_geometric():
    for d in range(1, 13):
        assert fpp.hstar(make_S(d)).coeffs == (1,) * (d + 1)


def test_q_of_n_matches_closed_form():
    for n in (2, 3, 4):
        h = fpp.hstar(make_q_of_n(n))
        assert h == q_of_n_hstar(n)
        assert h(1) == 30 * n


def test_small_bidiagonal():
    assert fpp.hstar(make_bidiagonal(2, 4)).coeffs == (1, 1, 2)
    assert fpp.hstar(make_bidiagonal(2, 3)).coeffs == (1, 1)


def test_reference_and_kernel_agree():
    rng = random.Random(7)
    for _ in range(25):
        P = _random_triangular(rng, rng.randint(1, 4))
        reference = fpp.hstar(P, exact=True)
        assert fpp.hstar(P) == reference
        assert fpp.hstar(P, chunk_size=5) == reference
        assert reference(1) == P.normalized_volume


def test_kernel_python_integer_path(monkeypatch):
    expected = fpp.hstar(make_bidiagonal(3, 6), exact=True)
    monkeypatch.setattr(fpp, "INT64_SAFE", 10)
    assert fpp.hstar(make_bidiagonal(3, 6), chunk_size=7) == expected
    assert fpp.bidiagonal_hstar(3, 6) == expected


def test_kernel_with_worker_processes():
    P = make_bidiagonal(2, 10)
    assert fpp.hstar(P, workers=2, chunk_size=32, parallel_threshold=1) == fpp.hstar(P)


def test_enumerate_fpp_points():
    P = make_multidiagonal((3, 2), 3)
    points = list(fpp.enumerate_fpp(P))
    assert len(points) == P.normalized_volume
    assert points[0].height == 0
    assert points[0].support_index is None
    assert len({pt.point for pt in points}) == len(points)
    B = P.homogenized
    for pt in points:
        assert all(0 <= x < 1 for x in pt.lam)
        for i, row in enumerate(B):
            assert sum(Fraction(b) * lam for b, lam in zip(row, pt.lam)) == pt.point[i]


def test_enumerate_uses_hermite_form_for_S():
    points = list(fpp.enumerate_fpp(make_S(3)))
    assert sorted(pt.height for pt in points) == [0, 1, 2, 3]


def test_non_triangular_is_refused():
    P = from_columns([[1, 0], [1, 1]])
    with pytest.raises(UnsupportedFormError):
        fpp.hstar(P)
    with pytest.raises(UnsupportedFormError):
        next(fpp.enumerate_fpp(P))


def test_budget():
    with pytest.raises(BudgetExceededError) as info:
        fpp.hstar(make_bidiagonal(2, 10), budget=10)
    assert info.value.required == 256
    assert info.value.budget == 10
    with pytest.raises(BudgetExceededError):
        fpp.bidiagonal_hstar(2, 10, budget=10)
    assert fpp.hstar(make_bidiagonal(2, 10), budget=256)(1) == 256


def test_bidiagonal_code():
    code = fpp.BidiagonalCode(2, 3, 5)
    assert code.lambda_2 == Fraction(5, 8)
    assert code.digits == (1, 0, 1)
    assert fpp.BidiagonalCode(3, 1, 2).digits == (0, 0, 2)
    with pytest.raises(ParameterError):
        fpp.BidiagonalCode(2, 3, 4)
    with pytest.raises(ParameterError):
        fpp.BidiagonalCode(2, 3, 8)


def test_bidiagonal_code_count():
    for m in (2, 3):
        for d in range(3, 13):
            assert sum(1 for _ in fpp.bidiagonal_codes(m, d)) == m ** (d - 2) - 1
            assert sum(fpp.bidiagonal_height_counts(m, d)) == m ** (d - 2)


def test_decode_bidiagonal_heights():
    heights = {b: fpp.decode_bidiagonal(2, 6, fpp.BidiagonalCode(2, 3, b)).height for b in (1, 3, 5, 7)}
    assert heights == {1: 3, 3: 2, 5: 3, 7: 2}
    point = fpp.decode_bidiagonal(2, 6, fpp.BidiagonalCode(2, 3, 5))
    assert point.lam[1] + point.lam[2] == 1
    assert point.support_index == 4
    with pytest.raises(ParameterError):
        fpp.decode_bidiagonal(2, 4, fpp.BidiagonalCode(2, 3, 5))


def test_specialised_enumerator_matches_generic():
    for m in (2, 3):
        for d in range(3, 11):
            generic = sorted(pt.canonical() for pt in fpp.enumerate_fpp(make_bidiagonal(m, d)))
            specialised = sorted(pt.canonical() for pt in fpp.enumerate_bidiagonal(m, d))
            assert specialised == generic


def test_bidiagonal_kernel_matches_generic():
    for m in (2, 3):
        for d in range(3, 10):
            assert fpp.bidiagonal_hstar(m, d) == fpp.hstar(make_bidiagonal(m, d))


def test_bidiagonal_prefix_settles():
    for d in range(14, 19):
        assert fpp.bidiagonal_hstar(2, d).padded(6) == [1, 1, 4, 20, 84, 356]


def test_bidiagonal_matches_closed_form_coefficients():
    for j in range(6):
        d = max(3, 3 * j)
        assert fpp.bidiagonal_hstar(2, d).coefficient(j) == thm_m2_coefficient(j)


def test_census_reproduces_f():
    census = fpp.bidiagonal_census(2, 14)
    assert list(census.columns) == ["k", "height", "count"]
    assert census["count"].sum() == 2 ** 12 - 1
    counts = {(int(r.k), int(r.height)): int(r["count"]) for _, r in census.iterrows()}
    for k in range(2, 13):
        for h in range(1, 14):
            lo = -((-3 * (h - 1)) // 2)
            if lo <= k <= 3 * h - 3:
                assert counts.get((k, h), 0) == f_kh(k, h)


def test_census_matches_decoded_points():
    observed = Counter(
        (code.k, fpp.decode_bidiagonal(3, 6, code).height) for code in fpp.bidiagonal_codes(3, 6)
    )
    census = fpp.bidiagonal_census(3, 6)
    assert {(int(r.k), int(r.height)): int(r["count"]) for _, r in census.iterrows()} == dict(observed)


def test_height_bounds():
    for m in (2, 3):
        for d in range(3, 11):
            assert fpp.check_bidiagonal_height_bound(m, d)
    for a in ((3, 2), (4, 3, 2)):
        for d in range(len(a), 9):
            assert fpp.check_multidiagonal_height_bound(make_multidiagonal(a, d))


def test_pairing():
    for d in range(3, 12):
        assert fpp.check_bidiagonal_pairing(d)


def test_multidiagonal_band():
    assert fpp.multidiagonal_band(make_multidiagonal((4, 3, 2), 5)) == (4, 3, 2)
    assert fpp.multidiagonal_band(make_bidiagonal(3, 5)) == (3, 1)
    with pytest.raises(UnsupportedFormError):
        fpp.multidiagonal_band(from_columns([[1, 3], [0, 2]]))
    with pytest.raises(PreconditionError):
        fpp.check_multidiagonal_height_bound(make_multidiagonal((4, 2), 4))


def test_delta_volume_is_point_count():
    for q in [(1, 2), (2, 3, 5), (1, 1, 4)]:
        P = make_delta_one_q(q)
        assert fpp.hstar(P)(1) == 1 + sum(q)

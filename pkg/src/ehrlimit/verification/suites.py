"""
Desk-scale verification suites run by ``ehrlimit verify``.

Each suite returns a list of ``CheckResult``; a suite passes when every
check does.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

from ..core import closedform, fpp
from ..core.algebra import poly_mul
from ..core.combinators import free_sum, join, placed_simplex, provenance_hstar, pyramid
from ..core.simplex import make_bidiagonal, make_multidiagonal, make_q_of_n, make_S
from ..utils.errors import ParameterError
from .oracle import consistency_check

__all__ = ['CheckResult', 'SUITES', 'run_suite']

logger = logging.getLogger(__name__)

# Coefficients 0..10 of the m = 2 bidiagonal limit.
M2_SERIES = (1, 1, 4, 20, 84, 356, 1508, 6388, 27060, 114628, 485572)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def __str__(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}" + (f": {self.detail}" if self.detail else "")


def _equal(name: str, got, expected) -> CheckResult:
    if got == expected:
        return CheckResult(name, True)
    return CheckResult(name, False, f"got {got}, expected {expected}")


def eq1_consistency(max_value: Optional[int] = None, d: Optional[int] = None, **options) -> List[CheckResult]:
    """Dilate counts against h*-expansions for family members up to dimension 6."""
    T = 4 if max_value is None else max_value
    max_dim = 6 if d is None else d
    members = [make_S(n) for n in range(1, max_dim + 1)]
    members += [make_bidiagonal(2, n) for n in range(3, max_dim + 2)]
    members += [make_bidiagonal(3, n) for n in range(3, min(max_dim, 5) + 2)]
    members += [make_multidiagonal((3, 2), n) for n in range(2, min(max_dim, 4) + 1)]
    results = [
        CheckResult(f"{P.label} T={T}", consistency_check(P, T, **options))
        for P in members
    ]
    if max_dim >= 6:
        q2 = make_q_of_n(2)
        results.append(CheckResult(f"{q2.label} T=2", consistency_check(q2, min(T, 2), **options)))
    return results


def freesum_product(max_value: Optional[int] = None, d: Optional[int] = None, **options) -> List[CheckResult]:
    """h*(P (+) Q) = h*(P) h*(Q) for reflexive P, against the oracle."""
    T = 3 if max_value is None else max_value
    pairs = [(make_S(2), make_S(1)), (make_S(1), make_S(1)), (make_S(1), make_S(2)), (make_S(3), make_S(1))]
    results = []
    for P, Q in pairs:
        F = free_sum(P, Q)
        product = poly_mul(fpp.hstar(P, **options), fpp.hstar(Q, **options))
        results.append(_equal(f"{F.label} product", provenance_hstar(F, **options), product))
        results.append(CheckResult(f"{F.label} T={T}", consistency_check(F, T, hstar=product)))
    square = free_sum(make_S(1), make_S(1))
    results.append(_equal("crosspolytope (1+z)^2", provenance_hstar(square, **options),
                          closedform.crosspolytope_hstar(2)))
    return results


def join_product(max_value: Optional[int] = None, d: Optional[int] = None, **options) -> List[CheckResult]:
    """h*(P * Q) = h*(P) h*(Q), checked on the placed simplex and by counting."""
    T = 3 if max_value is None else max_value
    pairs = [(make_S(1), make_S(2)), (make_S(1), make_S(1)), (make_bidiagonal(2, 4), make_S(1))]
    results = []
    for P, Q in pairs:
        J = join(P, Q)
        product = poly_mul(fpp.hstar(P, **options), fpp.hstar(Q, **options))
        placed = placed_simplex(J)
        results.append(_equal(f"{J.label} product", fpp.hstar(placed, **options), product))
        results.append(_equal(f"{J.label} volume", placed.normalized_volume,
                              P.normalized_volume * Q.normalized_volume))
        results.append(CheckResult(f"{J.label} T={T}", consistency_check(J, T, hstar=product)))
    return results


def pyramid_invariance(max_value: Optional[int] = None, d: Optional[int] = None, **options) -> List[CheckResult]:
    """Lattice pyramids keep h*."""
    T = 3 if max_value is None else max_value
    S2 = make_S(2)
    bases = [
        (S2, pyramid(S2)),
        (S2, pyramid(pyramid(S2))),
        (make_bidiagonal(2, 4), pyramid(make_bidiagonal(2, 4))),
    ]
    results = []
    for base, pyr in bases:
        expected = fpp.hstar(base, **options)
        results.append(_equal(f"{pyr.label} provenance", provenance_hstar(pyr, **options), expected))
        results.append(_equal(f"{pyr.label} placed", fpp.hstar(placed_simplex(pyr), **options), expected))
        results.append(CheckResult(f"{pyr.label} T={T}", consistency_check(pyr, T, hstar=expected)))
    return results


def m2_closedform(max_value: Optional[int] = None, d: Optional[int] = None, **options) -> List[CheckResult]:
    """Closed-form m = 2 limit coefficients against printed values and enumeration."""
    enumerate_up_to = 6 if max_value is None else max_value
    results = [_equal(f"h_{j} closed form", closedform.thm_m2_coefficient(j), M2_SERIES[j])
               for j in range(len(M2_SERIES))]
    for j in range(enumerate_up_to + 1):
        dim = max(3, 3 * j)
        enumerated = fpp.bidiagonal_hstar(2, dim, budget=options.get('budget')).coefficient(j)
        results.append(_equal(f"h_{j} at P_(2,{dim})", enumerated, closedform.thm_m2_coefficient(j)))
    return results


def lemma_powers(max_value: Optional[int] = None, d: Optional[int] = None, **options) -> List[CheckResult]:
    """
    Height-range sums of f(k, h) against 2^(k-1), evaluated literally.

    Where the range is empty the literal sum is reported next to the number
    of P_{2,d} points actually counted with that k.
    """
    K = 40 if max_value is None else max_value
    results = []
    for k in range(1, K + 1):
        report = closedform.lemma_report(k)
        if closedform.lemma_range(k):
            results.append(_equal(f"lemma k={k}", report.literal, report.expected))
            continue
        counted = closedform.lemma_sum(k)
        detail = (f"empty height range, literal sum {report.literal}; "
                  f"{counted} point(s) counted, expected {report.expected}")
        results.append(CheckResult(f"lemma k={k}", counted == report.expected, detail))
    census = fpp.bidiagonal_census(2, min(K, 12) + 2)
    for k, count in census.groupby('k')['count'].sum().items():
        results.append(_equal(f"points with k={k}", int(count), 2 ** (int(k) - 1)))
    results.append(CheckResult(f"height ranges agree up to {K}", closedform.range_equivalence_check(K)))
    return results


def fkh_census(max_value: Optional[int] = None, d: Optional[int] = None, **options) -> List[CheckResult]:
    """Points of P_{2,d} grouped by (k, height) against f(k, h)."""
    dim = 14 if d is None else d
    census = fpp.bidiagonal_census(2, dim)
    counts = {(int(row.k), int(row.height)): int(row['count']) for _, row in census.iterrows()}
    results = [_equal(f"P_(2,{dim}) nonzero points", sum(counts.values()), 2 ** (dim - 2) - 1)]
    for k in range(1, dim - 1):
        for h in closedform.lemma_range(k):
            results.append(_equal(f"f({k},{h})", counts.get((k, h), 0), closedform.f_kh(k, h)))
    return results


def jacobsthal(max_value: Optional[int] = None, d: Optional[int] = None, **options) -> List[CheckResult]:
    """Base-case lambda numerators and their appearance in actual P_{2,d} points."""
    J = 20 if max_value is None else max_value
    numerators = closedform.jacobsthal_lambda_numerators(J + 2)
    results = [_equal("first numerators", numerators[:5], (1, 1, 3, 5, 11))]
    for j in range(1, J + 1):
        # numerators[i] belongs to j = i - 1
        n_j, n_prev, n_prev2 = numerators[j + 1], numerators[j], numerators[j - 1]
        results.append(_equal(f"n_{j} recurrence", n_j, n_prev + 2 * n_prev2))
    for k in range(2, min(J, 12) + 1):
        values = closedform.jacobsthal_lambda_values(k)
        code = fpp.BidiagonalCode(2, k, closedform.jacobsthal_lambda_numerators(k)[-1])
        point = fpp.decode_bidiagonal(2, k + 2, code)
        chain = tuple(point.lam[k - j] for j in range(-1, k - 1))
        results.append(_equal(f"lambda chain k={k}", chain, values))
    return results


def recursion(max_value: Optional[int] = None, d: Optional[int] = None, **options) -> List[CheckResult]:
    N = 40 if max_value is None else max_value
    return [CheckResult(f"h_i = 4h_(i-1) + h_(i-2) for 4 <= i <= {N}", closedform.recursion_check(N))]


def height_bounds(max_value: Optional[int] = None, d: Optional[int] = None, **options) -> List[CheckResult]:
    """Height lower bounds for bidiagonal and multidiagonal points."""
    bidiagonal_max = 10 if d is None else d
    multidiagonal_max = 8 if d is None else min(d, 8)
    results = []
    for m in (2, 3):
        for dim in range(3, bidiagonal_max + 1):
            results.append(CheckResult(f"P_({m},{dim}) height >= floor(k/2)/m",
                                       fpp.check_bidiagonal_height_bound(m, dim)))
    for dim in range(3, bidiagonal_max + 1):
        results.append(CheckResult(f"P_(2,{dim}) half-shift pairing", fpp.check_bidiagonal_pairing(dim)))
    for a in ((3, 2), (4, 3, 2)):
        for dim in range(len(a), multidiagonal_max + 1):
            P = make_multidiagonal(a, dim)
            results.append(CheckResult(f"{P.label} height >= floor(k/s)/a_1",
                                       fpp.check_multidiagonal_height_bound(P)))
    return results


SUITES: Dict[str, Callable[..., List[CheckResult]]] = {
    "eq1-consistency": eq1_consistency,
    "freesum-product": freesum_product,
    "join-product": join_product,
    "pyramid-invariance": pyramid_invariance,
    "m2-closedform": m2_closedform,
    "lemma-powers": lemma_powers,
    "fkh-census": fkh_census,
    "jacobsthal": jacobsthal,
    "recursion": recursion,
    "height-bounds": height_bounds,
}


def run_suite(name: str, max_value: Optional[int] = None, d: Optional[int] = None, **options) -> List[CheckResult]:
    """
    Run a named suite.

    Args:
        name: One of ``SUITES``
        max_value: Overrides the suite's upper range (``--max``)
        d: Overrides the suite's dimension (``--d``)
        **options: Enumeration options (workers, budget)

    Raises:
        ParameterError: For an unknown suite name
    """
    if name not in SUITES:
        raise ParameterError(f"Unknown suite {name!r}; choose from {', '.join(SUITES)}")
    logger.info(f"Running suite {name}")
    results = SUITES[name](max_value=max_value, d=d, **options)
    failed = [r for r in results if not r.passed]
    logger.info(f"Suite {name}: {len(results) - len(failed)}/{len(results)} checks passed")
    return results

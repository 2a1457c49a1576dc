"""
Closed-form h*-data for the families with known formulas.

Covers the m = 2 bidiagonal limit (through f(k, h)), the binomial-sum
identity behind it, the Jacobsthal lambda-vector of the chain base case,
and the h*-polynomials of S_d, crosspolytopes, q(n) simplices and free-sum
family members.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

from . import fpp
from .algebra import (
    IntPolynomial,
    SeriesPrefix,
    binom,
    geometric_polynomial,
    poly_mul,
    poly_pow,
)
from ..utils.errors import ParameterError

__all__ = [
    'f_kh',
    'thm_m2_coefficient',
    'm2_limit_prefix',
    'lemma_range',
    'lemma_sum',
    'LemmaReport',
    'lemma_report',
    'range_equivalence_check',
    'jacobsthal_lambda_numerators',
    'jacobsthal_lambda_values',
    'recursion_check',
    's_d_hstar',
    'crosspolytope_hstar',
    'q_of_n_hstar',
    'free_sum_member_hstar',
]

logger = logging.getLogger(__name__)

# Numerator factor of the q(n) formula: 1 + 7z + 14z^2 + 7z^3 + z^4
_Q_CORE = IntPolynomial((1, 7, 14, 7, 1))


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _require_positive(name: str, value: int, minimum: int = 1):
    if value < minimum:
        raise ParameterError(f"{name} must be >= {minimum}, got {value}")


def f_kh(k: int, h: int) -> int:
    """
    Number of points of P_{2,d} with lambda_2-denominator 2^k at height h.

    f(k, h) = 2 [C(k-2, 3(h-1)-k) + C(k-2, 3(h-1)-k-1) + C(k-2, 3(h-1)-k-2)]
    """
    _require_positive("k", k)
    _require_positive("h", h)
    top = 3 * (h - 1) - k
    return 2 * (binom(k - 2, top) + binom(k - 2, top - 1) + binom(k - 2, top - 2))


def thm_m2_coefficient(j: int) -> int:
    """
    Coefficient of z^j in the Ehrhart limit of P_{2,d}.

    Args:
        j: Degree, j >= 0

    Returns:
        1 for j in {0, 1}, otherwise the sum of f(k, j) over
        ceil(3(j-1)/2) <= k <= 3j-3
    """
    _require_positive("j", j, minimum=0)
    if j <= 1:
        return 1
    return sum(f_kh(k, j) for k in range(_ceil_div(3 * (j - 1), 2), 3 * j - 2))


def m2_limit_prefix(r: int) -> SeriesPrefix:
    _require_positive("r", r, minimum=0)
    return SeriesPrefix.exact([thm_m2_coefficient(j) for j in range(r + 1)])


def lemma_range(k: int) -> range:
    """Heights ceil((k+3)/3) <= h <= floor((2k+3)/3)."""
    _require_positive("k", k)
    return range(_ceil_div(k + 3, 3), (2 * k + 3) // 3 + 1)


def _literal_lemma_sum(k: int) -> int:
    return sum(f_kh(k, h) for h in lemma_range(k))


def lemma_sum(k: int) -> int:
    """
    Sum of f(k, h) over the lemma's height range; equals 2^(k-1).

    For k = 1 the range is empty and f does not see the point with
    denominator 2, so the points of P_{2,d} with k = 1 are counted instead.
    """
    _require_positive("k", k)
    if not lemma_range(k):
        _, heights = fpp.bidiagonal_heights(2, k)
        return len(heights)
    return _literal_lemma_sum(k)


@dataclass(frozen=True)
class LemmaReport:
    k: int
    literal: int
    expected: int

    @property
    def holds(self) -> bool:
        return self.literal == self.expected


def lemma_report(k: int) -> LemmaReport:
    """Literal evaluation of the height-range sum next to 2^(k-1)."""
    report = LemmaReport(k=k, literal=_literal_lemma_sum(k), expected=2 ** (k - 1))
    if not report.holds:
        logger.debug(f"Literal lemma sum at k={k} is {report.literal}, expected {report.expected}")
    return report


def range_equivalence_check(K: int) -> bool:
    """
    ceil(3(h-1)/2) <= k <= 3h-3 exactly when ceil((k+3)/3) <= h <= floor((2k+3)/3),
    for all 1 <= k, h <= K.
    """
    _require_positive("K", K)
    for k in range(1, K + 1):
        for h in range(1, K + 1):
            by_k = _ceil_div(3 * (h - 1), 2) <= k <= 3 * h - 3
            by_h = h in lemma_range(k)
            if by_k != by_h:
                logger.warning(f"Range mismatch at k={k}, h={h}")
                return False
    return True


def jacobsthal_lambda_numerators(k: int) -> Tuple[int, ...]:
    """
    Numerators of lambda_{k-j} for j = -1, 0, ..., k-2 in the base case of
    the m = 2 chain where no coefficient exceeds 1/2.

    n_j = sum_{i=0}^{j+1} (-1)^i 2^(j+1-i), i.e. 1, 1, 3, 5, 11, 21, ...
    """
    _require_positive("k", k)
    numerators = []
    for j in range(-1, k - 1):
        numerators.append(sum((-1) ** i * 2 ** (j + 1 - i) for i in range(j + 2)))
    return tuple(numerators)


def jacobsthal_lambda_values(k: int) -> Tuple[Fraction, ...]:
    """lambda_{k-j} = n_j / 2^(j+2), in the same order as the numerators."""
    return tuple(
        Fraction(n, 2 ** (j + 2))
        for j, n in zip(range(-1, k - 1), jacobsthal_lambda_numerators(k))
    )


def recursion_check(N: int) -> bool:
    """True iff h_i = 4 h_{i-1} + h_{i-2} for every 4 <= i <= N."""
    _require_positive("N", N, minimum=4)
    h = [thm_m2_coefficient(i) for i in range(N + 1)]
    for i in range(4, N + 1):
        if h[i] != 4 * h[i - 1] + h[i - 2]:
            logger.warning(f"Recursion fails at i={i}: {h[i]} != 4*{h[i - 1]} + {h[i - 2]}")
            return False
    return True


def s_d_hstar(d: int) -> IntPolynomial:
    _require_positive("d", d)
    return geometric_polynomial(d)


def crosspolytope_hstar(d: int) -> IntPolynomial:
    """(1 + z)^d."""
    _require_positive("d", d)
    return poly_pow(IntPolynomial((1, 1)), d)


def q_of_n_hstar(n: int) -> IntPolynomial:
    """
    h*-polynomial of Delta_(1,q(n)).

    Args:
        n: Family index, n >= 2

    Returns:
        (1 + z^2 + ... + z^(2n-2)) (1 + 7z + 14z^2 + 7z^3 + z^4)
    """
    if n < 2:
        raise ParameterError(f"The q(n) h*-formula needs n >= 2, got {n}")
    even_powers = IntPolynomial(tuple(1 if i % 2 == 0 else 0 for i in range(2 * n - 1)))
    return poly_mul(even_powers, _Q_CORE)


def free_sum_member_hstar(Q_hstar: IntPolynomial, k: int, d: int) -> IntPolynomial:
    """h* of S_d (+) ... (+) S_d (+) Q with k copies of S_d: Q (1 + ... + z^d)^k."""
    _require_positive("k", k)
    return poly_mul(Q_hstar, poly_pow(s_d_hstar(d), k))

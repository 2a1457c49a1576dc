"""
Fundamental parallelepiped enumeration and h*-polynomials.

For a triangular simplex the lattice points of the half-open parallelepiped
are in bijection with mixed-radix representatives z, 0 <= z_i < B_ii, of
Z^{d+1} / B Z^{d+1}. The h*-polynomial is the generating function of their
heights (first coordinates).

Two paths are provided:

- ``enumerate_fpp`` is the reference: exact ``Fraction`` back-substitution
  of B lambda = z followed by componentwise fractional parts.
- ``fpp_height_counts`` is the kernel used for h*: numerators over the
  common denominator det(B) carried as numpy integers, chunked over the
  representative range and optionally spread over worker processes.

P_{m,d} additionally gets a specialised enumerator that walks the lambda
chain from lambda_2 = b / m^k directly.
"""

import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .algebra import IntPolynomial
from .simplex import LatticeSimplex, make_multidiagonal
from ..utils.errors import (
    BudgetExceededError,
    ParameterError,
    PreconditionError,
    UnsupportedFormError,
)

__all__ = [
    'FppPoint',
    'BidiagonalCode',
    'enumerate_fpp',
    'fpp_height_counts',
    'hstar',
    'bidiagonal_codes',
    'decode_bidiagonal',
    'enumerate_bidiagonal',
    'bidiagonal_heights',
    'bidiagonal_height_counts',
    'bidiagonal_hstar',
    'bidiagonal_census',
    'check_bidiagonal_height_bound',
    'check_bidiagonal_pairing',
    'multidiagonal_band',
    'check_multidiagonal_height_bound',
]

logger = logging.getLogger(__name__)

# Intermediate values above this switch the kernel to Python integers.
INT64_SAFE = 2 ** 62


@dataclass(frozen=True)
class FppPoint:
    """
    Lattice point of the fundamental parallelepiped.

    Attributes:
        lam: Coefficients in [0, 1) with respect to the homogenized vertices
        point: The homogenized lattice point B * lam
        height: First coordinate of ``point``
    """

    lam: Tuple[Fraction, ...]
    point: Tuple[int, ...]
    height: int

    @property
    def support_index(self) -> Optional[int]:
        """Largest index with a nonzero coefficient, None for the zero point."""
        for i in range(len(self.lam) - 1, -1, -1):
            if self.lam[i] != 0:
                return i
        return None

    def canonical(self) -> Tuple:
        return (self.height, self.point, self.lam)


def _check_budget(required: int, budget: Optional[int]):
    if budget is not None and required > budget:
        raise BudgetExceededError(required, budget)


def _require_triangular(P: LatticeSimplex) -> LatticeSimplex:
    try:
        return P.enumeration_form
    except UnsupportedFormError:
        logger.warning(f"Refusing to enumerate {P.label or 'simplex'}: not triangular")
        raise


def _exact_solve(B: Sequence[Sequence[int]], z: Sequence[int]) -> List[Fraction]:
    n = len(B)
    lam = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        rest = sum((B[i][j] * lam[j] for j in range(i + 1, n)), Fraction(0))
        lam[i] = (z[i] - rest) / B[i][i]
    return lam


def enumerate_fpp(P: LatticeSimplex) -> Iterator[FppPoint]:
    """
    Stream the parallelepiped points of a triangular simplex.

    Representatives are visited in lexicographic order, so the zero point
    comes first. Simplices built by ``make_S``/``make_delta_one_q`` are
    enumerated on their Hermite normal form.
    """
    S = _require_triangular(P)
    B = S.homogenized
    n = len(B)
    for z in itertools.product(*(range(D) for D in S.diagonal)):
        solved = _exact_solve(B, z)
        lam = tuple(x - math.floor(x) for x in solved)
        point = []
        for i in range(n):
            value = sum((B[i][j] * lam[j] for j in range(i, n)), Fraction(0))
            point.append(int(value))
        yield FppPoint(lam=lam, point=tuple(point), height=point[0])


def _sparse_rows(B: Sequence[Sequence[int]]) -> Tuple[Tuple[Tuple[int, int], ...], ...]:
    n = len(B)
    return tuple(
        tuple((j, B[i][j]) for j in range(i + 1, n) if B[i][j] != 0)
        for i in range(n)
    )


def _chunk_height_counts(rows, diag: Tuple[int, ...], start: int, stop: int, use_objects: bool) -> List[int]:
    # Reduced back-substitution: each lambda_i is taken mod 1 as soon as it
    # is known. This permutes representatives but hits every point once.
    n = len(diag)
    L = math.prod(diag)
    if use_objects:
        flat = np.array(range(start, stop), dtype=object)
    else:
        flat = np.arange(start, stop, dtype=np.int64)

    digits = [None] * n
    for i in range(n - 1, -1, -1):
        digits[i] = flat % diag[i]
        flat = flat // diag[i]

    y = [None] * n
    for i in range(n - 1, -1, -1):
        acc = digits[i] * L
        for j, entry in rows[i]:
            acc = acc - entry * y[j]
        y[i] = (acc // diag[i]) % L

    total = y[0]
    for i in range(1, n):
        total = total + y[i]
    heights = (total // L).astype(np.int64)
    return [int(c) for c in np.bincount(heights, minlength=n)]


def _needs_objects(B: Sequence[Sequence[int]], L: int) -> bool:
    widest = max(
        B[i][i] + sum(abs(x) for x in B[i][i + 1:])
        for i in range(len(B))
    )
    return L * max(widest, len(B)) >= INT64_SAFE


def fpp_height_counts(P: LatticeSimplex, workers: int = 1, chunk_size: int = 65536,
                      budget: Optional[int] = None, parallel_threshold: int = 65536) -> List[int]:
    """
    Count parallelepiped points by height.

    Args:
        P: Triangular simplex (or one carrying a Hermite normal form)
        workers: Worker processes for large enumerations
        chunk_size: Representatives handled per vectorized chunk
        budget: Maximum number of points to enumerate
        parallel_threshold: Enumerations smaller than this stay in-process

    Returns:
        List whose entry h is the number of points at height h
    """
    S = _require_triangular(P)
    det = S.normalized_volume
    _check_budget(det, budget)

    B = S.homogenized
    diag = S.diagonal
    rows = _sparse_rows(B)
    use_objects = _needs_objects(B, det) or det >= INT64_SAFE
    if use_objects:
        logger.info(f"{S.label}: intermediate values exceed int64, using Python integers")

    bounds = [(lo, min(lo + chunk_size, det)) for lo in range(0, det, chunk_size)]
    counts = [0] * len(diag)

    if workers > 1 and det >= parallel_threshold and len(bounds) > 1:
        logger.debug(f"{S.label}: {len(bounds)} chunks over {workers} workers")
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_chunk_height_counts, rows, diag, lo, hi, use_objects)
                for lo, hi in bounds
            ]
            partials = [f.result() for f in futures]
    else:
        partials = [_chunk_height_counts(rows, diag, lo, hi, use_objects) for lo, hi in bounds]

    for partial in partials:
        for h, c in enumerate(partial):
            counts[h] += c
    return counts


def hstar(P: LatticeSimplex, exact: bool = False, workers: int = 1, chunk_size: int = 65536,
          budget: Optional[int] = None, parallel_threshold: int = 65536) -> IntPolynomial:
    """
    h*-polynomial of a lattice simplex from its parallelepiped heights.

    Args:
        P: Triangular simplex or family simplex with a known Hermite normal form
        exact: Use the Fraction reference enumerator instead of the integer kernel

    Returns:
        IntPolynomial whose coefficient sum is the normalized volume
    """
    S = _require_triangular(P)
    det = S.normalized_volume
    if exact:
        _check_budget(det, budget)
        counts = [0] * (S.dim + 1)
        for pt in enumerate_fpp(S):
            counts[pt.height] += 1
    else:
        counts = fpp_height_counts(S, workers=workers, chunk_size=chunk_size,
                                   budget=budget, parallel_threshold=parallel_threshold)
    logger.info(f"Enumerated {det} parallelepiped points of {P.label or 'simplex'}")
    return IntPolynomial(tuple(counts))


@dataclass(frozen=True)
class BidiagonalCode:
    """
    Label of a nonzero parallelepiped point of P_{m,d}.

    The point has lambda_2 = b / m^k in lowest terms, i.e. 0 < b < m^k and
    m does not divide b.
    """

    m: int
    k: int
    b: int

    def __post_init__(self):
        if self.m < 2 or self.k < 1:
            raise ParameterError(f"Invalid code parameters m={self.m}, k={self.k}")
        if not 0 < self.b < self.m ** self.k or self.b % self.m == 0:
            raise ParameterError(f"b={self.b} is not a reduced numerator over {self.m}^{self.k}")

    @property
    def lambda_2(self) -> Fraction:
        return Fraction(self.b, self.m ** self.k)

    @property
    def digits(self) -> Tuple[int, int, int]:
        """(l_2, i_2, j_2) with b = l_2 m^(k-1) + m i_2 + j_2."""
        m, k = self.m, self.k
        if k == 1:
            return (0, 0, self.b)
        lead, rest = divmod(self.b, m ** (k - 1))
        i2, j2 = divmod(rest, m)
        return (lead, i2, j2)


def _check_bidiagonal(m: int, d: int):
    if m < 2:
        raise ParameterError(f"P_(m,d) needs m >= 2, got {m}")
    if d < 3:
        raise ParameterError(f"P_(m,d) needs d >= 3, got {d}")


def bidiagonal_codes(m: int, d: int) -> Iterator[BidiagonalCode]:
    """All codes (k, b) with 1 <= k <= d-2, ordered by k then b."""
    _check_bidiagonal(m, d)
    for k in range(1, d - 1):
        for b in range(1, m ** k):
            if b % m:
                yield BidiagonalCode(m, k, b)


def decode_bidiagonal(m: int, d: int, code: BidiagonalCode) -> FppPoint:
    """Rebuild the full lambda vector and lattice point for a code."""
    _check_bidiagonal(m, d)
    if code.m != m or code.k > d - 2:
        raise ParameterError(f"Code {code} does not belong to P_({m},{d})")
    lam = [Fraction(0)] * d
    lam[2] = code.lambda_2
    lam[1] = 1 - lam[2]
    num, den, t = code.b, m ** code.k, 2
    while den > m:
        den //= m
        num = (-num) % den
        t += 1
        lam[t] = Fraction(num, den)
    partial = sum(lam[1:], Fraction(0))
    height = math.ceil(partial)
    lam[0] = height - partial

    point = [height, int(lam[1] + lam[2])]
    for i in range(2, d - 1):
        point.append(int(m * lam[i] + lam[i + 1]))
    point.append(int(m * lam[d - 1]))
    return FppPoint(lam=tuple(lam), point=tuple(point), height=height)


def enumerate_bidiagonal(m: int, d: int) -> Iterator[FppPoint]:
    """Stream the m^(d-2) parallelepiped points of P_{m,d}, zero point first."""
    _check_bidiagonal(m, d)
    yield FppPoint(lam=(Fraction(0),) * d, point=(0,) * d, height=0)
    for code in bidiagonal_codes(m, d):
        yield decode_bidiagonal(m, d, code)


def bidiagonal_heights(m: int, k: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Heights of all points whose lambda_2 has denominator exactly m^k.

    Numerators are carried over the fixed denominator m^k, so the chain
    lambda_{t+1} = frac(-m lambda_t) is pure integer arithmetic.

    Returns:
        (b, heights) arrays aligned by position
    """
    M = m ** k
    dtype = object if (k + 2) * M >= INT64_SAFE else np.int64
    if dtype is object:
        b = np.array([x for x in range(1, M) if x % m], dtype=object)
    else:
        b = np.arange(1, M, dtype=np.int64)
        b = b[b % m != 0]
    # lambda_1 + lambda_2 = 1
    total = np.full(len(b), M, dtype=dtype)
    num, den = b.copy(), M
    while den > m:
        den //= m
        num = (-num) % den
        total = total + num * (M // den)
    heights = -((-total) // M)
    return b, heights.astype(np.int64)


def bidiagonal_height_counts(m: int, d: int, budget: Optional[int] = None) -> List[int]:
    _check_bidiagonal(m, d)
    _check_budget(m ** (d - 2), budget)
    counts = [0] * d
    counts[0] = 1
    for k in range(1, d - 1):
        _, heights = bidiagonal_heights(m, k)
        for h, c in enumerate(np.bincount(heights, minlength=d)):
            counts[h] += int(c)
    return counts


def bidiagonal_hstar(m: int, d: int, budget: Optional[int] = None) -> IntPolynomial:
    """h*(P_{m,d}) through the specialised code enumeration."""
    counts = bidiagonal_height_counts(m, d, budget=budget)
    logger.info(f"Enumerated {m ** (d - 2)} parallelepiped points of P_({m},{d}) by lambda_2 code")
    return IntPolynomial(tuple(counts))


def bidiagonal_census(m: int, d: int) -> pd.DataFrame:
    """
    Number of nonzero points of P_{m,d} per (k, height).

    Returns:
        DataFrame with columns k, height, count sorted by k then height
    """
    _check_bidiagonal(m, d)
    frames = []
    for k in range(1, d - 1):
        _, heights = bidiagonal_heights(m, k)
        frames.append(pd.DataFrame({'k': k, 'height': heights}))
    census = pd.concat(frames, ignore_index=True)
    census = census.groupby(['k', 'height']).size().reset_index(name='count')
    return census.sort_values(['k', 'height']).reset_index(drop=True)


def check_bidiagonal_height_bound(m: int, d: int) -> bool:
    """Every point with code k has height >= floor(k/2) / m."""
    _check_bidiagonal(m, d)
    for k in range(1, d - 1):
        _, heights = bidiagonal_heights(m, k)
        if np.any(heights * m < k // 2):
            logger.warning(f"P_({m},{d}): a point with k={k} violates the height bound")
            return False
    return True


def multidiagonal_band(P: LatticeSimplex) -> Tuple[int, ...]:
    """Recover the band vector a of a simplex built by ``make_multidiagonal``."""
    if not P.triangular or P.dim < 1:
        raise UnsupportedFormError(f"{P.label or 'Simplex'} is not a multidiagonal simplex")
    B = P.homogenized
    d = P.dim
    a = []
    for i in range(d, 0, -1):
        if B[i][d] == 0:
            break
        a.append(B[i][d])
    try:
        candidate = make_multidiagonal(a, d)
    except ParameterError:
        candidate = None
    if candidate is None or candidate.vertices != P.vertices:
        raise UnsupportedFormError(f"{P.label or 'Simplex'} is not a multidiagonal simplex")
    return tuple(a)


def check_multidiagonal_height_bound(P: LatticeSimplex) -> bool:
    """
    Every nonzero point has p_0 >= floor(k/s) / a_1, with k the largest
    index of a nonzero coefficient.
    """
    a = multidiagonal_band(P)
    s = len(a)
    if s >= 2 and math.gcd(a[0], a[1]) != 1:
        raise PreconditionError(f"Height bound needs gcd(a_1, a_2) = 1, got a={a}")
    for pt in enumerate_fpp(P):
        k = pt.support_index
        if k is None:
            continue
        if pt.height * a[0] < k // s:
            logger.warning(f"{P.label}: point {pt.point} with k={k} violates the height bound")
            return False
    return True


def check_bidiagonal_pairing(d: int) -> bool:
    """
    For m = 2, every point with lambda_2 < 1/2 has a partner with
    lambda_2 + 1/2 and lambda_1 - 1/2 at the same height.
    """
    _check_bidiagonal(2, d)
    for k in range(2, d - 1):
        b, heights = bidiagonal_heights(2, k)
        # b runs over the odd numbers below 2^k; the upper half is the lower half shifted by 2^(k-1)
        half = len(b) // 2
        if not np.array_equal(heights[:half], heights[half:]):
            logger.warning(f"P_(2,{d}): pairing fails at k={k}")
            return False
    return True

"""
Exact integer polynomials and truncated power series.

h*-polynomials and Ehrhart series prefixes are carried with Python integers
throughout; nothing here ever touches floating point.
"""

from dataclasses import dataclass, field
from math import comb
from typing import Iterable, List, Sequence, Tuple

from ..utils.errors import ParameterError, TruncationError

__all__ = [
    'IntPolynomial',
    'SeriesPrefix',
    'STABILITY_TAGS',
    'binom',
    'poly_mul',
    'poly_add',
    'poly_pow',
    'geometric_polynomial',
    'expand_rational_prefix',
    'prefix_agree',
    'prefix_product',
]

# Ordered strongest first; products keep the weakest contributing tag.
STABILITY_TAGS = ("exact", "certified", "empirical")


def binom(n: int, k: int) -> int:
    """Binomial coefficient, 0 whenever k < 0, n < 0 or k > n."""
    if k < 0 or n < 0 or k > n:
        return 0
    return comb(n, k)


def _trim(coeffs: Iterable[int]) -> Tuple[int, ...]:
    values = [int(c) for c in coeffs]
    while values and values[-1] == 0:
        values.pop()
    return tuple(values)


@dataclass(frozen=True)
class IntPolynomial:
    """
    Polynomial with integer coefficients, lowest degree first.

    Trailing zeros are trimmed on construction, so the zero polynomial has
    an empty coefficient tuple.
    """

    coeffs: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'coeffs', _trim(self.coeffs))

    @classmethod
    def one(cls) -> "IntPolynomial":
        return cls((1,))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        if self.is_zero:
            raise ValueError("The zero polynomial has no degree")
        return len(self.coeffs) - 1

    def coefficient(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def padded(self, length: int) -> List[int]:
        """Coefficients 0..length-1, zero padded or truncated."""
        return [self.coefficient(i) for i in range(length)]

    def __call__(self, z: int) -> int:
        value = 0
        for c in reversed(self.coeffs):
            value = value * z + c
        return value

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        return poly_mul(self, other)

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        return poly_add(self, other)

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(f"{c}")
            else:
                coeff = "" if c == 1 else f"{c}"
                power = "z" if i == 1 else f"z^{i}"
                terms.append(f"{coeff}{power}")
        return " + ".join(terms)


def poly_mul(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    """Exact convolution product."""
    if a.is_zero or b.is_zero:
        return IntPolynomial()
    out = [0] * (len(a.coeffs) + len(b.coeffs) - 1)
    for i, x in enumerate(a.coeffs):
        if x == 0:
            continue
        for j, y in enumerate(b.coeffs):
            out[i + j] += x * y
    return IntPolynomial(tuple(out))


def poly_add(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    length = max(len(a.coeffs), len(b.coeffs))
    return IntPolynomial(tuple(a.coefficient(i) + b.coefficient(i) for i in range(length)))


def poly_pow(a: IntPolynomial, k: int) -> IntPolynomial:
    if k < 0:
        raise ParameterError(f"Exponent must be nonnegative, got {k}")
    result = IntPolynomial.one()
    for _ in range(k):
        result = poly_mul(result, a)
    return result


def geometric_polynomial(d: int) -> IntPolynomial:
    """1 + z + ... + z^d."""
    if d < 0:
        raise ParameterError(f"Degree must be nonnegative, got {d}")
    return IntPolynomial((1,) * (d + 1))


@dataclass(frozen=True)
class SeriesPrefix:
    """
    Initial segment of a power series in Z[[z]].

    ``stability[i]`` records how coefficient i was obtained: ``exact``
    (closed form or expansion), ``certified`` (backed by a height bound)
    or ``empirical`` (windowed agreement across dimensions).
    """

    coeffs: Tuple[int, ...]
    stability: Tuple[str, ...] = field(default=())

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coeffs)
        stability = tuple(self.stability) or ("exact",) * len(coeffs)
        if not coeffs:
            raise ParameterError("A series prefix needs at least the constant term")
        if len(stability) != len(coeffs):
            raise ParameterError(
                f"Got {len(stability)} stability tags for {len(coeffs)} coefficients"
            )
        unknown = set(stability) - set(STABILITY_TAGS)
        if unknown:
            raise ParameterError(f"Unknown stability tags: {sorted(unknown)}")
        object.__setattr__(self, 'coeffs', coeffs)
        object.__setattr__(self, 'stability', stability)

    @classmethod
    def tagged(cls, coeffs: Sequence[int], tag: str) -> "SeriesPrefix":
        return cls(tuple(coeffs), (tag,) * len(coeffs))

    @classmethod
    def exact(cls, coeffs: Sequence[int]) -> "SeriesPrefix":
        return cls.tagged(coeffs, "exact")

    @property
    def degree_bound(self) -> int:
        return len(self.coeffs) - 1

    def truncate(self, r: int) -> "SeriesPrefix":
        if r > self.degree_bound:
            raise TruncationError(
                f"Cannot truncate a prefix of degree bound {self.degree_bound} to {r}"
            )
        return SeriesPrefix(self.coeffs[:r + 1], self.stability[:r + 1])


def expand_rational_prefix(numer: IntPolynomial, pole_order: int, r: int) -> SeriesPrefix:
    """
    Expand numer(z) / (1 - z)^pole_order through z^r.

    Args:
        numer: Numerator polynomial
        pole_order: Exponent of (1 - z) in the denominator
        r: Highest degree kept

    Returns:
        SeriesPrefix with every index tagged exact
    """
    if r < 0:
        raise ParameterError(f"Degree bound must be nonnegative, got {r}")
    if pole_order < 0:
        raise ParameterError(f"Pole order must be nonnegative, got {pole_order}")
    if pole_order == 0:
        return SeriesPrefix.exact(numer.padded(r + 1))

    coeffs = []
    for t in range(r + 1):
        total = 0
        for j in range(min(t, len(numer.coeffs) - 1) + 1):
            total += numer.coefficient(j) * binom(t - j + pole_order - 1, pole_order - 1)
        coeffs.append(total)
    return SeriesPrefix.exact(coeffs)


def prefix_agree(a: SeriesPrefix, b: SeriesPrefix, r: int) -> bool:
    """True iff coefficients 0..r of both prefixes coincide."""
    if a.degree_bound < r or b.degree_bound < r:
        raise TruncationError(
            f"Need degree bound {r}, got {a.degree_bound} and {b.degree_bound}"
        )
    return a.coeffs[:r + 1] == b.coeffs[:r + 1]


def _weakest(tags: Iterable[str]) -> str:
    return max(tags, key=STABILITY_TAGS.index)


def prefix_product(a: SeriesPrefix, b: SeriesPrefix) -> SeriesPrefix:
    """Cauchy product truncated to the shorter of the two prefixes."""
    r = min(a.degree_bound, b.degree_bound)
    coeffs = []
    stability = []
    for t in range(r + 1):
        coeffs.append(sum(a.coeffs[i] * b.coeffs[t - i] for i in range(t + 1)))
        stability.append(_weakest(a.stability[:t + 1] + b.stability[:t + 1]))
    return SeriesPrefix(tuple(coeffs), tuple(stability))

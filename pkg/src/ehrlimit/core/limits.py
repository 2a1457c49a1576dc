"""
Ehrhart limits of simplex families.

Two modes are kept strictly apart:

- certified: h* is evaluated once at a dimension past which the height
  bounds forbid new points of height <= r (bidiagonal and multidiagonal
  families with gcd(a_1, a_2) = 1 only);
- empirical: h* is evaluated along the family's schedule until the first
  r + 1 coefficients agree across a window of consecutive members.
"""

import json
import logging
from dataclasses import dataclass
from math import gcd
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import xarray as xr

from . import fpp
from .algebra import IntPolynomial, SeriesPrefix, expand_rational_prefix
from .combinators import VertexPolytope, crosspolytope, free_sum_power, join, provenance_hstar
from .simplex import (
    FamilySpec,
    LatticeSimplex,
    make_bidiagonal,
    make_delta_one_q,
    make_multidiagonal,
    make_q_of_n,
    make_S,
    validate_multidiagonal,
)
from ..utils.errors import BudgetExceededError, CertificationError, ParameterError, PreconditionError

__all__ = [
    'LimitReport',
    'family_member',
    'member_hstar',
    'certified_dimension',
    'limit_prefix_certified',
    'stabilize_empirical',
    'free_sum_limit_prefix',
]

logger = logging.getLogger(__name__)

# Spot checks above the certificate dimension, by family.
_DEFAULT_SPOT_CHECKS = {"bidiagonal": 0, "multidiagonal": 2}


@dataclass(frozen=True)
class LimitReport:
    """
    Outcome of a limit computation.

    Attributes:
        family: The family evaluated
        prefix: Coefficients 0..r with per-index stability tags
        dimensions: Schedule parameters evaluated, in order
        rows: Coefficients 0..r of h* at each evaluated parameter
        window: Agreement width (None in certified mode)
        unstable: Indices that did not settle before the schedule ended
        certificate_dimension: Dimension used by certified mode
    """

    family: FamilySpec
    prefix: SeriesPrefix
    dimensions: Tuple[int, ...]
    rows: Tuple[Tuple[int, ...], ...] = ()
    window: Optional[int] = None
    unstable: Tuple[int, ...] = ()
    certificate_dimension: Optional[int] = None

    @property
    def modes(self) -> Tuple[str, ...]:
        return self.prefix.stability

    @property
    def stabilized(self) -> bool:
        return not self.unstable

    @property
    def table(self) -> xr.DataArray:
        """Evaluated coefficients indexed by (dimension, degree)."""
        return xr.DataArray(
            np.array(self.rows, dtype=np.int64).reshape(len(self.dimensions), len(self.prefix.coeffs)),
            dims=('dimension', 'degree'),
            coords=dict(
                dimension=list(self.dimensions),
                degree=list(range(len(self.prefix.coeffs))),
            ),
            name='hstar',
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "family": self.family.to_dict(),
            "prefix": list(self.prefix.coeffs),
            "modes": list(self.modes),
            "dimensions": list(self.dimensions),
            "window": self.window,
            "unstable": list(self.unstable),
            "certificate_dimension": self.certificate_dimension,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def family_member(spec: FamilySpec) -> Union[LatticeSimplex, VertexPolytope]:
    """Concrete member of a family at the parameters set in ``spec``."""
    kind = spec.kind
    if kind == "delta":
        return make_delta_one_q(spec.q)
    if kind == "qn":
        _require_parameter(spec)
        return make_q_of_n(spec.n)

    _require_parameter(spec)
    d = spec.d
    if kind == "S":
        return make_S(d)
    if kind == "bidiagonal":
        return make_bidiagonal(spec.m, d)
    if kind == "multidiagonal":
        return make_multidiagonal(spec.a, d)
    if kind == "crosspolytope":
        return crosspolytope(d)
    if kind == "free_sum":
        return free_sum_power(make_delta_one_q(spec.q), spec.k, d)
    left, right = (family_member(part.with_parameter(d)) for part in spec.parts)
    return join(left, right, label=f"J_{d}")


def _require_parameter(spec: FamilySpec):
    if spec.parameter is None:
        name = "n" if spec.kind == "qn" else "d"
        raise ParameterError(f"Family {spec.kind} needs a value for {name}")


def member_hstar(spec: FamilySpec, **options) -> IntPolynomial:
    """
    h* of the family member described by ``spec``.

    ``options`` (workers, budget, chunk_size, parallel_threshold) go to the
    enumeration; bidiagonal members use the lambda_2-code kernel.
    """
    if spec.kind == "bidiagonal":
        _require_parameter(spec)
        return fpp.bidiagonal_hstar(spec.m, spec.d, budget=options.get('budget'))
    return provenance_hstar(family_member(spec), **options)


def certified_dimension(a: Sequence[int], r: int, bidiagonal: bool = False) -> int:
    """
    Dimension beyond which no new parallelepiped point has height <= r.

    Args:
        a: Band vector; for ``bidiagonal=True`` only a[0] = m is used
        r: Highest certified degree
        bidiagonal: Use P_{m,d} indexing (new points at d have k = d - 2)

    Returns:
        2rm + 3 for P_{m,d}, s (r a_1 + 1) for P(a; D)

    Raises:
        PreconditionError: If gcd(a_1, a_2) != 1
    """
    if r < 0:
        raise ParameterError(f"Degree must be nonnegative, got {r}")
    if bidiagonal:
        m = a[0]
        if m < 2:
            raise ParameterError(f"P_(m,d) needs m >= 2, got {m}")
        return 2 * r * m + 3
    a = validate_multidiagonal(a)
    if len(a) >= 2 and gcd(a[0], a[1]) != 1:
        raise PreconditionError(f"No height bound for a={a}: gcd(a_1, a_2) = {gcd(a[0], a[1])}")
    return len(a) * (r * a[0] + 1)


def limit_prefix_certified(spec: FamilySpec, r: int, spot_checks: Optional[int] = None,
                           **options) -> LimitReport:
    """
    Coefficients 0..r of the limit, evaluated at the certificate dimension.

    Args:
        spec: Bidiagonal or multidiagonal family (parameter ignored)
        r: Highest degree
        spot_checks: Extra evaluations at certificate + 1, + 2, ...; defaults
            to 2 for multidiagonal families and 0 for bidiagonal ones
        **options: Enumeration options, including ``budget``

    Raises:
        PreconditionError: For other families or when gcd(a_1, a_2) != 1
        BudgetExceededError: If the certificate dimension is out of budget
        CertificationError: If a spot check disagrees
    """
    if spec.kind == "bidiagonal":
        D = certified_dimension((spec.m,), r, bidiagonal=True)
    elif spec.kind == "multidiagonal":
        D = certified_dimension(spec.a, r)
    else:
        raise PreconditionError(f"No certificate is available for the {spec.kind} family")

    logger.info(f"Certified limit of {spec.kind} through degree {r}: evaluating at dimension {D}")
    coeffs = tuple(member_hstar(spec.with_parameter(D), **options).padded(r + 1))
    dimensions = [D]
    rows = [coeffs]

    extra = _DEFAULT_SPOT_CHECKS[spec.kind] if spot_checks is None else spot_checks
    for offset in range(1, extra + 1):
        try:
            check = tuple(member_hstar(spec.with_parameter(D + offset), **options).padded(r + 1))
        except BudgetExceededError as e:
            logger.warning(f"Skipping spot check at dimension {D + offset}: {e}")
            break
        if check != coeffs:
            logger.error(f"Spot check at dimension {D + offset} gave {list(check)}, certified {list(coeffs)}")
            raise CertificationError(
                f"Certified prefix {list(coeffs)} at dimension {D} disagrees with "
                f"{list(check)} at dimension {D + offset}"
            )
        dimensions.append(D + offset)
        rows.append(check)

    return LimitReport(
        family=spec,
        prefix=SeriesPrefix.tagged(coeffs, "certified"),
        dimensions=tuple(dimensions),
        rows=tuple(rows),
        certificate_dimension=D,
    )


def _disagreeing(rows: List[Tuple[int, ...]], r: int) -> Tuple[int, ...]:
    return tuple(i for i in range(r + 1) if len({row[i] for row in rows}) > 1)


def stabilize_empirical(spec: FamilySpec, r: int, window: int = 3, d_max: int = 40,
                        **options) -> LimitReport:
    """
    Walk the family's schedule until coefficients 0..r agree across ``window``
    consecutive members.

    Args:
        spec: Family with a schedule; its own parameter value is ignored
        r: Highest degree
        window: Number of consecutive agreeing members, >= 2
        d_max: Last schedule parameter tried (n for q(n), d otherwise)

    Returns:
        LimitReport tagged empirical; ``unstable`` lists the indices still
        moving when ``d_max`` was reached
    """
    if window < 2:
        raise ParameterError(f"Window must be >= 2, got {window}")
    if r < 0:
        raise ParameterError(f"Degree must be nonnegative, got {r}")
    if not spec.has_schedule:
        raise ParameterError(f"Family {spec.kind} has no dimension schedule")

    dimensions: List[int] = []
    rows: List[Tuple[int, ...]] = []
    for value in range(spec.schedule_start, d_max + 1):
        coeffs = tuple(member_hstar(spec.with_parameter(value), **options).padded(r + 1))
        dimensions.append(value)
        rows.append(coeffs)
        logger.info(f"{spec.kind} at {value}: {list(coeffs)}")
        if len(rows) >= window and not _disagreeing(rows[-window:], r):
            logger.info(f"{spec.kind} stabilized through degree {r} at {value}")
            return LimitReport(
                family=spec,
                prefix=SeriesPrefix.tagged(coeffs, "empirical"),
                dimensions=tuple(dimensions),
                rows=tuple(rows),
                window=window,
            )

    if not rows:
        raise ParameterError(f"Schedule of {spec.kind} starts at {spec.schedule_start}, beyond d_max={d_max}")
    if len(rows) < window:
        unstable = tuple(range(r + 1))
    else:
        unstable = _disagreeing(rows[-window:], r)
    logger.warning(f"{spec.kind} did not stabilize by {d_max}; unstable indices {list(unstable)}")
    return LimitReport(
        family=spec,
        prefix=SeriesPrefix.tagged(rows[-1], "empirical"),
        dimensions=tuple(dimensions),
        rows=tuple(rows),
        window=window,
        unstable=unstable,
    )


def free_sum_limit_prefix(Q_hstar: IntPolynomial, k: int, r: int) -> SeriesPrefix:
    """
    Prefix of the limit h*(Q; z) / (1 - z)^k of S_d (+) ... (+) S_d (+) Q.

    Raises:
        ParameterError: If h*(Q) does not have constant term 1 or k < 1
    """
    if Q_hstar.coefficient(0) != 1:
        raise ParameterError(f"h*(Q) must have constant term 1, got {Q_hstar}")
    if k < 1:
        raise ParameterError(f"Need k >= 1 copies, got {k}")
    return expand_rational_prefix(Q_hstar, k, r)

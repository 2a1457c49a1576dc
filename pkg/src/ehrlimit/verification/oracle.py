"""
Brute-force Ehrhart counting.

i(P; t) is counted directly from an exact inequality description of the
cone over P. The bounding box of tP is scanned one slice of the first
coordinate at a time; inside a slice the remaining leading coordinates are
vectorized with numpy and the last coordinate's fiber is counted in closed
form from the integer inequalities.
"""

import logging
from typing import Optional, Union

import numpy as np

from ..core.algebra import IntPolynomial, SeriesPrefix, expand_rational_prefix
from ..core.combinators import VertexPolytope, as_polytope, cone_functionals, provenance_hstar
from ..core.simplex import LatticeSimplex
from ..utils.errors import OracleScaleError, ParameterError

__all__ = [
    'count_dilate_points',
    'ehrhart_prefix_by_counting',
    'consistency_check',
    'check_oracle_scale',
]

logger = logging.getLogger(__name__)

Polytope = Union[LatticeSimplex, VertexPolytope]


def check_oracle_scale(P: Polytope, T: int, max_dim: int = 7, max_t: int = 6):
    """Refuse counting runs beyond the oracle's intended scale."""
    P = as_polytope(P)
    if P.dim > max_dim or T > max_t:
        raise OracleScaleError(
            f"Oracle is limited to dim <= {max_dim} and T <= {max_t}, got dim {P.dim} and T {T}"
        )


def _leading_slices(lo: np.ndarray, hi: np.ndarray):
    """Yield integer points of the box over all coordinates but the last, one first-coordinate slice at a time."""
    lead = len(lo) - 1
    if lead <= 0:
        yield np.zeros((1, 0), dtype=np.int64)
        return
    axes = [np.arange(lo[i], hi[i] + 1, dtype=np.int64) for i in range(1, lead)]
    if axes:
        grid = np.meshgrid(*axes, indexing='ij')
        rest = np.stack([g.ravel() for g in grid], axis=1)
    else:
        rest = np.zeros((1, 0), dtype=np.int64)
    for x0 in range(int(lo[0]), int(hi[0]) + 1):
        first = np.full((len(rest), 1), x0, dtype=np.int64)
        yield np.hstack([first, rest])


def count_dilate_points(P: Polytope, t: int) -> int:
    """
    Number of lattice points in the dilate tP.

    Args:
        P: Simplex or combinator polytope
        t: Dilation factor, t >= 0

    Returns:
        |tP cap Z^n|
    """
    if t < 0:
        raise ParameterError(f"Dilation factor must be nonnegative, got {t}")
    P = as_polytope(P)
    n = P.ambient_dim
    if t == 0 or n == 0:
        return 1

    functionals = np.array(cone_functionals(P), dtype=np.int64)
    vertices = np.array(P.vertices, dtype=np.int64)
    lo = t * vertices.min(axis=0)
    hi = t * vertices.max(axis=0)

    total = 0
    for points in _leading_slices(lo, hi):
        lower = np.full(len(points), lo[-1], dtype=np.int64)
        upper = np.full(len(points), hi[-1], dtype=np.int64)
        feasible = np.ones(len(points), dtype=bool)
        for g in functionals:
            residual = g[0] * t + points @ g[1:n]
            last = int(g[n])
            if last > 0:
                lower = np.maximum(lower, -(residual // last))
            elif last < 0:
                upper = np.minimum(upper, residual // (-last))
            else:
                feasible &= residual >= 0
        sizes = np.clip(upper - lower + 1, 0, None)
        total += int(sizes[feasible].sum())
    return total


def ehrhart_prefix_by_counting(P: Polytope, T: int) -> SeriesPrefix:
    """Ehrhart series coefficients i(P; 0), ..., i(P; T)."""
    if T < 0:
        raise ParameterError(f"Degree bound must be nonnegative, got {T}")
    counts = [count_dilate_points(P, t) for t in range(T + 1)]
    logger.debug(f"Counted dilates of {as_polytope(P).label}: {counts}")
    return SeriesPrefix.exact(counts)


def consistency_check(P: Polytope, T: int, hstar: Optional[IntPolynomial] = None, **options) -> bool:
    """
    Compare counted dilates with the expansion of h*(z) / (1 - z)^(dim + 1).

    Args:
        P: Simplex or combinator polytope
        T: Highest dilation compared
        hstar: h*-polynomial to test; computed from the construction tree if omitted
        **options: Passed to the h* computation (workers, budget, ...)
    """
    P = as_polytope(P)
    if hstar is None:
        hstar = provenance_hstar(P, **options)
    counted = ehrhart_prefix_by_counting(P, T)
    expanded = expand_rational_prefix(hstar, P.dim + 1, T)
    if counted.coeffs != expanded.coeffs:
        logger.warning(
            f"{P.label}: counted {list(counted.coeffs)} but h* gives {list(expanded.coeffs)}"
        )
        return False
    logger.info(f"{P.label}: Ehrhart prefix through t={T} consistent")
    return True

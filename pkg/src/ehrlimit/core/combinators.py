"""
Free sums, joins and lattice pyramids on the vertex level.

A free sum is generally not a simplex, so combinator results are kept as
``VertexPolytope`` values that remember how they were built. Their
h*-polynomials follow from that construction tree:

- join: h*(P * Q) = h*(P) h*(Q)
- pyramid: h*(pyr P) = h*(P)
- free sum with a reflexive left argument: h*(P (+) Q) = h*(P) h*(Q)
"""

import logging
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import sympy

from . import fpp
from .algebra import IntPolynomial, poly_mul
from .simplex import LatticeSimplex, is_reflexive as simplex_is_reflexive, make_S
from ..utils.errors import DegenerateSimplexError, ParameterError, PreconditionError, UnsupportedFormError

__all__ = [
    'VertexPolytope',
    'as_polytope',
    'free_sum',
    'join',
    'pyramid',
    'cone_functionals',
    'contains_origin_in_interior',
    'is_reflexive',
    'provenance_hstar',
    'placed_simplex',
    'crosspolytope',
    'free_sum_power',
]

logger = logging.getLogger(__name__)

Vector = Tuple[int, ...]

PROVENANCE_KINDS = ("simplex", "point", "free_sum", "join", "pyramid")


@dataclass(frozen=True)
class VertexPolytope:
    """
    Lattice polytope given by a vertex list and its construction tree.

    Attributes:
        vertices: Integer vectors of length ``ambient_dim``
        ambient_dim: Dimension of the ambient lattice; the vertices span it
        kind: Root of the construction tree (simplex, point, free_sum, join, pyramid)
        children: Arguments of the root construction
        simplex: The leaf simplex when ``kind == "simplex"``
        left_reflexive: For free sums, whether the left argument is reflexive
        label: Display name
    """

    vertices: Tuple[Vector, ...]
    ambient_dim: int
    kind: str
    children: Tuple["VertexPolytope", ...] = ()
    simplex: Optional[LatticeSimplex] = None
    left_reflexive: bool = False
    label: str = ""

    def __post_init__(self):
        if self.kind not in PROVENANCE_KINDS:
            raise ParameterError(f"Unknown construction {self.kind!r}")
        vertices = tuple(tuple(int(x) for x in v) for v in self.vertices)
        if any(len(v) != self.ambient_dim for v in vertices):
            raise ParameterError(f"Every vertex of {self.label or 'polytope'} needs {self.ambient_dim} coordinates")
        object.__setattr__(self, 'vertices', vertices)
        if self.ambient_dim > 0:
            base = vertices[0]
            spread = sympy.Matrix([[x - y for x, y in zip(v, base)] for v in vertices[1:]])
            if spread.rank() != self.ambient_dim:
                raise DegenerateSimplexError(
                    f"Vertices of {self.label or 'polytope'} do not span dimension {self.ambient_dim}"
                )

    @classmethod
    def point(cls) -> "VertexPolytope":
        """The 0-dimensional lattice polytope, unit for joins."""
        return cls(vertices=((),), ambient_dim=0, kind="point", label="point")

    @classmethod
    def from_simplex(cls, P: LatticeSimplex) -> "VertexPolytope":
        return cls(vertices=P.vertices, ambient_dim=P.ambient_dim, kind="simplex",
                   simplex=P, label=P.label or "simplex")

    @property
    def dim(self) -> int:
        return self.ambient_dim

    @property
    def provenance(self) -> str:
        """Construction tree as a nested expression."""
        if self.kind in ("simplex", "point"):
            return self.label
        inner = ", ".join(child.provenance for child in self.children)
        return f"{self.kind}({inner})"

    def __str__(self) -> str:
        return f"{self.label} (dim {self.dim}, {len(self.vertices)} vertices)"


def as_polytope(P) -> VertexPolytope:
    if isinstance(P, VertexPolytope):
        return P
    if isinstance(P, LatticeSimplex):
        return VertexPolytope.from_simplex(P)
    raise ParameterError(f"Expected a LatticeSimplex or VertexPolytope, got {type(P).__name__}")


def _integral(row: Sequence[Fraction]) -> Vector:
    scale = math.lcm(*(Fraction(x).denominator for x in row))
    values = [int(Fraction(x) * scale) for x in row]
    common = math.gcd(*values)
    return tuple(v // common for v in values) if common > 1 else tuple(values)


def cone_functionals(P) -> Tuple[Vector, ...]:
    """
    Integer vectors g with cone(P) = {(t, x) : g . (t, x) >= 0 for all g}.

    The description is derived from the construction tree; for a simplex
    leaf it is the scaled rows of the inverse homogenized matrix.
    """
    P = as_polytope(P)
    if P.kind == "point":
        return ((1,),)
    if P.kind == "simplex":
        return tuple(_integral(row) for row in P.simplex.barycentric_functionals)
    if P.kind == "free_sum":
        left, right = P.children
        out = []
        for g in cone_functionals(left):
            for h in cone_functionals(right):
                alpha = [Fraction(x, g[0]) for x in g[1:]]
                beta = [Fraction(x, h[0]) for x in h[1:]]
                out.append(_integral([Fraction(1)] + alpha + beta))
        return tuple(out)

    # join and pyramid, coordinates (t, x, y, s)
    left, right = P.children
    p, q = left.ambient_dim, right.ambient_dim
    out = []
    for g in cone_functionals(left):
        out.append((g[0],) + g[1:] + (0,) * q + (-g[0],))
    for h in cone_functionals(right):
        out.append((0,) + (0,) * p + h[1:] + (h[0],))
    out.append((0,) * (p + q + 1) + (1,))
    out.append((1,) + (0,) * (p + q) + (-1,))
    return tuple(out)


def contains_origin_in_interior(P) -> bool:
    P = as_polytope(P)
    if P.kind == "simplex":
        return P.simplex.contains_origin_in_interior()
    return all(g[0] > 0 for g in cone_functionals(P))


def is_reflexive(P) -> bool:
    """
    Reflexivity for simplices and free sums: origin interior and every facet
    of the form <a, x> >= -1 with a integral.
    """
    P = as_polytope(P)
    if P.kind == "point":
        return True
    if P.kind == "simplex":
        return simplex_is_reflexive(P.simplex)
    if P.kind != "free_sum":
        raise UnsupportedFormError(f"Reflexivity of a {P.kind} is not supported")
    if not contains_origin_in_interior(P):
        return False
    return all(
        all(x % g[0] == 0 for x in g[1:])
        for g in cone_functionals(P)
    )


def free_sum(P, Q, label: str = "") -> VertexPolytope:
    """
    P (+) Q = conv(P x {0} u {0} x Q).

    Raises:
        PreconditionError: If either argument does not contain the origin in its interior
    """
    P, Q = as_polytope(P), as_polytope(Q)
    for arg in (P, Q):
        if not contains_origin_in_interior(arg):
            raise PreconditionError(f"{arg.label} does not contain the origin in its interior")
    p, q = P.ambient_dim, Q.ambient_dim
    vertices = [v + (0,) * q for v in P.vertices] + [(0,) * p + w for w in Q.vertices]
    left_reflexive = is_reflexive(P)
    if not left_reflexive:
        logger.debug(f"Left argument {P.label} of the free sum is not reflexive")
    return VertexPolytope(
        vertices=tuple(vertices), ambient_dim=p + q, kind="free_sum",
        children=(P, Q), left_reflexive=left_reflexive,
        label=label or f"({P.label} (+) {Q.label})",
    )


def _join_vertices(P: VertexPolytope, Q: VertexPolytope) -> Tuple[Vector, ...]:
    p, q = P.ambient_dim, Q.ambient_dim
    return tuple(
        [v + (0,) * q + (0,) for v in P.vertices]
        + [(0,) * p + w + (1,) for w in Q.vertices]
    )


def join(P, Q, label: str = "") -> VertexPolytope:
    """P * Q = conv(P x {0} x {0} u {0} x Q x {1}) in dimension dim P + dim Q + 1."""
    P, Q = as_polytope(P), as_polytope(Q)
    return VertexPolytope(
        vertices=_join_vertices(P, Q), ambient_dim=P.ambient_dim + Q.ambient_dim + 1,
        kind="join", children=(P, Q), label=label or f"({P.label} * {Q.label})",
    )


def pyramid(P, label: str = "") -> VertexPolytope:
    """Lattice pyramid over P with apex e_{n+1}; same vertices as join(P, point)."""
    P = as_polytope(P)
    apex = VertexPolytope.point()
    return VertexPolytope(
        vertices=_join_vertices(P, apex), ambient_dim=P.ambient_dim + 1,
        kind="pyramid", children=(P, apex), label=label or f"pyr({P.label})",
    )


def provenance_hstar(P, **options) -> IntPolynomial:
    """
    h*-polynomial from the construction tree.

    Simplex leaves are enumerated with ``fpp.hstar``; ``options`` are passed
    through (workers, budget, chunk_size, exact).

    Raises:
        PreconditionError: For a free sum whose left argument is not reflexive
    """
    P = as_polytope(P)
    if P.kind == "point":
        return IntPolynomial.one()
    if P.kind == "simplex":
        return fpp.hstar(P.simplex, **options)
    if P.kind == "pyramid":
        return provenance_hstar(P.children[0], **options)
    if P.kind == "free_sum" and not P.left_reflexive:
        raise PreconditionError(
            f"h* of {P.label} is not a product: left argument {P.children[0].label} is not reflexive"
        )
    left, right = P.children
    return poly_mul(provenance_hstar(left, **options), provenance_hstar(right, **options))


def placed_simplex(P) -> LatticeSimplex:
    """
    Triangular simplex unimodularly equivalent to a join/pyramid of simplices.

    Joins are placed with coordinates ordered (x, s, y): the left factor's
    triangular vertices, then (0, 1, w) for the right factor's vertices.
    """
    P = as_polytope(P)
    if P.kind == "point":
        return LatticeSimplex(((),), label="point")
    if P.kind == "simplex":
        return P.simplex.enumeration_form
    if P.kind == "free_sum":
        raise UnsupportedFormError(f"{P.label} is a free sum and has no simplex placement")
    left, right = (placed_simplex(child) for child in P.children)
    p, q = left.ambient_dim, right.ambient_dim
    vertices = [v + (0,) + (0,) * q for v in left.vertices]
    vertices += [(0,) * p + (1,) + w for w in right.vertices]
    return LatticeSimplex(tuple(vertices), label=f"{P.label} [placed]")


def crosspolytope(d: int) -> VertexPolytope:
    """S_1 (+) ... (+) S_1 with d summands; h* = (1 + z)^d."""
    if d < 1:
        raise ParameterError(f"Crosspolytope needs d >= 1, got {d}")
    segment = as_polytope(make_S(1))
    result = segment
    for _ in range(d - 1):
        result = free_sum(segment, result)
    return replace(result, label=f"C_{d}")


def free_sum_power(Q, k: int, d: int) -> VertexPolytope:
    """S_d (+) ... (+) S_d (+) Q with k copies of S_d, each a reflexive left argument."""
    if k < 1:
        raise ParameterError(f"Need at least one copy of S_d, got k={k}")
    S_d = as_polytope(make_S(d))
    result = as_polytope(Q)
    for _ in range(k):
        result = free_sum(S_d, result)
    return result

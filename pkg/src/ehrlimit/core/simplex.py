"""
Lattice simplices and the simplex families studied for Ehrhart limits.

A simplex is stored by its explicit vertex list; the homogenized matrix
(all-ones row on top, homogenized vertices as columns) is derived on demand
and cached.
"""

import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Any, Dict, Optional, Sequence, Tuple

import sympy

from ..utils.errors import DegenerateSimplexError, ParameterError, UnsupportedFormError

__all__ = [
    'LatticeSimplex',
    'FamilySpec',
    'FAMILY_KINDS',
    'from_columns',
    'make_S',
    'make_delta_one_q',
    'q_of_n',
    'make_q_of_n',
    'make_bidiagonal',
    'make_multidiagonal',
    'validate_multidiagonal',
    'is_reflexive',
    'normalized_volume',
]

logger = logging.getLogger(__name__)

Vector = Tuple[int, ...]


def _lattice_coordinate(x) -> int:
    if isinstance(x, (bool, str)):
        raise ParameterError(f"Vertex coordinates must be integers, got {x!r}")
    try:
        value = int(x)
    except (TypeError, ValueError):
        raise ParameterError(f"Vertex coordinates must be integers, got {x!r}")
    if value != x:
        raise ParameterError(f"Vertex coordinates must be integers, got {x!r}")
    return value


def _to_fraction(value) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


@dataclass(frozen=True)
class LatticeSimplex:
    """
    Full-dimensional lattice simplex given by its vertices.

    Attributes:
        vertices: d+1 integer vectors of length d
        label: Human readable name used in logs and reports
        hnf_form: Optional unimodularly equivalent simplex in Hermite normal
            form, supplied by family constructors whose own vertex list is
            not triangular
    """

    vertices: Tuple[Vector, ...]
    label: str = ""
    hnf_form: Optional["LatticeSimplex"] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        vertices = tuple(tuple(_lattice_coordinate(x) for x in v) for v in self.vertices)
        if not vertices:
            raise DegenerateSimplexError("A simplex needs at least one vertex")
        n = len(vertices[0])
        if any(len(v) != n for v in vertices):
            raise ParameterError("All vertices must have the same length")
        if len(vertices) != n + 1:
            raise DegenerateSimplexError(
                f"{len(vertices)} vertices cannot span a full-dimensional simplex in Z^{n}"
            )
        object.__setattr__(self, 'vertices', vertices)
        if self.normalized_volume == 0:
            raise DegenerateSimplexError(f"Vertices of {self.label or 'simplex'} are affinely dependent")

    @property
    def ambient_dim(self) -> int:
        return len(self.vertices[0])

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    @cached_property
    def homogenized(self) -> Tuple[Vector, ...]:
        """Rows of the (d+1)x(d+1) matrix whose columns are (1, v)."""
        rows = [tuple(1 for _ in self.vertices)]
        for i in range(self.ambient_dim):
            rows.append(tuple(v[i] for v in self.vertices))
        return tuple(rows)

    @property
    def diagonal(self) -> Vector:
        return tuple(self.homogenized[i][i] for i in range(self.dim + 1))

    @cached_property
    def triangular(self) -> bool:
        """Origin first and upper-triangular homogenized matrix with positive diagonal."""
        if any(self.vertices[0]):
            return False
        B = self.homogenized
        for i in range(self.dim + 1):
            if B[i][i] <= 0:
                return False
            if any(B[i][j] != 0 for j in range(i)):
                return False
        return True

    @cached_property
    def hnf_flag(self) -> bool:
        """Triangular, and every column's off-diagonal entries lie in [0, diagonal)."""
        if not self.triangular:
            return False
        B = self.homogenized
        for j in range(1, self.dim + 1):
            for i in range(1, j):
                if not 0 <= B[i][j] < B[j][j]:
                    return False
        return True

    @cached_property
    def normalized_volume(self) -> int:
        """Absolute determinant of the homogenized matrix."""
        B = self.homogenized
        if all(B[i][j] == 0 for i in range(len(B)) for j in range(i)):
            det = 1
            for i in range(len(B)):
                det *= B[i][i]
            return abs(det)
        return abs(int(sympy.Matrix(B).det(method='bareiss')))

    @property
    def enumeration_form(self) -> "LatticeSimplex":
        """The triangular simplex the parallelepiped enumerators run on."""
        if self.triangular:
            return self
        if self.hnf_form is not None:
            return self.hnf_form
        raise UnsupportedFormError(
            f"{self.label or 'Simplex'} is not in upper-triangular (Hermite) form"
        )

    @cached_property
    def barycentric_functionals(self) -> Tuple[Tuple[Fraction, ...], ...]:
        """
        Rows of the inverse homogenized matrix.

        Row i evaluated at (t, x) is the i-th barycentric coordinate of x in
        the dilate tP, so tP is cut out by all rows being nonnegative.
        """
        inverse = sympy.Matrix(self.homogenized).inv()
        return tuple(
            tuple(_to_fraction(inverse[i, j]) for j in range(inverse.cols))
            for i in range(inverse.rows)
        )

    def contains_origin_in_interior(self) -> bool:
        return all(row[0] > 0 for row in self.barycentric_functionals)

    def __str__(self) -> str:
        name = self.label or "simplex"
        return f"{name} (dim {self.dim}, volume {self.normalized_volume})"


def normalized_volume(P: LatticeSimplex) -> int:
    return P.normalized_volume


def from_columns(matrix: Sequence[Sequence[int]], label: str = "") -> LatticeSimplex:
    """
    Build a simplex from a vertex matrix.

    Args:
        matrix: d rows; either d+1 columns (every vertex explicit) or d
            columns (the origin is prepended as vertex 0)
        label: Optional name

    Returns:
        Validated LatticeSimplex
    """
    rows = [list(r) for r in matrix]
    d = len(rows)
    if d == 0:
        raise ParameterError("Matrix has no rows")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ParameterError("Matrix rows have different lengths")
    width = widths.pop()
    if width == d:
        columns = [tuple(0 for _ in range(d))]
    elif width == d + 1:
        columns = []
    else:
        raise ParameterError(f"A {d}-row matrix needs {d} or {d + 1} columns, got {width}")
    columns.extend(tuple(rows[i][j] for i in range(d)) for j in range(width))
    return LatticeSimplex(tuple(columns), label=label)


def _delta_hnf(q: Sequence[int], label: str) -> LatticeSimplex:
    # conv(e_1..e_d, -q) translated to put e_1 at the origin and reduced by
    # unimodular row operations: unit columns, then (N - q_2, ..., N - q_d, N).
    d = len(q)
    N = 1 + sum(q)
    vertices = [tuple(0 for _ in range(d))]
    for j in range(d - 1):
        vertices.append(tuple(1 if i == j else 0 for i in range(d)))
    vertices.append(tuple(N - q[i + 1] for i in range(d - 1)) + (N,))
    return LatticeSimplex(tuple(vertices), label=f"{label} [HNF]")


def make_delta_one_q(q: Sequence[int], label: str = "") -> LatticeSimplex:
    """conv(e_1, ..., e_d, -q) for a weight vector q with entries >= 1."""
    q = tuple(int(x) for x in q)
    if not q:
        raise ParameterError("Weight vector q must be nonempty")
    if any(x < 1 for x in q):
        raise ParameterError(f"Weights must be >= 1, got {q}")
    d = len(q)
    label = label or f"Delta_(1,{','.join(str(x) for x in q)})"
    vertices = [tuple(1 if i == j else 0 for i in range(d)) for j in range(d)]
    vertices.append(tuple(-x for x in q))
    return LatticeSimplex(tuple(vertices), label=label, hnf_form=_delta_hnf(q, label))


def make_S(d: int) -> LatticeSimplex:
    """The reflexive simplex conv(e_1, ..., e_d, -(e_1 + ... + e_d))."""
    if d < 1:
        raise ParameterError(f"S_d needs d >= 1, got {d}")
    return make_delta_one_q((1,) * d, label=f"S_{d}")


def q_of_n(n: int) -> Tuple[int, ...]:
    """(1, ..., 1 [2n-1 times], 3n, 10n, 15n)."""
    if n < 1:
        raise ParameterError(f"q(n) needs n >= 1, got {n}")
    return (1,) * (2 * n - 1) + (3 * n, 10 * n, 15 * n)


def make_q_of_n(n: int) -> LatticeSimplex:
    if n == 1:
        logger.warning("q(1) is constructed, but reflexivity and the h*-formula are only known for n >= 2")
    return make_delta_one_q(q_of_n(n), label=f"Delta_(1,q({n}))")


def make_bidiagonal(m: int, d: int) -> LatticeSimplex:
    """
    The (d-1)-dimensional simplex P_{m,d}.

    Its (d-1) x d vertex matrix has first row (0, 1, 1, 0, ..., 0) and, for
    rows i >= 2, m in column i and 1 in column i+1.
    """
    if m < 2:
        raise ParameterError(f"P_(m,d) needs m >= 2, got {m}")
    if d < 3:
        raise ParameterError(f"P_(m,d) needs d >= 3, got {d}")
    rows = []
    for i in range(1, d):
        row = [0] * d
        row[i] = 1 if i == 1 else m
        if i + 1 < d:
            row[i + 1] = 1
        rows.append(row)
    return from_columns(rows, label=f"P_({m},{d})")


def validate_multidiagonal(a: Sequence[int], d: Optional[int] = None) -> Tuple[int, ...]:
    a = tuple(int(x) for x in a)
    if not a:
        raise ParameterError("Band vector a must be nonempty")
    if any(x < 1 for x in a):
        raise ParameterError(f"Band entries must be >= 1, got {a}")
    if any(a[0] <= x for x in a[1:]):
        raise ParameterError(f"Need a_1 > a_j for j >= 2, got {a}")
    if d is not None and d < len(a):
        raise ParameterError(f"P(a;d) needs d >= s = {len(a)}, got {d}")
    return a


def make_multidiagonal(a: Sequence[int], d: int) -> LatticeSimplex:
    """
    The d-dimensional a-multidiagonal simplex P(a;d).

    Columns 1..s-1 are unit vectors; column j >= s has a_1 on the diagonal
    and a_i in row j-i+1. For a = (m, 1) this is P_{m,d+1}.
    """
    a = validate_multidiagonal(a, d)
    s = len(a)
    rows = [[0] * (d + 1) for _ in range(d)]
    for j in range(1, d + 1):
        if j < s:
            rows[j - 1][j] = 1
            continue
        for i, value in enumerate(a, start=1):
            rows[j - i][j] = value
    return from_columns(rows, label=f"P(({','.join(str(x) for x in a)});{d})")


def is_reflexive(P: LatticeSimplex) -> bool:
    """
    True iff the origin is interior and every facet lies on {x : <a,x> = 1}
    with a integral.
    """
    if not P.contains_origin_in_interior():
        return False
    ones = sympy.ones(P.dim, 1)
    for i in range(P.dim + 1):
        facet = sympy.Matrix([list(v) for j, v in enumerate(P.vertices) if j != i])
        normal = facet.LUsolve(ones)
        if any(not sympy.Rational(x).is_integer for x in normal):
            logger.debug(f"{P.label}: facet {i} normal {list(normal)} is not integral")
            return False
    return True


FAMILY_KINDS = (
    "S", "delta", "qn", "bidiagonal", "multidiagonal",
    "crosspolytope", "free_sum", "join",
)

# Smallest admissible parameter value per family.
_PARAMETER_MIN = {
    "S": 1,
    "qn": 1,
    "bidiagonal": 3,
    "crosspolytope": 1,
    "free_sum": 1,
    "join": 0,
}

# First value of the schedule parameter for each dimension-indexed family.
_SCHEDULE_START = {
    "S": 1,
    "qn": 2,
    "bidiagonal": 3,
    "crosspolytope": 1,
    "free_sum": 1,
}


@dataclass(frozen=True)
class FamilySpec:
    """
    A named simplex family and its parameters.

    The schedule parameter is ``n`` for the q(n) family and ``d`` for all
    others (for ``join`` it is the common step index).
    """

    kind: str
    m: Optional[int] = None
    a: Tuple[int, ...] = ()
    q: Tuple[int, ...] = ()
    k: Optional[int] = None
    n: Optional[int] = None
    d: Optional[int] = None
    parts: Tuple["FamilySpec", ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'a', tuple(self.a))
        object.__setattr__(self, 'q', tuple(self.q))
        object.__setattr__(self, 'parts', tuple(self.parts))
        kind = self.kind
        if kind not in FAMILY_KINDS:
            raise ParameterError(f"Unknown family {kind!r}; choose from {', '.join(FAMILY_KINDS)}")
        if kind == "bidiagonal":
            if self.m is None or self.m < 2:
                raise ParameterError(f"Bidiagonal family needs m >= 2, got {self.m}")
            if self.d is not None and self.d < 3:
                raise ParameterError(f"Bidiagonal family needs d >= 3, got {self.d}")
        elif kind == "multidiagonal":
            validate_multidiagonal(self.a, self.d)
        elif kind in ("delta", "free_sum"):
            if not self.q or any(x < 1 for x in self.q):
                raise ParameterError(f"Family {kind} needs weights q >= 1, got {self.q}")
            if kind == "free_sum" and (self.k is None or self.k < 1):
                raise ParameterError(f"Free-sum family needs k >= 1, got {self.k}")
        elif kind == "join":
            if len(self.parts) != 2:
                raise ParameterError("Join family needs exactly two part families")
        minimum = len(self.a) if kind == "multidiagonal" else _PARAMETER_MIN.get(kind)
        value = self.parameter
        if value is not None and minimum is not None and value < minimum:
            raise ParameterError(f"Family {kind} parameter must be >= {minimum}, got {value}")

    @property
    def parameter(self) -> Optional[int]:
        return self.n if self.kind == "qn" else self.d

    @property
    def schedule_start(self) -> Optional[int]:
        if self.kind == "multidiagonal":
            return len(self.a)
        if self.kind == "join":
            return max(part.schedule_start or 0 for part in self.parts)
        return _SCHEDULE_START.get(self.kind)

    @property
    def has_schedule(self) -> bool:
        return self.schedule_start is not None

    def with_parameter(self, value: int) -> "FamilySpec":
        if self.kind == "qn":
            return replace(self, n=value)
        return replace(self, d=value)

    @property
    def gcd_ok(self) -> bool:
        """gcd(a_1, a_2) = 1, the condition behind the height bounds."""
        if self.kind == "bidiagonal":
            return True
        if self.kind == "multidiagonal":
            return len(self.a) < 2 or gcd(self.a[0], self.a[1]) == 1
        return False

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"kind": self.kind}
        if self.m is not None:
            out["m"] = self.m
        if self.a:
            out["a"] = list(self.a)
        if self.q:
            out["q"] = list(self.q)
        if self.k is not None:
            out["k"] = self.k
        if self.n is not None:
            out["n"] = self.n
        if self.d is not None:
            out["d"] = self.d
        if self.parts:
            out["parts"] = [p.to_dict() for p in self.parts]
        return out

import pytest

from ehrlimit.core import fpp
from ehrlimit.core.algebra import poly_mul
from ehrlimit.core.closedform import crosspolytope_hstar
from ehrlimit.core.combinators import (
    VertexPolytope,
    as_polytope,
    cone_functionals,
    contains_origin_in_interior,
    crosspolytope,
    free_sum,
    free_sum_power,
    is_reflexive,
    join,
    placed_simplex,
    provenance_hstar,
    pyramid,
)
from ehrlimit.core.simplex import from_columns, make_bidiagonal, make_delta_one_q, make_S
from ehrlimit.utils.errors import DegenerateSimplexError, PreconditionError, UnsupportedFormError


def _unit_simplex(d):
    return from_columns([[1 if i == j else 0 for j in range(d)] for i in range(d)], label=f"U_{d}")


def test_square_is_free_sum_of_segments():
    square = free_sum(make_S(1), make_S(1))
    assert set(square.vertices) == {(1, 0), (-1, 0), (0, 1), (0, -1)}
    assert square.dim == 2
    assert square.left_reflexive
    assert provenance_hstar(square).coeffs == (1, 2, 1)
    assert square.provenance == "free_sum(S_1, S_1)"


def test_free_sum_product():
    F = free_sum(make_S(2), make_S(1))
    assert provenance_hstar(F).coeffs == (1, 2, 2, 1)
    assert is_reflexive(F)


def test_free_sum_needs_interior_origin():
    with pytest.raises(PreconditionError):
        free_sum(_unit_simplex(2), make_S(1))
    with pytest.raises(PreconditionError):
        free_sum(make_S(1), _unit_simplex(1))


def test_free_sum_with_non_reflexive_left_argument():
    F = free_sum(make_delta_one_q((1, 3)), make_S(1))
    assert not F.left_reflexive
    assert not is_reflexive(F)
    with pytest.raises(PreconditionError):
        provenance_hstar(F)


def test_join_of_segments():
    J = join(make_S(1), make_S(1))
    assert J.dim == 3
    assert len(J.vertices) == 4
    assert provenance_hstar(J).coeffs == (1, 2, 1)
    placed = placed_simplex(J)
    assert placed.triangular
    assert fpp.hstar(placed) == provenance_hstar(J)


def test_join_volume_is_multiplicative():
    P, Q = make_S(1), make_S(2)
    placed = placed_simplex(join(P, Q))
    assert placed.normalized_volume == P.normalized_volume * Q.normalized_volume
    assert fpp.hstar(placed) == poly_mul(fpp.hstar(P), fpp.hstar(Q))


def test_join_with_point_is_pyramid():
    P = as_polytope(make_S(2))
    assert pyramid(P).vertices == join(P, VertexPolytope.point()).vertices
    assert provenance_hstar(join(P, VertexPolytope.point())).coeffs == (1, 1, 1)


def test_pyramid_keeps_hstar():
    S2 = make_S(2)
    assert provenance_hstar(pyramid(S2)).coeffs == (1, 1, 1)
    assert provenance_hstar(pyramid(pyramid(S2))).coeffs == (1, 1, 1)
    P = make_bidiagonal(2, 4)
    assert fpp.hstar(placed_simplex(pyramid(P))) == fpp.hstar(P)


def test_pyramid_over_unit_simplex():
    placed = placed_simplex(pyramid(_unit_simplex(2)))
    assert placed.vertices == ((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1))
    assert fpp.hstar(placed).coeffs == (1,)


def test_placement_of_free_sum_is_unsupported():
    with pytest.raises(UnsupportedFormError):
        placed_simplex(free_sum(make_S(1), make_S(1)))
    with pytest.raises(UnsupportedFormError):
        is_reflexive(join(make_S(1), make_S(1)))


def test_cone_functionals():
    functionals = cone_functionals(crosspolytope(2))
    assert len(functionals) == 4
    assert all(g[0] == 1 for g in functionals)
    assert contains_origin_in_interior(crosspolytope(2))
    assert not contains_origin_in_interior(join(make_S(1), make_S(1)))


def test_crosspolytope():
    C3 = crosspolytope(3)
    assert C3.label == "C_3"
    assert len(C3.vertices) == 6
    assert provenance_hstar(C3) == crosspolytope_hstar(3)
    assert is_reflexive(C3)


def test_free_sum_power():
    F = free_sum_power(make_S(1), 2, 2)
    expected = poly_mul(fpp.hstar(make_S(1)), poly_mul(fpp.hstar(make_S(2)), fpp.hstar(make_S(2))))
    assert F.dim == 5
    assert provenance_hstar(F) == expected


def test_vertex_polytope_validation():
    with pytest.raises(DegenerateSimplexError):
        VertexPolytope(vertices=((0, 0), (1, 1), (2, 2)), ambient_dim=2, kind="simplex")
    assert VertexPolytope.point().dim == 0

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tbt.errors import PointNotInPolytope, UnboundedEnumeration
from tbt.tropical_core import INF, delta, normalize, trop_combine
from tbt.tropical_polytope import (
    TropPolytope,
    cell_complex,
    contains,
    dual_point_map,
    dual_point_map_inverse,
    lattice_points,
    nearest_point,
    standard_triangulation,
    transpose_type,
    type_of,
)

from example_data import NINE_GON, NINE_GON_ROW_POINTS, NINE_GON_ROWS_NORMALIZED

small_polytopes = st.integers(2, 3).flatmap(
    lambda d: st.lists(st.lists(st.integers(-3, 3), min_size=d, max_size=d), min_size=1, max_size=4)
)


def nine_gon():
    return TropPolytope.from_matrix(NINE_GON)


def test_nearest_point_example():
    P = TropPolytope(((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    y = nearest_point(P, (0, 1, 1))
    assert normalize(y) == (0, 0, 0)
    assert not contains(P, (0, 1, 1))
    assert nearest_point(P, y) == y


def test_nearest_point_minimizes_distance_on_nine_gon():
    # oracle: exhaustive search of delta over the lattice points of P
    P = nine_gon()
    pts = lattice_points(P)
    for x in [(0, 9, -9), (0, -10, 3), (0, 2, 2), (0, -6, 7), (0, 0, 0)]:
        y = normalize(nearest_point(P, x))
        best = min(delta(x, p) for p in pts)
        assert delta(x, y) == best


def test_single_generator_and_segment_in_tp1():
    assert lattice_points(TropPolytope(((2, 5),))) == [(0, 3)]
    seg = TropPolytope(((0, 0), (0, 3)))
    scan = [normalize((0, t)) for t in range(-5, 9) if contains(seg, (0, t))]
    assert lattice_points(seg) == sorted(scan)
    assert len(lattice_points(seg)) == 4


def test_nearest_point_with_infinite_entries():
    P = TropPolytope(((0, INF, 2), (INF, 0, 0)))
    y = nearest_point(P, (0, 0, 0))
    assert contains(P, y)
    assert all(a >= b for a, b in zip(y, (0, 0, 0)))


def test_nearest_point_fails_when_nothing_above():
    P = TropPolytope(((0, INF),))
    with pytest.raises(PointNotInPolytope):
        nearest_point(P, (INF, 0))


@settings(max_examples=60, deadline=None)
@given(small_polytopes, st.lists(st.integers(-5, 5), min_size=3, max_size=3))
def test_nearest_point_is_least_point_above(gens, x):
    P = TropPolytope(tuple(tuple(g) for g in gens))
    x = tuple(x[: P.d])
    y = nearest_point(P, x)
    assert contains(P, y)
    assert all(a >= b for a, b in zip(y, x))
    # every combination lying above x lies above y
    for coeffs in itertools.product(range(-3, 4), repeat=min(P.n, 3)):
        coeffs = list(coeffs) + [INF] * (P.n - len(coeffs))
        try:
            z = trop_combine(coeffs, P.generators)
        except Exception:
            continue
        if all(a >= b for a, b in zip(z, x)):
            assert all(a >= b for a, b in zip(z, y))


def test_types_of_generators():
    P = nine_gon()
    t = type_of(P, P.generators[0])
    assert 0 in t[0] and 0 in t[1] and 0 in t[2]


def test_nine_gon_counts():
    P = nine_gon()
    pts = lattice_points(P)
    assert len(pts) == 31
    tri = standard_triangulation(pts)
    assert tri.f_vector == (31, 62, 32)
    cc = cell_complex(P)
    assert cc.f_vector == (19, 28, 10)
    assert len(cc.cells) == len({c.type for c in cc.cells}) == 57


def test_walk_matches_box_scan_on_nine_gon():
    P = nine_gon()
    assert lattice_points(P, method="walk") == lattice_points(P, method="box")


@settings(max_examples=40, deadline=None)
@given(small_polytopes)
def test_walk_matches_box_scan(gens):
    P = TropPolytope(tuple(tuple(g) for g in gens))
    assert lattice_points(P, method="walk") == lattice_points(P, method="box")


def test_lattice_points_need_box_at_infinity():
    P = TropPolytope(((0, INF, 0), (0, 0, 0)))
    with pytest.raises(UnboundedEnumeration):
        lattice_points(P)
    pts = lattice_points(P, box=[(0, 0), (-2, 2), (-2, 2)])
    assert (0, 0, 0) in pts


def test_row_polytope_points_and_dual_maps():
    P = nine_gon()
    Pt = P.transpose()
    expected = sorted(p for p, _ in NINE_GON_ROW_POINTS)
    got = lattice_points(Pt)
    assert got == expected
    for r in NINE_GON_ROWS_NORMALIZED:
        assert normalize(r) in got
    for x in lattice_points(P):
        y = normalize(dual_point_map(P, x))
        assert y in got
        assert normalize(dual_point_map_inverse(P, y)) == normalize(x)
        assert type_of(Pt, y) == transpose_type(type_of(P, x), P.n)


def test_triangulation_edges_have_unit_distance():
    tri = standard_triangulation(lattice_points(nine_gon()))
    for i, j in tri.edges:
        assert delta(tri.vertices[i], tri.vertices[j]) == 1

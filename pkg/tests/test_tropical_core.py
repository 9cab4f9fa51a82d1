import pytest
from hypothesis import given
from hypothesis import strategies as st

from tbt.errors import AllInfinite, EmptyCombination, IncomparableAtInfinity
from tbt.tropical_core import (
    INF,
    delta,
    first_zero,
    from_json_point,
    minplus_matmul,
    normalize,
    same_point,
    to_json_point,
    trop_combine,
)

points = st.lists(st.integers(-20, 20), min_size=1, max_size=6)


def test_normalize():
    assert normalize((3, 5, 4)) == (0, 2, 1)
    assert normalize((INF, 2, 7)) == (INF, 0, 5)
    with pytest.raises(AllInfinite):
        normalize((INF, INF))


@given(points, st.integers(-50, 50))
def test_normalize_is_projective(x, c):
    y = [a + c for a in x]
    assert normalize(x) == normalize(y)
    assert min(normalize(x)) == 0
    assert same_point(x, y)


def test_delta():
    assert delta((0, 0, 0), (0, 1, 1)) == 1
    assert delta((0, 0, 0), (1, 0, -1)) == 2
    assert delta((INF, 0, 1), (INF, 3, 3)) == 1
    with pytest.raises(IncomparableAtInfinity):
        delta((INF, 0), (0, 0))


@given(points)
def test_delta_zero_on_same_point(x):
    assert delta(x, [a + 7 for a in x]) == 0


def test_trop_combine():
    assert trop_combine([0, 1], [(0, 3), (2, 0)]) == (0, 1)
    assert trop_combine([INF, 0], [(0, 0), (1, 2)]) == (1, 2)
    with pytest.raises(EmptyCombination):
        trop_combine([INF], [(0, 0)])


def test_minplus_matmul_identity():
    I = ((0, INF), (INF, 0))
    A = ((1, 2), (3, -4))
    assert minplus_matmul(I, A) == A
    assert minplus_matmul(A, I) == A


def test_first_zero_and_json():
    assert first_zero((INF, 3, 5)) == (INF, 0, 2)
    x = (INF, 0, -2)
    assert from_json_point(to_json_point(x)) == x
    assert to_json_point(x) == ["inf", 0, -2]

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ddfkit import Bundle, DimensionError, Direction, compare, geq, geqq, gt, star_gt


def test_compare_reflexive_cases():
    assert compare((1, 2), (1, 2), "geqq") is True
    assert compare((1, 2), (1, 2), "geq") is False


def test_compare_zero_component_cases():
    assert compare((2, 0), (1, 0), "star_gt") is True
    assert compare((2, 0), (1, 0), "gt") is False


def test_compare_rejects_length_mismatch():
    with pytest.raises(DimensionError):
        compare((1, 2), (1, 2, 3), "geqq")


def test_compare_rejects_unknown_relation():
    with pytest.raises(ValueError):
        compare((1,), (1,), "lexicographic")


vectors = st.lists(
    st.floats(min_value=0.0, max_value=10.0, allow_nan=False), min_size=1, max_size=5
)


@given(st.data())
@settings(max_examples=300, deadline=None)
def test_order_implication_chain(data):
    u = np.array(data.draw(vectors))
    v = np.array(data.draw(st.lists(
        st.floats(min_value=0.0, max_value=10.0, allow_nan=False),
        min_size=len(u), max_size=len(u),
    )))
    if np.array_equal(u, v):
        return
    if gt(u, v):
        assert star_gt(u, v)
    if star_gt(u, v):
        assert geq(u, v)
    if geq(u, v):
        assert geqq(u, v)


@given(vectors)
@settings(max_examples=200, deadline=None)
def test_star_gt_reflexive_only_at_zero(values):
    u = np.array(values)
    assert star_gt(u, u) == bool(np.all(u == 0.0))


def test_bundle_validation():
    b = Bundle([1.0, 2.0], [3.0])
    assert b.m == 2 and b.n == 1
    with pytest.raises(ValueError):
        Bundle([-1.0], [1.0])
    with pytest.raises(ValueError):
        Bundle([np.inf], [1.0])
    with pytest.raises(DimensionError):
        Bundle([], [1.0])


def test_bundle_is_immutable():
    b = Bundle([1.0], [1.0])
    with pytest.raises(ValueError):
        b.y[0] = 5.0


def test_direction_validation():
    d = Direction([0.0, 1.0], [0.0])
    assert d.m == 2 and d.n == 1
    with pytest.raises(ValueError):
        Direction([0.0], [0.0])
    with pytest.raises(ValueError):
        Direction([-0.5], [1.0])


def test_direction_scaling():
    d = Direction([1.0, 2.0], [0.5])
    s = d.scaled(2.0)
    assert np.allclose(s.g_y, [2.0, 4.0]) and np.allclose(s.g_x, [1.0])
    with pytest.raises(ValueError):
        d.scaled(0.0)

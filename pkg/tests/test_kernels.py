from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tvar import _kernels_py, kernels

compiled = pytest.importorskip("tvar._kernels", reason="compiled extension not built")

rows = st.integers(1, 3).flatmap(
    lambda d: st.tuples(
        st.lists(st.lists(st.integers(-5, 5), min_size=d, max_size=d), min_size=0, max_size=4),
        st.lists(st.integers(-3, 0), min_size=d, max_size=d),
        st.lists(st.integers(0, 3), min_size=d, max_size=d),
    )
)


@settings(max_examples=100, deadline=None)
@given(rows, st.data())
def test_box_points_backends_agree(case, data):
    A, lo, hi = case
    b = data.draw(st.lists(st.integers(-6, 6), min_size=len(A), max_size=len(A)))
    expected = [x for x in product(*(range(l, h + 1) for l, h in zip(lo, hi)))
                if all(sum(a * y for a, y in zip(r, x)) >= c for r, c in zip(A, b))]
    assert _kernels_py.box_points(A, b, lo, hi) == expected
    assert compiled.box_points(A, b, lo, hi) == expected


@settings(max_examples=50, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=3), st.integers(0, 4))
def test_weight_fibers_backends_agree(W, bound):
    expected = _kernels_py.weight_fibers(W, bound)
    assert compiled.weight_fibers(W, bound) == expected
    assert [a for _, a in expected] == sorted(a for a in product(range(bound + 1), repeat=3) if sum(a) <= bound)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=0, max_size=8))
def test_reducible_mask_backends_agree(vals):
    assert list(compiled.reducible_mask(vals)) == list(_kernels_py.reducible_mask(vals))


def test_large_entries_use_the_fallback():
    big = 1 << 62
    assert kernels.box_points([[1]], [big], [big], [big + 1]) == [(big,), (big + 1,)]
    assert kernels.weight_fibers([[big]], 1) == [((0,), (0,)), ((big,), (1,))]

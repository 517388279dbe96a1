"""Field arithmetic: exhaustive axioms at small q, table consistency."""

import numpy as np
import pytest

from formiso.gfq import FieldCtx, field_from_order, field_new

SMALL_ORDERS = [2, 3, 4, 5, 7, 8, 9]


@pytest.mark.parametrize("q", SMALL_ORDERS)
def test_field_axioms_exhaustive(q):
    ctx = field_from_order(q)
    els = list(ctx.elements())
    assert len(els) == q
    for a in els:
        assert ctx.add(a, 0) == a
        assert ctx.mul(a, 1) == a
        assert ctx.add(a, ctx.neg(a)) == 0
        if a:
            assert ctx.mul(a, ctx.inv(a)) == 1
        for b in els:
            assert ctx.add(a, b) == ctx.add(b, a)
            assert ctx.mul(a, b) == ctx.mul(b, a)
            for c in els:
                assert ctx.add(ctx.add(a, b), c) == ctx.add(a, ctx.add(b, c))
                assert ctx.mul(ctx.mul(a, b), c) == ctx.mul(a, ctx.mul(b, c))
                assert ctx.mul(a, ctx.add(b, c)) == ctx.add(
                    ctx.mul(a, b), ctx.mul(a, c)
                )


@pytest.mark.parametrize("q", SMALL_ORDERS)
def test_vectorized_matches_scalar(q):
    ctx = field_from_order(q)
    rng = np.random.default_rng(0)
    a = rng.integers(0, q, size=50)
    b = rng.integers(0, q, size=50)
    assert all(ctx.add_arr(a, b)[i] == ctx.add(int(a[i]), int(b[i])) for i in range(50))
    assert all(ctx.mul_arr(a, b)[i] == ctx.mul(int(a[i]), int(b[i])) for i in range(50))
    assert all(ctx.sub_arr(a, b)[i] == ctx.add(int(a[i]), ctx.neg(int(b[i]))) for i in range(50))
    assert all(ctx.neg_arr(a)[i] == ctx.neg(int(a[i])) for i in range(50))
    s = int(rng.integers(1, q))
    assert all(ctx.scale_arr(s, a)[i] == ctx.mul(s, int(a[i])) for i in range(50))


@pytest.mark.parametrize("q", SMALL_ORDERS)
def test_squares(q):
    ctx = field_from_order(q)
    # is_square marks the nonzero squares (0 is excluded by design: it
    # feeds the nonzero determinant-ratio filter)
    squares = {ctx.mul(a, a) for a in ctx.nonzero()}
    for a in ctx.elements():
        assert bool(ctx.is_square[a]) == (a in squares)
    if ctx.q % 2 == 1:
        assert len(squares) == (ctx.q - 1) // 2
    else:
        assert len(squares) == ctx.q - 1  # squaring is a bijection in char 2


def test_extension_field_char():
    ctx = field_from_order(9)
    assert ctx.p == 3 and ctx.e == 2 and ctx.char == 3
    # characteristic: adding 1 three times is zero
    x = 1
    for _ in range(2):
        x = ctx.add(x, 1)
    assert x == 0


def test_multiplicative_group_cyclic_f8():
    ctx = field_from_order(8)
    orders = set()
    for a in ctx.nonzero():
        x, k = a, 1
        while x != 1:
            x = ctx.mul(x, a)
            k += 1
        orders.add(k)
    assert max(orders) == 7  # a generator exists


def test_invalid_orders():
    for bad in (1, 6, 12, 257):
        with pytest.raises(ValueError):
            field_from_order(bad)


def test_field_new_cached():
    assert field_new(5) is field_new(5)

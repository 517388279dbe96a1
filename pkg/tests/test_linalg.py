"""Exact linear algebra over F_q and the search enumerations."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from formiso import linalg
from formiso.gfq import field_from_order
from formiso.linalg import MatrixTuple

CTXS = [field_from_order(q) for q in (2, 3, 4, 5)]


def _random_mat(ctx, n, m, rng):
    return linalg.random_matrix(ctx, n, m, rng)


@pytest.mark.parametrize("ctx", CTXS, ids=lambda c: f"q{c.q}")
def test_matmul_associative_and_identity(ctx):
    rng = linalg.rng_for(1)
    a = _random_mat(ctx, 3, 4, rng)
    b = _random_mat(ctx, 4, 2, rng)
    c = _random_mat(ctx, 2, 5, rng)
    left = linalg.matmul(ctx, linalg.matmul(ctx, a, b), c)
    right = linalg.matmul(ctx, a, linalg.matmul(ctx, b, c))
    assert np.array_equal(left, right)
    eye = linalg.identity(3)
    assert np.array_equal(linalg.matmul(ctx, eye, a), a)


@pytest.mark.parametrize("ctx", CTXS, ids=lambda c: f"q{c.q}")
def test_inverse_round_trip(ctx):
    rng = linalg.rng_for(2)
    for _ in range(20):
        a = linalg.random_invertible(ctx, 4, rng)
        inv = linalg.inverse(ctx, a)
        assert np.array_equal(linalg.matmul(ctx, a, inv), linalg.identity(4))
        assert np.array_equal(linalg.matmul(ctx, inv, a), linalg.identity(4))


def test_inverse_singular_raises():
    ctx = field_from_order(3)
    with pytest.raises(ValueError):
        linalg.inverse(ctx, np.zeros((2, 2), dtype=np.int64))


@pytest.mark.parametrize("ctx", CTXS, ids=lambda c: f"q{c.q}")
def test_rref_rank_kernel(ctx):
    rng = linalg.rng_for(3)
    for _ in range(20):
        a = _random_mat(ctx, 4, 6, rng)
        r = linalg.rank(ctx, a)
        ker = linalg.kernel(ctx, a)
        assert ker.shape[0] == 6 - r
        # every kernel row maps to zero
        for row in ker:
            assert not np.any(linalg.matvec(ctx, a, row))
        # kernel rows are independent
        if len(ker):
            assert linalg.rank(ctx, ker) == len(ker)


@pytest.mark.parametrize("ctx", CTXS, ids=lambda c: f"q{c.q}")
def test_solve_consistent(ctx):
    rng = linalg.rng_for(4)
    a = _random_mat(ctx, 4, 3, rng)
    x = linalg.random_matrix(ctx, 3, 1, rng)[:, 0]
    b = linalg.matvec(ctx, a, x)
    res = linalg.solve(ctx, a, b)
    assert res is not None
    x0, _ = res
    assert np.array_equal(linalg.matvec(ctx, a, x0), b)


def test_det_multiplicative():
    ctx = field_from_order(5)
    rng = linalg.rng_for(5)
    for _ in range(20):
        a = _random_mat(ctx, 3, 3, rng)
        b = _random_mat(ctx, 3, 3, rng)
        ab = linalg.matmul(ctx, a, b)
        assert linalg.det(ctx, ab) == ctx.mul(linalg.det(ctx, a), linalg.det(ctx, b))


def test_enumerate_gl_order():
    ctx = field_from_order(2)
    mats = list(linalg.enumerate_gl(3, ctx))
    assert len(mats) == 168  # |GL(3,2)|
    codes = {tuple(m.flatten()) for m in mats}
    assert len(codes) == 168
    ctx3 = field_from_order(3)
    assert len(list(linalg.enumerate_gl(2, ctx3))) == 48  # |GL(2,3)|


def test_enumerate_independent_tuples_count():
    ctx = field_from_order(3)
    tuples = list(linalg.enumerate_independent_tuples(3, 2, ctx))
    assert len(tuples) == (27 - 1) * (27 - 3)
    for t in tuples[:50]:
        assert linalg.rank(ctx, t) == 2


def test_complements_partition():
    ctx = field_from_order(2)
    u = np.array([[1, 0], [0, 1], [0, 0], [0, 0]], dtype=np.int64)
    comps = list(linalg.enumerate_complements(u, ctx))
    # number of complements of a 2-dim subspace in F_2^4 is q^(r*(n-r)) = 16
    assert len(comps) == 16
    for v in comps:
        full = np.concatenate([u, v], axis=1)
        assert linalg.rank(ctx, full) == 4


def test_gaussian_binomial_values():
    assert linalg.gaussian_binomial(4, 2, 2) == 35
    assert linalg.gaussian_binomial(3, 1, 3) == 13
    assert linalg.gaussian_binomial(5, 0, 2) == 1
    assert linalg.gaussian_binomial(5, 5, 2) == 1


def test_matrix_tuple_validation():
    with pytest.raises(ValueError):
        MatrixTuple("symmetric", np.array([[[0, 1], [2, 0]]]))
    with pytest.raises(ValueError):
        MatrixTuple("alternating", np.array([[[1, 0], [0, 0]]]))
    t = MatrixTuple("general", np.zeros((2, 3, 3), dtype=np.int64))
    assert t.m == 2 and t.size == 3


def test_random_alternating_shape():
    ctx = field_from_order(3)
    rng = linalg.rng_for(6)
    for _ in range(10):
        a = linalg.random_alternating(ctx, 4, rng)
        assert np.all(np.diagonal(a) == 0)
        assert np.array_equal(a.T, ctx.neg_arr(a))


def test_rng_reproducible():
    a = linalg.rng_for(42).integers(0, 100, size=10)
    b = linalg.rng_for(42).integers(0, 100, size=10)
    assert np.array_equal(a, b)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 12 - 1))
def test_vector_from_code_bijective(code):
    v = linalg.vector_from_code(code, 12, 2)
    back = 0
    for x in v:
        back = back * 2 + int(x)
    assert back == code

"""3-way array operations: slices, transposes, actions, predicates."""

import numpy as np
import pytest

from formiso import linalg, tensor3
from formiso.gfq import field_from_order


@pytest.fixture(params=[2, 3, 5], ids=lambda q: f"q{q}")
def ctx(request):
    return field_from_order(request.param)


def test_slices_agree_with_indexing(ctx):
    rng = linalg.rng_for(0)
    t = tensor3.random_tensor(ctx, (3, 4, 5), rng)
    assert np.array_equal(tensor3.frontal_slice(t, 2), t[:, :, 2])
    assert np.array_equal(tensor3.vertical_slice(t, 1), t[:, 1, :])
    assert np.array_equal(tensor3.horizontal_slice(t, 0), t[0, :, :])


def test_sigma_transpose_group_action(ctx):
    rng = linalg.rng_for(1)
    t = tensor3.random_tensor(ctx, (4, 4, 4), rng)
    # (13) then (23) equals the 3-cycle sending axis order (1,2,3)->(3,1,2)
    a = tensor3.sigma_transpose(tensor3.sigma_transpose(t, (3, 2, 1)), (1, 3, 2))
    assert a.shape == t.shape
    ident = tensor3.sigma_transpose(t, (1, 2, 3))
    assert np.array_equal(ident, t)


def test_mode_product_matches_definition(ctx):
    rng = linalg.rng_for(2)
    t = tensor3.random_tensor(ctx, (3, 3, 3), rng)
    m = linalg.random_matrix(ctx, 3, 3, rng)
    out = tensor3.mode_product(ctx, t, m, 0)
    # out[a, j, k] = sum_i t[i, j, k] m[i, a]
    for a in range(3):
        for j in range(3):
            for k in range(3):
                acc = 0
                for i in range(3):
                    acc = ctx.add(acc, ctx.mul(int(t[i, j, k]), int(m[i, a])))
                assert out[a, j, k] == acc


def test_act_composition(ctx):
    """act(P2,Q2,R2, act(P1,Q1,R1,t)) == act(P1P2, Q1Q2, R2R1, t)."""
    rng = linalg.rng_for(3)
    t = tensor3.random_tensor(ctx, (3, 3, 3), rng)
    p1, q1, r1 = (linalg.random_invertible(ctx, 3, rng) for _ in range(3))
    p2, q2, r2 = (linalg.random_invertible(ctx, 3, rng) for _ in range(3))
    lhs = tensor3.act(ctx, p2, q2, r2, tensor3.act(ctx, p1, q1, r1, t))
    rhs = tensor3.act(
        ctx,
        linalg.matmul(ctx, p1, p2),
        linalg.matmul(ctx, q1, q2),
        linalg.matmul(ctx, r2, r1),
        t,
    )
    assert np.array_equal(lhs, rhs)


def test_diag_act_is_substitution(ctx):
    rng = linalg.rng_for(4)
    t = tensor3.random_tensor(ctx, (3, 3, 3), rng)
    m = linalg.random_invertible(ctx, 3, rng)
    out = tensor3.diag_act(ctx, t, m)
    # res[a,b,c] = sum t[i,j,k] m[i,a] m[j,b] m[k,c]
    a, b, c = 1, 2, 0
    acc = 0
    for i in range(3):
        for j in range(3):
            for k in range(3):
                acc = ctx.add(
                    acc,
                    ctx.mul(
                        ctx.mul(int(t[i, j, k]), int(m[i, a])),
                        ctx.mul(int(m[j, b]), int(m[k, c])),
                    ),
                )
    assert out[a, b, c] == acc


def test_diag_act_composition(ctx):
    rng = linalg.rng_for(5)
    t = tensor3.random_tensor(ctx, (3, 3, 3), rng)
    m1 = linalg.random_invertible(ctx, 3, rng)
    m2 = linalg.random_invertible(ctx, 3, rng)
    lhs = tensor3.diag_act(ctx, tensor3.diag_act(ctx, t, m1), m2)
    rhs = tensor3.diag_act(ctx, t, linalg.matmul(ctx, m1, m2))
    assert np.array_equal(lhs, rhs)


def test_is_symmetric(ctx):
    t = np.zeros((3, 3, 3), dtype=np.int64)
    t[0, 1, 2] = 1
    assert not tensor3.is_symmetric(t)
    for perm in ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)):
        s = np.zeros((3, 3, 3), dtype=np.int64)
        s[perm] = 1
        t = t * 0
    sym = np.zeros((3, 3, 3), dtype=np.int64)
    for perm in ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)):
        sym[perm] = 1
    assert tensor3.is_symmetric(sym)


def test_is_alternating(ctx):
    t = np.zeros((3, 3, 3), dtype=np.int64)
    t[0, 1, 2] = 1
    t[1, 0, 2] = ctx.neg(1)
    t[1, 2, 0] = 1
    t[2, 1, 0] = ctx.neg(1)
    t[2, 0, 1] = 1
    t[0, 2, 1] = ctx.neg(1)
    assert tensor3.is_alternating(t, ctx)
    t[0, 0, 1] = 1  # repeated index must vanish
    assert not tensor3.is_alternating(t, ctx)


def test_alternating_preserved_by_diag_act(ctx):
    rng = linalg.rng_for(6)
    t = np.zeros((4, 4, 4), dtype=np.int64)
    # random alternating tensor from its independent entries i<j<k
    for i in range(4):
        for j in range(i + 1, 4):
            for k in range(j + 1, 4):
                c = int(rng.integers(0, ctx.q))
                if not c:
                    continue
                t[i, j, k] = c
                t[j, k, i] = c
                t[k, i, j] = c
                t[j, i, k] = ctx.neg(c)
                t[i, k, j] = ctx.neg(c)
                t[k, j, i] = ctx.neg(c)
    assert tensor3.is_alternating(t, ctx)
    m = linalg.random_invertible(ctx, 4, rng)
    assert tensor3.is_alternating(tensor3.diag_act(ctx, t, m), ctx)

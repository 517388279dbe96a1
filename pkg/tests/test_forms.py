"""Polynomials, substitution action, slice tensors, slice families.

poly_act is cross-checked against sympy symbolic substitution.
"""

import numpy as np
import pytest
import sympy

from formiso import forms, linalg, tensor3
from formiso.forms import Poly, poly_new
from formiso.gfq import field_from_order


def _to_sympy(f: Poly, xs):
    expr = sympy.Integer(0)
    for exps, c in f.coeffs.items():
        term = sympy.Integer(c)
        for x, e in zip(xs, exps):
            term *= x ** e
        expr += term
    return sympy.expand(expr)


@pytest.mark.parametrize("q", [2, 3, 5])
@pytest.mark.parametrize("n,d", [(2, 2), (3, 3), (4, 3), (3, 4)])
def test_poly_act_matches_sympy(q, n, d):
    ctx = field_from_order(q)
    rng = linalg.rng_for(q * 100 + n * 10 + d)
    f = forms.random_poly(ctx, n, d, rng)
    a = linalg.random_invertible(ctx, n, rng)
    g = forms.poly_act(ctx, f, a)
    xs = sympy.symbols(f"x0:{n}")
    # substitution x_i -> sum_j a[i, j] x_j
    subs = {xs[i]: sum(int(a[i, j]) * xs[j] for j in range(n)) for i in range(n)}
    expected = sympy.expand(_to_sympy(f, xs).xreplace(subs))
    got = _to_sympy(g, xs)
    diff = sympy.Poly(sympy.expand(expected - got), *xs)
    assert all(int(c) % q == 0 for c in diff.coeffs()) or diff.is_zero


@pytest.mark.parametrize("q", [2, 3, 5, 9])
def test_poly_act_composition(q):
    ctx = field_from_order(q)
    rng = linalg.rng_for(7)
    f = forms.random_poly(ctx, 3, 3, rng)
    a = linalg.random_invertible(ctx, 3, rng)
    b = linalg.random_invertible(ctx, 3, rng)
    lhs = forms.poly_act(ctx, forms.poly_act(ctx, f, a), b)
    rhs = forms.poly_act(ctx, f, linalg.matmul(ctx, a, b))
    assert lhs == rhs


@pytest.mark.parametrize("q", [2, 3, 5])
def test_poly_eval_act_consistency(q):
    """(f∘A)(v) == f(Av)."""
    ctx = field_from_order(q)
    rng = linalg.rng_for(8)
    f = forms.random_poly(ctx, 3, 3, rng)
    a = linalg.random_invertible(ctx, 3, rng)
    g = forms.poly_act(ctx, f, a)
    for code in range(ctx.q ** 3):
        v = linalg.vector_from_code(code, 3, ctx.q)
        assert forms.poly_eval(ctx, g, v) == forms.poly_eval(
            ctx, f, linalg.matvec(ctx, a, v)
        )


def test_cubic_to_symmetric_trilinear_f5():
    ctx = field_from_order(5)
    rng = linalg.rng_for(9)
    f = forms.random_poly(ctx, 4, 3, rng)
    phi = forms.cubic_to_symmetric_trilinear(ctx, f)
    assert tensor3.is_symmetric(phi)
    # phi(v, v, v) = f(v) for all v
    for code in range(ctx.q ** 4):
        v = linalg.vector_from_code(code, 4, ctx.q)
        acc = 0
        vv = np.tensordot(np.tensordot(phi, v, axes=(2, 0)), v, axes=(1, 0))
        val = 0
        for i in range(4):
            val = ctx.add(val, ctx.mul(int(vv[i] % ctx.p), int(v[i])))
        assert val == forms.poly_eval(ctx, f, v)


def test_cubic_to_symmetric_requires_large_char():
    ctx = field_from_order(3)
    f = poly_new(2, 3, {(3, 0): 1}, ctx)
    with pytest.raises(ValueError):
        forms.cubic_to_symmetric_trilinear(ctx, f)


@pytest.mark.parametrize("q", [3, 5, 2, 4])
def test_slice_tensor_covariance(q):
    """Phi_{f∘A} == diag_act(Phi_f, A)."""
    ctx = field_from_order(q)
    rng = linalg.rng_for(10)
    f = forms.random_poly(ctx, 4, 3, rng)
    a = linalg.random_invertible(ctx, 4, rng)
    lhs = forms.cubic_slice_tensor(ctx, forms.poly_act(ctx, f, a))
    rhs = tensor3.diag_act(ctx, forms.cubic_slice_tensor(ctx, f), a)
    assert np.array_equal(lhs, rhs)


@pytest.mark.parametrize("q", [3, 5])
def test_slice_readoff_odd_char(q):
    """Slice matrices from the slice tensor match quad_to_symmetric of
    the quadratic slices."""
    ctx = field_from_order(q)
    rng = linalg.rng_for(11)
    n, r = 4, 2
    f = forms.random_poly(ctx, n, 3, rng)
    phi = forms.cubic_slice_tensor(ctx, f)
    quads = forms.quad_slices(f, r)
    for i in range(r):
        mat = forms.quad_to_symmetric(ctx, quads[i])
        assert np.array_equal(phi[i, r:, r:], mat)


def test_slice_readoff_char2():
    ctx = field_from_order(2)
    rng = linalg.rng_for(12)
    n, r = 4, 2
    f = forms.random_poly(ctx, n, 3, rng)
    phi = forms.cubic_slice_tensor(ctx, f)
    quads = forms.quad_slices(f, r)
    for i in range(r):
        mat = forms.quad_to_alternating(ctx, quads[i])
        assert np.array_equal(phi[i, r:, r:], mat)


def test_key_observation_slices_transform_by_congruence():
    """For T2 = diag(I_r, R): slices(f∘T2)_i == R^T slices(f)_i R."""
    ctx = field_from_order(3)
    rng = linalg.rng_for(13)
    n, r = 4, 2
    f = forms.random_poly(ctx, n, 3, rng)
    rmat = linalg.random_invertible(ctx, n - r, rng)
    t2 = linalg.identity(n)
    t2[r:, r:] = rmat
    g = forms.poly_act(ctx, f, t2)
    for i in range(r):
        ci = forms.quad_to_symmetric(ctx, forms.quad_slices(f, r)[i])
        di = forms.quad_to_symmetric(ctx, forms.quad_slices(g, r)[i])
        expected = linalg.matmul(ctx, linalg.matmul(ctx, rmat.T, ci), rmat)
        assert np.array_equal(di, expected)


def test_trilinear_act_is_diag_act():
    ctx = field_from_order(3)
    rng = linalg.rng_for(14)
    t = tensor3.random_tensor(ctx, (3, 3, 3), rng)
    m = linalg.random_invertible(ctx, 3, rng)
    assert np.array_equal(
        forms.trilinear_act(ctx, t, m), tensor3.diag_act(ctx, t, m)
    )


def test_algebra_act_composition():
    ctx = field_from_order(3)
    rng = linalg.rng_for(15)
    s = tensor3.random_tensor(ctx, (3, 3, 3), rng)
    m1 = linalg.random_invertible(ctx, 3, rng)
    m2 = linalg.random_invertible(ctx, 3, rng)
    lhs = forms.algebra_act(ctx, forms.algebra_act(ctx, s, m1), m2)
    rhs = forms.algebra_act(ctx, s, linalg.matmul(ctx, m1, m2))
    assert np.array_equal(lhs, rhs)


def test_algebra_act_transports_products():
    """If c = a*b in the algebra with structure tensor s, then the
    transported tensor multiplies transported vectors consistently."""
    ctx = field_from_order(5)
    rng = linalg.rng_for(16)
    s = tensor3.random_tensor(ctx, (3, 3, 3), rng)
    m = linalg.random_invertible(ctx, 3, rng)
    s2 = forms.algebra_act(ctx, s, m)

    def mult(tensor, u, v):
        out = np.zeros(3, dtype=np.int64)
        for k in range(3):
            acc = 0
            for i in range(3):
                for j in range(3):
                    acc = ctx.add(
                        acc,
                        ctx.mul(ctx.mul(int(tensor[k, i, j]), int(u[i])), int(v[j])),
                    )
            out[k] = acc
        return out

    minv = linalg.inverse(ctx, m)
    for _ in range(10):
        u = linalg.random_matrix(ctx, 3, 1, rng)[:, 0]
        v = linalg.random_matrix(ctx, 3, 1, rng)[:, 0]
        # product in new basis == pullback of product of pushforwards
        lhs = mult(s2, u, v)
        rhs = linalg.matvec(
            ctx, minv, mult(s, linalg.matvec(ctx, m, u), linalg.matvec(ctx, m, v))
        )
        assert np.array_equal(lhs, rhs)


def test_poly_new_reduces():
    ctx = field_from_order(3)
    f = poly_new(2, 3, {(3, 0): 4, (0, 3): 3, (1, 2): -1}, ctx)
    assert f.coeffs == {(3, 0): 1, (1, 2): 2}


def test_poly_degree_bound():
    with pytest.raises(ValueError):
        Poly(n=2, d=9, coeffs={})

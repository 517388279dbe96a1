"""Polynomials over F_q, cubic/degree-d forms, trilinear forms, algebra
structure constants, and the conversions between them.

Action conventions (fixed once for the whole package):

* ``poly_act(ctx, f, A)`` is the substitution x_i -> sum_j A[i, j] x_j,
  a right action: (f . A) . B = f . (A B).
* ``trilinear_act(ctx, phi, T)`` stores psi[a, b, c] =
  sum phi[i, j, k] T[i, a] T[j, b] T[k, c], i.e. psi(u, v, w) =
  phi(Tu, Tv, Tw); the classical "phi composed with A inverse" is
  recovered by passing T = A^{-1}.
* ``algebra_act(ctx, s, T)`` treats the FIRST axis of the structure
  tensor as the dual slot: s[c, a, b] is the e_c-coefficient of
  e_a * e_b, and the new basis e'_i = sum_a T[a, i] e_a gives
  s'[k, i, j] = sum T^{-1}[k, c] s[c, a, b] T[a, i] T[b, j].

Both tensor actions are right actions and agree with tensor3.diag_act
on axes 2 and 3.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .gfq import FieldCtx
from . import tensor3
from .linalg import MatrixTuple, inverse

__all__ = [
    "Poly",
    "poly_new",
    "poly_eval",
    "poly_act",
    "random_poly",
    "cubic_to_symmetric_trilinear",
    "cubic_slice_tensor",
    "quad_slices",
    "degree_d_slices",
    "quad_to_symmetric",
    "quad_to_alternating",
    "trilinear_slices",
    "trilinear_act",
    "algebra_act",
]

MAX_DEGREE = 5


@dataclass(frozen=True)
class Poly:
    """Polynomial in n variables as an exponent-vector -> coefficient map.

    Keys are length-n tuples of non-negative exponents; no zero
    coefficients are stored.  `homogeneous` means every stored monomial
    has total degree exactly `d`.
    """

    n: int
    d: int
    coeffs: dict[tuple[int, ...], int] = field(default_factory=dict)

    def __post_init__(self):
        if self.d > MAX_DEGREE:
            raise ValueError(f"degree {self.d} exceeds supported bound {MAX_DEGREE}")
        for exps, c in self.coeffs.items():
            if len(exps) != self.n:
                raise ValueError(f"exponent vector {exps} has wrong length for n={self.n}")
            if sum(exps) > self.d or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent vector {exps} for degree bound {self.d}")
            if c == 0:
                raise ValueError("explicit zero coefficient stored")

    @property
    def homogeneous(self) -> bool:
        return all(sum(e) == self.d for e in self.coeffs)

    def degree(self) -> int:
        return max((sum(e) for e in self.coeffs), default=0)

    def coeff(self, exps: tuple[int, ...]) -> int:
        return self.coeffs.get(tuple(exps), 0)

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and self.n == other.n
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.n, frozenset(self.coeffs.items())))


def poly_new(n: int, d: int, coeffs: dict[tuple[int, ...], int], ctx: FieldCtx) -> Poly:
    """Build a Poly, reducing coefficients into [0, q) and dropping zeros.

    Integer coefficients are interpreted via repeated addition of 1
    (exact for prime fields; for extension fields only codes < q are
    meaningful, negatives are mapped through ctx.neg).
    """
    clean: dict[tuple[int, ...], int] = {}
    for exps, c in coeffs.items():
        if ctx.e == 1:
            code = c % ctx.p
        else:
            code = ctx.neg(-c) if c < 0 else c
            if code >= ctx.q:
                raise ValueError(f"coefficient {c} is not a valid F_{ctx.q} code")
        if code:
            clean[tuple(exps)] = code
    return Poly(n=n, d=d, coeffs=clean)


def poly_eval(ctx: FieldCtx, f: Poly, v) -> int:
    v = [int(x) for x in v]
    if len(v) != f.n:
        raise ValueError("evaluation point has wrong length")
    total = 0
    for exps, c in f.coeffs.items():
        term = c
        for x, e in zip(v, exps):
            for _ in range(e):
                term = ctx.mul(term, x)
        total = ctx.add(total, term)
    return total


def _dict_mul(ctx: FieldCtx, a: dict, b: dict) -> dict:
    out: dict[tuple[int, ...], int] = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            c = ctx.add(out.get(e, 0), ctx.mul(ca, cb))
            if c:
                out[e] = c
            else:
                out.pop(e, None)
    return out


def poly_act(ctx: FieldCtx, f: Poly, a: np.ndarray) -> Poly:
    """f . A: substitute x_i -> sum_j A[i, j] x_j and expand."""
    a = np.asarray(a)
    if a.shape != (f.n, f.n):
        raise ValueError(f"substitution matrix must be {f.n}x{f.n}, got {a.shape}")
    n = f.n
    zero_exp = (0,) * n
    # linear forms, one per variable
    lin = []
    for i in range(n):
        li = {}
        for j in range(n):
            if a[i, j]:
                e = [0] * n
                e[j] = 1
                li[tuple(e)] = int(a[i, j])
        lin.append(li)
    out: dict[tuple[int, ...], int] = {}
    for exps, c in f.coeffs.items():
        term = {zero_exp: c}
        for i, e in enumerate(exps):
            for _ in range(e):
                term = _dict_mul(ctx, term, lin[i])
        for e, cc in term.items():
            v = ctx.add(out.get(e, 0), cc)
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return Poly(n=n, d=f.d, coeffs=out)


def random_poly(
    ctx: FieldCtx,
    n: int,
    d: int,
    rng: np.random.Generator,
    homogeneous: bool = True,
) -> Poly:
    """Uniformly random coefficients over all monomials of degree == d
    (homogeneous) or <= d (inhomogeneous, constant term included)."""
    coeffs: dict[tuple[int, ...], int] = {}
    for exps in _monomials(n, d, exact=homogeneous):
        c = int(rng.integers(0, ctx.q))
        if c:
            coeffs[exps] = c
    return Poly(n=n, d=d, coeffs=coeffs)


def _monomials(n: int, d: int, exact: bool):
    """All exponent vectors with total degree == d (exact) or <= d."""

    def rec(prefix, remaining, pos):
        if pos == n - 1:
            if exact:
                yield (*prefix, remaining)
            else:
                for e in range(remaining + 1):
                    yield (*prefix, e)
            return
        for e in range(remaining + 1):
            yield from rec((*prefix, e), remaining - e, pos + 1)

    yield from rec((), d, 0)


# -- cubic form <-> symmetric trilinear form --------------------------------


def _sorted_indices(exps: tuple[int, ...]) -> tuple[int, ...]:
    """Degree-3 exponent vector -> sorted index triple (i <= j <= k)."""
    idx = []
    for i, e in enumerate(exps):
        idx.extend([i] * e)
    return tuple(idx)


def cubic_to_symmetric_trilinear(ctx: FieldCtx, f: Poly) -> np.ndarray:
    """The classical phi_f with phi_f(v, v, v) = f(v); needs char >= 5.

    Coefficient a of x_i^3 lands on the diagonal, a/3 on positions with
    exactly two equal indices, a/6 on all-distinct positions.
    """
    if ctx.char in (2, 3):
        raise ValueError("cubic_to_symmetric_trilinear requires characteristic >= 5")
    if not (f.homogeneous and f.d == 3):
        raise ValueError("input must be a homogeneous cubic form")
    n = f.n
    inv3 = ctx.inv(ctx.code_of_int(3))
    inv6 = ctx.inv(ctx.code_of_int(6))
    t = np.zeros((n, n, n), dtype=np.int64)
    for exps, c in f.coeffs.items():
        i, j, k = _sorted_indices(exps)
        if i == j == k:
            t[i, i, i] = c
        elif i == j or j == k:
            v = ctx.mul(c, inv3)
            for pos in {(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)}:
                t[pos] = v
        else:
            v = ctx.mul(c, inv6)
            for pos in ((i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)):
                t[pos] = v
    return t


def cubic_slice_tensor(ctx: FieldCtx, f: Poly) -> np.ndarray:
    """Symmetrized coefficient tensor used for fast slice extraction.

    Let B place each cubic coefficient at its sorted index triple and
    Bsym = sum over S_3 of the sigma-transposes of B.  The returned
    tensor is Bsym in characteristic 2 and (1/2) Bsym for odd q.  It
    transforms covariantly under substitutions
    (Phi_{f.A} = diag_act(Phi_f, A)) and the solver's slice matrices
    read off directly: for odd q the symmetric matrix of the i-th
    quadratic slice of f at cut r is Phi[i, r:, r:], and in char 2 the
    alternating matrix likewise (the diagonal vanishes automatically).

    Note: over F_3 the diagonal Phi[i,i,i] is 3a = 0, so Phi is blind
    to cube coefficients; any final isomorphism check must use poly_act.
    """
    if not (f.homogeneous and f.d == 3):
        raise ValueError("input must be a homogeneous cubic form")
    n = f.n
    t = np.zeros((n, n, n), dtype=np.int64)
    half = ctx.inv(ctx.code_of_int(2)) if ctx.char != 2 else 1
    for exps, c in f.coeffs.items():
        i, j, k = _sorted_indices(exps)
        if i == j == k:
            # Bsym diagonal entry is 6c
            t[i, i, i] = ctx.mul(half, ctx.mul(ctx.code_of_int(6), c))
        elif i == j or j == k:
            v = ctx.mul(half, ctx.mul(ctx.code_of_int(2), c))
            for pos in {(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)}:
                t[pos] = v
        else:
            v = ctx.mul(half, c)
            for pos in ((i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)):
                t[pos] = v
    return t


# -- quadratic slice extraction ---------------------------------------------


def degree_d_slices(f: Poly, r: int, d: int | None = None) -> list[Poly]:
    """The r quadratic slices of a degree-d form at cut r.

    Slice i (1 <= i <= r, returned 0-indexed) collects the coefficients
    of monomials x_i^{d-2} x_j x_k with i <= r < j <= k into the
    quadratic form sum alpha'_{i,j,k} y_{j-r} y_{k-r} in l = n - r
    variables.
    """
    if d is None:
        d = f.degree()
    n = f.n
    if not 1 <= r < n:
        raise ValueError(f"need 1 <= r < n, got r={r}, n={n}")
    ell = n - r
    out: list[dict[tuple[int, ...], int]] = [{} for _ in range(r)]
    for exps, c in f.coeffs.items():
        if sum(exps) != d:
            continue
        big = [i for i in range(r, n) if exps[i]]
        if sum(exps[i] for i in big) != 2:
            continue
        small = [i for i in range(r) if exps[i]]
        if len(small) != 1 or exps[small[0]] != d - 2:
            continue
        i = small[0]
        ye = [0] * ell
        for j in big:
            ye[j - r] = exps[j]
        out[i][tuple(ye)] = c
    return [Poly(n=ell, d=2, coeffs=co) for co in out]


def quad_slices(f: Poly, r: int) -> list[Poly]:
    """Cubic-form special case of degree_d_slices."""
    return degree_d_slices(f, r, d=3)


def quad_to_symmetric(ctx: FieldCtx, c: Poly) -> np.ndarray:
    """Quadratic form -> symmetric matrix C with y^T C y = c(y); odd q only."""
    if ctx.char == 2:
        raise ValueError("quad_to_symmetric requires odd characteristic")
    ell = c.n
    half = ctx.inv(ctx.code_of_int(2))
    m = np.zeros((ell, ell), dtype=np.int64)
    for exps, co in c.coeffs.items():
        idx = [i for i, e in enumerate(exps) for _ in range(e)]
        if len(idx) != 2:
            raise ValueError("not a homogeneous quadratic form")
        j, k = idx
        if j == k:
            m[j, j] = co
        else:
            m[j, k] = m[k, j] = ctx.mul(half, co)
    return m


def quad_to_alternating(ctx: FieldCtx, c: Poly) -> np.ndarray:
    """Quadratic form -> alternating (zero-diagonal) matrix; char 2 only.

    Square monomials are dropped; only strictly-mixed coefficients
    survive, placed symmetrically.
    """
    if ctx.char != 2:
        raise ValueError("quad_to_alternating requires characteristic 2")
    ell = c.n
    m = np.zeros((ell, ell), dtype=np.int64)
    for exps, co in c.coeffs.items():
        idx = [i for i, e in enumerate(exps) for _ in range(e)]
        if len(idx) != 2:
            raise ValueError("not a homogeneous quadratic form")
        j, k = idx
        if j != k:
            m[j, k] = m[k, j] = co
    return m


# -- trilinear forms and algebras -------------------------------------------


def trilinear_slices(t: np.ndarray, r: int) -> MatrixTuple:
    """General slice matrices C_i[j, k] = t[i, r+j, r+k] for i < r."""
    n = t.shape[0]
    if not 1 <= r < n:
        raise ValueError(f"need 1 <= r < n, got r={r}, n={n}")
    return MatrixTuple(kind="general", mats=tuple(t[i, r:, r:].copy() for i in range(r)))


def trilinear_act(ctx: FieldCtx, t: np.ndarray, m: np.ndarray) -> np.ndarray:
    """psi(u, v, w) = phi(Tu, Tv, Tw); right action."""
    return tensor3.diag_act(ctx, t, m)


def algebra_act(ctx: FieldCtx, s: np.ndarray, m: np.ndarray) -> np.ndarray:
    """Structure constants of the same algebra in the basis e'_i = sum_a m[a,i] e_a.

    First axis is the dual slot:
    s'[k, i, j] = sum m^{-1}[k, c] s[c, a, b] m[a, i] m[b, j].
    """
    minv = inverse(ctx, m)
    out = tensor3.mode_product(ctx, s, np.asarray(minv).T, 0)
    out = tensor3.mode_product(ctx, out, m, 1)
    return tensor3.mode_product(ctx, out, m, 2)

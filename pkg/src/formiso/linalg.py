"""Exact dense linear algebra over F_q plus the enumerations the search
pipeline needs: vectors, linearly independent tuples, complement
subspaces, and full GL(n, q) at oracle scale.

Matrices are plain 2-D numpy int arrays of field codes; every function
takes the FieldCtx explicitly.  All operations are pure, and every
enumeration yields in a fixed lexicographic order over integer codes so
that index ranges can be partitioned reproducibly across workers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .gfq import FieldCtx

__all__ = [
    "MatrixTuple",
    "identity",
    "zeros",
    "matmul",
    "matvec",
    "transpose",
    "rref",
    "rank",
    "kernel",
    "solve",
    "inverse",
    "is_invertible",
    "det",
    "enumerate_vectors",
    "vector_from_code",
    "enumerate_gl",
    "enumerate_independent_tuples",
    "enumerate_complements",
    "complement_basis",
    "gaussian_binomial",
    "random_matrix",
    "random_invertible",
]


@dataclass(frozen=True)
class MatrixTuple:
    """A tuple of m same-size square matrices with a shape tag.

    kind is one of "general", "symmetric", "alternating"; `mats` has
    shape (m, l, l).  The tag is validated on construction.
    """

    kind: str
    mats: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.mats)
        if m.ndim != 3 or m.shape[1] != m.shape[2]:
            raise ValueError(f"expected (m, l, l) array, got shape {m.shape}")
        object.__setattr__(self, "mats", m)
        if self.kind == "symmetric":
            if not all(np.array_equal(a, a.T) for a in m):
                raise ValueError("symmetric tag on a non-symmetric tuple")
        elif self.kind == "alternating":
            # zero diagonal and A^T = -A; over char 2 the zero diagonal is
            # the part that skew-symmetry does not already give.
            for a in m:
                if np.any(np.diagonal(a) != 0):
                    raise ValueError("alternating tag but nonzero diagonal")
        elif self.kind != "general":
            raise ValueError(f"unknown tuple kind {self.kind!r}")

    @property
    def m(self) -> int:
        return self.mats.shape[0]

    @property
    def size(self) -> int:
        return self.mats.shape[1]

    def validate_alternating(self, ctx: FieldCtx) -> bool:
        return all(
            not np.any(np.diagonal(a)) and np.array_equal(a.T, ctx.neg_arr(a))
            for a in self.mats
        )


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def zeros(r: int, c: int) -> np.ndarray:
    return np.zeros((r, c), dtype=np.int64)


def matmul(ctx: FieldCtx, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape[-1] != b.shape[0]:
        raise ValueError(f"dimension mismatch {a.shape} @ {b.shape}")
    if ctx.e == 1:
        return (a.astype(np.int64) @ b.astype(np.int64)) % ctx.p
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for k in range(a.shape[1]):
        out = ctx.add_arr(out, ctx.mul_arr(a[:, k : k + 1], b[k : k + 1, :]))
    return out


def matvec(ctx: FieldCtx, a: np.ndarray, v: np.ndarray) -> np.ndarray:
    return matmul(ctx, a, np.asarray(v).reshape(-1, 1)).reshape(-1)


def transpose(a: np.ndarray) -> np.ndarray:
    return np.asarray(a).T


def rref(ctx: FieldCtx, a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot column indices."""
    m = np.array(a, dtype=np.int64, copy=True)
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if len(nz) == 0:
            continue
        pr = r + nz[0]
        if pr != r:
            m[[r, pr]] = m[[pr, r]]
        inv = ctx.inv(int(m[r, c]))
        m[r] = ctx.scale_arr(inv, m[r])
        for rr in range(rows):
            if rr != r and m[rr, c]:
                m[rr] = ctx.sub_arr(m[rr], ctx.mul_arr(m[rr, c], m[r]))
        pivots.append(c)
        r += 1
    return m, pivots


def rank(ctx: FieldCtx, a: np.ndarray) -> int:
    return len(rref(ctx, a)[1])


def kernel(ctx: FieldCtx, a: np.ndarray) -> np.ndarray:
    """Basis of the right kernel, one vector per row; shape (dim, cols)."""
    a = np.asarray(a)
    r, pivots = rref(ctx, a)
    cols = a.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for bi, fc in enumerate(free):
        basis[bi, fc] = 1
        for pi, pc in enumerate(pivots):
            basis[bi, pc] = ctx.neg(int(r[pi, fc]))
    return basis


def solve(ctx: FieldCtx, a: np.ndarray, b: np.ndarray):
    """One solution of A x = b together with a kernel basis, or None.

    Returns (x0, K) where K rows span the homogeneous solutions, so the
    full solution set is {x0 + c K : c}.
    """
    a = np.asarray(a)
    b = np.asarray(b).reshape(-1)
    aug = np.concatenate([a, b.reshape(-1, 1)], axis=1)
    r, pivots = rref(ctx, aug)
    if a.shape[1] in pivots:
        return None
    x0 = np.zeros(a.shape[1], dtype=np.int64)
    for pi, pc in enumerate(pivots):
        x0[pc] = r[pi, -1]
    return x0, kernel(ctx, a)


def inverse(ctx: FieldCtx, a: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inverse requires a square matrix")
    aug = np.concatenate([a, identity(n)], axis=1)
    r, pivots = rref(ctx, aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return r[:, n:]


def is_invertible(ctx: FieldCtx, a: np.ndarray) -> bool:
    a = np.asarray(a)
    return a.shape[0] == a.shape[1] and rank(ctx, a) == a.shape[0]


def det(ctx: FieldCtx, a: np.ndarray) -> int:
    """Determinant by fraction-free-ish Gaussian elimination over F_q."""
    m = np.array(a, dtype=np.int64, copy=True)
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("det requires a square matrix")
    d = 1
    for c in range(n):
        nz = np.nonzero(m[c:, c])[0]
        if len(nz) == 0:
            return 0
        pr = c + nz[0]
        if pr != c:
            m[[c, pr]] = m[[pr, c]]
            d = ctx.neg(d)
        piv = int(m[c, c])
        d = ctx.mul(d, piv)
        inv = ctx.inv(piv)
        for rr in range(c + 1, n):
            if m[rr, c]:
                f = ctx.mul(int(m[rr, c]), inv)
                m[rr] = ctx.sub_arr(m[rr], ctx.scale_arr(f, m[c]))
    return d


# ---------------------------------------------------------------------------
# enumerations
# ---------------------------------------------------------------------------


def vector_from_code(code: int, n: int, q: int) -> np.ndarray:
    """Length-n vector whose entries are the base-q digits of code,
    most significant digit first (lexicographic order in code order)."""
    v = np.zeros(n, dtype=np.int64)
    for i in range(n - 1, -1, -1):
        v[i] = code % q
        code //= q
    return v


def enumerate_vectors(n: int, ctx: FieldCtx) -> Iterator[np.ndarray]:
    for code in range(ctx.q ** n):
        yield vector_from_code(code, n, ctx.q)


def enumerate_gl(n: int, ctx: FieldCtx, budget: int = 2 ** 24) -> Iterator[np.ndarray]:
    """Every element of GL(n, q) exactly once, lexicographic over the
    q^(n^2) candidate codes.  Raises if the candidate count exceeds budget."""
    total = ctx.q ** (n * n)
    if total > budget:
        raise ValueError(
            f"GL({n},{ctx.q}) enumeration needs {total} candidates, budget {budget}"
        )
    for code in range(total):
        m = vector_from_code(code, n * n, ctx.q).reshape(n, n)
        if is_invertible(ctx, m):
            yield m


def gl_order(n: int, q: int) -> int:
    o = 1
    for i in range(n):
        o *= q ** n - q ** i
    return o


def enumerate_independent_tuples(n: int, r: int, ctx: FieldCtx) -> Iterator[np.ndarray]:
    """All n x r matrices with linearly independent columns, lexicographic
    over the concatenated column codes (first column most significant)."""
    if not 0 < r <= n:
        raise ValueError(f"need 0 < r <= n, got r={r}, n={n}")
    q = ctx.q

    def rec(cols: list[np.ndarray]):
        if len(cols) == r:
            yield np.stack(cols, axis=1)
            return
        for code in range(q ** n):
            v = vector_from_code(code, n, q)
            cand = cols + [v]
            if rank(ctx, np.stack(cand, axis=1)) == len(cand):
                yield from rec(cand)

    yield from rec([])


def complement_basis(ctx: FieldCtx, u_basis: np.ndarray) -> np.ndarray:
    """One complement of the column span of u_basis: the standard basis
    vectors at non-pivot coordinates of the row-reduced transpose."""
    u = np.asarray(u_basis)
    n, r = u.shape
    _, pivots = rref(ctx, u.T)
    if len(pivots) != r:
        raise ValueError("dependent input basis")
    free = [i for i in range(n) if i not in pivots]
    v = np.zeros((n, n - r), dtype=np.int64)
    for j, i in enumerate(free):
        v[i, j] = 1
    return v


def enumerate_complements(u_basis: np.ndarray, ctx: FieldCtx) -> Iterator[np.ndarray]:
    """Bases of all complements of span(u_basis), exactly one basis per
    complement: columns v_j + sum_i a_{i,j} u_i over all a in M(r x (n-r)).

    Lexicographic over the code of the parameter matrix a.
    """
    u = np.asarray(u_basis)
    n, r = u.shape
    v = complement_basis(ctx, u)
    ell = n - r
    if ell == 0:
        yield np.zeros((n, 0), dtype=np.int64)
        return
    for code in range(ctx.q ** (r * ell)):
        a = vector_from_code(code, r * ell, ctx.q).reshape(r, ell)
        yield ctx.add_arr(v, matmul(ctx, u, a))


def gaussian_binomial(n: int, d: int, q: int) -> int:
    """Number of d-dimensional subspaces of F_q^n (exact integer)."""
    if d < 0 or d > n:
        raise ValueError(f"need 0 <= d <= n, got d={d}, n={n}")
    num = den = 1
    for i in range(d):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    assert num % den == 0
    return num // den


# ---------------------------------------------------------------------------
# seeded random instances
# ---------------------------------------------------------------------------


def rng_for(seed: int) -> np.random.Generator:
    """Counter-based generator so distributed runs can partition sample
    indices by re-keying without coordination."""
    return np.random.Generator(np.random.Philox(key=seed))


def random_matrix(ctx: FieldCtx, rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    return rng.integers(0, ctx.q, size=(rows, cols), dtype=np.int64)


def random_symmetric(ctx: FieldCtx, n: int, rng: np.random.Generator) -> np.ndarray:
    a = random_matrix(ctx, n, n, rng)
    upper = np.triu(a)
    return upper + np.triu(a, 1).T


def random_alternating(ctx: FieldCtx, n: int, rng: np.random.Generator) -> np.ndarray:
    a = np.triu(random_matrix(ctx, n, n, rng), 1)
    return ctx.add_arr(a, ctx.neg_arr(a.T))


def random_invertible(ctx: FieldCtx, n: int, rng: np.random.Generator) -> np.ndarray:
    while True:
        m = random_matrix(ctx, n, n, rng)
        if is_invertible(ctx, m):
            return m

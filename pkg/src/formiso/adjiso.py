"""The isometry engine: Adj spaces as linear systems, bounded enumeration
to extract isometry sets, and exhaustive brute-force oracles.

Adj(C, D) = {(A, S) : A^T C_i = D_i S for all i} is a linear space in
2 l^2 unknowns.  Every isometry S with C_i = S^T D_i S appears in it as
the pair (S^{-1}, S), so witnesses are read off the SECOND components of
the enumerated pairs.  The witness direction convention everywhere is
"map the D side to the C side": C_i = S^T D_i S.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .gfq import FieldCtx
from . import forms, linalg, tensor3
from .linalg import MatrixTuple

__all__ = [
    "AdjSpace",
    "IsoResult",
    "adj_space",
    "adj_space_auto",
    "iso_set",
    "brute_iso",
    "DEFAULT_BUDGET",
]

DEFAULT_BUDGET = 2 ** 20

EQUIVALENT = "equivalent"
NOT_EQUIVALENT = "not_equivalent"
GENERICITY_FAILED = "genericity_failed"


@dataclass(frozen=True)
class AdjSpace:
    """Kernel basis of {A^T C_i = D_i S}; basis has shape (dim, 2, l, l)
    with [t, 0] = A-part and [t, 1] = S-part of the t-th basis pair."""

    ell: int
    basis: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def element(self, ctx: FieldCtx, coeffs) -> tuple[np.ndarray, np.ndarray]:
        """Linear combination of basis pairs with the given coefficients."""
        a = np.zeros((self.ell, self.ell), dtype=np.int64)
        s = np.zeros((self.ell, self.ell), dtype=np.int64)
        for c, pair in zip(coeffs, self.basis):
            if c:
                a = ctx.add_arr(a, ctx.scale_arr(int(c), pair[0]))
                s = ctx.add_arr(s, ctx.scale_arr(int(c), pair[1]))
        return a, s


@dataclass(frozen=True)
class IsoResult:
    verdict: str
    witness: np.ndarray | tuple | None = None
    witnesses: tuple = ()
    dim: int = 0
    candidates: int = 0

    @property
    def equivalent(self) -> bool:
        return self.verdict == EQUIVALENT


def adj_space(ctx: FieldCtx, c: MatrixTuple, d: MatrixTuple) -> AdjSpace:
    """Basis of Adj(C, D); adj_space(ctx, C, C) gives Adj(C)."""
    if c.m != d.m or c.size != d.size:
        raise ValueError("tuples must have equal length and size")
    ell = c.size
    m = c.m
    eye = np.eye(ell, dtype=np.int64)
    rows = []
    for i in range(m):
        # (A^T C_i)[j,k] = sum_a C_i[a,k] A[a,j]  (A vectorized row-major)
        ma = np.einsum("ak,jJ->jkaJ", c.mats[i], eye).reshape(ell * ell, ell * ell)
        # (D_i S)[j,k] = sum_a D_i[j,a] S[a,k]
        ms = np.einsum("ja,kK->jkaK", d.mats[i], eye).reshape(ell * ell, ell * ell)
        rows.append(np.concatenate([ma, ctx.neg_arr(ms)], axis=1))
    system = (
        np.concatenate(rows, axis=0)
        if rows
        else np.zeros((0, 2 * ell * ell), dtype=np.int64)
    )
    basis_vecs = linalg.kernel(ctx, system)
    basis = basis_vecs.reshape(-1, 2, ell, ell)
    return AdjSpace(ell=ell, basis=basis)


def adj_space_auto(ctx: FieldCtx, c: MatrixTuple) -> AdjSpace:
    return adj_space(ctx, c, c)


def _congruent(ctx: FieldCtx, c: MatrixTuple, d: MatrixTuple, s: np.ndarray) -> bool:
    """C_i == S^T D_i S for all i."""
    st = s.T
    for ci, di in zip(c.mats, d.mats):
        if not np.array_equal(ci, linalg.matmul(ctx, linalg.matmul(ctx, st, di), s)):
            return False
    return True


def iso_set(
    ctx: FieldCtx,
    c: MatrixTuple,
    d: MatrixTuple,
    budget: int = DEFAULT_BUDGET,
    collect_all: bool = True,
) -> IsoResult:
    """Enumerate Adj(C, D) and extract the isometries C_i = S^T D_i S.

    Enumeration is lexicographic in coordinates over the computed basis.
    If q^dim exceeds the budget the result is GenericityFailed (the
    space is too large for the generic-case device to be conclusive).
    """
    space = adj_space(ctx, c, d)
    dim = space.dim
    total = ctx.q ** dim
    if total > budget:
        return IsoResult(verdict=GENERICITY_FAILED, dim=dim, candidates=0)
    ell = space.ell
    if dim == 0:
        # only the zero pair, never an isometry
        return IsoResult(verdict=NOT_EQUIVALENT, dim=0, candidates=1)
    witnesses: list[np.ndarray] = []
    flat = space.basis.reshape(dim, -1)
    chunk = 4096
    seen = 0
    for start in range(0, total, chunk):
        codes = np.arange(start, min(start + chunk, total))
        coeffs = np.zeros((len(codes), dim), dtype=np.int64)
        rem = codes.copy()
        for t in range(dim - 1, -1, -1):
            coeffs[:, t] = rem % ctx.q
            rem //= ctx.q
        if ctx.e == 1:
            combos = (coeffs @ flat) % ctx.p
        else:
            combos = np.zeros((len(codes), flat.shape[1]), dtype=np.int64)
            for t in range(dim):
                combos = ctx.add_arr(
                    combos, ctx.mul_arr(coeffs[:, t : t + 1], flat[t][None, :])
                )
        pairs = combos.reshape(-1, 2, ell, ell)
        for a, s in pairs:
            seen += 1
            if not _congruent(ctx, c, d, s):
                continue
            if not linalg.is_invertible(ctx, s):
                continue
            if not np.array_equal(a, linalg.inverse(ctx, s)):
                continue
            witnesses.append(s.copy())
    if witnesses:
        return IsoResult(
            verdict=EQUIVALENT,
            witness=witnesses[0],
            witnesses=tuple(witnesses) if collect_all else (witnesses[0],),
            dim=dim,
            candidates=seen,
        )
    return IsoResult(verdict=NOT_EQUIVALENT, dim=dim, candidates=seen)


# ---------------------------------------------------------------------------
# exhaustive ground-truth oracles
# ---------------------------------------------------------------------------

RELATIONS = (
    "isometry",
    "polynomial-isomorphism",
    "trilinear-equivalence",
    "algebra-isomorphism",
    "pseudo-isometry",
)


def brute_iso(
    ctx: FieldCtx,
    first,
    second,
    relation: str,
    budget: int = 2 ** 24,
    collect_all: bool = False,
) -> IsoResult:
    """Exhaustive decision over GL(n, q) (tiny sizes only).

    The witness direction matches the solvers: first = second acted on
    by the witness (e.g. f = g . T, C_i = T^T D_i T).  For
    pseudo-isometry the witness is the pair (T, Dmat) with
    T^T (sum_j Dmat[i, j] A_j) T = B_i, enumerated over
    GL(n, q) x GL(m, q).
    """
    if relation not in RELATIONS:
        raise ValueError(f"unknown relation {relation!r}")
    witnesses: list = []
    candidates = 0

    if relation == "pseudo-isometry":
        a: MatrixTuple = first
        b: MatrixTuple = second
        n = a.size
        m = a.m
        if b.size != n or b.m != m:
            raise ValueError("tuples must have equal shape")
        for t in linalg.enumerate_gl(n, ctx, budget):
            mixed_base = [
                linalg.matmul(ctx, linalg.matmul(ctx, t.T, aj), t) for aj in a.mats
            ]
            for dmat in linalg.enumerate_gl(m, ctx, budget):
                candidates += 1
                ok = True
                for i in range(m):
                    acc = np.zeros((n, n), dtype=np.int64)
                    for j in range(m):
                        if dmat[i, j]:
                            acc = ctx.add_arr(
                                acc, ctx.scale_arr(int(dmat[i, j]), mixed_base[j])
                            )
                    if not np.array_equal(acc, b.mats[i]):
                        ok = False
                        break
                if ok:
                    witnesses.append((t.copy(), dmat.copy()))
                    if not collect_all:
                        break
            if witnesses and not collect_all:
                break
    else:
        if relation == "isometry":
            n = first.size
            check = lambda t: _congruent(ctx, first, second, t)
        elif relation == "polynomial-isomorphism":
            n = first.n
            check = lambda t: first == forms.poly_act(ctx, second, t)
        elif relation == "trilinear-equivalence":
            n = first.shape[0]
            check = lambda t: np.array_equal(first, forms.trilinear_act(ctx, second, t))
        else:  # algebra-isomorphism
            n = first.shape[0]
            check = lambda t: np.array_equal(first, forms.algebra_act(ctx, second, t))
        for t in linalg.enumerate_gl(n, ctx, budget):
            candidates += 1
            if check(t):
                witnesses.append(t.copy())
                if not collect_all:
                    break

    if witnesses:
        return IsoResult(
            verdict=EQUIVALENT,
            witness=witnesses[0],
            witnesses=tuple(witnesses),
            candidates=candidates,
        )
    return IsoResult(verdict=NOT_EQUIVALENT, candidates=candidates)

"""Dense 3-way arrays over F_q: slices, transposes under S_3, and the
(P, Q, R) group action.

A tensor is a plain 3-D numpy int array t with entries t[i, j, k].  The
k-th frontal slice is t[:, :, k], the j-th vertical slice t[:, j, :],
and the i-th horizontal slice t[i, :, :].

Action conventions, fixed once for the whole package:

* ``act(ctx, P, Q, R, t)`` sends the frontal-slice tuple (A_1, .., A_m)
  to (P^T (sum_j R[k, j] A_j) Q)_k, entrywise
  res[a, b, c] = sum_{i,j,k} t[i, j, k] P[i, a] Q[j, b] R[c, k].
* ``diag_act(ctx, t, T)`` is the cubical diagonal action
  res[a, b, c] = sum t[i, j, k] T[i, a] T[j, b] T[k, c],
  a right action: diag_act(diag_act(t, T1), T2) = diag_act(t, T1 T2).
"""

from __future__ import annotations

from itertools import permutations

import numpy as np

from .gfq import FieldCtx

__all__ = [
    "frontal_slice",
    "vertical_slice",
    "horizontal_slice",
    "sigma_transpose",
    "mode_product",
    "act",
    "diag_act",
    "is_alternating",
    "is_symmetric",
    "random_tensor",
]

_S3_SIGNS = {
    (1, 2, 3): 1,
    (2, 3, 1): 1,
    (3, 1, 2): 1,
    (2, 1, 3): -1,
    (1, 3, 2): -1,
    (3, 2, 1): -1,
}


def frontal_slice(t: np.ndarray, k: int) -> np.ndarray:
    return t[:, :, k]


def vertical_slice(t: np.ndarray, j: int) -> np.ndarray:
    return t[:, j, :]


def horizontal_slice(t: np.ndarray, i: int) -> np.ndarray:
    return t[i, :, :]


def sigma_transpose(t: np.ndarray, sigma: tuple[int, int, int]) -> np.ndarray:
    """Transpose under a permutation of the three coordinates.

    sigma = (s1, s2, s3) is one-line notation on {1,2,3}:
    result[i1, i2, i3] = t[i_{s1}, i_{s2}, i_{s3}].  E.g. sigma=(1,3,2)
    swaps the last two coordinates, so the k-th frontal slice of the
    result is the k-th vertical slice of t.
    """
    if sorted(sigma) != [1, 2, 3]:
        raise ValueError(f"not a permutation of (1,2,3): {sigma}")
    return np.transpose(t, axes=(sigma[0] - 1, sigma[1] - 1, sigma[2] - 1))


def mode_product(ctx: FieldCtx, t: np.ndarray, m: np.ndarray, axis: int) -> np.ndarray:
    """Contract tensor axis `axis` with the first index of m:
    out[..., a, ...] = sum_i t[..., i, ...] m[i, a]."""
    t = np.asarray(t)
    m = np.asarray(m)
    if ctx.e == 1:
        out = np.tensordot(t.astype(np.int64), m.astype(np.int64), axes=([axis], [0]))
        return np.moveaxis(out, -1, axis) % ctx.p
    tt = np.moveaxis(t, axis, -1)
    out = np.zeros(tt.shape[:-1] + (m.shape[1],), dtype=np.int64)
    for i in range(m.shape[0]):
        out = ctx.add_arr(out, ctx.mul_arr(tt[..., i : i + 1], m[i][None, :]))
    return np.moveaxis(out, -1, axis)


def act(ctx: FieldCtx, p: np.ndarray, q: np.ndarray, r: np.ndarray, t: np.ndarray) -> np.ndarray:
    """P^T t^R Q: frontal slices A_k -> P^T (sum_j R[k,j] A_j) Q."""
    n1, n2, n3 = t.shape
    if p.shape != (n1, n1) or q.shape != (n2, n2) or r.shape != (n3, n3):
        raise ValueError("dimension mismatch in (P, Q, R) action")
    out = mode_product(ctx, t, p, 0)
    out = mode_product(ctx, out, q, 1)
    return mode_product(ctx, out, np.asarray(r).T, 2)


def diag_act(ctx: FieldCtx, t: np.ndarray, m: np.ndarray) -> np.ndarray:
    """Covariant diagonal action res[a,b,c] = sum t[i,j,k] m[i,a] m[j,b] m[k,c]."""
    out = mode_product(ctx, t, m, 0)
    out = mode_product(ctx, out, m, 1)
    return mode_product(ctx, out, m, 2)


def _require_cubical(t: np.ndarray) -> int:
    n1, n2, n3 = t.shape
    if not (n1 == n2 == n3):
        raise ValueError(f"cubical tensor required, got dims {t.shape}")
    return n1


def is_symmetric(t: np.ndarray) -> bool:
    _require_cubical(t)
    return all(
        np.array_equal(t, sigma_transpose(t, sigma)) for sigma in permutations((1, 2, 3))
    )


def is_alternating(t: np.ndarray, ctx: FieldCtx) -> bool:
    """Entries vanish on repeated indices and pick up the permutation sign."""
    n = _require_cubical(t)
    idx = np.arange(n)
    if np.any(t[idx[:, None], idx[:, None], :]):  # i == j
        return False
    if np.any(t[idx[:, None], :, idx[:, None]]):  # i == k
        return False
    if np.any(t[:, idx[:, None], idx[:, None]]):  # j == k
        return False
    for sigma, sign in _S3_SIGNS.items():
        ts = sigma_transpose(t, sigma)
        expect = ts if sign == 1 else ctx.neg_arr(ts)
        if not np.array_equal(t, expect):
            return False
    return True


def random_tensor(ctx: FieldCtx, dims: tuple[int, int, int], rng: np.random.Generator) -> np.ndarray:
    return rng.integers(0, ctx.q, size=dims, dtype=np.int64)

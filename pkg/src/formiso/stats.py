"""Empirical and exhaustive validation of the probabilistic machinery
behind the solvers: Adj-dimension bounds for random tuples, the stability
criterion, the rank bound for random slice blocks, and the exact
uniformity of the symmetric-pair merge construction.

All Monte Carlo runs are reproducible from (seed, parameters) via the
counter-based generator in :mod:`formiso.linalg`; exhaustive runs report
exact fractions and are flagged as such.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .gfq import FieldCtx, field_from_order
from . import linalg
from .linalg import MatrixTuple

__all__ = [
    "ExperimentReport",
    "adj_dim_experiment",
    "stability_check",
    "rank_bound_experiment",
    "merge_symmetric_pair",
    "merge_uniformity",
]

STABILITY_MAX_ELL = 4
STABILITY_MAX_Q = 3


@dataclass(frozen=True)
class ExperimentReport:
    """Outcome of one experiment: parameters, counts, derived numbers.

    ``exact`` is True for exhaustive runs, whose ``fractions`` entries
    are exact rationals; sampled runs only fill ``estimates``.
    """

    name: str
    params: dict
    counts: dict
    estimates: dict = field(default_factory=dict)
    fractions: dict = field(default_factory=dict)
    exact: bool = False

    def lines(self) -> list[str]:
        """Line-oriented key=value rendering (used by the CLI)."""
        out = [f"experiment={self.name}", f"exact={str(self.exact).lower()}"]
        for k, v in self.params.items():
            out.append(f"param.{k}={v}")
        for k, v in self.counts.items():
            out.append(f"count.{k}={v}")
        for k, v in self.fractions.items():
            out.append(f"fraction.{k}={v.numerator}/{v.denominator}")
        for k, v in self.estimates.items():
            out.append(f"estimate.{k}={v}")
        return out


def _adj_dim(ctx: FieldCtx, tup: MatrixTuple) -> int:
    from . import adjiso

    return adjiso.adj_space_auto(ctx, tup).dim


def adj_dim_experiment(
    ell: int,
    r: int,
    q: int,
    samples: int,
    seed: int = 0,
    kind: str = "symmetric",
) -> ExperimentReport:
    """Frequency of dim Adj(C) <= ell for random C in S(ell,q)^r (or the
    alternating / general variants).

    For r = 0 the Adj space is all of M + M, dimension 2 ell^2.
    """
    if kind not in ("symmetric", "alternating", "general"):
        raise ValueError(f"unknown tuple kind {kind!r}")
    ctx = field_from_order(q)
    rng = linalg.rng_for(seed)
    sampler = {
        "symmetric": linalg.random_symmetric,
        "alternating": linalg.random_alternating,
        "general": lambda c, n, g: linalg.random_matrix(c, n, n, g),
    }[kind]
    good = 0
    dim_hist: dict[int, int] = {}
    for _ in range(samples):
        if r == 0:
            # no constraints: the Adj space is all of M(ell) + M(ell)
            dim = 2 * ell * ell
        else:
            mats = tuple(sampler(ctx, ell, rng) for _ in range(r))
            tup = MatrixTuple(mats=mats, kind=kind)
            dim = _adj_dim(ctx, tup)
        dim_hist[dim] = dim_hist.get(dim, 0) + 1
        if dim <= ell:
            good += 1
    return ExperimentReport(
        name="adj_dim",
        params={"ell": ell, "r": r, "q": q, "samples": samples, "seed": seed, "kind": kind},
        counts={"dim_le_ell": good, **{f"dim_{d}": c for d, c in sorted(dim_hist.items())}},
        estimates={"frequency": good / samples if samples else 0.0},
    )


def _image_basis(ctx: FieldCtx, tup: MatrixTuple, u_cols: np.ndarray) -> int:
    """dim of the span of the images D_i(U), with U given by column basis."""
    images = [linalg.matmul(ctx, d, u_cols) for d in tup.mats]
    if not images:
        return 0
    stacked = np.concatenate([im.T for im in images], axis=0)
    return linalg.rank(ctx, stacked)


def stability_check(ctx: FieldCtx, tup: MatrixTuple) -> bool:
    """Exact stability: dim(D(U)) > dim(U) for every subspace U with
    1 <= dim U <= ell - 1, by exhausting all proper nonzero subspaces.

    Only feasible at tiny scale; guarded by ell <= 4, q <= 3.
    """
    ell = tup.size
    if ell > STABILITY_MAX_ELL or ctx.q > STABILITY_MAX_Q:
        raise ValueError("stability_check budget exceeded (need ell <= 4, q <= 3)")
    for d in range(1, ell):
        # every subspace appears via several ordered bases; redundant but
        # exact, and cheap at the guarded sizes
        for u in linalg.enumerate_independent_tuples(ell, d, ctx):
            if _image_basis(ctx, tup, u) <= d:
                return False
    return True


def merge_symmetric_pair(ctx: FieldCtx, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Merge two symmetric d x d matrices into one matrix:
    Z[i, j] = X[i, j] + Y[i, (j+1) mod d]  (0-indexed column shift).

    When X and Y are uniform over S(d, q), Z is uniform over M(d, q).
    """
    d = x.shape[0]
    if x.shape != (d, d) or y.shape != (d, d):
        raise ValueError("need square matrices of equal size")
    return ctx.add_arr(x, y[:, (np.arange(d) + 1) % d])


def merge_uniformity(
    d: int, q: int, mode: str = "exhaustive", samples: int = 10000, seed: int = 0
) -> ExperimentReport:
    """Distribution of the merged matrix Z over M(d, q).

    Exhaustive mode enumerates all q^{d(d+1)} symmetric pairs (X, Y) and
    asserts nothing itself — it just reports exact counts; uniformity
    means every one of the q^{d^2} matrices is hit the same number of
    times.
    """
    ctx = field_from_order(q)
    n_sym = d * (d + 1) // 2
    if mode == "exhaustive":
        total_pairs = ctx.q ** (2 * n_sym)
        if total_pairs > 2 ** 22:
            raise ValueError("exhaustive merge_uniformity budget exceeded")
        iu = np.triu_indices(d)
        counts: dict[int, int] = {}
        base = ctx.q
        for code_x in range(base ** n_sym):
            x = np.zeros((d, d), dtype=np.int64)
            cx = linalg.vector_from_code(code_x, n_sym, ctx.q)
            x[iu] = cx
            x.T[iu] = cx
            for code_y in range(base ** n_sym):
                y = np.zeros((d, d), dtype=np.int64)
                cy = linalg.vector_from_code(code_y, n_sym, ctx.q)
                y[iu] = cy
                y.T[iu] = cy
                z = merge_symmetric_pair(ctx, x, y)
                key = 0
                for v in z.flatten():
                    key = key * base + int(v)
                counts[key] = counts.get(key, 0) + 1
        n_mats = base ** (d * d)
        distinct = len(counts)
        cvals = set(counts.values())
        uniform = distinct == n_mats and len(cvals) == 1
        per = total_pairs // n_mats
        return ExperimentReport(
            name="merge_uniformity",
            params={"d": d, "q": q, "mode": mode},
            counts={
                "pairs": total_pairs,
                "distinct_outputs": distinct,
                "min_count": min(counts.values()),
                "max_count": max(counts.values()),
                "expected_per_output": per,
            },
            fractions={"coverage": Fraction(distinct, n_mats)},
            estimates={"uniform": uniform},
            exact=True,
        )
    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    rng = linalg.rng_for(seed)
    counts = {}
    for _ in range(samples):
        x = linalg.random_symmetric(ctx, d, rng)
        y = linalg.random_symmetric(ctx, d, rng)
        z = merge_symmetric_pair(ctx, x, y)
        key = 0
        for v in z.flatten():
            key = key * ctx.q + int(v)
        counts[key] = counts.get(key, 0) + 1
    return ExperimentReport(
        name="merge_uniformity",
        params={"d": d, "q": q, "mode": mode, "samples": samples, "seed": seed},
        counts={"distinct_outputs": len(counts)},
        estimates={"max_frequency": max(counts.values()) / samples},
    )


def rank_bound_experiment(
    ell: int, d: int, q: int, samples: int, seed: int = 0, r: int = 8
) -> ExperimentReport:
    """Empirical Pr[rk <= d] for the two random block models, together
    with the product against the Gaussian binomial [ell choose d]_q.

    * symmetric model: C^d = [C_1^d ... C_r^d], each C_i^d an ell x d
      block whose top d x d part is symmetric and the rest uniform;
    * plain model: a uniform ell x 4d matrix.
    """
    if not 1 <= d <= ell:
        raise ValueError("need 1 <= d <= ell")
    ctx = field_from_order(q)
    rng = linalg.rng_for(seed)
    low_sym = 0
    low_plain = 0
    for _ in range(samples):
        blocks = []
        for _ in range(r):
            top = linalg.random_symmetric(ctx, d, rng)
            bottom = linalg.random_matrix(ctx, ell - d, d, rng)
            blocks.append(np.concatenate([top, bottom], axis=0))
        sym = np.concatenate(blocks, axis=1)
        if linalg.rank(ctx, sym) <= d:
            low_sym += 1
        plain = linalg.random_matrix(ctx, ell, 4 * d, rng)
        if linalg.rank(ctx, plain) <= d:
            low_plain += 1
    gb = linalg.gaussian_binomial(ell, d, q)
    p_sym = low_sym / samples if samples else 0.0
    p_plain = low_plain / samples if samples else 0.0
    return ExperimentReport(
        name="rank_bound",
        params={"ell": ell, "d": d, "q": q, "r": r, "samples": samples, "seed": seed},
        counts={"low_rank_symmetric": low_sym, "low_rank_plain": low_plain},
        estimates={
            "pr_symmetric": p_sym,
            "pr_plain": p_plain,
            "product_symmetric": gb * p_sym,
            "product_plain": gb * p_plain,
            "gaussian_binomial": float(gb),
        },
    )

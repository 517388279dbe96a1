"""Numba-compiled inner loop for the cubic solver over odd prime fields
with r = 2.

The scan walks every T1 = [u1 u2 | complement] branch.  Each branch is
first screened by an exact necessary condition: if C_i = R^T D_i R then
det(l1 C_1 + l2 C_2) = det(R)^2 det(l1 D_1 + l2 D_2) at every projective
point (l1, l2), with det(R)^2 a fixed nonzero square.  Branches passing
the screen get the exact Adj(C, D) kernel and a bounded enumeration of
candidate isometries.  Each candidate T = T1 diag(I, R) is pre-filtered
in-loop against the full symmetrized coefficient tensors
(Phi_f == Phi_g contracted by T); survivors are handed back to Python,
which performs the sound final check on the full polynomials (the Phi
tensors are blind to cube coefficients in characteristic 3) and resumes
the scan from the returned (c1, c2, a) coordinates in O(1).

Status codes: 0 = scan finished, 1 = candidates pending, 2 = t1 limit
hit.
"""

from __future__ import annotations

import numpy as np
from numba import njit

STATUS_DONE = 0
STATUS_CANDIDATES = 1
STATUS_TRUNCATED = 2


@njit(cache=True)
def _det_mod(a, p, inv_table):
    """Determinant of a small matrix over Z_p; destroys the input."""
    n = a.shape[0]
    d = 1
    for c in range(n):
        piv = -1
        for r in range(c, n):
            if a[r, c] != 0:
                piv = r
                break
        if piv < 0:
            return 0
        if piv != c:
            for k in range(n):
                tmp = a[c, k]
                a[c, k] = a[piv, k]
                a[piv, k] = tmp
            d = (-d) % p
        d = (d * a[c, c]) % p
        inv = inv_table[a[c, c]]
        for r in range(c + 1, n):
            if a[r, c] != 0:
                f = (a[r, c] * inv) % p
                for k in range(c, n):
                    a[r, k] = (a[r, k] - f * a[c, k]) % p
    return d


@njit(cache=True)
def _rref_mod(a, p, inv_table, pivots):
    """In-place reduced row echelon form; fills `pivots`, returns rank."""
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        piv = -1
        for rr in range(r, rows):
            if a[rr, c] != 0:
                piv = rr
                break
        if piv < 0:
            continue
        if piv != r:
            for k in range(cols):
                tmp = a[r, k]
                a[r, k] = a[piv, k]
                a[piv, k] = tmp
        inv = inv_table[a[r, c]]
        for k in range(cols):
            a[r, k] = (a[r, k] * inv) % p
        for rr in range(rows):
            if rr != r and a[rr, c] != 0:
                f = a[rr, c]
                for k in range(cols):
                    a[rr, k] = (a[rr, k] - f * a[r, k]) % p
        pivots[r] = c
        r += 1
    return r


@njit(cache=True)
def scan_cubic_r2(
    p,
    n,
    phi_f,  # (n, n, n) symmetrized coefficient tensor of f
    phi_g,  # (n, n, n) symmetrized coefficient tensor of g
    cmats,  # (2, ell, ell) slice matrices of f
    det_c,  # (npts,) pencil determinants of cmats at the projective points
    lam,  # (npts, 2) projective points of P^1(F_p)
    inv_table,  # (p,)
    is_square,  # (p,) uint8, nonzero squares marked
    start_c1,  # resume coordinates: codes of u1, u2 and the complement
    start_c2,
    start_a,
    t1_remaining,  # branches left before truncation; < 0 means unlimited
    budget,  # max candidates enumerated per branch
    out_t,  # (cap, n, n) output buffer of candidate T matrices
    dim_hist,  # (2*ell*ell + 2,) histogram of Adj dims on screened branches
):
    ell = n - 2
    npts = lam.shape[0]
    qn = 1
    for _ in range(n):
        qn *= p
    n_acodes = 1
    for _ in range(2 * ell):
        n_acodes *= p
    cap = out_t.shape[0]

    u1 = np.zeros(n, dtype=np.int64)
    u2 = np.zeros(n, dtype=np.int64)
    v = np.zeros((n, ell), dtype=np.int64)
    w = np.zeros((n, ell), dtype=np.int64)
    g0 = np.zeros((n, n), dtype=np.int64)
    g1 = np.zeros((n, n), dtype=np.int64)
    gw = np.zeros((n, ell), dtype=np.int64)
    d0 = np.zeros((ell, ell), dtype=np.int64)
    d1 = np.zeros((ell, ell), dtype=np.int64)
    pencil = np.zeros((ell, ell), dtype=np.int64)
    ut = np.zeros((2, n), dtype=np.int64)
    piv2 = np.zeros(2, dtype=np.int64)
    nun = 2 * ell * ell
    system = np.zeros((nun, nun), dtype=np.int64)
    pivots = np.zeros(nun, dtype=np.int64)
    coeffs = np.zeros(nun, dtype=np.int64)
    amat = np.zeros((ell, ell), dtype=np.int64)
    smat = np.zeros((ell, ell), dtype=np.int64)
    tmp = np.zeros((ell, ell), dtype=np.int64)
    tmp2 = np.zeros((ell, ell), dtype=np.int64)
    kbasis = np.zeros((nun, nun), dtype=np.int64)
    tfull = np.zeros((n, n), dtype=np.int64)
    tens1 = np.zeros((n, n, n), dtype=np.int64)
    tens2 = np.zeros((n, n, n), dtype=np.int64)

    branches = 0
    any_generic = False
    n_cand = 0

    for c1 in range(max(start_c1, 1), qn):
        cc = c1
        for i in range(n - 1, -1, -1):
            u1[i] = cc % p
            cc //= p
        c2_begin = start_c2 if c1 == start_c1 else 0
        for c2 in range(c2_begin, qn):
            cc = c2
            for i in range(n - 1, -1, -1):
                u2[i] = cc % p
                cc //= p
            # independence: u2 must not be a multiple of u1
            dep = True
            t_ratio = -1
            for i in range(n):
                if u1[i] == 0:
                    if u2[i] != 0:
                        dep = False
                        break
                else:
                    tr = (u2[i] * inv_table[u1[i]]) % p
                    if t_ratio < 0:
                        t_ratio = tr
                    elif tr != t_ratio:
                        dep = False
                        break
            if dep:
                continue
            a_begin = start_a if (c1 == start_c1 and c2 == start_c2) else 0
            if a_begin >= n_acodes:
                continue

            # G_i = sum_a phi_g[a] * U[a, i]
            for j in range(n):
                for k in range(n):
                    acc0 = 0
                    acc1 = 0
                    for a in range(n):
                        acc0 += phi_g[a, j, k] * u1[a]
                        acc1 += phi_g[a, j, k] * u2[a]
                    g0[j, k] = acc0 % p
                    g1[j, k] = acc1 % p

            # complement of span(u1, u2): standard vectors at non-pivots
            for i in range(n):
                ut[0, i] = u1[i]
                ut[1, i] = u2[i]
            _rref_mod(ut, p, inv_table, piv2)
            for i in range(n):
                for j in range(ell):
                    v[i, j] = 0
            vcol = 0
            for c in range(n):
                if c != piv2[0] and c != piv2[1]:
                    v[c, vcol] = 1
                    vcol += 1

            for a_code in range(a_begin, n_acodes):
                if t1_remaining == 0:
                    return (STATUS_TRUNCATED, n_cand, c1, c2, a_code, branches, any_generic)
                if t1_remaining > 0:
                    t1_remaining -= 1
                branches += 1

                # W = V + U A with A (2 x ell) decoded from a_code
                for row in range(n):
                    for j in range(ell):
                        w[row, j] = v[row, j]
                cc = a_code
                for idx in range(2 * ell - 1, -1, -1):
                    i = idx // ell
                    j = idx % ell
                    aval = cc % p
                    cc //= p
                    if aval != 0:
                        ui = u1 if i == 0 else u2
                        for row in range(n):
                            w[row, j] = (w[row, j] + aval * ui[row]) % p

                # D_i = W^T G_i W
                for gi in range(2):
                    g = g0 if gi == 0 else g1
                    for a in range(n):
                        for j in range(ell):
                            acc = 0
                            for b in range(n):
                                acc += g[a, b] * w[b, j]
                            gw[a, j] = acc % p
                    dst = d0 if gi == 0 else d1
                    for i in range(ell):
                        for j in range(ell):
                            acc = 0
                            for a in range(n):
                                acc += w[a, i] * gw[a, j]
                            dst[i, j] = acc % p

                # pencil determinant screen
                ok = True
                ratio = -1
                for t in range(npts):
                    l1 = lam[t, 0]
                    l2 = lam[t, 1]
                    for i in range(ell):
                        for j in range(ell):
                            pencil[i, j] = (l1 * d0[i, j] + l2 * d1[i, j]) % p
                    dd = _det_mod(pencil, p, inv_table)
                    dc = det_c[t]
                    if (dc == 0) != (dd == 0):
                        ok = False
                        break
                    if dc != 0:
                        rr = (dc * inv_table[dd]) % p
                        if ratio < 0:
                            ratio = rr
                        elif rr != ratio:
                            ok = False
                            break
                if ok and ratio >= 0 and is_square[ratio] == 0:
                    ok = False
                if not ok:
                    continue

                # exact Adj(C, D) kernel: A^T C_i = D_i S
                for i in range(nun):
                    for j in range(nun):
                        system[i, j] = 0
                row = 0
                for gi in range(2):
                    cm = cmats[gi]
                    dm = d0 if gi == 0 else d1
                    for j in range(ell):
                        for k in range(ell):
                            for a in range(ell):
                                system[row, a * ell + j] = cm[a, k]
                                system[row, ell * ell + a * ell + k] = (
                                    system[row, ell * ell + a * ell + k] - dm[j, a]
                                ) % p
                            row += 1
                rank = _rref_mod(system, p, inv_table, pivots)
                dim = nun - rank
                total = 1
                over = False
                for _ in range(dim):
                    total *= p
                    if total > budget:
                        over = True
                        break
                if dim + 1 < dim_hist.shape[0]:
                    dim_hist[dim] += 1
                if over:
                    any_generic = True
                    continue

                # kernel basis rows
                bi = 0
                for fc in range(nun):
                    ispiv = False
                    for t in range(rank):
                        if pivots[t] == fc:
                            ispiv = True
                            break
                    if ispiv:
                        continue
                    for j in range(nun):
                        kbasis[bi, j] = 0
                    kbasis[bi, fc] = 1
                    for t in range(rank):
                        kbasis[bi, pivots[t]] = (-system[t, fc]) % p
                    bi += 1

                branch_found = False
                for code in range(1, total):
                    cc = code
                    for t in range(dim - 1, -1, -1):
                        coeffs[t] = cc % p
                        cc //= p
                    for i in range(ell):
                        for j in range(ell):
                            acc_a = 0
                            acc_s = 0
                            for t in range(dim):
                                if coeffs[t] != 0:
                                    acc_a += coeffs[t] * kbasis[t, i * ell + j]
                                    acc_s += coeffs[t] * kbasis[t, ell * ell + i * ell + j]
                            amat[i, j] = acc_a % p
                            smat[i, j] = acc_s % p
                    # congruence: S^T D_i S == C_i
                    good = True
                    for gi in range(2):
                        dm = d0 if gi == 0 else d1
                        cm = cmats[gi]
                        for i in range(ell):
                            for j in range(ell):
                                acc = 0
                                for a in range(ell):
                                    acc += dm[i, a] * smat[a, j]
                                tmp[i, j] = acc % p
                        for i in range(ell):
                            for j in range(ell):
                                acc = 0
                                for a in range(ell):
                                    acc += smat[a, i] * tmp[a, j]
                                tmp2[i, j] = acc % p
                        for i in range(ell):
                            for j in range(ell):
                                if tmp2[i, j] != cm[i, j]:
                                    good = False
                                    break
                            if not good:
                                break
                        if not good:
                            break
                    if not good:
                        continue
                    # A S == I  (forces S invertible with A = S^{-1})
                    for i in range(ell):
                        for j in range(ell):
                            acc = 0
                            for a in range(ell):
                                acc += amat[i, a] * smat[a, j]
                            if acc % p != (1 if i == j else 0):
                                good = False
                                break
                        if not good:
                            break
                    if not good:
                        continue
                    # full T = [u1 u2 | W R]
                    for i in range(n):
                        tfull[i, 0] = u1[i]
                        tfull[i, 1] = u2[i]
                        for j in range(ell):
                            acc = 0
                            for a in range(ell):
                                acc += w[i, a] * smat[a, j]
                            tfull[i, 2 + j] = acc % p
                    # pre-filter: Phi_f == Phi_g contracted by T on all axes
                    for a in range(n):
                        for j in range(n):
                            for k in range(n):
                                acc = 0
                                for i in range(n):
                                    acc += phi_g[i, j, k] * tfull[i, a]
                                tens1[a, j, k] = acc % p
                    for a in range(n):
                        for b in range(n):
                            for k in range(n):
                                acc = 0
                                for j in range(n):
                                    acc += tens1[a, j, k] * tfull[j, b]
                                tens2[a, b, k] = acc % p
                    for a in range(n):
                        for b in range(n):
                            for c in range(n):
                                acc = 0
                                for k in range(n):
                                    acc += tens2[a, b, k] * tfull[k, c]
                                if acc % p != phi_f[a, b, c]:
                                    good = False
                                    break
                            if not good:
                                break
                        if not good:
                            break
                    if not good:
                        continue
                    if n_cand >= cap:
                        any_generic = True  # overflow: branch inconclusive
                        break
                    for i in range(n):
                        for j in range(n):
                            out_t[n_cand, i, j] = tfull[i, j]
                    n_cand += 1
                    branch_found = True
                if branch_found:
                    return (STATUS_CANDIDATES, n_cand, c1, c2, a_code + 1, branches, any_generic)
            start_a = 0
    return (STATUS_DONE, n_cand, qn, 0, 0, branches, any_generic)

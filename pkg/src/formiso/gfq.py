"""Exact arithmetic in small finite fields F_q, q = p^e <= 256.

Elements are integer codes in [0, q).  For prime fields the code is the
residue itself.  For extension fields the code's base-p digits are the
coefficients of the residue polynomial: code = sum(c_i * p^i) represents
sum(c_i * x^i) modulo a fixed irreducible polynomial.

The irreducible polynomial for (p, e) is the lexicographically smallest
monic irreducible of degree e over F_p (smallest when read as the code of
its non-leading coefficients).  This makes serialized instances portable
bit-for-bit across runs and machines; the polynomials for common (p, e)
are listed in the README.

All arithmetic is table-based (q <= 256, so tables are at most 64 KiB per
operation), which keeps the hot loops branch-free.  A FieldCtx is
immutable after construction and safe to share between workers.
"""

from __future__ import annotations

import numpy as np

__all__ = ["FieldCtx", "field_new", "field_from_order"]

_MAX_Q = 256


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _poly_from_code(code: int, p: int) -> list[int]:
    """Base-p digits, lowest degree first."""
    digits = []
    while code:
        digits.append(code % p)
        code //= p
    return digits


def _poly_mulmod(a: list[int], b: list[int], mod: list[int], p: int) -> list[int]:
    """Multiply two polynomials and reduce by the monic polynomial `mod`."""
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    # mod is monic of degree len(mod)-1
    deg_m = len(mod) - 1
    while len(prod) > deg_m:
        lead = prod[-1]
        if lead:
            shift = len(prod) - 1 - deg_m
            for i in range(deg_m):
                prod[shift + i] = (prod[shift + i] - lead * mod[i]) % p
        prod.pop()
    while prod and prod[-1] == 0:
        prod.pop()
    return prod


def _code_from_poly(poly: list[int], p: int) -> int:
    code = 0
    for c in reversed(poly):
        code = code * p + c
    return code


def _poly_divides(d: list[int], f: list[int], p: int) -> bool:
    """Whether polynomial d divides f over F_p (both lowest-first, d monic-izable)."""
    rem = list(f)
    lead_inv = pow(d[-1], p - 2, p)
    while len(rem) >= len(d) and any(rem):
        while rem and rem[-1] == 0:
            rem.pop()
        if len(rem) < len(d):
            break
        factor = rem[-1] * lead_inv % p
        shift = len(rem) - len(d)
        for i in range(len(d)):
            rem[shift + i] = (rem[shift + i] - factor * d[i]) % p
        rem.pop()
    return not any(rem)


def _find_irreducible(p: int, e: int) -> list[int]:
    """Lexicographically smallest monic irreducible of degree e over F_p.

    Candidates are ordered by the integer code of their low coefficients.
    Irreducibility is tested by trial division with every polynomial of
    degree 1..e//2 (fine at p^e <= 256).
    """
    if e == 1:
        return [0, 1]  # x
    for low_code in range(p ** e):
        cand = _poly_from_code(low_code, p)
        cand += [0] * (e - len(cand))
        cand.append(1)  # monic degree e
        if cand[0] == 0:
            continue  # divisible by x
        ok = True
        for d_deg in range(1, e // 2 + 1):
            for d_code in range(p ** d_deg, 2 * p ** d_deg):
                # monic divisor candidates of degree d_deg
                dd = _poly_from_code(d_code - p ** d_deg, p)
                dd += [0] * (d_deg - len(dd))
                dd.append(1)
                if _poly_divides(dd, cand, p):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return cand
    raise RuntimeError(f"no irreducible polynomial found for ({p},{e})")


class FieldCtx:
    """Arithmetic context for F_q, q = p^e <= 256.

    Scalars are plain ints in [0, q).  Vectorized variants (`add_arr`,
    `mul_arr`, `neg_arr`) accept numpy integer arrays of codes and are
    what the linear algebra layer uses.
    """

    def __init__(self, p: int, e: int):
        if not _is_prime(p):
            raise ValueError(f"p={p} is not prime")
        if e < 1:
            raise ValueError(f"extension degree must be >= 1, got {e}")
        q = p ** e
        if q > _MAX_Q:
            raise ValueError(f"field order {q} exceeds the table-based limit {_MAX_Q}")
        self.p = p
        self.e = e
        self.q = q
        self.char = p
        self.irreducible = _find_irreducible(p, e)

        if e == 1:
            codes = np.arange(q, dtype=np.int64)
            self.add_table = (codes[:, None] + codes[None, :]) % p
            self.mul_table = (codes[:, None] * codes[None, :]) % p
            self.neg_table = (-codes) % p
        else:
            mod = self.irreducible
            polys = [_poly_from_code(c, p) for c in range(q)]
            add = np.zeros((q, q), dtype=np.int64)
            mul = np.zeros((q, q), dtype=np.int64)
            for a in range(q):
                pa = polys[a]
                for b in range(q):
                    pb = polys[b]
                    n = max(len(pa), len(pb))
                    s = [( (pa[i] if i < len(pa) else 0) + (pb[i] if i < len(pb) else 0) ) % p for i in range(n)]
                    add[a, b] = _code_from_poly(s, p)
                    mul[a, b] = _code_from_poly(_poly_mulmod(pa, pb, mod, p), p)
            self.add_table = add
            self.mul_table = mul
            neg = np.zeros(q, dtype=np.int64)
            for a in range(q):
                pa = [(-c) % p for c in polys[a]]
                neg[a] = _code_from_poly(pa, p)
            self.neg_table = neg

        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            row = self.mul_table[a]
            hits = np.nonzero(row == 1)[0]
            if len(hits) != 1:
                raise RuntimeError(f"element {a} has {len(hits)} inverses in F_{q}")
            inv[a] = hits[0]
        self.inv_table = inv
        self.add_table.setflags(write=False)
        self.mul_table.setflags(write=False)
        self.neg_table.setflags(write=False)
        self.inv_table.setflags(write=False)

        # nonzero squares, used by the solver's determinant-invariant filter
        nz = np.arange(1, q)
        self.squares = np.unique(self.mul_table[nz, nz])
        self.is_square = np.zeros(q, dtype=bool)
        self.is_square[self.squares] = True

    # -- scalar ops ---------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def sub(self, a: int, b: int) -> int:
        return int(self.add_table[a, self.neg_table[b]])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no multiplicative inverse")
        return int(self.inv_table[a])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    # -- vectorized ops on code arrays --------------------------------------

    def add_arr(self, a, b):
        if self.e == 1:
            return (np.asarray(a) + np.asarray(b)) % self.p
        return self.add_table[np.asarray(a), np.asarray(b)]

    def sub_arr(self, a, b):
        if self.e == 1:
            return (np.asarray(a) - np.asarray(b)) % self.p
        return self.add_table[np.asarray(a), self.neg_table[np.asarray(b)]]

    def mul_arr(self, a, b):
        if self.e == 1:
            return (np.asarray(a) * np.asarray(b)) % self.p
        return self.mul_table[np.asarray(a), np.asarray(b)]

    def neg_arr(self, a):
        return self.neg_table[np.asarray(a)]

    def scale_arr(self, c: int, a):
        """c * a elementwise for a scalar code c."""
        if self.e == 1:
            return (c * np.asarray(a)) % self.p
        return self.mul_table[c, np.asarray(a)]

    # -- misc ----------------------------------------------------------------

    def elements(self) -> range:
        return range(self.q)

    def nonzero(self) -> range:
        return range(1, self.q)

    def code_of_int(self, n: int) -> int:
        """The field element 1+1+...+1 (n times), for embedding small integers."""
        c = 0
        for _ in range(n % self.p if self.e == 1 else n):
            c = self.add(c, 1)
        return c

    def __repr__(self):
        return f"FieldCtx(p={self.p}, e={self.e}, q={self.q})"

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and (self.p, self.e) == (other.p, other.e)

    def __hash__(self):
        return hash((self.p, self.e))


_CACHE: dict[tuple[int, int], FieldCtx] = {}


def field_new(p: int, e: int = 1) -> FieldCtx:
    """Context for F_{p^e}; cached, since contexts are immutable."""
    key = (p, e)
    if key not in _CACHE:
        _CACHE[key] = FieldCtx(p, e)
    return _CACHE[key]


def field_from_order(q: int) -> FieldCtx:
    """Context for F_q given the field order q = p^e."""
    if not 2 <= q <= _MAX_Q:
        raise ValueError(f"field order {q} out of supported range [2, {_MAX_Q}]")
    for p in range(2, q + 1):
        if _is_prime(p):
            e, pe = 1, p
            while pe < q:
                pe *= p
                e += 1
            if pe == q:
                return field_new(p, e)
            if p > q:
                break
    raise ValueError(f"field order {q} is not a prime power")

"""Line-oriented text serialization for instances and witnesses.

Format: a header line ``kind q n [d|m]`` followed by sparse entry lines,
then optional blank lines/comments (``#``).  Indices are 0-based.

* ``poly q n d``      — lines ``e_1 ... e_n : c`` (monomial exponents)
* ``trilinear q n``   — lines ``i j k : c`` (cubical tensor entries)
* ``algebra q n``     — same body as trilinear (structure constants,
  first index dual)
* ``tensor q n``      — same body (a plain cubical tensor, e.g. the
  reduction output)
* ``tuple q n m``     — lines ``i j k : c`` meaning (A_k)[i, j]
* ``matrix q n``      — lines ``i j : c`` (witness matrices)

Coefficients are field codes in [0, q).  ``parse(serialize(x)) == x``
bit-exactly; entries with zero coefficients are omitted and lines are
emitted in a fixed sorted order so files are diffable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gfq import FieldCtx, field_from_order
from .forms import Poly, poly_new
from .linalg import MatrixTuple

__all__ = ["Instance", "serialize", "parse", "load", "dump", "MalformedFile"]

KINDS = ("poly", "trilinear", "algebra", "tensor", "tuple", "matrix")


class MalformedFile(ValueError):
    """Raised on any structural problem in an instance file."""


@dataclass(frozen=True)
class Instance:
    """A parsed instance file: kind tag, field, and the payload object
    (Poly for "poly", ndarray for tensors/matrices, MatrixTuple for
    "tuple")."""

    kind: str
    ctx: FieldCtx
    payload: object

    @property
    def n(self) -> int:
        if self.kind == "poly":
            return self.payload.n
        if self.kind == "tuple":
            return self.payload.size
        return self.payload.shape[0]


def serialize(inst: Instance) -> str:
    """Render an instance as text."""
    kind, ctx, obj = inst.kind, inst.ctx, inst.payload
    lines: list[str] = []
    if kind == "poly":
        assert isinstance(obj, Poly)
        lines.append(f"poly {ctx.q} {obj.n} {obj.d}")
        for expo in sorted(obj.coeffs):
            c = obj.coeffs[expo]
            if c:
                lines.append(" ".join(map(str, expo)) + f" : {c}")
    elif kind in ("trilinear", "algebra", "tensor"):
        t = np.asarray(obj)
        lines.append(f"{kind} {ctx.q} {t.shape[0]}")
        for idx in sorted(zip(*np.nonzero(t))):
            lines.append(f"{idx[0]} {idx[1]} {idx[2]} : {t[idx]}")
    elif kind == "tuple":
        assert isinstance(obj, MatrixTuple)
        lines.append(f"tuple {ctx.q} {obj.size} {obj.m}")
        for k in range(obj.m):
            mat = obj.mats[k]
            for i, j in sorted(zip(*np.nonzero(mat))):
                lines.append(f"{i} {j} {k} : {mat[i, j]}")
    elif kind == "matrix":
        mat = np.asarray(obj)
        lines.append(f"matrix {ctx.q} {mat.shape[0]}")
        for i, j in sorted(zip(*np.nonzero(mat))):
            lines.append(f"{i} {j} : {mat[i, j]}")
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return "\n".join(lines) + "\n"


def _parse_header(line: str) -> tuple[str, list[int]]:
    parts = line.split()
    if not parts or parts[0] not in KINDS:
        raise MalformedFile(f"bad header line: {line!r}")
    try:
        nums = [int(x) for x in parts[1:]]
    except ValueError as exc:
        raise MalformedFile(f"bad header line: {line!r}") from exc
    return parts[0], nums


def _parse_entry(line: str, n_idx: int, ctx: FieldCtx) -> tuple[tuple[int, ...], int]:
    if ":" not in line:
        raise MalformedFile(f"bad entry line: {line!r}")
    left, _, right = line.partition(":")
    try:
        idx = tuple(int(x) for x in left.split())
        c = int(right.strip())
    except ValueError as exc:
        raise MalformedFile(f"bad entry line: {line!r}") from exc
    if len(idx) != n_idx:
        raise MalformedFile(f"expected {n_idx} indices: {line!r}")
    if not 0 <= c < ctx.q:
        raise MalformedFile(f"coefficient out of range: {line!r}")
    return idx, c


def parse(text: str) -> Instance:
    """Parse instance text; raises MalformedFile with a reason on error."""
    lines = [
        ln.strip()
        for ln in text.splitlines()
        if ln.strip() and not ln.strip().startswith("#")
    ]
    if not lines:
        raise MalformedFile("empty file")
    kind, nums = _parse_header(lines[0])
    body = lines[1:]
    expect = {"poly": 3, "trilinear": 2, "algebra": 2, "tensor": 2, "tuple": 3, "matrix": 2}
    if len(nums) != expect[kind]:
        raise MalformedFile(f"header needs {expect[kind]} numbers for {kind}")
    q, n = nums[0], nums[1]
    try:
        ctx = field_from_order(q)
    except ValueError as exc:
        raise MalformedFile(f"bad field order {q}") from exc
    if n < 1:
        raise MalformedFile(f"bad dimension {n}")

    if kind == "poly":
        d = nums[2]
        coeffs = {}
        for ln in body:
            expo, c = _parse_entry(ln, n, ctx)
            if any(e < 0 for e in expo) or sum(expo) > d:
                raise MalformedFile(f"exponents out of range: {ln!r}")
            if expo in coeffs:
                raise MalformedFile(f"duplicate monomial: {ln!r}")
            coeffs[expo] = c
        return Instance(kind, ctx, poly_new(n, d, coeffs, ctx))

    if kind in ("trilinear", "algebra", "tensor"):
        t = np.zeros((n, n, n), dtype=np.int64)
        seen = set()
        for ln in body:
            idx, c = _parse_entry(ln, 3, ctx)
            if not all(0 <= i < n for i in idx):
                raise MalformedFile(f"index out of range: {ln!r}")
            if idx in seen:
                raise MalformedFile(f"duplicate entry: {ln!r}")
            seen.add(idx)
            t[idx] = c
        return Instance(kind, ctx, t)

    if kind == "tuple":
        m = nums[2]
        if m < 1:
            raise MalformedFile(f"bad tuple length {m}")
        mats = np.zeros((m, n, n), dtype=np.int64)
        seen = set()
        for ln in body:
            (i, j, k), c = _parse_entry(ln, 3, ctx)
            if not (0 <= i < n and 0 <= j < n and 0 <= k < m):
                raise MalformedFile(f"index out of range: {ln!r}")
            if (i, j, k) in seen:
                raise MalformedFile(f"duplicate entry: {ln!r}")
            seen.add((i, j, k))
            mats[k, i, j] = c
        return Instance(kind, ctx, MatrixTuple("general", mats))

    # matrix
    mat = np.zeros((n, n), dtype=np.int64)
    seen = set()
    for ln in body:
        (i, j), c = _parse_entry(ln, 2, ctx)
        if not (0 <= i < n and 0 <= j < n):
            raise MalformedFile(f"index out of range: {ln!r}")
        if (i, j) in seen:
            raise MalformedFile(f"duplicate entry: {ln!r}")
        seen.add((i, j))
        mat[i, j] = c
    return Instance(kind, ctx, mat)


def load(path) -> Instance:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse(fh.read())
    except OSError as exc:
        raise MalformedFile(f"cannot read {path}: {exc}") from exc


def dump(inst: Instance, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(inst))

"""Text format: round trips for every kind, malformed-file rejection."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from formiso import forms, linalg, serialize, tensor3
from formiso.gfq import field_from_order
from formiso.linalg import MatrixTuple
from formiso.serialize import Instance, MalformedFile


def _round_trip(inst):
    return serialize.parse(serialize.serialize(inst))


def test_poly_round_trip():
    ctx = field_from_order(5)
    f = forms.random_poly(ctx, 3, 3, linalg.rng_for(1))
    got = _round_trip(Instance("poly", ctx, f))
    assert got.kind == "poly"
    assert got.ctx.q == 5
    assert got.payload == f


@pytest.mark.parametrize("kind", ["trilinear", "algebra", "tensor"])
def test_cubical_round_trip(kind):
    ctx = field_from_order(3)
    t = tensor3.random_tensor(ctx, (4, 4, 4), linalg.rng_for(2))
    got = _round_trip(Instance(kind, ctx, t))
    assert got.kind == kind
    assert np.array_equal(got.payload, t)


def test_tuple_round_trip():
    ctx = field_from_order(2)
    rng = linalg.rng_for(3)
    tup = MatrixTuple(
        "general", np.stack([linalg.random_matrix(ctx, 3, 3, rng) for _ in range(2)])
    )
    got = _round_trip(Instance("tuple", ctx, tup))
    assert got.kind == "tuple"
    assert np.array_equal(got.payload.mats, tup.mats)
    assert got.n == 3


def test_matrix_round_trip():
    ctx = field_from_order(7)
    m = linalg.random_matrix(ctx, 4, 4, linalg.rng_for(4))
    got = _round_trip(Instance("matrix", ctx, m))
    assert np.array_equal(got.payload, m)


@settings(max_examples=40, deadline=None)
@given(
    q=st.sampled_from([2, 3, 4, 5]),
    n=st.integers(2, 4),
    data=st.data(),
)
def test_tensor_round_trip_hypothesis(q, n, data):
    entries = data.draw(
        st.lists(
            st.tuples(
                st.integers(0, n - 1),
                st.integers(0, n - 1),
                st.integers(0, n - 1),
                st.integers(1, q - 1),
            ),
            max_size=10,
        )
    )
    ctx = field_from_order(q)
    t = np.zeros((n, n, n), dtype=np.int64)
    for i, j, k, c in entries:
        t[i, j, k] = c
    assert np.array_equal(_round_trip(Instance("tensor", ctx, t)).payload, t)


def test_comments_and_blank_lines_ignored():
    text = "# header comment\n\nmatrix 3 2\n# body comment\n0 1 : 2\n\n"
    inst = serialize.parse(text)
    assert inst.payload[0, 1] == 2


def test_zero_entries_omitted_and_sorted():
    ctx = field_from_order(3)
    t = np.zeros((2, 2, 2), dtype=np.int64)
    t[1, 0, 1] = 2
    t[0, 1, 0] = 1
    text = serialize.serialize(Instance("tensor", ctx, t))
    body = text.strip().splitlines()[1:]
    assert body == ["0 1 0 : 1", "1 0 1 : 2"]


@pytest.mark.parametrize(
    "text",
    [
        "",
        "# only a comment\n",
        "widget 3 2\n",
        "matrix three 2\n",
        "matrix 6 2\n",  # 6 is not a prime power
        "matrix 3 2 7\n",  # wrong header arity
        "poly 3 2\n",  # poly needs d
        "matrix 3 0\n",
        "matrix 3 2\n0 1 : 5\n",  # coefficient >= q
        "matrix 3 2\n0 3 : 1\n",  # index out of range
        "matrix 3 2\n0 1 : 1\n0 1 : 2\n",  # duplicate
        "matrix 3 2\n0 1 2\n",  # missing colon
        "matrix 3 2\n0 : 1\n",  # wrong index count
        "tensor 3 2\n0 0 2 : 1\n",
        "tuple 3 2 0\n",
        "tuple 3 2 1\n0 0 1 : 1\n",  # k out of range
        "poly 3 2 3\n1 3 : 1\n",  # total degree > d
        "poly 3 2 3\n-1 2 : 1\n",
        "poly 3 2 3\n1 1 : 1\n1 1 : 2\n",
    ],
)
def test_malformed_rejected(text):
    with pytest.raises(MalformedFile):
        serialize.parse(text)


def test_load_missing_file(tmp_path):
    with pytest.raises(MalformedFile):
        serialize.load(tmp_path / "missing.poly")


def test_dump_load(tmp_path):
    ctx = field_from_order(4)
    t = tensor3.random_tensor(ctx, (3, 3, 3), linalg.rng_for(5))
    path = tmp_path / "x.tensor"
    serialize.dump(Instance("tensor", ctx, t), path)
    got = serialize.load(path)
    assert np.array_equal(got.payload, t)


def test_serialize_unknown_kind():
    ctx = field_from_order(2)
    with pytest.raises(ValueError):
        serialize.serialize(Instance("widget", ctx, np.zeros((2, 2), dtype=np.int64)))

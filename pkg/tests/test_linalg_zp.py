import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncf4.linalg import _kernels_py
from ncf4.linalg.zp import (
    BACKENDS,
    ConfigError,
    SparseMatrix,
    SparseRow,
    branchfree_fix,
    mersenne_reduce,
    mersenne_reduce_array,
    normalize_row,
    rref_mod_p,
    rref_rows,
    staircase_sort,
)
from oracles import dense_rref_mod_p, random_dense

backends = pytest.mark.parametrize("backend", sorted(BACKENDS))
P31 = 2 ** 31 - 1


def rows_of(*firsts):
    return SparseMatrix(5, [SparseRow((c,), (1,)) if c is not None else SparseRow((), ()) for c in firsts])


def test_staircase_examples():
    assert staircase_sort(rows_of(3, 0, 2)) == [1, 2, 0]
    assert staircase_sort(rows_of(0, 1, 4)) == [0, 1, 2]
    assert staircase_sort(rows_of(None, None)) == [0, 1]
    assert staircase_sort(rows_of(None, 2, 2, 1)) == [3, 1, 2, 0]


def test_branchfree_fix_examples():
    assert branchfree_fix(-3, 7) == 46
    assert 46 % 7 == 4
    assert branchfree_fix(5, 7) == 5


@given(st.integers(-(P31 ** 2) + 1, 2 ** 62))
def test_branchfree_fix_property(v):
    y = branchfree_fix(v, P31)
    assert y >= 0
    assert (y - v) % P31 == 0


def test_mersenne_examples():
    assert mersenne_reduce(P31, 31) == 0
    assert mersenne_reduce(2 ** 32 + 3, 31) == 5


@pytest.mark.parametrize("b", [13, 17, 19, 31])
@given(data=st.data())
def test_mersenne_property(b, data):
    v = data.draw(st.integers(0, 2 ** (2 * b) - 1))
    assert mersenne_reduce(v, b) == v % (2 ** b - 1)


@backends
def test_mersenne_array(backend):
    edge = np.array([0, 1, P31 - 1, P31, P31 + 1, 2 ** 62 - 1, 2 ** 61], dtype=np.uint64)
    got = mersenne_reduce_array(edge, 31, backend)
    assert got.tolist() == [int(v) % P31 for v in edge]


def test_normalize_examples():
    assert normalize_row(SparseRow((0, 3), (3, 6)), 7) == SparseRow((0, 3), (1, 2))
    assert normalize_row(SparseRow((1, 2), (1, 5)), 7) == SparseRow((1, 2), (1, 5))
    assert normalize_row(SparseRow((4,), (6,)), 7) == SparseRow((4,), (1,))


def dense_out(matrix):
    return matrix.to_dense()


@backends
def test_identity_and_invertible(backend):
    eye = SparseMatrix.from_dense([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert dense_out(rref_mod_p(eye, 7, backend=backend)[0]) == eye.to_dense()
    m = SparseMatrix.from_dense([[1, 1], [1, 2]])
    assert dense_out(rref_mod_p(m, 7, backend=backend)[0]) == [[1, 0], [0, 1]]


@pytest.mark.parametrize("p", [1, 4, 2 ** 31, 2 ** 31 + 11])
def test_config_errors(p):
    with pytest.raises(ConfigError):
        rref_mod_p(SparseMatrix.from_dense([[1]]), p)


@backends
@pytest.mark.parametrize("p", [2, 7, 8191, 2147483629, P31])
def test_random_against_oracle(backend, p):
    rng = random.Random(p)
    for _ in range(40):
        dense = random_dense(rng, 25, 30, (0.05, 0.4), lambda r: r.randrange(1, p))
        got = rref_mod_p(SparseMatrix.from_dense(dense), p, backend=backend)[0]
        assert got.to_dense() == dense_rref_mod_p(dense, p)


@backends
def test_dense_worst_case_stays_in_range(backend, monkeypatch):
    # full rows of p-1 maximize the accumulator; CHECK_RANGE asserts it in the fallback
    monkeypatch.setattr(_kernels_py, "CHECK_RANGE", True)
    p = 2147483629
    rng = random.Random(3)
    dense = [[p - 1 if rng.random() < 0.9 else rng.randrange(p) for _ in range(30)] for _ in range(30)]
    got = rref_mod_p(SparseMatrix.from_dense(dense), p, backend=backend)[0]
    assert got.to_dense() == dense_rref_mod_p(dense, p)


@backends
@pytest.mark.parametrize("threads", [2, 4])
def test_threads_match_serial(backend, threads):
    rng = random.Random(threads)
    for _ in range(20):
        dense = random_dense(rng, 40, 40, (0.05, 0.2), lambda r: r.randrange(1, 7))
        m = SparseMatrix.from_dense(dense)
        assert rref_mod_p(m, 7, threads, backend=backend) == rref_mod_p(m, 7, 1, backend=backend)


@backends
def test_transform_reproduces_rref(backend):
    p = 101
    rng = random.Random(9)
    for _ in range(30):
        dense = random_dense(rng, 12, 10, (0.1, 0.5), lambda r: r.randrange(1, p))
        m = SparseMatrix.from_dense(dense, 10)
        rref, transforms = rref_mod_p(m, p, want_transform=True, backend=backend)
        nonzero = [r for r in rref.rows if r.cols]
        assert len(transforms) == len(nonzero)
        for row, (tc, tv) in zip(nonzero, transforms):
            acc = [0] * 10
            for i, t in zip(tc, tv):
                for j, v in enumerate(dense[i]):
                    acc[j] = (acc[j] + t * v) % p
            want = [0] * 10
            for c, v in zip(*row):
                want[c] = v
            assert acc == want


@backends
def test_vanished_rows_reported(backend):
    m = SparseMatrix.from_dense([[1, 2, 0], [2, 4, 0], [0, 0, 1]])
    rows, pivots, vanished = rref_rows(m, 7, backend=backend)
    assert pivots == [0, 2]
    assert vanished == [1]


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(0, 6), min_size=6, max_size=6), min_size=1, max_size=8))
def test_backends_agree(dense):
    m = SparseMatrix.from_dense(dense)
    results = {b: rref_mod_p(m, 7, backend=b) for b in BACKENDS}
    assert len({repr(r) for r in results.values()}) == 1
    assert results["python"][0].to_dense() == dense_rref_mod_p(dense, 7)

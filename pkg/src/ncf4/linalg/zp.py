"""Sparse reduced row echelon form over Z_p, p prime < 2^31.

The elimination itself runs in ``_kernels`` (compiled) when available and in
``_kernels_py`` otherwise.  Set ``NCF4_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from . import _kernels_py
from .primes import is_prime

try:
    if os.environ.get("NCF4_PURE_PYTHON"):
        raise ImportError("pure Python requested")
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

BACKENDS = {"python": _kernels_py}
if _compiled is not None:
    BACKENDS["cython"] = _compiled
BACKEND = "cython" if _compiled is not None else "python"


class ConfigError(ValueError):
    pass


class SparseRow(NamedTuple):
    cols: tuple
    vals: tuple


@dataclass
class SparseMatrix:
    ncols: int
    rows: list = field(default_factory=list)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence], ncols: int | None = None) -> "SparseMatrix":
        if ncols is None:
            ncols = len(dense[0]) if dense else 0
        rows = []
        for r in dense:
            nz = [(j, v) for j, v in enumerate(r) if v != 0]
            rows.append(SparseRow(tuple(j for j, _ in nz), tuple(v for _, v in nz)))
        return cls(ncols, rows)

    def to_dense(self) -> list[list]:
        out = []
        for cols, vals in self.rows:
            r = [0] * self.ncols
            for j, v in zip(cols, vals):
                r[j] = v
            out.append(r)
        return out


def check_prime(p: int) -> None:
    if not (2 <= p < 2**31) or not is_prime(p):
        raise ConfigError(f"modulus must be a prime below 2^31, got {p}")


def branchfree_fix(v: int, p: int) -> int:
    """Add p^2 to a negative accumulator using an arithmetic-shift mask."""
    return _kernels_py.branchfree_fix(v, p)


def mersenne_reduce(v: int, b: int) -> int:
    """``v mod (2^b - 1)`` for ``0 <= v < 2^(2b)`` by shifts, adds and a mask."""
    return _kernels_py.mersenne_reduce(v, b)


def mersenne_reduce_array(values, b: int, backend: str | None = None):
    """Vectorized ``mersenne_reduce`` over a uint64 array of values below ``2^(2b)``."""
    return BACKENDS[backend or BACKEND].mersenne_reduce_array(values, b)


def normalize_row(row: SparseRow, p: int) -> SparseRow:
    cols, vals = row
    if not cols:
        raise ValueError("cannot normalize a zero row")
    inv = pow(vals[0], -1, p)
    return SparseRow(tuple(cols), tuple(v * inv % p for v in vals))


def staircase_sort(matrix: SparseMatrix) -> list[int]:
    """Row permutation by ascending leading column, stable, zero rows last."""
    n = matrix.ncols
    return sorted(range(matrix.nrows), key=lambda i: matrix.rows[i].cols[0] if matrix.rows[i].cols else n)


def _reduced_rows(matrix: SparseMatrix, p: int):
    rows = []
    for cols, vals in matrix.rows:
        nz = [(j, v % p) for j, v in zip(cols, vals) if v % p]
        rows.append(([j for j, _ in nz], [v for _, v in nz]))
    return rows


def rref_rows(matrix: SparseMatrix, p: int, thread_count: int = 1, backend: str | None = None):
    """Low-level entry: returns ``(rref rows, pivot columns, input rows that vanished)``.

    Vanished rows are the ones that reduced to zero during the forward phase;
    the multi-modular tracer is built from them.
    """
    check_prime(p)
    kernel = BACKENDS[backend or BACKEND]
    rows = _reduced_rows(matrix, p)
    perm = staircase_sort(SparseMatrix(matrix.ncols, [SparseRow(tuple(c), ()) for c, _ in rows]))
    out, zero = kernel.rref([rows[i] for i in perm], matrix.ncols, p, max(1, thread_count))
    out = [SparseRow(tuple(c), tuple(v)) for c, v in out]
    return out, [r.cols[0] for r in out], sorted(perm[i] for i in zero)


def rref_mod_p(matrix: SparseMatrix, p: int, thread_count: int = 1, want_transform: bool = False,
               backend: str | None = None):
    """The reduced row echelon form of ``matrix`` over Z_p.

    Returns ``(rref, transforms)``.  ``rref`` has the input's shape, with zero
    rows at the bottom.  With ``want_transform`` each nonzero output row ``i``
    gets a sparse row ``transforms[i]`` over input row indices such that
    ``sum(t * input[j]) == rref[i]``; otherwise ``transforms`` is None.
    """
    m, n = matrix.nrows, matrix.ncols
    if want_transform:
        aug = SparseMatrix(n + m, [SparseRow(tuple(c) + (n + i,), tuple(v) + (1,))
                                   for i, (c, v) in enumerate(matrix.rows)])
        out, _, _ = rref_rows(aug, p, thread_count, backend)
        rows, transforms = [], []
        for cols, vals in out:
            if cols[0] >= n:
                continue
            split = next((k for k, c in enumerate(cols) if c >= n), len(cols))
            rows.append(SparseRow(cols[:split], vals[:split]))
            transforms.append(SparseRow(tuple(c - n for c in cols[split:]), vals[split:]))
    else:
        rows, _, _ = rref_rows(matrix, p, thread_count, backend)
        transforms = None
    rows += [SparseRow((), ())] * (m - len(rows))
    return SparseMatrix(n, rows), transforms

"""Pure-Python elimination kernel, used when the compiled extension is unavailable.

Same algorithm and same contract as ``_kernels.pyx``:

    rref(rows, ncols, p, nthreads) -> (reduced rows in ascending pivot order,
                                       positions of rows that vanished in the forward phase)

``rows`` is a list of ``(cols, vals)`` pairs in processing (staircase) order
with ascending columns and values in ``[1, p)``.
"""

from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .primes import mersenne_exponent

# set to True to assert the accumulator range on every update
CHECK_RANGE = False


def mersenne_reduce(v: int, b: int) -> int:
    p = (1 << b) - 1
    v1 = v + 1
    z = ((v1 >> b) + v1) >> b
    return (v + z) & p


def mersenne_reduce_array(values, b: int):
    v = np.ascontiguousarray(values, dtype=np.uint64)
    one, sh = np.uint64(1), np.uint64(b)
    v1 = v + one
    z = ((v1 >> sh) + v1) >> sh
    return (v + z) & np.uint64((1 << b) - 1)


def branchfree_fix(v: int, p: int) -> int:
    return v + ((v >> 63) & (p * p))


class PivotRegistry:
    """``slots[j]`` is the row owning the pivot of column ``j`` or -1."""

    def __init__(self, n: int):
        self.slots = [-1] * n
        self._lock = threading.Lock()

    def compare_and_swap(self, j: int, expected: int, new: int) -> bool:
        with self._lock:
            if self.slots[j] != expected:
                return False
            self.slots[j] = new
            return True


def _normalize(cols, vals, p):
    if vals[0] == 1:
        return list(cols), list(vals)
    inv = pow(vals[0], -1, p)
    return list(cols), [v * inv % p for v in vals]


class _Eliminator:
    def __init__(self, rows, n, p):
        self.rows = [(list(c), list(v)) for c, v in rows]
        self.n = n
        self.p = p
        self.pp = p * p
        b = mersenne_exponent(p)
        if b:
            self.reduce = lambda x: mersenne_reduce(x, b)
        else:
            self.reduce = lambda x: x % p
        self.registry = PivotRegistry(n)
        self.zero = [False] * len(rows)

    def _sweep(self, buf, start, stop_col, source):
        """Reduce ``buf`` against ``source`` pivot rows over columns ``[start, n)``."""
        slots = self.registry.slots
        rows = self.rows if source is None else source
        reduce, pp, n = self.reduce, self.pp, self.n
        for j in range(start, n):
            x = buf[j]
            if x == 0:
                continue
            x = reduce(x)
            if x == 0 or j == stop_col:
                buf[j] = x
                continue
            pr = slots[j]
            if pr < 0:
                buf[j] = x
                continue
            buf[j] = 0
            pc, pv = rows[pr]
            for k in range(1, len(pc)):
                c = pc[k]
                y = buf[c] - x * pv[k]
                y += (y >> 63) & pp
                if CHECK_RANGE:
                    assert 0 <= y < pp + self.p, (y, pp)
                buf[c] = y

    def _write_back(self, buf, start):
        cols, vals = [], []
        for j in range(start, self.n):
            x = buf[j]
            if x:
                cols.append(j)
                vals.append(x)
                buf[j] = 0
        return cols, vals

    def forward_row(self, r, buf):
        cols, vals = self.rows[r]
        if not cols:
            self.zero[r] = True
            return
        reg = self.registry
        lead = cols[0]
        if reg.slots[lead] == -1:
            self.rows[r] = _normalize(cols, vals, self.p)
            if reg.compare_and_swap(lead, -1, r):
                return
        start = lead
        while True:
            cols, vals = self.rows[r]
            for c, v in zip(cols, vals):
                buf[c] = v
            self._sweep(buf, start, -1, None)
            cols, vals = self._write_back(buf, start)
            if not cols:
                self.rows[r] = ([], [])
                self.zero[r] = True
                return
            self.rows[r] = _normalize(cols, vals, self.p)
            lead = cols[0]
            if reg.compare_and_swap(lead, -1, r):
                return
            # another worker registered this column first: keep reducing
            start = lead

    def backward_row(self, j, buf):
        r = self.registry.slots[j]
        cols, vals = self.rows[r]
        for c, v in zip(cols, vals):
            buf[c] = v
        self._sweep(buf, j, j, self.rows)
        return self._write_back(buf, j)


def rref(rows, ncols, p, nthreads=1):
    el = _Eliminator(rows, ncols, p)
    m = len(el.rows)
    if nthreads <= 1:
        buf = [0] * ncols
        for r in range(m):
            el.forward_row(r, buf)
        pivcols = [j for j, r in enumerate(el.registry.slots) if r >= 0]
        out = [el.backward_row(j, buf) for j in pivcols]
    else:
        local = threading.local()

        def buffer():
            if not hasattr(local, "buf"):
                local.buf = [0] * ncols
            return local.buf

        with ThreadPoolExecutor(max_workers=nthreads) as pool:
            list(pool.map(lambda r: el.forward_row(r, buffer()), range(m)))
            pivcols = [j for j, r in enumerate(el.registry.slots) if r >= 0]
            out = list(pool.map(lambda j: el.backward_row(j, buffer()), pivcols))
    zero = [r for r in range(m) if el.zero[r]]
    return out, zero

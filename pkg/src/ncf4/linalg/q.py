"""Multi-modular reduced row echelon form over Q.

The rational matrix is scaled row-wise to integers, eliminated modulo several
word-size primes, and lifted back by Chinese remaindering and rational
reconstruction.  A lift is accepted only when

    H(d*R) * H(A') * ncols < product of the primes used

which makes the result exact.  With the tracer enabled, rows that vanished
modulo the first prime are dropped for all later primes; this is correct
unless the first prime divides a denominator of the true result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .primes import descending_primes
from .zp import ConfigError, SparseMatrix, SparseRow, rref_rows

INITIAL_PRIMES = 2


def clear_denominators(matrix: SparseMatrix) -> tuple[SparseMatrix, list[int]]:
    """Scale each row by the LCM of its denominators; returns the scales too."""
    rows, scales = [], []
    for cols, vals in matrix.rows:
        d = 1
        for v in vals:
            d = math.lcm(d, Fraction(v).denominator)
        rows.append(SparseRow(tuple(cols), tuple(int(Fraction(v) * d) for v in vals)))
        scales.append(d)
    return SparseMatrix(matrix.ncols, rows), scales


def height(matrix: SparseMatrix) -> int:
    return max((abs(v) for _, vals in matrix.rows for v in vals), default=0)


def crt_combine(residues: Sequence[int], moduli: Sequence[int]) -> int:
    if len(set(moduli)) != len(moduli):
        raise ConfigError("duplicate moduli")
    x, m = 0, 1
    for r, p in zip(residues, moduli):
        # x' = x + m * t with x' = r (mod p)
        t = (r - x) * pow(m, -1, p) % p
        x += m * t
        m *= p
    return x


def rational_reconstruct(x: int, modulus: int) -> Fraction | None:
    """The fraction a/b with |a|, b <= sqrt(modulus/2) and a = x*b (mod modulus), if any."""
    bound = math.isqrt(modulus // 2)
    r0, r1 = modulus, x % modulus
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    a, b = (r1, s1) if s1 > 0 else (-r1, -s1)
    if math.gcd(a, b) != 1 or math.gcd(b, modulus) != 1:
        return None
    return Fraction(a, b)


def pivot_rank_key(pivots: Sequence[int]):
    """Sort key: more pivots is larger; at equal length, earlier pivot columns are larger."""
    return (len(pivots), tuple(-c for c in pivots))


@dataclass(frozen=True)
class Tracer:
    prime: int
    zero_rows: frozenset


def tracer_build(prime: int, zero_rows) -> Tracer:
    return Tracer(prime, frozenset(zero_rows))


def tracer_apply(tracer: Tracer, matrix: SparseMatrix) -> SparseMatrix:
    return SparseMatrix(matrix.ncols, [r for i, r in enumerate(matrix.rows) if i not in tracer.zero_rows])


def modular_rref(matrix: SparseMatrix, p: int, thread_count: int = 1):
    """One modular image: ``(rows, pivot columns, vanished rows)``.  Patched in tests."""
    return rref_rows(matrix, p, thread_count)


def crt_basis(moduli: Sequence[int]) -> tuple[list[int], int]:
    """Idempotents ``e_i`` (``e_i = 1 mod p_i``, ``0 mod p_j``) and the product of the moduli."""
    if len(set(moduli)) != len(moduli):
        raise ConfigError("duplicate moduli")
    modulus = math.prod(moduli)
    basis = []
    for p in moduli:
        rest = modulus // p
        basis.append(rest * pow(rest % p, -1, p))
    return basis, modulus


def _lift(images, primes):
    basis, modulus = crt_basis(primes)
    bound = math.isqrt(modulus // 2)
    lifted = []
    for i in range(len(images[0])):
        entries = {}
        for k, rows in enumerate(images):
            for c, v in zip(*rows[i]):
                entries.setdefault(c, [0] * len(primes))[k] = v
        cols, vals = [], []
        den = 1  # entries of one RREF row share a denominator, so try it first
        for c in sorted(entries):
            x = sum(r * e for r, e in zip(entries[c], basis)) % modulus
            if x == 0:
                continue
            y = x * den % modulus
            if y > modulus // 2:
                y -= modulus
            if den <= bound and abs(y) <= bound:
                q = Fraction(y, den)
            else:
                q = rational_reconstruct(x, modulus)
                if q is None:
                    return None
                den = math.lcm(den, q.denominator)
            cols.append(c)
            vals.append(q)
        lifted.append(SparseRow(tuple(cols), tuple(vals)))
    return lifted


def rref_multimodular(matrix: SparseMatrix, thread_count: int = 1, tracer: bool = True,
                      want_transform: bool = False, stats: dict | None = None):
    """Exact RREF of a rational sparse matrix.  Returns ``(rref, transforms)`` as ``rref_mod_p`` does."""
    m, n = matrix.nrows, matrix.ncols
    if want_transform:
        work = SparseMatrix(n + m, [SparseRow(tuple(c) + (n + i,), tuple(v) + (1,))
                                    for i, (c, v) in enumerate(matrix.rows)])
        tracer = False  # augmented rows never vanish
    else:
        work = matrix
    scaled, scales = clear_denominators(work)
    h_in = height(scaled)
    ncols = work.ncols

    primes_iter = descending_primes()
    primes: list[int] = []
    images: dict[int, tuple] = {}
    trace: Tracer | None = None
    target = INITIAL_PRIMES
    rounds = 0
    while True:
        rounds += 1
        while len(primes) < target:
            p = next(primes_iter)
            if any(s % p == 0 for s in scales):
                continue
            primes.append(p)
        for p in primes:
            if p in images:
                continue
            source = scaled if trace is None else tracer_apply(trace, scaled)
            rows, pivots, vanished = modular_rref(source, p, thread_count)
            if tracer and trace is None:
                trace = tracer_build(p, vanished)
            images[p] = (rows, tuple(pivots))
        best = max(pivot_rank_key(images[p][1]) for p in primes)
        good = [p for p in primes if pivot_rank_key(images[p][1]) == best]
        lifted = _lift([images[p][0] for p in good], good) if good else None
        if lifted is not None:
            d = 1
            for _, vals in lifted:
                for v in vals:
                    d = math.lcm(d, v.denominator)
            h_out = max((abs(v * d) for _, vals in lifted for v in vals), default=0)
            if h_out * h_in * ncols < math.prod(good):
                break
        target *= 2

    if stats is not None:
        stats.update(primes=list(primes), used=list(good), rounds=rounds,
                     traced=len(trace.zero_rows) if trace else 0)
    if want_transform:
        rows, transforms = [], []
        for cols, vals in lifted:
            if cols[0] >= n:
                continue
            split = next((k for k, c in enumerate(cols) if c >= n), len(cols))
            rows.append(SparseRow(cols[:split], vals[:split]))
            transforms.append(SparseRow(tuple(c - n for c in cols[split:]), vals[split:]))
    else:
        rows, transforms = list(lifted), None
    rows += [SparseRow((), ())] * (m - len(rows))
    return SparseMatrix(n, rows), transforms

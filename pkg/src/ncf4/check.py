"""Independent Groebner-basis checks on plain dict polynomials.

Nothing here touches the stores, the prefix tree or the F4 driver: overlaps
are found by brute-force placement of one word against another, and reduction
is the naive subword scan of :mod:`wordpoly`.
"""

from __future__ import annotations

from typing import Sequence

from . import wordpoly
from .arena import MonomialStore, PolynomialStore
from .f4 import GBConfig, GBResult, compute_gb


def placements(F: tuple, G: tuple, same: bool):
    """Offsets ``s`` such that G placed at s over F (F at 0) agrees on a nonempty overlap.

    Yields ``(s, W)`` with ``W`` the union word.
    """
    nf, ng = len(F), len(G)
    for s in range(-ng + 1, nf) if nf and ng else range(-ng, nf + 1):
        if same and s == 0:
            continue
        lo, hi = max(0, s), min(nf, s + ng)
        if F and G and lo >= hi:
            continue
        if all(F[k] == G[k - s] for k in range(lo, hi)):
            start = min(0, s)
            end = max(nf, s + ng)
            W = tuple(F[k] if 0 <= k < nf else G[k - s] for k in range(start, end))
            yield s, W


def spoly(f: dict, g: dict, s: int, key, field) -> dict:
    """S-polynomial of the placement of lm(g) at offset ``s`` against lm(f)."""
    F, G = wordpoly.leading(f, key), wordpoly.leading(g, key)
    W = dict(placements(F, G, False))[s]
    off = -min(0, s)
    lf, rf = W[:off], W[off + len(F):]
    lg, rg = W[:off + s], W[off + s + len(G):]
    return wordpoly.combine([(field.inv(f[F]), lf, f, rf),
                             (field.neg(field.inv(g[G])), lg, g, rg)], field)


def diamond_violations(basis: Sequence[dict], key, field, degree_bound: int | None = None) -> list:
    """Overlaps (of degree <= bound) whose S-polynomial does not reduce to zero."""
    bad = []
    lms = [wordpoly.leading(g, key) for g in basis]
    for i, f in enumerate(basis):
        for j, g in enumerate(basis):
            for s, W in placements(lms[i], lms[j], i == j):
                if degree_bound is not None and len(W) > degree_bound:
                    continue
                r = wordpoly.normal_form(spoly(f, g, s, key, field), basis, key, field)
                if r:
                    bad.append((i, j, s, W))
    return bad


def members(polys: Sequence[dict], basis: Sequence[dict], key, field) -> bool:
    """Whether every polynomial reduces to zero by ``basis``."""
    return all(not wordpoly.normal_form(p, basis, key, field) for p in polys)


def solve(problem, config: GBConfig | None = None) -> tuple[list[dict], GBResult]:
    """Run F4 on a parsed problem; returns the basis as dicts alongside the raw result."""
    monos = MonomialStore(len(problem.varnames), problem.ordering.key)
    polys = PolynomialStore(monos, problem.field)
    inputs = [polys.intern([(c, monos.intern(w)) for w, c in p.items()]) for p in problem.polys]
    result = compute_gb(polys, inputs, config)
    basis = [{monos.word(m): c for c, m in polys.terms(g)} for g in result.basis]
    return basis, result

"""Plain dict polynomials ``{word tuple: coeff}`` over a field.

Deliberately independent of the stores, the prefix tree and the F4 driver so
that certificate checks and Groebner-basis checks cross-validate them.
"""

from __future__ import annotations

from typing import Iterable, Sequence


def add_term(poly: dict, word: tuple, c, field) -> None:
    if c == 0:
        return
    v = field.add(poly.get(word, field.zero), c)
    if v == 0:
        poly.pop(word, None)
    else:
        poly[word] = v


def combine(terms: Iterable[tuple], field) -> dict:
    """Sum of ``coeff * left * poly * right`` over ``(coeff, left, poly, right)``."""
    out: dict = {}
    for c, left, poly, right in terms:
        for w, v in poly.items():
            add_term(out, tuple(left) + w + tuple(right), field.mul(c, v), field)
    return out


def sub(p: dict, q: dict, field) -> dict:
    out = dict(p)
    for w, v in q.items():
        add_term(out, w, field.neg(v), field)
    return out


def leading(poly: dict, key) -> tuple:
    return max(poly, key=key)


def find_subword(word: Sequence, sub_: Sequence) -> int:
    """First position of ``sub_`` inside ``word`` or -1 (naive scan)."""
    n, k = len(word), len(sub_)
    for i in range(n - k + 1):
        if tuple(word[i:i + k]) == tuple(sub_):
            return i
    return -1


def normal_form(poly: dict, basis: Sequence[dict], key, field) -> dict:
    """Full reduction of ``poly`` by ``basis`` using a naive subword scan."""
    heads = []
    for g in basis:
        lm = leading(g, key)
        heads.append((lm, g, field.inv(g[lm])))
    poly = dict(poly)
    rest: dict = {}
    while poly:
        m = leading(poly, key)
        c = poly[m]
        for lm, g, inv in heads:
            pos = find_subword(m, lm)
            if pos >= 0:
                left, right = m[:pos], m[pos + len(lm):]
                factor = field.mul(c, inv)
                for w, v in g.items():
                    add_term(poly, left + w + right, field.neg(field.mul(factor, v)), field)
                break
        else:
            rest[m] = c
            del poly[m]
    return rest

"""Cofactor certificates ``g_i = sum(c * left * src * right)`` and their verification.

A source is ``("f", j)`` for the j-th input polynomial or ``("g", k)`` for the
k-th basis element (both 1-based).  Incremental certificates may cite earlier
basis elements; full certificates cite inputs only.

Text format, one line per basis element::

    g2 := 1 * x*y * g1 * 1 - 1 * 1 * g1 * y*x + 1 * 1 * g1 * y

Structural separators are `` * `` (with spaces); words use ``*`` without spaces.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import wordpoly
from .io import ParseError, format_coeff, format_word, parse_poly


class CertificateError(ValueError):
    pass


@dataclass
class Certificate:
    index: int
    terms: list = field(default_factory=list)  # (coeff, left, source, right)

    @property
    def is_full(self) -> bool:
        return all(src[0] == "f" for _, _, src, _ in self.terms)


def simplify(terms, fld) -> list:
    """Merge terms with equal ``(left, source, right)`` and drop zeros; keeps first-seen order."""
    acc: dict = {}
    for c, left, src, right in terms:
        k = (tuple(left), src, tuple(right))
        acc[k] = fld.add(acc.get(k, fld.zero), c)
    return [(c, l, s, r) for (l, s, r), c in acc.items() if c != 0]


def input_certificate(index: int, input_no: int, lc, fld) -> Certificate:
    """The monic copy ``g_index = (1/lc) * f_input_no`` of an input."""
    return Certificate(index, [(fld.inv(lc), (), ("f", input_no), ())])


def expand_to_input(cert: Certificate, expanded: dict[int, Certificate], fld) -> Certificate:
    """Substitute every ``g_k`` source by its (already full) certificate."""
    terms = []
    for c, left, src, right in cert.terms:
        if src[0] == "f":
            terms.append((c, left, src, right))
            continue
        sub = expanded.get(src[1])
        if sub is None or src[1] >= cert.index:
            raise CertificateError(f"g{cert.index} cites g{src[1]} which has no earlier full certificate")
        for c2, l2, s2, r2 in sub.terms:
            terms.append((fld.mul(c, c2), tuple(left) + tuple(l2), s2, tuple(r2) + tuple(right)))
    return Certificate(cert.index, simplify(terms, fld))


def expand(cert: Certificate, inputs: Sequence[dict], basis: Sequence[dict], fld) -> dict:
    """Exact polynomial ``sum(c * left * src * right)``."""
    parts = []
    for c, left, (kind, k), right in cert.terms:
        if kind == "f":
            pool = inputs
        elif kind == "g":
            pool = basis
            if k >= cert.index:
                raise CertificateError(f"g{cert.index} cites g{k}, which is not earlier")
        else:
            raise CertificateError(f"unknown source kind {kind!r}")
        if not (1 <= k <= len(pool)):
            raise CertificateError(f"dangling reference {kind}{k}")
        parts.append((c, left, pool[k - 1], right))
    return wordpoly.combine(parts, fld)


def verify(cert: Certificate, inputs: Sequence[dict], basis: Sequence[dict], fld) -> bool:
    if not (1 <= cert.index <= len(basis)):
        raise CertificateError(f"dangling target g{cert.index}")
    return expand(cert, inputs, basis, fld) == basis[cert.index - 1]


def format_certificate(cert: Certificate, varnames: Sequence[str], fld) -> str:
    parts = []
    for k, (c, left, (kind, idx), right) in enumerate(cert.terms):
        c = fld.signed(c)
        body = f"{format_coeff(abs(c))} * {format_word(left, varnames)} * {kind}{idx} * {format_word(right, varnames)}"
        if k == 0:
            parts.append(f"-{body}" if c < 0 else body)
        else:
            parts.append(f"- {body}" if c < 0 else f"+ {body}")
    return f"g{cert.index} := " + (" ".join(parts) if parts else "0")


_HEAD_RE = re.compile(r"\s*g(\d+)\s*:=\s*(.*)\Z")
_SRC_RE = re.compile(r"([fg])(\d+)\Z")


def parse_certificate(line: str, varnames: Sequence[str], fld, lineno: int | None = None) -> Certificate:
    m = _HEAD_RE.match(line)
    if not m:
        raise ParseError(lineno, "expected 'g<i> := ...'")
    index, body = int(m.group(1)), m.group(2).strip()
    cert = Certificate(index)
    if body == "0":
        return cert
    names = {v: i + 1 for i, v in enumerate(varnames)}
    chunks = re.split(r" ([+-]) ", body)
    signs = ["+"] + chunks[1::2]
    for sign, chunk in zip(signs, chunks[0::2]):
        if chunk.startswith("-"):
            sign = "-" if sign == "+" else "+"
            chunk = chunk[1:]
        pieces = chunk.split(" * ")
        if len(pieces) != 4:
            raise ParseError(lineno, f"malformed certificate term {chunk!r}")
        coeff_s, left_s, src_s, right_s = (p.strip() for p in pieces)
        src = _SRC_RE.match(src_s)
        if not src:
            raise ParseError(lineno, f"malformed source {src_s!r}")
        try:
            c = Fraction(coeff_s)
        except ValueError:
            raise ParseError(lineno, f"malformed coefficient {coeff_s!r}") from None
        c = fld(-c if sign == "-" else c)
        left = _parse_word(left_s, names, fld, lineno)
        right = _parse_word(right_s, names, fld, lineno)
        cert.terms.append((c, left, (src.group(1), int(src.group(2))), right))
    return cert


def _parse_word(text: str, names, fld, lineno) -> tuple:
    poly = parse_poly(text, names, fld, lineno)
    if len(poly) != 1 or next(iter(poly.values())) != fld.one:
        raise ParseError(lineno, f"expected a word, got {text!r}")
    return next(iter(poly))

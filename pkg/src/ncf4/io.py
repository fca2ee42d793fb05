"""Problem-file parsing and polynomial printing.

Grammar (line oriented, ``#`` starts a comment)::

    vars x y z              # declaration order = ascending precedence
    order deglex            # or: order blocks 1 1 2  (block per variable, block 1 first)
    char 0                  # 0 for Q, or a prime < 2^31
    poly x*y*x - x*y        # coeff = int, or int/int when char 0; `1` is the empty word
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .field import FieldError, make_field
from .order import Ordering

NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|(.))")


class ParseError(ValueError):
    def __init__(self, line: int | None, message: str):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}" if line else message)


@dataclass
class Problem:
    varnames: list[str]
    ordering: Ordering
    characteristic: int
    polys: list[dict] = field(default_factory=list)

    @property
    def field(self):
        return make_field(self.characteristic)


def _tokens(text: str, lineno: int):
    out = []
    for num, name, other in TOKEN_RE.findall(text):
        if num:
            out.append(("num", int(num)))
        elif name:
            out.append(("name", name))
        elif other.strip():
            if other not in "+-*/^":
                raise ParseError(lineno, f"unexpected character {other!r}")
            out.append(("op", other))
    return out


def parse_poly(text: str, names: dict[str, int], fld, lineno: int | None = None) -> dict:
    """Parse one polynomial expression into ``{word: coeff}``."""
    toks = _tokens(text, lineno)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else (None, None)

    def take(kind=None, value=None):
        nonlocal pos
        tok = peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind or "token"
            raise ParseError(lineno, f"expected {want}, got {tok[1]!r}" if tok[0] else f"expected {want} at end of line")
        pos += 1
        return tok[1]

    poly: dict = {}
    if not toks:
        raise ParseError(lineno, "empty polynomial")
    sign = 1
    if peek() in (("op", "+"), ("op", "-")):
        sign = -1 if take() == "-" else 1
    while True:
        coeff = Fraction(1)
        word: list[int] = []
        first = True
        while True:
            kind, val = peek()
            if kind == "num":
                take()
                if first:
                    coeff = Fraction(val)
                    if peek() == ("op", "/"):
                        take()
                        if fld.characteristic != 0:
                            raise ParseError(lineno, "fractional coefficient needs char 0")
                        den = take("num")
                        if den == 0:
                            raise ParseError(lineno, "zero denominator")
                        coeff = Fraction(val, den)
                elif val != 1:
                    raise ParseError(lineno, f"malformed coefficient {val} inside a term")
            elif kind == "name":
                take()
                if val not in names:
                    raise ParseError(lineno, f"unknown variable {val!r}")
                exp = 1
                if peek() == ("op", "^"):
                    take()
                    exp = take("num")
                    if exp < 1:
                        raise ParseError(lineno, "exponent must be positive")
                word.extend([names[val]] * exp)
            else:
                raise ParseError(lineno, f"expected a factor, got {val!r}" if kind else "expected a factor")
            first = False
            if peek() == ("op", "*"):
                take()
                continue
            break
        try:
            c = fld(coeff * sign)
        except FieldError as exc:
            raise ParseError(lineno, str(exc)) from None
        if c == 0:
            raise ParseError(lineno, f"zero coefficient in term {format_word(word, list(names))}")
        w = tuple(word)
        if w in poly:
            raise ParseError(lineno, f"duplicate monomial {format_word(w, list(names))}")
        poly[w] = c
        kind, val = peek()
        if kind is None:
            return poly
        if (kind, val) not in (("op", "+"), ("op", "-")):
            raise ParseError(lineno, f"unexpected {val!r}")
        sign = -1 if take() == "-" else 1


def parse_problem(text: str) -> Problem:
    varnames: list[str] | None = None
    order_spec = None
    characteristic = None
    poly_lines: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "vars":
            if varnames is not None:
                raise ParseError(lineno, "variables declared twice")
            varnames = rest.split()
            if not varnames:
                raise ParseError(lineno, "no variables declared")
            for v in varnames:
                if not NAME_RE.match(v):
                    raise ParseError(lineno, f"invalid variable name {v!r}")
            if len(set(varnames)) != len(varnames):
                raise ParseError(lineno, "duplicate variable name")
        elif head == "order":
            order_spec = (lineno, rest.split())
        elif head == "char":
            try:
                characteristic = int(rest)
                make_field(characteristic)
            except (ValueError, FieldError):
                raise ParseError(lineno, f"characteristic must be 0 or a prime < 2^31, got {rest!r}") from None
        elif head == "poly":
            poly_lines.append((lineno, rest))
        else:
            raise ParseError(lineno, f"unknown directive {head!r}")
    if varnames is None:
        raise ParseError(None, "missing 'vars' line")
    ordering = Ordering.deglex(len(varnames))
    if order_spec is not None:
        lineno, parts = order_spec
        if parts == ["deglex"]:
            pass
        elif parts and parts[0] == "blocks":
            blocks = parts[1:]
            if len(blocks) != len(varnames) or not all(b.isdigit() and int(b) >= 1 for b in blocks):
                raise ParseError(lineno, "'order blocks' needs one positive integer block per variable")
            ordering = Ordering.blocks([int(b) for b in blocks])
        else:
            raise ParseError(lineno, f"unsupported ordering {' '.join(parts)!r}")
    if characteristic is None:
        characteristic = 0
    fld = make_field(characteristic)
    names = {v: i + 1 for i, v in enumerate(varnames)}
    polys = [parse_poly(text_, names, fld, lineno) for lineno, text_ in poly_lines]
    return Problem(varnames, ordering, characteristic, polys)


def format_word(word: Sequence[int], varnames: Sequence[str]) -> str:
    if not word:
        return "1"
    parts = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        name = varnames[word[i] - 1]
        parts.append(name if j - i == 1 else f"{name}^{j - i}")
        i = j
    return "*".join(parts)


def format_coeff(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(terms: Sequence[tuple], varnames: Sequence[str], fld) -> str:
    """``terms`` is ``[(coeff, word), ...]`` in the order to print."""
    if not terms:
        return "0"
    out = []
    for k, (c, word) in enumerate(terms):
        c = fld.signed(c)
        neg = c < 0
        mag = -c if neg else c
        w = format_word(word, varnames)
        if not word:
            body = format_coeff(mag)
        elif mag == 1:
            body = w
        else:
            body = f"{format_coeff(mag)}*{w}"
        if k == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(out)

"""Append-only interning stores for monomials, polynomials and coefficient sequences.

Every element gets a stable integer handle on commit.  Monomial products are
assembled in a scratch region at the tip of the monomial buffer and are only
committed when the dedup lookup misses; otherwise the scratch is truncated.
"""

from __future__ import annotations

from array import array
from typing import Callable, Iterable, Sequence


class StoreError(ValueError):
    pass


class MonomialStore:
    """Words over variable ids ``1..nvars`` in one flat ``array('I')``.

    ``key`` maps a word (tuple of ids) to a sort key that realizes the active
    monomial ordering; it is evaluated once per committed word.
    """

    def __init__(self, nvars: int, key: Callable[[tuple], object] | None = None):
        self.nvars = nvars
        self._key_fn = key if key is not None else (lambda w: (len(w), w))
        self._data = array("I")
        self._offsets = [0]
        self._index: dict[bytes, int] = {}
        self._words: list[tuple] = []
        self._keys: list = []
        self.one = self.intern(())

    def __len__(self):
        return len(self._words)

    def _commit_tip(self, start: int) -> int:
        # scratch occupies _data[start:]; commit it or truncate it
        raw = self._data[start:].tobytes()
        hit = self._index.get(raw)
        if hit is not None:
            del self._data[start:]
            return hit
        idx = len(self._words)
        self._index[raw] = idx
        self._offsets.append(len(self._data))
        word = tuple(self._data[start:])
        self._words.append(word)
        self._keys.append(self._key_fn(word))
        return idx

    def intern(self, word: Iterable[int]) -> int:
        word = tuple(word)
        for v in word:
            if not (1 <= v <= self.nvars):
                raise StoreError(f"undeclared variable id {v}")
        start = len(self._data)
        self._data.extend(word)
        return self._commit_tip(start)

    def lookup(self, word: Sequence[int]) -> int | None:
        return self._index.get(array("I", word).tobytes())

    def multiply(self, *factors: int) -> int:
        """Index of the concatenation of the given monomials."""
        nonunit = [m for m in factors if m != self.one]
        if len(nonunit) <= 1:
            return nonunit[0] if nonunit else self.one
        start = len(self._data)
        offs = self._offsets
        for m in nonunit:
            self._data.extend(self._data[offs[m]:offs[m + 1]])
        return self._commit_tip(start)

    def word(self, m: int) -> tuple:
        return self._words[m]

    def length(self, m: int) -> int:
        return self._offsets[m + 1] - self._offsets[m]

    def key(self, m: int):
        return self._keys[m]

    def raw_size(self) -> int:
        """Number of committed letters in the backing buffer."""
        return len(self._data)


class CoefficientPool:
    """Deduplicated coefficient sequences.  Handles index committed sequences."""

    def __init__(self):
        self._seqs: list[tuple] = []
        self._index: dict[tuple, int] = {}

    def __len__(self):
        return len(self._seqs)

    def intern(self, coeffs: Sequence) -> int:
        coeffs = tuple(coeffs)
        hit = self._index.get(coeffs)
        if hit is not None:
            return hit
        h = len(self._seqs)
        self._seqs.append(coeffs)
        self._index[coeffs] = h
        return h

    def get(self, handle: int) -> tuple:
        return self._seqs[handle]


class PolynomialStore:
    """Polynomials as descending monomial-index lists plus a coefficient handle."""

    def __init__(self, monomials: MonomialStore, field):
        self.monomials = monomials
        self.field = field
        self.pool = CoefficientPool()
        self._mons = array("q")
        self._offsets = [0]
        self._handles: list[int] = []
        self._index: dict[tuple[int, bytes], int] = {}

    def __len__(self):
        return len(self._handles)

    def _commit_tip(self, start: int, handle: int) -> int:
        lookup = (handle, self._mons[start:].tobytes())
        hit = self._index.get(lookup)
        if hit is not None:
            del self._mons[start:]
            return hit
        idx = len(self._handles)
        self._index[lookup] = idx
        self._offsets.append(len(self._mons))
        self._handles.append(handle)
        return idx

    def intern(self, terms: Iterable[tuple]) -> int:
        """Intern ``[(coeff, monomial index), ...]``; terms need not be sorted."""
        terms = list(terms)
        seen = set()
        for c, m in terms:
            if m in seen:
                raise StoreError(f"duplicate monomial {self.monomials.word(m)}")
            seen.add(m)
            if c == 0:
                raise StoreError("zero coefficient")
        key = self.monomials.key
        terms.sort(key=lambda t: key(t[1]), reverse=True)
        handle = self.pool.intern([c for c, _ in terms])
        start = len(self._mons)
        self._mons.extend(m for _, m in terms)
        return self._commit_tip(start, handle)

    def intern_sorted(self, mons: Sequence[int], coeffs: Sequence) -> int:
        """Intern terms already in strictly descending order with nonzero coefficients."""
        handle = self.pool.intern(coeffs)
        start = len(self._mons)
        self._mons.extend(mons)
        return self._commit_tip(start, handle)

    def multiple(self, f: int, left: int, right: int) -> int:
        """``left * f * right``; shares ``f``'s coefficient sequence."""
        ms = self.monomials
        if left == ms.one and right == ms.one:
            return f
        o, e = self._offsets[f], self._offsets[f + 1]
        start = len(self._mons)
        mul = ms.multiply
        self._mons.extend([mul(left, m, right) for m in self._mons[o:e]])
        return self._commit_tip(start, self._handles[f])

    def monic(self, f: int) -> int:
        coeffs = self.coeffs(f)
        if not coeffs or coeffs[0] == self.field.one:
            return f
        inv = self.field.inv(coeffs[0])
        mul = self.field.mul
        return self.intern_sorted(self.monomials_of(f), [mul(c, inv) for c in coeffs])

    def monomials_of(self, f: int) -> tuple:
        return tuple(self._mons[self._offsets[f]:self._offsets[f + 1]])

    def coeffs(self, f: int) -> tuple:
        return self.pool.get(self._handles[f])

    def handle(self, f: int) -> int:
        return self._handles[f]

    def terms(self, f: int) -> list[tuple]:
        return list(zip(self.coeffs(f), self.monomials_of(f)))

    def length(self, f: int) -> int:
        return self._offsets[f + 1] - self._offsets[f]

    def lm(self, f: int) -> int:
        if self._offsets[f + 1] == self._offsets[f]:
            raise StoreError("leading monomial of the zero polynomial")
        return self._mons[self._offsets[f]]

    def lc(self, f: int):
        if self._offsets[f + 1] == self._offsets[f]:
            raise StoreError("leading coefficient of the zero polynomial")
        return self.pool.get(self._handles[f])[0]

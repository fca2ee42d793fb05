"""Weighted block orderings with unit weight vectors (deglex and elimination orders)."""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Sequence


class Cmp(IntEnum):
    LT = -1
    EQ = 0
    GT = 1


@dataclass(frozen=True)
class Ordering:
    """``block_of[i]`` is the block (1-based) of variable id ``i + 1``.

    Blocks are compared first by letter counts, block 1 first; ties are broken
    by left-to-right comparison of the id sequences (smaller id is smaller).
    """

    block_of: tuple[int, ...]

    def __post_init__(self):
        if not self.block_of:
            raise ValueError("ordering needs at least one variable")
        if any(b < 1 for b in self.block_of):
            raise ValueError("block indices are 1-based")

    @classmethod
    def deglex(cls, nvars: int) -> "Ordering":
        return cls((1,) * nvars)

    @classmethod
    def blocks(cls, block_of: Sequence[int]) -> "Ordering":
        return cls(tuple(int(b) for b in block_of))

    @property
    def nvars(self) -> int:
        return len(self.block_of)

    @property
    def block_count(self) -> int:
        return max(self.block_of)

    @property
    def is_deglex(self) -> bool:
        return self.block_count == 1

    def weight(self, word: Sequence[int]) -> tuple[int, ...]:
        counts = [0] * self.block_count
        for v in word:
            counts[self.block_of[v - 1] - 1] += 1
        return tuple(counts)

    def key(self, word: Sequence[int]):
        """Sort key; Python tuple comparison on it realizes the ordering."""
        word = tuple(word)
        if self.block_count == 1:
            return (len(word), word)
        return (self.weight(word), word)

    def compare(self, u: Sequence[int], v: Sequence[int]) -> Cmp:
        ku, kv = self.key(u), self.key(v)
        if ku < kv:
            return Cmp.LT
        if ku > kv:
            return Cmp.GT
        return Cmp.EQ


def multiplicativity_check(ordering: Ordering, a, v, w, b) -> bool:
    """Whether ``compare(v, w) == compare(avb, awb)`` (translation invariance)."""
    a, v, w, b = (tuple(x) for x in (a, v, w, b))
    return ordering.compare(v, w) == ordering.compare(a + v + b, a + w + b)

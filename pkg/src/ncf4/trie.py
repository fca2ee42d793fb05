"""Prefix tree over the leading monomials of the current basis.

Subword divisibility is answered by starting a root descent at every
position of the query word.  Nodes live in flat lists and are never removed.
"""

from __future__ import annotations

from typing import Iterator, Sequence


class PrefixTree:
    def __init__(self):
        self._child: dict[tuple[int, int], int] = {}
        self._label = [0]
        self._parent = [-1]
        self._terminal: dict[int, list[int]] = {}
        self.visits = 0

    def __len__(self):
        """Number of nodes, root included."""
        return len(self._label)

    def insert(self, word: Sequence[int], basis_index: int) -> None:
        node = 0
        for v in word:
            nxt = self._child.get((node, v))
            if nxt is None:
                nxt = len(self._label)
                self._label.append(v)
                self._parent.append(node)
                self._child[(node, v)] = nxt
            node = nxt
        marks = self._terminal.setdefault(node, [])
        if basis_index not in marks:
            marks.append(basis_index)

    def contains(self, word: Sequence[int]) -> bool:
        node = 0
        for v in word:
            node = self._child.get((node, v))
            if node is None:
                return False
        return node in self._terminal

    def _matches_at(self, word: Sequence[int], start: int) -> Iterator[tuple[int, list[int]]]:
        # yields (length, basis indices) for every inserted word that is a prefix of word[start:]
        child, terminal = self._child, self._terminal
        node = 0
        if 0 in terminal:
            yield 0, terminal[0]
        for pos in range(start, len(word)):
            self.visits += 1
            node = child.get((node, word[pos]))
            if node is None:
                return
            marks = terminal.get(node)
            if marks is not None:
                yield pos - start + 1, marks

    def find_divisor(self, word: Sequence[int]) -> tuple[int, int] | None:
        """Leftmost, then shortest, then smallest-index divisor as ``(basis_index, position)``."""
        for start in range(len(word) or 1):
            for _length, marks in self._matches_at(word, start):
                return min(marks), start
        return None

    def find_all_divisors(self, word: Sequence[int]) -> list[tuple[int, int]]:
        out = []
        for start in range(len(word) or 1):
            for _length, marks in self._matches_at(word, start):
                out.extend((b, start) for b in sorted(marks))
        return out

    def words(self) -> list[tuple[int, ...]]:
        """Spell out every root-to-terminal path."""
        out = []
        for node in sorted(self._terminal):
            w = []
            while node != 0:
                w.append(self._label[node])
                node = self._parent[node]
            out.append(tuple(reversed(w)))
        return out

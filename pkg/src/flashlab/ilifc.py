"""First-stage Index-less Indexed Flash Code.

Each sub-block of ``k`` cells stores one information bit: the position where
the cell levels start rising names the bit, and the weight parity holds its
value. Sub-blocks keep their index until the block is erased.
"""

from __future__ import annotations

from typing import Optional, Sequence

from flashlab.codec import FlashCode, InfoVector
from flashlab.model import Cells, Status, index_ilifc, parity, status


def write_new(i: int, x: Sequence[int]) -> Cells:
    if any(x):
        raise ValueError(f"write_new needs an empty sub-block, got {tuple(x)}")
    y = [0] * len(x)
    y[i - 1] = 1
    return tuple(y)


def write_step(x: Sequence[int], i: int, q: int) -> Cells:
    """Raise one cell of a sub-block holding index ``i``.

    Relative to the index cell, positions 0..k-2 are raised one level pass at
    a time (a staircase), while the last position k-1 stays at 0 so the
    cyclic difference at the index cell stays the unique maximum. Once
    positions 0..k-2 reach ``q - 1`` the last position is filled.
    """
    k = len(x)
    pos = [(i - 1 + p) % k for p in range(k)]
    rel = [x[c] for c in pos]
    if all(c == q - 1 for c in rel):
        raise ValueError(f"sub-block {tuple(x)} is full")
    head = rel[:-1]
    low = min(head)
    if low < q - 1:
        target = pos[head.index(low)]
    else:
        target = pos[-1]
    y = list(x)
    y[target] += 1
    return tuple(y)


class IlifcCode(FlashCode):
    name = "ilifc"

    def __init__(self, params):
        super().__init__(params)
        self._info: dict[Cells, tuple[Status, int]] = {}
        self._next: dict[tuple[Cells, int], Cells] = {}

    def _classify(self, x: Cells) -> tuple[Status, int]:
        info = self._info.get(x)
        if info is None:
            st = status(x, self.params.q)
            info = (st, index_ilifc(x) if st is Status.ACTIVE else 0)
            self._info[x] = info
        return info

    def _step(self, x: Cells, i: int) -> Cells:
        key = (x, i)
        y = self._next.get(key)
        if y is None:
            y = self._next[key] = write_step(x, i, self.params.q)
        return y

    def decode(self, cells: Sequence[int]) -> InfoVector:
        v = [0] * self.params.k
        for x in self.params.subblocks(cells):
            st, idx = self._classify(x)
            if st is Status.ACTIVE:
                v[idx - 1] = parity(x)
        return tuple(v)

    def encode_flip(self, cells: Sequence[int], i: int) -> Optional[Cells]:
        self._check_bit(i)
        k = self.params.k
        blocks = list(self.params.subblocks(cells))
        for j, x in enumerate(blocks):
            st, idx = self._classify(x)
            if st is Status.ACTIVE and idx == i:
                return _splice(cells, j * k, self._step(x, i))
        for j, x in enumerate(blocks):
            if self._classify(x)[0] is Status.EMPTY:
                return _splice(cells, j * k, write_new(i, x))
        return None


def _splice(cells: Sequence[int], start: int, x: Cells) -> Cells:
    cells = tuple(cells)
    return cells[:start] + x + cells[start + len(x):]

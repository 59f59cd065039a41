"""Layered ILIFC.

Cells of a sub-block are programmed one layer at a time. When every cell of
a sub-block reaches the same level the sub-block is *clear*: it forgets its
index (its value is 0 because k is even) and can be reused for any bit.
New indices go to the clear sub-block in the lowest layer.
"""

from __future__ import annotations

from typing import Optional, Sequence

from flashlab.codec import FlashCode, InfoVector
from flashlab.ilifc import _splice
from flashlab.model import Cells, index_layered, parity, read_layer


def write_new2(i: int, x: Sequence[int], q: int) -> Cells:
    layer = read_layer(x)
    if layer < 0:
        raise ValueError(f"write_new2 needs a clear sub-block, got {tuple(x)}")
    if layer >= q - 1:
        raise ValueError(f"sub-block {tuple(x)} is full")
    y = list(x)
    y[i - 1] += 1
    return tuple(y)


def write2(x: Sequence[int]) -> Cells:
    i = index_layered(x)
    if i == 0:
        raise ValueError(f"write2 needs a non-clear sub-block, got {tuple(x)}")
    k = len(x)
    y = list(x)
    y[(i - 1 + sum(x)) % k] += 1
    return tuple(y)


class LayeredCode(FlashCode):
    name = "layered"

    def __init__(self, params):
        super().__init__(params)
        # sub-block -> (index, layer); layer is -1 unless clear
        self._info: dict[Cells, tuple[int, int]] = {}

    def _classify(self, x: Cells) -> tuple[int, int]:
        info = self._info.get(x)
        if info is None:
            info = self._info[x] = (index_layered(x), read_layer(x))
        return info

    def decode(self, cells: Sequence[int]) -> InfoVector:
        v = [0] * self.params.k
        for x in self.params.subblocks(cells):
            idx, _ = self._classify(x)
            if idx:
                v[idx - 1] = parity(x)
        return tuple(v)

    def encode_flip(self, cells: Sequence[int], i: int) -> Optional[Cells]:
        self._check_bit(i)
        k, q = self.params.k, self.params.q
        blocks = list(self.params.subblocks(cells))
        best = None
        for j, x in enumerate(blocks):
            idx, layer = self._classify(x)
            if idx == i:
                return _splice(cells, j * k, write2(x))
            # lowest layer first, then lowest j; a full sub-block is never eligible
            if 0 <= layer < q - 1 and (best is None or layer < best[0]):
                best = (layer, j)
        if best is None:
            return None
        j = best[1]
        return _splice(cells, j * k, write_new2(i, blocks[j], q))

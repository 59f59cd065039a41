"""Block geometry, sub-block predicates and the two index maps.

Cell states are plain tuples of ints. Bit indices are 1-based (1..k) and an
index of 0 means "no index"; cell positions inside a tuple are 0-based.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Sequence

Cells = tuple[int, ...]


@dataclass(frozen=True)
class CodeParams:
    """Geometry of one erase block: ``n`` cells, ``k`` info bits, ``q`` levels."""

    n: int
    k: int
    q: int

    def __post_init__(self) -> None:
        if self.k <= 0 or self.k % 2:
            raise ValueError(f"k must be a positive even integer, got {self.k}")
        if self.q < 2:
            raise ValueError(f"q must be at least 2, got {self.q}")
        if self.n < self.k:
            raise ValueError(f"n={self.n} leaves no room for a sub-block of k={self.k} cells")

    @property
    def m(self) -> int:
        return self.n // self.k

    @property
    def rate(self) -> float:
        return self.k / self.n

    def zero(self) -> Cells:
        return (0,) * self.n

    def subblocks(self, cells: Sequence[int]) -> Iterator[Cells]:
        k = self.k
        for j in range(self.m):
            yield tuple(cells[j * k:(j + 1) * k])

    def check(self, cells: Sequence[int]) -> None:
        """Raise ``ValueError`` unless ``cells`` is a valid block state."""
        if len(cells) != self.n:
            raise ValueError(f"expected {self.n} cells, got {len(cells)}")
        if any(c < 0 or c >= self.q for c in cells):
            raise ValueError(f"cell level out of range [0, {self.q - 1}]: {cells}")
        if any(cells[self.m * self.k:]):
            raise ValueError("unused trailing cells must stay at level 0")


class Status(enum.Enum):
    EMPTY = "empty"
    FULL = "full"
    ACTIVE = "active"
    CLEAR = "clear"


def weight(x: Sequence[int]) -> int:
    return sum(x)


def parity(x: Sequence[int]) -> int:
    return sum(x) % 2


def status(x: Sequence[int], q: int) -> Status:
    """Classify a sub-block as empty, full or active (original view)."""
    if all(c == 0 for c in x):
        return Status.EMPTY
    if all(c == q - 1 for c in x):
        return Status.FULL
    return Status.ACTIVE


def layered_status(x: Sequence[int], q: int) -> tuple[Status, int]:
    """Layered view: ``(CLEAR, l)`` when every cell sits at level ``l``.

    Non-clear sub-blocks give ``(ACTIVE, -1)``. Empty and full sub-blocks are
    reported as clear at layer 0 and ``q - 1``.
    """
    layer = read_layer(x)
    if layer >= 0:
        return Status.CLEAR, layer
    return Status.ACTIVE, -1


def is_clear(x: Sequence[int]) -> bool:
    return all(c == x[0] for c in x)


def read_layer(x: Sequence[int]) -> int:
    return x[0] if is_clear(x) else -1


def is_live(x: Sequence[int], q: int) -> bool:
    # "live" = empty or active, i.e. the sub-block can still be written.
    return status(x, q) is not Status.FULL


def predecessor_differences(x: Sequence[int]) -> list[int]:
    """``c_i - c_{i-1}`` for each cell, with the predecessor of cell 1 being cell k."""
    return [x[p] - x[p - 1] for p in range(len(x))]


def _argmax_index(x: Sequence[int]) -> int:
    diffs = predecessor_differences(x)
    # list.index picks the first maximum, i.e. the smallest cell index on ties
    return diffs.index(max(diffs)) + 1


def index_ilifc(x: Sequence[int]) -> int:
    if not any(x):
        return 0
    return _argmax_index(x)


def index_layered(x: Sequence[int]) -> int:
    if is_clear(x):
        return 0
    return _argmax_index(x)


def has_unique_index(x: Sequence[int]) -> bool:
    diffs = predecessor_differences(x)
    return diffs.count(max(diffs)) == 1


def is_higher(a: Sequence[int], b: Sequence[int]) -> bool:
    if len(a) != len(b):
        raise ValueError(f"dimension mismatch: {len(a)} != {len(b)}")
    return all(x >= y for x, y in zip(a, b))


def format_state(cells: Sequence[int]) -> str:
    return ",".join(str(c) for c in cells)


def parse_state(text: str) -> Cells:
    return tuple(int(tok) for tok in text.split(","))

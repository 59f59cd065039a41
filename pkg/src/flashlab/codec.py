"""Common surface shared by both codecs."""

from __future__ import annotations

import abc
from typing import Optional, Sequence

from flashlab.model import Cells, CodeParams

InfoVector = tuple[int, ...]


class FlashCode(abc.ABC):
    """A rewriting code over one erase block.

    ``encode_flip`` returns the next (higher) block state, or ``None`` when the
    flip cannot be absorbed and the block has to be erased.
    """

    name: str = ""

    def __init__(self, params: CodeParams):
        self.params = params

    def __repr__(self) -> str:
        p = self.params
        return f"{type(self).__name__}(n={p.n}, k={p.k}, q={p.q})"

    @abc.abstractmethod
    def decode(self, cells: Sequence[int]) -> InfoVector:
        ...

    @abc.abstractmethod
    def encode_flip(self, cells: Sequence[int], i: int) -> Optional[Cells]:
        ...

    def zero(self) -> Cells:
        return self.params.zero()

    def _check_bit(self, i: int) -> None:
        if not 1 <= i <= self.params.k:
            raise ValueError(f"bit index {i} outside 1..{self.params.k}")


def make_code(name: str, params: CodeParams) -> FlashCode:
    from flashlab.ilifc import IlifcCode
    from flashlab.layered import LayeredCode

    codes = {IlifcCode.name: IlifcCode, LayeredCode.name: LayeredCode}
    try:
        return codes[name](params)
    except KeyError:
        raise ValueError(f"unknown code {name!r}; choose from {sorted(codes)}") from None


CODE_NAMES = ("ilifc", "layered")

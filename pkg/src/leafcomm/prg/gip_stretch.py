"""Hardness-based stretch by generalized inner products.

The seed holds t strings x_1..x_t of m bits each, x_j at bits [(j-1) m, j m). Every x_j
is cut into k pieces of m/k bits, x_j^(i) being the i-th piece. Output block i lists
x_1^(i), ..., x_t^(i) and then the t/k bits GIP_m^k(x_j) for the i-th batch of t/k
strings. Blocks follow each other in ascending order, t extra bits in total.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Any

from numpy import int64, zeros

from ..core.exception import ValidationError
from ..hardness.functions import gip, gip_array
from ..tools.logger import INFO3, logger
from .generator import Generator

if TYPE_CHECKING:
    from numpy.typing import NDArray


class GipStretchGenerator(Generator):
    __slots__ = ("_m", "_t", "_k")
    kind = "gip_stretch"
    _m: int
    _t: int
    _k: int

    def __init__(self, m: int, t: int, k: int):
        if min(m, t, k) < 1 or m % k or t % k:
            raise ValidationError(f"GIP stretch needs k dividing m and t, got m={m}, t={t}, k={k}")
        super().__init__(m * t, m * t + t)
        self._m = m
        self._t = t
        self._k = k
        logger.log(INFO3, f"GIP stretch: m={m}, t={t}, k={k}, {m * t} -> {m * t + t} bits")

    @property
    def m(self) -> int:
        return self._m

    @property
    def t(self) -> int:
        return self._t

    @property
    def k(self) -> int:
        return self._k

    @property
    def piece(self) -> int:
        return self._m // self._k

    @property
    def batch(self) -> int:
        return self._t // self._k

    @property
    def block_width(self) -> int:
        return self._t * self.piece + self.batch

    @property
    def params(self) -> dict[str, Any]:
        return {"m": self._m, "t": self._t, "k": self._k}

    def _expand(self, seed: int) -> int:
        m, t, piece, batch = self._m, self._t, self.piece, self.batch
        piece_mask = (1 << piece) - 1
        strings = [seed >> (j * m) & ((1 << m) - 1) for j in range(t)]
        y, position = 0, 0
        for i in range(self._k):
            for x in strings:
                y |= (x >> (i * piece) & piece_mask) << position
                position += piece
            for x in strings[i * batch : (i + 1) * batch]:
                y |= gip(self._k, x, m) << position
                position += 1
        return y

    def _expand_array(self, seeds: NDArray[int64]) -> NDArray[int64]:
        m, piece, batch = self._m, self.piece, self.batch
        piece_mask = (1 << piece) - 1
        strings = [(seeds >> (j * m)) & ((1 << m) - 1) for j in range(self._t)]
        y, position = zeros(len(seeds), dtype=int64), 0
        for i in range(self._k):
            for x in strings:
                y |= ((x >> (i * piece)) & piece_mask) << position
                position += piece
            for x in strings[i * batch : (i + 1) * batch]:
                y |= gip_array(self._k, x, m).astype(int64) << position
                position += 1
        return y

    def split(self, output: int) -> tuple[list[int], list[int]]:
        """(reassembled strings x_1..x_t, emitted GIP bits in string order)."""
        piece, batch = self.piece, self.batch
        piece_mask = (1 << piece) - 1
        strings, bits, position = [0] * self._t, [], 0
        for i in range(self._k):
            for j in range(self._t):
                strings[j] |= (output >> position & piece_mask) << (i * piece)
                position += piece
            for _ in range(batch):
                bits.append(output >> position & 1)
                position += 1
        return strings, bits

    def is_consistent(self, output: int) -> bool:
        """Whether every emitted GIP bit matches the GIP of its reassembled string."""
        strings, bits = self.split(output)
        return all(gip(self._k, x, self._m) == bit for x, bit in zip(strings, bits))


def gip_stretch_expand(seed: int, m: int, t: int, k: int) -> int:
    return GipStretchGenerator(m, t, k).expand(seed)

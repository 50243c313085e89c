from __future__ import annotations

from abc import ABCMeta, abstractmethod
from typing import TYPE_CHECKING, Any

from numpy import arange, array, asarray, int64

from ..core.exception import CapacityError, ValidationError
from ..tools.bits import unpack_bits

if TYPE_CHECKING:
    from numpy import uint8
    from numpy.typing import NDArray

SEED_EXHAUSTIVE_BITS = 24
OUTPUT_ARRAY_BITS = 62


class Generator(metaclass=ABCMeta):
    """Deterministic expansion of seed_len-bit seeds into out_len-bit strings.

    Seeds and outputs are integers; bit i of an output is the variable x_{i+1}.
    """

    __slots__ = ("_seed_len", "_out_len")
    kind: str = ""
    _seed_len: int
    _out_len: int

    def __init__(self, seed_len: int, out_len: int):
        if seed_len < 0 or out_len < 1:
            raise ValidationError(f"Invalid generator shape: seed {seed_len}, output {out_len}")
        self._seed_len = seed_len
        self._out_len = out_len

    @property
    def seed_len(self) -> int:
        return self._seed_len

    @property
    def out_len(self) -> int:
        return self._out_len

    @property
    @abstractmethod
    def params(self) -> dict[str, Any]:
        pass

    @abstractmethod
    def _expand(self, seed: int) -> int:
        pass

    def _check_seed(self, seed: int) -> int:
        seed = int(seed)
        if not 0 <= seed < 1 << self._seed_len:
            raise ValidationError(f"Seed {seed} does not fit into {self._seed_len} bits")
        return seed

    def expand(self, seed: int) -> int:
        return self._expand(self._check_seed(seed))

    def __call__(self, seed: int) -> int:
        return self.expand(seed)

    def expand_bits(self, seed: int) -> NDArray[uint8]:
        return unpack_bits(self.expand(seed), self._out_len)

    def _check_exhaustive(self) -> None:
        if self._seed_len > SEED_EXHAUSTIVE_BITS:
            raise CapacityError(
                f"Exhaustive expansion supports seeds up to {SEED_EXHAUSTIVE_BITS} bits",
                size=self._seed_len,
            )
        if self._out_len > OUTPUT_ARRAY_BITS:
            raise CapacityError(
                f"Output arrays support up to {OUTPUT_ARRAY_BITS} bits", size=self._out_len
            )

    def expand_all(self) -> NDArray[int64]:
        """Output of every seed, indexed by the seed."""
        self._check_exhaustive()
        return self._expand_array(arange(1 << self._seed_len, dtype=int64))

    def expand_array(self, seeds: NDArray[int64]) -> NDArray[int64]:
        width = max(self._out_len, self._seed_len)
        if width > OUTPUT_ARRAY_BITS:
            raise CapacityError(f"Arrays support up to {OUTPUT_ARRAY_BITS} bits", size=width)
        seeds = asarray(seeds, dtype=int64)
        if len(seeds) and (seeds.min() < 0 or int(seeds.max()) >> self._seed_len):
            raise ValidationError(f"Seeds should fit into {self._seed_len} bits")
        return self._expand_array(seeds)

    def _expand_array(self, seeds: NDArray[int64]) -> NDArray[int64]:
        return array([self._expand(int(seed)) for seed in seeds], dtype=int64)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(seed_len={self._seed_len}, out_len={self._out_len})"

from __future__ import annotations

from abc import ABCMeta, abstractmethod
from typing import TYPE_CHECKING

from numpy import array, full, int64, uint8

from ..tools.bits import (
    all_inputs,
    bits_matrix,
    pack_bits,
    parity_array,
    popcount_array,
    unpack_bits,
)
from .exception import CapacityError, ValidationError

if TYPE_CHECKING:
    from collections.abc import Sequence

    from numpy.typing import NDArray

TABLE_MAX_VARS = 24


class LeafGate(metaclass=ABCMeta):
    """A function from the leaf class: reads the n input bits of the formula, x1 is bit 0."""

    __slots__ = ("_n",)
    _n: int
    kind: str = ""

    def __init__(self, n: int):
        if n < 0:
            raise ValidationError(f"Number of variables should be nonnegative, got {n}")
        self._n = n

    @property
    def n(self) -> int:
        return self._n

    def __call__(self, x: int) -> int:
        return int(self.evaluate(array([x], dtype=int64))[0])

    @abstractmethod
    def evaluate(self, xs: NDArray[int64]) -> NDArray[uint8]:
        """Vectorized evaluation over integer-encoded inputs."""

    @abstractmethod
    def support(self) -> int:
        """Bitmask of the variables the gate reads."""

    @abstractmethod
    def unparse(self) -> str:
        pass

    @abstractmethod
    def _key(self) -> tuple:
        pass

    def table(self) -> NDArray[uint8]:
        if self._n > TABLE_MAX_VARS:
            raise CapacityError(f"Truth table of a {self._n}-variable gate", size=self._n)
        return self.evaluate(all_inputs(self._n))

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash((type(self).__name__, self._key()))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.unparse()}, n={self._n})"


class XorMask(LeafGate):
    __slots__ = ("_mask", "_negated")
    _mask: int
    _negated: bool
    kind = "xor"

    def __init__(self, mask: int, negated: bool = False, *, n: int):
        super().__init__(n)
        if mask < 0 or mask >> n:
            raise ValidationError(f"Mask {mask:#x} does not fit into {n} variables")
        self._mask = mask
        self._negated = bool(negated)

    @property
    def mask(self) -> int:
        return self._mask

    @property
    def negated(self) -> bool:
        return self._negated

    def evaluate(self, xs: NDArray[int64]) -> NDArray[uint8]:
        result = parity_array(xs, self._mask)
        if self._negated:
            result ^= 1
        return result

    def __call__(self, x: int) -> int:
        return ((x & self._mask).bit_count() & 1) ^ self._negated

    def support(self) -> int:
        return self._mask

    def unparse(self) -> str:
        indices = [str(i + 1) for i in range(self._n) if self._mask >> i & 1]
        if len(indices) == 1 and not self._negated:
            return f"(var {indices[0]})"
        head = "nxor" if self._negated else "xor"
        return "(" + " ".join([head, *indices]) + ")"

    def _key(self) -> tuple:
        return (self._n, self._mask, self._negated)


class Ltf(LeafGate):
    """Linear threshold gate: 1 iff sum of w_i x_i >= threshold."""

    __slots__ = ("_weights", "_threshold")
    _weights: tuple[int, ...]
    _threshold: int
    kind = "ltf"

    def __init__(self, weights: Sequence[int], threshold: int, *, n: int):
        super().__init__(n)
        if len(weights) > n:
            raise ValidationError(f"{len(weights)} weights given for {n} variables")
        weights = tuple(int(w) for w in weights) + (0,) * (n - len(weights))
        if any(abs(w) >= 1 << 62 for w in weights) or abs(threshold) >= 1 << 62:
            raise ValidationError("Threshold gate weights should fit into machine integers")
        self._weights = weights
        self._threshold = int(threshold)

    @property
    def weights(self) -> tuple[int, ...]:
        return self._weights

    @property
    def threshold(self) -> int:
        return self._threshold

    def evaluate(self, xs: NDArray[int64]) -> NDArray[uint8]:
        if self._n == 0:
            return full(len(xs), int(self._threshold <= 0), dtype=uint8)
        sums = bits_matrix(xs, self._n).astype(int64) @ array(self._weights, dtype=int64)
        return (sums >= self._threshold).astype(uint8)

    def __call__(self, x: int) -> int:
        total = sum(w for i, w in enumerate(self._weights) if x >> i & 1)
        return int(total >= self._threshold)

    def support(self) -> int:
        return sum(1 << i for i, w in enumerate(self._weights) if w)

    def unparse(self) -> str:
        return f"(ltf ({' '.join(map(str, self._weights))}) {self._threshold})"

    def _key(self) -> tuple:
        return (self._n, self._weights, self._threshold)


class Sym(LeafGate):
    """Symmetric gate: spectrum[k] is the output on inputs of Hamming weight k."""

    __slots__ = ("_spectrum",)
    _spectrum: tuple[int, ...]
    kind = "sym"

    def __init__(self, spectrum: Sequence[int], *, n: int):
        super().__init__(n)
        if len(spectrum) != n + 1:
            raise ValidationError(
                f"Spectrum of {n} variables needs {n + 1} bits, got {len(spectrum)}"
            )
        if any(bit not in (0, 1) for bit in spectrum):
            raise ValidationError("Spectrum entries should be bits")
        self._spectrum = tuple(int(bit) for bit in spectrum)

    @property
    def spectrum(self) -> tuple[int, ...]:
        return self._spectrum

    def evaluate(self, xs: NDArray[int64]) -> NDArray[uint8]:
        return array(self._spectrum, dtype=uint8)[popcount_array(xs)]

    def __call__(self, x: int) -> int:
        return self._spectrum[x.bit_count()]

    def support(self) -> int:
        if len(set(self._spectrum)) == 1:
            return 0
        return (1 << self._n) - 1

    def unparse(self) -> str:
        return f"(sym {' '.join(map(str, self._spectrum))})"

    def _key(self) -> tuple:
        return (self._n, self._spectrum)


class Table(LeafGate):
    """Arbitrary function given by its truth table: bit x of `bits` is the value on x."""

    __slots__ = ("_bits",)
    _bits: int
    kind = "table"

    def __init__(self, bits: int, *, n: int):
        super().__init__(n)
        if n > TABLE_MAX_VARS:
            raise CapacityError(f"Table gates support up to {TABLE_MAX_VARS} variables", size=n)
        if bits < 0 or bits >> (1 << n):
            raise ValidationError(f"Table does not fit into 2^{n} bits")
        self._bits = bits

    @classmethod
    def from_values(cls, values: NDArray[uint8] | Sequence[int], n: int) -> Table:
        if len(values) != 1 << n:
            raise ValidationError(
                f"Table of {n} variables needs {1 << n} values, got {len(values)}"
            )
        return cls(pack_bits(array(values, dtype=uint8)), n=n)

    @property
    def bits(self) -> int:
        return self._bits

    def evaluate(self, xs: NDArray[int64]) -> NDArray[uint8]:
        return unpack_bits(self._bits, 1 << self._n)[xs]

    def __call__(self, x: int) -> int:
        return self._bits >> x & 1

    def support(self) -> int:
        mask = 0
        values = self.table()
        xs = all_inputs(self._n)
        for i in range(self._n):
            if (values[xs ^ (1 << i)] != values).any():
                mask |= 1 << i
        return mask

    def unparse(self) -> str:
        return f"(table {self._bits:x})"

    def _key(self) -> tuple:
        return (self._n, self._bits)

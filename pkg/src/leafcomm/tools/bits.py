from __future__ import annotations

from typing import TYPE_CHECKING

from numba import njit
from numpy import arange, asarray, empty, frombuffer, int64, packbits, uint8, unpackbits

if TYPE_CHECKING:
    from numpy.typing import NDArray


@njit(cache=True)
def _popcount64(value: int) -> int:
    count = 0
    while value:
        value &= value - 1
        count += 1
    return count


@njit(cache=True)
def _popcount_array(values: NDArray[int64], result: NDArray[int64]) -> None:
    for i in range(len(values)):
        result[i] = _popcount64(values[i])


@njit(cache=True)
def _parity_array(values: NDArray[int64], mask: int, result: NDArray[uint8]) -> None:
    for i in range(len(values)):
        result[i] = _popcount64(values[i] & mask) & 1


def popcount_array(values: NDArray[int64]) -> NDArray[int64]:
    result = empty(len(values), dtype=int64)
    _popcount_array(values.astype(int64, copy=False), result)
    return result


def parity_array(values: NDArray[int64], mask: int) -> NDArray[uint8]:
    result = empty(len(values), dtype=uint8)
    _parity_array(values.astype(int64, copy=False), int64(mask), result)
    return result


def bits_matrix(values: NDArray[int64], width: int) -> NDArray[uint8]:
    """Row i holds the `width` low bits of values[i], least significant first."""
    return ((values[:, None] >> arange(width, dtype=int64)) & 1).astype(uint8)


def all_inputs(n: int) -> NDArray[int64]:
    return arange(1 << n, dtype=int64)


def unpack_bits(bits: int, size: int) -> NDArray[uint8]:
    """Bits 0..size-1 of an arbitrary-length integer as a 0/1 array."""
    nbytes = max(1, (size + 7) // 8)
    packed = frombuffer(bits.to_bytes(nbytes, "little"), dtype=uint8)
    return unpackbits(packed, bitorder="little")[:size]


def pack_bits(values: NDArray[uint8]) -> int:
    """Inverse of `unpack_bits`: values[i] becomes bit i."""
    packed = packbits(asarray(values, dtype=uint8) & 1, bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")

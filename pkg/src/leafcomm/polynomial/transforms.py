"""In-place subset transforms over value tables of length 2^n.

Bit i of a table index is the variable x_{i+1}. Integer tables are processed by
numba kernels, anything else (Python ints, Fractions) as numpy object arrays.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

from numba import njit
from numpy import ascontiguousarray, int64

from ..core.exception import ValidationError

if TYPE_CHECKING:
    from numpy.typing import NDArray

INT64_SAFE = 1 << 62


@njit(cache=True)
def _mobius_int64(values: NDArray[int64]) -> None:
    size = len(values)
    step = 1
    while step < size:
        for x in range(size):
            if x & step:
                values[x] -= values[x ^ step]
        step <<= 1


@njit(cache=True)
def _zeta_int64(values: NDArray[int64]) -> None:
    size = len(values)
    step = 1
    while step < size:
        for x in range(size):
            if x & step:
                values[x] += values[x ^ step]
        step <<= 1


@njit(cache=True)
def _walsh_int64(values: NDArray[int64]) -> None:
    size = len(values)
    step = 1
    while step < size:
        for x in range(size):
            if not x & step:
                u = values[x]
                v = values[x | step]
                values[x] = u + v
                values[x | step] = u - v
        step <<= 1


def _steps(size: int):
    step = 1
    while step < size:
        yield step
        step <<= 1


def _mobius_object(values: NDArray) -> None:
    for step in _steps(len(values)):
        view = values.reshape(-1, 2, step)
        view[:, 1, :] = view[:, 1, :] - view[:, 0, :]


def _zeta_object(values: NDArray) -> None:
    for step in _steps(len(values)):
        view = values.reshape(-1, 2, step)
        view[:, 1, :] = view[:, 1, :] + view[:, 0, :]


def _walsh_object(values: NDArray) -> None:
    for step in _steps(len(values)):
        view = values.reshape(-1, 2, step)
        low = view[:, 0, :].copy()
        high = view[:, 1, :].copy()
        view[:, 0, :] = low + high
        view[:, 1, :] = low - high


_functions_dict = {
    "mobius": (_mobius_int64, _mobius_object),
    "zeta": (_zeta_int64, _zeta_object),
    "walsh": (_walsh_int64, _walsh_object),
}


def table_size_bits(values: NDArray) -> int:
    size = len(values)
    if size == 0 or size & (size - 1):
        raise ValidationError(f"Table length should be a power of two, got {size}")
    return size.bit_length() - 1


def _transform(kind: str, values: NDArray, bound: int | None) -> NDArray:
    """`bound` caps the absolute value of any intermediate; int64 is used below INT64_SAFE."""
    table_size_bits(values)
    int_kernel, object_kernel = _functions_dict[kind]
    if values.dtype.kind in "iub" and bound is not None and bound < INT64_SAFE:
        result = ascontiguousarray(values, dtype=int64).copy()
        int_kernel(result)
        return result
    result = ascontiguousarray(values, dtype=object).copy()
    object_kernel(result)
    return result


def _abs_sum(values: NDArray) -> int:
    if values.dtype.kind in "iub":
        return int(abs(values.astype(object)).sum()) if len(values) else 0
    return sum(abs(v) for v in values)


def mobius(values: NDArray) -> NDArray:
    """Coefficients c_S of the zero_one polynomial with the given values.

    c_S = sum_{T<=S} (-1)^|S-T| v_T
    """
    bound = _abs_sum(values) if values.dtype.kind in "iub" else None
    return _transform("mobius", values, bound)


def zeta(values: NDArray) -> NDArray:
    """Values from zero_one coefficients: v_x = sum_{S<=x} c_S."""
    bound = _abs_sum(values) if values.dtype.kind in "iub" else None
    return _transform("zeta", values, bound)


def walsh(values: NDArray) -> NDArray:
    """Unnormalized Walsh-Hadamard transform: w_S = sum_x (-1)^|S&x| v_x."""
    bound = _abs_sum(values) if values.dtype.kind in "iub" else None
    return _transform("walsh", values, bound)

"""Exact matrix products for the counting pipeline.

Entries are int64 or Python numbers (ints or Fractions) in object arrays. Backends are
selected by name; fast rectangular multiplication can be registered as another one.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

from numpy import asarray, empty, int64, vstack

from ..core.exception import ValidationError

if TYPE_CHECKING:
    from collections.abc import Callable

    from numpy.typing import NDArray

BLOCK_ROWS = 256
INT64_SAFE = 1 << 62


def _max_abs(matrix: NDArray) -> int:
    if matrix.size == 0:
        return 0
    return int(abs(matrix).max())


def _fits_int64(a: NDArray, b: NDArray) -> bool:
    if a.dtype.kind not in "iub" or b.dtype.kind not in "iub":
        return False
    return _max_abs(a) * _max_abs(b) * max(a.shape[1], 1) < INT64_SAFE


def _standard(a: NDArray, b: NDArray) -> NDArray:
    if _fits_int64(a, b):
        return a.astype(int64) @ b.astype(int64)
    return a.astype(object) @ b.astype(object)


def _blocked(a: NDArray, b: NDArray) -> NDArray:
    if a.shape[0] == 0:
        return _standard(a, b)
    return vstack(
        [_standard(a[start : start + BLOCK_ROWS], b) for start in range(0, a.shape[0], BLOCK_ROWS)]
    )


def _naive(a: NDArray, b: NDArray) -> NDArray:
    rows, inner = a.shape
    cols = b.shape[1]
    result = empty((rows, cols), dtype=object)
    for i in range(rows):
        for j in range(cols):
            total = 0
            for k in range(inner):
                total += a[i, k] * b[k, j]
            result[i, j] = total
    return result


_functions_dict: dict[str, Callable[[NDArray, NDArray], NDArray]] = {
    "standard": _standard,
    "blocked": _blocked,
    "naive": _naive,
}

BACKENDS = tuple(_functions_dict)


def register_backend(name: str, function: Callable[[NDArray, NDArray], NDArray]) -> None:
    """Adds a product implementation, e.g. a fast rectangular one."""
    _functions_dict[name] = function


def matmul(a, b, backend: str = "standard") -> NDArray:
    """Exact product of two matrices."""
    a = asarray(a)
    b = asarray(b)
    if a.ndim != 2 or b.ndim != 2:
        raise ValidationError(f"Expect matrices, got shapes {a.shape} and {b.shape}")
    if a.shape[1] != b.shape[0]:
        raise ValidationError(f"Inner dimensions do not agree: {a.shape} x {b.shape}")
    try:
        function = _functions_dict[backend]
    except KeyError as exc:
        raise ValidationError(
            f"Unknown matmul backend {backend}, expect one of {tuple(_functions_dict)}"
        ) from exc
    return function(a, b)

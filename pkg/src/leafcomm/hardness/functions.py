"""Generalized inner product and its two-party special case.

An n-bit input is read as k contiguous blocks of n/k bits, block i holding
bits [i n/k, (i+1) n/k) of the integer. GIP is the parity of the coordinate-wise AND
of the blocks.
"""

from __future__ import annotations

from collections.abc import Callable
from typing import TYPE_CHECKING

from numpy import array, asarray, full, int64, ndarray, uint8

from ..core.exception import ValidationError
from ..core.formula import Formula, evaluate_many
from ..core.gates import LeafGate
from ..counting.device import LeafDevice
from ..protocols.tree import ProtocolTree, evaluate_protocol
from ..tools.bits import popcount_array

if TYPE_CHECKING:
    from numpy.typing import NDArray

Distinguisher = Formula | LeafDevice | ProtocolTree | LeafGate | ndarray | Callable[[int], int]


def _block_width(k: int, n: int) -> int:
    if k < 1 or n < 1 or n % k:
        raise ValidationError(f"GIP needs k dividing n, got k={k}, n={n}")
    return n // k


def gip(k: int, x: int, n: int) -> int:
    width = _block_width(k, n)
    mask = (1 << width) - 1
    common = mask
    for i in range(k):
        common &= x >> (i * width) & mask
    return common.bit_count() & 1


def gip_array(k: int, xs: NDArray[int64], n: int) -> NDArray[uint8]:
    width = _block_width(k, n)
    mask = (1 << width) - 1
    xs = asarray(xs, dtype=int64)
    common = full(len(xs), mask, dtype=int64)
    for i in range(k):
        common &= (xs >> (i * width)) & mask
    return (popcount_array(common) & 1).astype("u1")


def inner_product(x: int, n: int) -> int:
    """<x_L, x_R> mod 2 for the two halves of x, computed bit by bit."""
    if n % 2:
        raise ValidationError(f"Inner product needs an even length, got {n}")
    half = n // 2
    value = 0
    for i in range(half):
        value ^= (x >> i & 1) & (x >> (half + i) & 1)
    return value


def as_vectorized(f: Distinguisher, n: int) -> Callable[[NDArray[int64]], NDArray[uint8]]:
    """Wraps any supported test function into a map from input arrays to 0/1 arrays."""
    match f:
        case Formula() | LeafDevice():
            formula = f.formula if isinstance(f, LeafDevice) else f
            if formula.num_vars != n:
                raise ValidationError(f"Function over {formula.num_vars} inputs, expect {n}")
            return lambda xs: evaluate_many(formula, xs)
        case ProtocolTree() | LeafGate():
            if f.n != n:
                raise ValidationError(f"Function over {f.n} inputs, expect {n}")
            if isinstance(f, LeafGate):
                return f.evaluate
            return lambda xs: evaluate_protocol(f, xs)
        case ndarray():
            if len(f) != 1 << n:
                raise ValidationError(f"Truth table of length {len(f)}, expect {1 << n}")
            table = asarray(f, dtype=uint8)
            return lambda xs: table[xs]
        case _ if callable(f):
            return lambda xs: array([f(int(x)) for x in xs], dtype=uint8)
    raise ValidationError(f"Unsupported test function {f!r}")

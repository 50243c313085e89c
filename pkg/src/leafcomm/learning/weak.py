"""Exhaustive weak learner over all 2^(n+1) signed parities.

With A[x] the total weight of the samples at x, signed by their labels, the Walsh
coefficient W[S] of A is the weighted agreement minus disagreement of the parity S, so
its weighted error is (total - W[S]) / 2 and that of the negated parity (total + W[S]) / 2.
Exhaustive search replaces a sub-exhaustive parity learner; at n <= 20 it is exact and fast.
"""

from __future__ import annotations

from collections.abc import Callable
from fractions import Fraction
from typing import TYPE_CHECKING

from numpy import abs as np_abs
from numpy import argmax, asarray, int64, zeros

from ..core.exception import CapacityError, ValidationError
from ..polynomial.transforms import walsh
from ..tools.rational import common_denominator, parse_rational
from .hypothesis import SignedParity

if TYPE_CHECKING:
    from collections.abc import Sequence

    from numpy import uint8
    from numpy.typing import NDArray

WEAK_MAX_VARS = 20

WeakLearner = Callable[..., tuple[SignedParity, Fraction]]


def signed_weight_table(
    xs: NDArray[int64], ys: NDArray[uint8], weights: Sequence[int], n: int
) -> NDArray:
    table = zeros(1 << n, dtype=object)
    for x, y, weight in zip(xs.tolist(), ys.tolist(), weights):
        table[x] += -weight if y else weight
    return table


def weak_learn_arrays(
    xs: NDArray[int64], ys: NDArray[uint8], weights: Sequence[int], n: int
) -> tuple[SignedParity, Fraction]:
    """Best signed parity for integer sample weights: (parity, weighted error in [0, 1])."""
    if n > WEAK_MAX_VARS:
        raise CapacityError(
            f"Exhaustive parity search supports up to {WEAK_MAX_VARS} inputs", size=n
        )
    if len(xs) == 0:
        raise ValidationError("Weak learner needs at least one sample")
    if len(weights) != len(xs) or any(weight < 0 for weight in weights):
        raise ValidationError("Weak learner needs one nonnegative weight per sample")
    total = sum(weights)
    if total <= 0:
        raise ValidationError("Sample weights should not all be zero")
    spectrum = walsh(signed_weight_table(xs, ys, weights, n))
    mask = int(argmax(np_abs(spectrum)))
    value = int(spectrum[mask])
    return SignedParity(mask, value < 0), Fraction(total - abs(value), 2 * total)


def weak_learn_parity(
    samples: Sequence[tuple[int, int]],
    weights: Sequence[Fraction | int | str] | None = None,
    n: int | None = None,
) -> tuple[SignedParity, Fraction]:
    """The signed parity of least weighted error; ties go to the smallest mask, then to +."""
    if not samples:
        raise ValidationError("Weak learner needs at least one sample")
    xs = asarray([x for x, _ in samples], dtype=int64)
    ys = asarray([y for _, y in samples], dtype="u1")
    if n is None:
        n = max(1, int(xs.max()).bit_length())
    if weights is None:
        integer_weights = [1] * len(samples)
    else:
        parsed = [parse_rational(weight) for weight in weights]
        denominator = common_denominator(parsed)
        integer_weights = [int(weight * denominator) for weight in parsed]
    return weak_learn_arrays(xs, ys, integer_weights, n)

from __future__ import annotations

from fractions import Fraction
from math import log2

from ..core.exception import ValidationError
from ..tools.logger import INFO1, logger
from ..tools.rational import parse_rational


def exact_log2(value: Fraction | int) -> int | float:
    """log2 as an int for powers of two (including 1/2^j), as a float otherwise."""
    value = Fraction(value)
    if value <= 0:
        raise ValidationError(f"Logarithm of a nonpositive number {value}")
    numerator, denominator = value.numerator, value.denominator
    if denominator == 1 and numerator & (numerator - 1) == 0:
        return numerator.bit_length() - 1
    if numerator == 1 and denominator & (denominator - 1) == 0:
        return 1 - denominator.bit_length()
    return log2(value)


def lb_size_bound(n: int, k: int, eps: Fraction | str, cost: int | Fraction) -> Fraction | float:
    """n^2 / (k^2 16^k (R + log n)^2 log^2(1/eps)), the formula size lower bound up to constants.

    `cost` is R, the k-party randomized cost of the leaf class at error eps / (2 n^2).
    """
    eps = parse_rational(eps)
    if n < 2 or k < 2 or not 0 < eps < 1 or cost < 0:
        raise ValidationError(f"Invalid bound parameters n={n}, k={k}, eps={eps}, R={cost}")
    log_n = exact_log2(n)
    log_eps = exact_log2(1 / eps)
    denominator = k**2 * 16**k * (cost + log_n) ** 2 * log_eps**2
    if isinstance(log_n, int) and isinstance(log_eps, int):
        bound = Fraction(n**2) / Fraction(denominator)
    else:
        bound = n**2 / float(denominator)
    logger.log(
        INFO1, f"Size lower bound for n={n}, k={k}, eps={eps}, R={cost}: {bound} (up to constants)"
    )
    return bound

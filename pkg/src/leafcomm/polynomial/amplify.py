"""Error reduction by feeding an approximator into the majority amplifier.

a_r(y) = sum_{i > r/2} C(r, i) y^i (1 - y)^(r - i) is the probability that the majority of
r independent y-biased coins is 1. The input approximator p with error e0 is first
normalized to y = (p + e0) / (1 + 2 e0), which maps the value range to [0, 1].
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import TYPE_CHECKING

from ..core.exception import CalculationError, ValidationError
from ..tools.logger import INFO2, logger
from ..tools.rational import parse_rational
from .multilinear import EXHAUSTIVE_MAX_VARS, MultilinearPoly, from_scaled, scaled_table_of

if TYPE_CHECKING:
    from numpy.typing import NDArray

MAX_ROUNDS = 1 << 12


def bernstein_amplifier(r: int) -> tuple[Fraction, ...]:
    """Power-basis coefficients of a_r, constant term first."""
    if r < 1 or r % 2 == 0:
        raise ValidationError(f"Amplifier degree should be odd and positive, got {r}")
    coefs = [0] * (r + 1)
    for i in range(r // 2 + 1, r + 1):
        # C(r,i) y^i (1-y)^(r-i) = C(r,i) sum_j C(r-i,j) (-1)^j y^(i+j)
        for j in range(r - i + 1):
            coefs[i + j] += comb(r, i) * comb(r - i, j) * (-1) ** j
    return tuple(Fraction(c) for c in coefs)


def amplifier_value(r: int, y: Fraction | int) -> Fraction:
    """Exact a_r(y)."""
    y = Fraction(y)
    return sum(
        (comb(r, i) * y**i * (1 - y) ** (r - i) for i in range(r // 2 + 1, r + 1)), Fraction(0)
    )


def amplification_rounds(source_eps: Fraction | str, eps: Fraction | str) -> int:
    """Least odd r with a_r(2 e0 / (1 + 2 e0)) <= eps; 0 when no amplification is needed."""
    source_eps = parse_rational(source_eps)
    eps = parse_rational(eps)
    if not 0 <= source_eps < Fraction(1, 2):
        raise ValidationError(f"Source error {source_eps} should be within [0, 1/2)")
    if eps >= source_eps:
        return 0
    if eps <= 0:
        raise ValidationError("Amplification cannot reach zero error")
    worst = 2 * source_eps / (1 + 2 * source_eps)
    r = 1
    while amplifier_value(r, worst) > eps:
        r += 2
        if r > MAX_ROUNDS:
            raise CalculationError(
                f"Amplifier degree exceeds {MAX_ROUNDS}", details={"eps": str(eps)}
            )
    return r


def amplify_scaled(
    numerators: NDArray, denominator: int, source_eps: Fraction, r: int
) -> tuple[NDArray, int]:
    """Pointwise a_r((v + e0) / (1 + 2 e0)) over a value table numerators/denominator."""
    a, b = source_eps.numerator, source_eps.denominator
    # y = (N b + a D) / (D (b + 2a))
    top = numerators.astype(object) * b + a * denominator
    bottom = denominator * (b + 2 * a)
    rest = bottom - top
    total = 0
    for i in range(r // 2 + 1, r + 1):
        total = total + comb(r, i) * top**i * rest ** (r - i)
    return total, bottom**r


def _amplify_symbolic(p: MultilinearPoly, source_eps: Fraction, r: int) -> MultilinearPoly:
    normalized = (p + source_eps) / (1 + 2 * source_eps)
    result = MultilinearPoly(p.n, basis=p.basis)
    for coef in reversed(bernstein_amplifier(r)):
        result = result * normalized + coef
    return result


def amplify(
    p: MultilinearPoly, eps: Fraction | str, source_eps: Fraction | str = Fraction(1, 3)
) -> MultilinearPoly:
    """An eps-approximator from a source_eps-approximator of a Boolean function.

    The result has degree at most deg(p) * r. Returns p unchanged when eps >= source_eps.
    """
    eps = parse_rational(eps)
    source_eps = parse_rational(source_eps)
    r = amplification_rounds(source_eps, eps)
    if r == 0:
        return p
    logger.log(INFO2, f"Amplifying error {source_eps} to {eps} with r={r}")
    if p.n > EXHAUSTIVE_MAX_VARS or p.basis != "zero_one":
        return _amplify_symbolic(p, source_eps, r)
    numerators, denominator = scaled_table_of(p)
    return from_scaled(*amplify_scaled(numerators, denominator, source_eps, r))

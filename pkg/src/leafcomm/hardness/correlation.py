from __future__ import annotations

from fractions import Fraction
from math import log, log2, sqrt
from typing import TYPE_CHECKING, Any

from numpy import abs as np_abs
from numpy import argmax, asarray, int64, uint8

from ..core.exception import ValidationError
from ..polynomial.transforms import walsh
from ..tools.logger import INFO2, logger
from .distribution import Distribution

if TYPE_CHECKING:
    from collections.abc import Sequence

    from numpy.typing import NDArray


class CorrelationReport:
    """E[f g] in +-1 semantics together with Pr[f = g], both exact."""

    __slots__ = ("f_id", "g_id", "distribution", "correlation", "agreement")
    f_id: str
    g_id: str
    distribution: str
    correlation: Fraction
    agreement: Fraction

    def __init__(self, f_id: str, g_id: str, distribution: str, agreement: Fraction):
        self.f_id = f_id
        self.g_id = g_id
        self.distribution = distribution
        self.agreement = agreement
        self.correlation = 2 * agreement - 1

    def to_dict(self) -> dict[str, Any]:
        return {
            "f": self.f_id,
            "g": self.g_id,
            "distribution": self.distribution,
            "correlation": self.correlation,
            "agreement": self.agreement,
        }

    def __repr__(self) -> str:
        return f"CorrelationReport({self.f_id} vs {self.g_id}: {self.correlation})"


def _table(values, n: int) -> NDArray[uint8]:
    table = asarray(values, dtype=uint8)
    if len(table) != 1 << n:
        raise ValidationError(f"Truth table of length {len(table)}, expect {1 << n}")
    return table


def _resolve(dist: Distribution | None, n: int) -> Distribution:
    if dist is None:
        return Distribution.uniform(n)
    if dist.n != n:
        raise ValidationError(f"Distribution over {dist.n} variables, expect {n}")
    return dist


def correlation(
    f: Sequence[int] | NDArray[uint8],
    g: Sequence[int] | NDArray[uint8],
    n: int,
    dist: Distribution | None = None,
    *,
    f_id: str = "f",
    g_id: str = "g",
) -> CorrelationReport:
    """Exact correlation of two truth tables under a distribution (uniform by default)."""
    dist = _resolve(dist, n)
    agree = (_table(f, n) == _table(g, n)).astype(int64)
    report = CorrelationReport(f_id, g_id, repr(dist), dist.expectation(agree))
    logger.log(INFO2, repr(report))
    return report


def signed_spectrum(f: Sequence[int] | NDArray[uint8], n: int, dist: Distribution) -> NDArray:
    """Numerators of E_dist[(-1)^(f(x) + <S, x>)] for every mask S."""
    signs = 1 - 2 * _table(f, n).astype(int64)
    return walsh(dist.numerators * signs)


def best_parity_correlation(
    f: Sequence[int] | NDArray[uint8], n: int, dist: Distribution | None = None
) -> tuple[int, bool, Fraction]:
    """The signed parity most correlated with f: (mask, negated, correlation).

    Ties go to the smallest mask, then to the positive sign.
    """
    dist = _resolve(dist, n)
    spectrum = signed_spectrum(f, n, dist)
    mask = int(argmax(np_abs(spectrum)))
    value = int(spectrum[mask])
    return mask, value < 0, Fraction(abs(value), dist.denominator)


def approximation_correlation(
    approx: Sequence[Fraction], f: Sequence[int] | NDArray[uint8], n: int, dist: Distribution
) -> Fraction:
    """E[C~ f] for a real-valued C~ and a Boolean f, both read in +-1 semantics."""
    table = _table(f, n)
    total = sum(
        Fraction(int(weight)) * value * (1 - 2 * int(bit))
        for weight, value, bit in zip(dist.numerators, approx, table)
    )
    return total / dist.denominator


def checked_approximator_correlation(
    c: Sequence[int] | NDArray[uint8],
    f: Sequence[int] | NDArray[uint8],
    approx: Sequence[Fraction],
    eps: Fraction,
    n: int,
    dist: Distribution | None = None,
) -> Fraction:
    """E[C~ f] for an eps-approximator C~ (+-1 values) of a C agreeing with f on 1/2 + eps.

    The preconditions are verified and the value is returned; it is at least eps.
    """
    dist = _resolve(dist, n)
    c_table = _table(c, n)
    for value, bit in zip(approx, c_table):
        if abs(Fraction(value) - (1 - 2 * int(bit))) > eps:
            raise ValidationError(f"Approximator is farther than {eps} from C")
    agreement = correlation(c_table, f, n, dist).agreement
    if agreement < Fraction(1, 2) + eps:
        raise ValidationError(f"C agrees with f on {agreement} < 1/2 + {eps}")
    return approximation_correlation([Fraction(v) for v in approx], f, n, dist)


def parity_correlation_floor(s: int, eps0: Fraction, c: float) -> float:
    """s^-(c sqrt(s) log2(1/eps0)): the guaranteed best-parity correlation, up to c."""
    if s <= 1:
        return 1.0
    return s ** -(c * sqrt(s) * log2(1 / eps0))


def implied_constant(value: Fraction | float, s: int, eps0: Fraction) -> float:
    """The c with parity_correlation_floor(s, eps0, c) equal to the measured correlation."""
    if s <= 1 or value >= 1:
        return 0.0
    if value <= 0:
        raise ValidationError("Correlation should be positive to imply a constant")
    return -log(float(value)) / (sqrt(s) * log2(1 / eps0) * log(s))

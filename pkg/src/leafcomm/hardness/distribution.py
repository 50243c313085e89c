from __future__ import annotations

from fractions import Fraction
from typing import TYPE_CHECKING, Any

from numpy import int64, ones, zeros

from ..core.exception import CapacityError, ValidationError
from ..tools.rational import common_denominator, format_rational, parse_rational

if TYPE_CHECKING:
    from collections.abc import Mapping

    from numpy.random import Generator
    from numpy.typing import NDArray

DISTRIBUTION_MAX_VARS = 20
DENOMINATOR_LIMIT = 1 << 40


class Distribution:
    """Exact weights over {0,1}^n held as integer numerators over one common denominator."""

    __slots__ = ("_n", "_numerators", "_denominator", "_uniform")
    _n: int
    _numerators: NDArray[int64]
    _denominator: int
    _uniform: bool

    def __init__(self, n: int, numerators: NDArray[int64] | None = None, denominator: int = 0):
        if not 0 <= n <= DISTRIBUTION_MAX_VARS:
            raise CapacityError(
                f"Distributions support up to {DISTRIBUTION_MAX_VARS} variables", size=n
            )
        self._n = n
        self._uniform = numerators is None
        if numerators is None:
            self._numerators = ones(1 << n, dtype=int64)
            self._denominator = 1 << n
            return
        if len(numerators) != 1 << n:
            raise ValidationError(f"Distribution over {n} variables needs {1 << n} weights")
        if (numerators < 0).any():
            raise ValidationError("Distribution weights should be nonnegative")
        if int(numerators.sum()) != denominator or denominator <= 0:
            raise ValidationError("Distribution weights should sum to 1")
        self._numerators = numerators.astype(int64)
        self._denominator = denominator

    @classmethod
    def uniform(cls, n: int) -> Distribution:
        return cls(n)

    @classmethod
    def from_mapping(cls, n: int, weights: Mapping[Any, Any]) -> Distribution:
        """Weights keyed by input index; missing inputs weigh zero."""
        parsed = {}
        for key, value in weights.items():
            index = int(key)
            if not 0 <= index < 1 << n:
                raise ValidationError(f"Input {index} is out of range for n={n}")
            parsed[index] = parse_rational(value)
        denominator = common_denominator(parsed.values())
        if denominator > DENOMINATOR_LIMIT:
            raise CapacityError("Distribution denominators are too large", size=denominator)
        numerators = zeros(1 << n, dtype=int64)
        for index, weight in parsed.items():
            numerators[index] = weight.numerator * (denominator // weight.denominator)
        total = Fraction(int(numerators.sum()), denominator)
        if total != 1:
            raise ValidationError(f"Distribution weights sum to {total}, expect 1")
        return cls(n, numerators, denominator)

    @classmethod
    def random(cls, n: int, rng: Generator, granularity: int = 16) -> Distribution:
        """Random rational weights with numerators drawn from [0, granularity)."""
        numerators = rng.integers(0, granularity, size=1 << n, dtype=int64)
        if not numerators.any():
            numerators[0] = 1
        return cls(n, numerators, int(numerators.sum()))

    @property
    def n(self) -> int:
        return self._n

    @property
    def is_uniform(self) -> bool:
        return self._uniform

    @property
    def numerators(self) -> NDArray[int64]:
        return self._numerators

    @property
    def denominator(self) -> int:
        return self._denominator

    def weight(self, x: int) -> Fraction:
        return Fraction(int(self._numerators[x]), self._denominator)

    def expectation(self, values: NDArray) -> Fraction:
        """E[v(x)] for an integer table v."""
        total = int((self._numerators.astype(object) * values.astype(object)).sum())
        return Fraction(total, self._denominator)

    def sample(self, rng: Generator, size: int) -> NDArray[int64]:
        if self._uniform:
            return rng.integers(0, 1 << self._n, size=size, dtype=int64)
        probabilities = self._numerators / self._denominator
        return rng.choice(1 << self._n, size=size, p=probabilities).astype(int64)

    def to_dict(self) -> dict[str, str]:
        return {
            str(x): format_rational(self.weight(x))
            for x in range(1 << self._n)
            if self._numerators[x]
        }

    def __repr__(self) -> str:
        kind = "uniform" if self._uniform else f"denominator={self._denominator}"
        return f"Distribution(n={self._n}, {kind})"

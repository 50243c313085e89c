from __future__ import annotations

from typing import TYPE_CHECKING

from ..core.exception import SampleBudgetError, ValidationError
from ..hardness.distribution import Distribution
from ..hardness.functions import as_vectorized
from ..tools.logger import INFO3, logger

if TYPE_CHECKING:
    from numpy import int64, uint8
    from numpy.random import Generator
    from numpy.typing import NDArray

    from ..hardness.functions import Distinguisher


class ExampleOracle:
    """Labelled examples (x, target(x)) with x drawn from a distribution over {0,1}^n."""

    __slots__ = ("_target", "_n", "_rng", "_distribution", "_budget", "_drawn")
    _n: int
    _rng: Generator
    _distribution: Distribution
    _budget: int | None
    _drawn: int

    def __init__(
        self,
        target: Distinguisher,
        n: int,
        rng: Generator,
        distribution: Distribution | None = None,
        budget: int | None = None,
    ):
        if distribution is None:
            distribution = Distribution.uniform(n)
        elif distribution.n != n:
            raise ValidationError(f"Distribution over {distribution.n} variables, expect {n}")
        self._target = as_vectorized(target, n)
        self._n = n
        self._rng = rng
        self._distribution = distribution
        self._budget = budget
        self._drawn = 0

    @property
    def n(self) -> int:
        return self._n

    @property
    def distribution(self) -> Distribution:
        return self._distribution

    @property
    def drawn(self) -> int:
        return self._drawn

    def label(self, xs: NDArray[int64]) -> NDArray[uint8]:
        return self._target(xs)

    def draw(self, count: int) -> tuple[NDArray[int64], NDArray[uint8]]:
        if self._budget is not None and self._drawn + count > self._budget:
            raise SampleBudgetError(
                f"Requested {count} examples with {self._budget - self._drawn} left",
                details={"budget": self._budget},
            )
        xs = self._distribution.sample(self._rng, count)
        self._drawn += count
        logger.log(INFO3, f"Drew {count} examples ({self._drawn} in total)")
        return xs, self._target(xs)

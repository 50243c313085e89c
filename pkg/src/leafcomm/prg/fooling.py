from __future__ import annotations

from fractions import Fraction
from math import log, sqrt
from typing import TYPE_CHECKING, Any

from numpy import int64

from ..core.exception import CapacityError
from ..hardness.functions import as_vectorized
from ..tools.bits import all_inputs
from ..tools.logger import INFO2, logger
from ..tools.seeding import make_rng
from .generator import OUTPUT_ARRAY_BITS, SEED_EXHAUSTIVE_BITS

if TYPE_CHECKING:
    from numpy.random import Generator as RandomGenerator
    from numpy.typing import NDArray

    from ..hardness.functions import Distinguisher
    from .generator import Generator

EXHAUSTIVE_OUTPUT_BITS = 20
SAMPLES = 10**6
CONFIDENCE_ALPHA = 0.01
SAMPLE_CHUNK = 1 << 16


class FoolingGap:
    """|E_z[f(G(z))] - E_x[f(x)]|, exact or estimated from samples."""

    __slots__ = ("gap", "pseudo", "uniform", "exact", "half_width", "samples")
    gap: Fraction | float
    pseudo: Fraction | float
    uniform: Fraction | float
    exact: bool
    half_width: float
    samples: int

    def __init__(self, pseudo, uniform, exact: bool, half_width: float = 0.0, samples: int = 0):
        self.pseudo = pseudo
        self.uniform = uniform
        self.gap = abs(pseudo - uniform)
        self.exact = exact
        self.half_width = half_width
        self.samples = samples

    def within(self, target) -> bool:
        """gap <= target, allowing the confidence half-width for sampled gaps."""
        return self.gap <= target + self.half_width

    def to_dict(self) -> dict[str, Any]:
        return {
            "gap": self.gap,
            "pseudo": self.pseudo,
            "uniform": self.uniform,
            "exact": self.exact,
            "half_width": self.half_width,
            "samples": self.samples,
        }

    def __repr__(self) -> str:
        if self.exact:
            return f"FoolingGap({self.gap})"
        return f"FoolingGap({float(self.gap):.4g} +- {self.half_width:.3g})"


def _accepted(fn, xs: NDArray[int64]) -> int:
    return sum(
        int(fn(xs[start : start + SAMPLE_CHUNK]).sum()) for start in range(0, len(xs), SAMPLE_CHUNK)
    )


def uniform_acceptance(fn, n: int) -> Fraction:
    return Fraction(_accepted(fn, all_inputs(n)), 1 << n)


def fooling_gap(
    g: Generator,
    f: Distinguisher,
    *,
    samples: int = SAMPLES,
    rng: RandomGenerator | None = None,
    seed: int | None = None,
) -> FoolingGap:
    """Exhaustive for n <= 20 and seeds up to 24 bits, otherwise sampled.

    Sampled gaps carry a 99% Hoeffding half-width for the difference of the two means.
    """
    n = g.out_len
    width = max(n, g.seed_len)
    if width > OUTPUT_ARRAY_BITS:
        raise CapacityError(f"Fooling gaps support up to {OUTPUT_ARRAY_BITS} bits", size=width)
    fn = as_vectorized(f, n)
    if n <= EXHAUSTIVE_OUTPUT_BITS and g.seed_len <= SEED_EXHAUSTIVE_BITS:
        pseudo = Fraction(_accepted(fn, g.expand_all()), 1 << g.seed_len)
        result = FoolingGap(pseudo, uniform_acceptance(fn, n), True)
        logger.log(INFO2, f"Exhaustive fooling gap of {g!r}: {result.gap}")
        return result

    if rng is None:
        rng = make_rng(seed, "fooling_gap")
    seeds = rng.integers(0, 1 << g.seed_len, size=samples, dtype=int64)
    pseudo = _accepted(fn, g.expand_array(seeds)) / samples
    one_sided = sqrt(log(2 / CONFIDENCE_ALPHA) / (2 * samples))
    if n <= EXHAUSTIVE_OUTPUT_BITS:
        uniform, half_width = uniform_acceptance(fn, n), one_sided
    else:
        xs = rng.integers(0, 1 << n, size=samples, dtype=int64)
        uniform, half_width = _accepted(fn, xs) / samples, 2 * one_sided
    result = FoolingGap(pseudo, float(uniform), False, half_width, samples)
    logger.log(INFO2, f"Sampled fooling gap of {g!r}: {result!r} over {samples} samples")
    return result

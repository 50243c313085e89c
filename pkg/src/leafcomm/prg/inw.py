"""Extractor-based generator fooling k-party number-in-hand protocols.

Level 0 outputs its r_0 = n/k seed bits as they are. Level i splits its seed into a
(r_{i-1} bits) and z (the extractor seed), and outputs G_{i-1}(a) followed by
G_{i-1}(Ext(a, z)). Party j reads the j-th block of n/k output bits.
"""

from __future__ import annotations

from fractions import Fraction
from math import log2
from typing import TYPE_CHECKING, Any

from ..core.exception import ValidationError
from ..tools.logger import INFO1, logger
from ..tools.rational import parse_rational
from .extractor import ExtractorConfig
from .generator import Generator

if TYPE_CHECKING:
    from numpy import int64
    from numpy.typing import NDArray

    from .extractor import ExtractorBackend


def entropy_requirement(r: int, dprime: int, t: int, delta: Fraction) -> float:
    """kappa_i = r_i - D' - 2t - log2(1/delta)."""
    return r - dprime - 2 * t - log2(1 / delta)


class InwGenerator(Generator):
    __slots__ = ("_k", "_levels", "_dprime", "_delta", "_delta_prime", "_extractors", "_ranks")
    kind = "inw"
    _k: int
    _levels: int
    _dprime: int
    _delta: Fraction
    _delta_prime: Fraction
    _extractors: tuple[ExtractorConfig, ...]
    _ranks: tuple[int, ...]

    def __init__(
        self,
        n: int,
        k: int,
        dprime: int,
        delta: Fraction | str,
        backend: ExtractorBackend = "toeplitz_hash",
        *,
        passthrough: bool = False,
    ):
        delta = parse_rational(delta)
        if k < 2 or k & (k - 1):
            raise ValidationError(f"Number of parties should be a power of two >= 2, got {k}")
        if n < k or n % k:
            raise ValidationError(f"Output length {n} should be a multiple of k={k}")
        if dprime < 0:
            raise ValidationError(f"Protocol cost should be nonnegative, got {dprime}")
        if not 0 < delta < 1:
            raise ValidationError(f"Fooling error should be within (0, 1), got {delta}")
        t = k.bit_length() - 1
        delta_prime = delta / (3**t * (1 << dprime))

        ranks, extractors = [n // k], []
        for _ in range(t):
            r = ranks[-1]
            config = ExtractorConfig(
                r,
                entropy_requirement(r, dprime, t, delta),
                delta_prime,
                backend,
                passthrough=passthrough,
            )
            extractors.append(config)
            ranks.append(r + config.d)
        super().__init__(ranks[-1], n)
        self._k = k
        self._levels = t
        self._dprime = dprime
        self._delta = delta
        self._delta_prime = delta_prime
        self._extractors = tuple(extractors)
        self._ranks = tuple(ranks)
        logger.log(
            INFO1,
            f"INW generator: n={n}, k={k}, D'={dprime}, delta={delta}, seed length {ranks[-1]} "
            f"(r_i={list(ranks)})",
        )

    @property
    def k(self) -> int:
        return self._k

    @property
    def levels(self) -> int:
        return self._levels

    @property
    def delta_prime(self) -> Fraction:
        return self._delta_prime

    @property
    def ranks(self) -> tuple[int, ...]:
        return self._ranks

    @property
    def extractors(self) -> tuple[ExtractorConfig, ...]:
        return self._extractors

    @property
    def hybrid_bound(self) -> Fraction:
        """3^t delta': the gap guaranteed against products of per-party functions."""
        return 3**self._levels * self._delta_prime

    @property
    def protocol_bound(self) -> Fraction:
        """delta: the gap guaranteed against protocols of cost D'."""
        return self._delta

    @property
    def params(self) -> dict[str, Any]:
        return {
            "k": self._k,
            "t": self._levels,
            "dprime": self._dprime,
            "delta": self._delta,
            "delta_prime": self._delta_prime,
            "ranks": list(self._ranks),
            "extractors": [config.to_dict() for config in self._extractors],
            "hybrid_bound": self.hybrid_bound,
        }

    def _expand_level(self, level: int, seed: int) -> int:
        if level == 0:
            return seed
        r = self._ranks[level - 1]
        a = seed & ((1 << r) - 1)
        z = seed >> r
        extracted = self._extractors[level - 1].extract(a, z)
        half = self._ranks[0] << (level - 1)
        return self._expand_level(level - 1, a) | self._expand_level(level - 1, extracted) << half

    def _expand_level_array(self, level: int, seeds: NDArray[int64]) -> NDArray[int64]:
        if level == 0:
            return seeds
        r = self._ranks[level - 1]
        a = seeds & ((1 << r) - 1)
        extracted = self._extractors[level - 1].extract_array(a, seeds >> r)
        half = self._ranks[0] << (level - 1)
        left = self._expand_level_array(level - 1, a)
        return left | self._expand_level_array(level - 1, extracted) << half

    def _expand(self, seed: int) -> int:
        return self._expand_level(self._levels, seed)

    def _expand_array(self, seeds: NDArray[int64]) -> NDArray[int64]:
        return self._expand_level_array(self._levels, seeds)


def inw_expand(
    seed: int,
    n: int,
    k: int,
    dprime: int,
    delta: Fraction | str,
    backend: ExtractorBackend = "toeplitz_hash",
    *,
    passthrough: bool = False,
) -> int:
    return InwGenerator(n, k, dprime, delta, backend, passthrough=passthrough).expand(seed)

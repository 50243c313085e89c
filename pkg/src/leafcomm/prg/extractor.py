"""Seeded extractors used between the levels of the INW generator.

toeplitz_hash
    Universal hashing by a Toeplitz matrix. By the leftover hash lemma the hash of a
    source with min-entropy kappa is delta'-close to uniform on kappa - 2 log(1/delta')
    bits. The remaining output positions are filled with seed bits, which are uniform and
    independent of the source. The seed has at least m + hashed - 1 bits, so an INW level
    built on it never outputs fewer bits than its seed. Without a margin of one bit the
    configuration is rejected; `passthrough=True` outputs the seed itself instead.
small_bias_xor
    The source XORed with a small-bias string of the output length. A source of
    deficiency Delta gets within delta' of uniform from a 2 delta' 2^(-Delta/2)-biased
    string, at a seed of 2 ceil(log2(r / bias)) bits.
"""

from __future__ import annotations

from fractions import Fraction
from math import ceil, floor, log2
from typing import TYPE_CHECKING, Any, Literal

from numpy import abs as np_abs
from numpy import bincount, float64, int64, zeros

from ..core.exception import CapacityError, ExtractorError, ValidationError
from ..tools.bits import popcount_array
from ..tools.logger import INFO2, logger
from ..tools.rational import parse_rational
from .gf2 import FIELD_MAX_BITS
from .small_bias import SmallBiasGenerator

if TYPE_CHECKING:
    from collections.abc import Sequence

    from numpy.typing import NDArray

ExtractorBackend = Literal["toeplitz_hash", "small_bias_xor"]
EXTRACTOR_BACKENDS = ("toeplitz_hash", "small_bias_xor")
EXTRACTION_MAX_BITS = 24


def _mask(bits: int) -> int:
    return (1 << bits) - 1


class ExtractorConfig:
    """A (kappa, delta') extractor from m bits with a d-bit seed to out_len bits."""

    __slots__ = ("m", "d", "kappa", "delta_prime", "backend", "out_len", "hashed", "_xor")
    m: int
    d: int
    kappa: float
    delta_prime: Fraction
    backend: ExtractorBackend
    out_len: int
    hashed: int
    _xor: SmallBiasGenerator | None

    def __init__(
        self,
        m: int,
        kappa: float,
        delta_prime: Fraction | str,
        backend: ExtractorBackend = "toeplitz_hash",
        out_len: int | None = None,
        *,
        passthrough: bool = False,
    ):
        delta_prime = parse_rational(delta_prime)
        if m < 1:
            raise ValidationError(f"Source length should be positive, got {m}")
        if not 0 < delta_prime < 1:
            raise ValidationError(f"Extraction error should be within (0, 1), got {delta_prime}")
        self.m = m
        self.kappa = kappa
        self.delta_prime = delta_prime
        self.backend = backend
        self.out_len = m if out_len is None else out_len
        self._xor = None
        match backend:
            case "toeplitz_hash":
                self._build_toeplitz(passthrough)
            case "small_bias_xor":
                self._build_small_bias_xor()
            case _:
                raise ValidationError(
                    f"Unknown extractor backend {backend}, expect one of {EXTRACTOR_BACKENDS}"
                )
        logger.log(
            INFO2,
            f"Extractor {backend}: m={m}, kappa={kappa:.3g}, delta'={delta_prime}, "
            f"d={self.d}, hashed={self.hashed}",
        )

    @property
    def margin(self) -> float:
        """kappa - 2 log2(1/delta'): the number of bits the leftover hash lemma certifies."""
        return self.kappa - 2 * log2(1 / self.delta_prime)

    def _build_toeplitz(self, passthrough: bool) -> None:
        hashed = min(self.out_len, max(0, floor(self.margin)))
        if hashed < 1:
            if not passthrough:
                raise ExtractorError(
                    f"Toeplitz hashing certifies no output bits for m={self.m}: kappa="
                    f"{self.kappa:.3g} needs {1 - self.margin:.3g} more bits over "
                    f"2 log2(1/delta')={2 * log2(1 / self.delta_prime):.3g}",
                    margin=1 - self.margin,
                )
            self.hashed = 0
            self.d = self.out_len
            return
        self.hashed = hashed
        self.d = max(self.m + hashed - 1, self.out_len - hashed)

    def _build_small_bias_xor(self) -> None:
        if self.out_len != self.m:
            raise ValidationError("XOR extraction needs the output length to equal the source")
        deficiency = max(0.0, self.m - self.kappa)
        bias_log = log2(2 * self.delta_prime) - deficiency / 2
        ell = max(1, ceil(log2(self.out_len) - bias_log))
        if ell > FIELD_MAX_BITS:
            raise ExtractorError(
                f"Small-bias extraction needs GF(2^{ell})", margin=ell - FIELD_MAX_BITS
            )
        self._xor = SmallBiasGenerator(self.out_len, ell=ell)
        self.hashed = self.out_len
        self.d = self._xor.seed_len

    def extract(self, source: int, seed: int) -> int:
        if self.backend == "small_bias_xor":
            return source ^ self._xor.expand(seed)
        if not self.hashed:
            return seed & _mask(self.out_len)
        window = _mask(self.m)
        hashed = 0
        for i in range(self.hashed):
            hashed |= ((seed >> i & window & source).bit_count() & 1) << i
        return hashed | (seed & _mask(self.out_len - self.hashed)) << self.hashed

    def extract_array(self, sources: NDArray[int64], seeds: NDArray[int64]) -> NDArray[int64]:
        """Vectorized `extract` over int64 arrays of sources and seeds."""
        if self.backend == "small_bias_xor":
            return sources ^ self._xor.expand_array(seeds)
        if not self.hashed:
            return seeds & _mask(self.out_len)
        window = _mask(self.m)
        hashed = zeros(len(sources), dtype=int64)
        for i in range(self.hashed):
            hashed |= (popcount_array((seeds >> i) & window & sources) & 1) << i
        return hashed | (seeds & _mask(self.out_len - self.hashed)) << self.hashed

    def __call__(self, source: int, seed: int) -> int:
        return self.extract(source, seed)

    def to_dict(self) -> dict[str, Any]:
        return {
            "backend": self.backend,
            "m": self.m,
            "d": self.d,
            "kappa": round(self.kappa, 6),
            "delta_prime": self.delta_prime,
            "out_len": self.out_len,
            "hashed": self.hashed,
        }

    def __repr__(self) -> str:
        return f"ExtractorConfig({self.to_dict()})"


def extraction_distance(config: ExtractorConfig, source: Sequence[int]) -> float:
    """Statistical distance of Ext(X, Z) from uniform for X flat on `source`, Z uniform."""
    if config.d + config.out_len > EXTRACTION_MAX_BITS:
        raise CapacityError(
            f"Exhaustive extraction supports d + out_len up to {EXTRACTION_MAX_BITS}",
            size=config.d + config.out_len,
        )
    outputs = [config.extract(int(x), z) for x in source for z in range(1 << config.d)]
    counts = bincount(outputs, minlength=1 << config.out_len).astype(float64)
    probabilities = counts / len(outputs)
    return float(np_abs(probabilities - 1 / (1 << config.out_len)).sum() / 2)

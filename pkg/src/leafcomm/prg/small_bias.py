"""Small-bias generator by powering over GF(2^ell).

The seed is a pair of field elements (a, b), a in the low ell bits. Output bit j is the
inner product mod 2 of a^(j+1) and b. A nonempty parity of the output equals the inner
product of p(a) and b for a nonzero polynomial p of degree at most n without a constant
term, so its bias is Pr_a[p(a) = 0] <= n / 2^ell.
"""

from __future__ import annotations

from fractions import Fraction
from typing import TYPE_CHECKING, Any

from numba import njit
from numpy import abs as np_abs
from numpy import bincount, empty, int64

from ..core.exception import CapacityError, ValidationError
from ..polynomial.transforms import walsh
from ..tools.logger import INFO1, INFO3, logger
from ..tools.rational import parse_rational
from .generator import SEED_EXHAUSTIVE_BITS, Generator
from .gf2 import (
    FIELD_MAX_BITS,
    KERNEL_MAX_BITS,
    _gf_mul_kernel,
    _parity64,
    gf_mul,
    irreducible_modulus,
)

if TYPE_CHECKING:
    from numpy.typing import NDArray

BIAS_MAX_VARS = 20


def small_bias_ell(n: int, delta: Fraction | str) -> int:
    """ceil(log2(n / delta)), at least 1."""
    delta = parse_rational(delta)
    if not 0 < delta <= 1:
        raise ValidationError(f"Bias should be within (0, 1], got {delta}")
    ell = 1
    while delta * (1 << ell) < n:
        ell += 1
    if ell > FIELD_MAX_BITS:
        raise ValidationError(
            f"Field GF(2^{ell}) exceeds the supported GF(2^{FIELD_MAX_BITS})", details={"ell": ell}
        )
    return ell


@njit(cache=True)
def _expand_all(ell: int, modulus: int, n: int, result: NDArray[int64]) -> None:
    powers = empty(n, dtype=int64)
    for a in range(1 << ell):
        power = a
        for j in range(n):
            powers[j] = power
            power = _gf_mul_kernel(power, a, ell, modulus)
        for b in range(1 << ell):
            y = 0
            for j in range(n):
                if _parity64(powers[j] & b):
                    y |= 1 << j
            result[b << ell | a] = y


@njit(cache=True)
def _expand_seeds(
    ell: int, modulus: int, n: int, seeds: NDArray[int64], result: NDArray[int64]
) -> None:
    low = (1 << ell) - 1
    for i in range(len(seeds)):
        a = seeds[i] & low
        b = seeds[i] >> ell
        power, y = a, 0
        for j in range(n):
            if _parity64(power & b):
                y |= 1 << j
            power = _gf_mul_kernel(power, a, ell, modulus)
        result[i] = y


class SmallBiasGenerator(Generator):
    __slots__ = ("_ell", "_modulus", "_delta")
    kind = "small_bias"
    _ell: int
    _modulus: int
    _delta: Fraction | None

    def __init__(self, n: int, delta: Fraction | str | None = None, *, ell: int | None = None):
        if (delta is None) == (ell is None):
            raise ValidationError("Small-bias generator needs exactly one of delta and ell")
        if n < 1:
            raise ValidationError(f"Output length should be positive, got {n}")
        if ell is None:
            delta = parse_rational(delta)
            ell = small_bias_ell(n, delta)
        elif not 1 <= ell <= FIELD_MAX_BITS:
            raise ValidationError(f"Field degree should be within [1, {FIELD_MAX_BITS}], got {ell}")
        super().__init__(2 * ell, n)
        self._ell = ell
        self._modulus = irreducible_modulus(ell)
        self._delta = delta
        logger.log(INFO3, f"Small-bias generator: n={n}, ell={ell}, modulus={self._modulus:#x}")

    @property
    def ell(self) -> int:
        return self._ell

    @property
    def bias_bound(self) -> Fraction:
        return Fraction(self._out_len, 1 << self._ell)

    @property
    def params(self) -> dict[str, Any]:
        return {
            "delta": self._delta,
            "ell": self._ell,
            "modulus": hex(self._modulus),
            "bias_bound": self.bias_bound,
        }

    def _expand(self, seed: int) -> int:
        ell = self._ell
        a = seed & ((1 << ell) - 1)
        b = seed >> ell
        power, y = a, 0
        for j in range(self._out_len):
            if (power & b).bit_count() & 1:
                y |= 1 << j
            power = gf_mul(power, a, ell)
        return y

    def expand_all(self) -> NDArray[int64]:
        self._check_exhaustive()
        result = empty(1 << self._seed_len, dtype=int64)
        _expand_all(self._ell, self._modulus, self._out_len, result)
        return result

    def _expand_array(self, seeds: NDArray[int64]) -> NDArray[int64]:
        if self._ell > KERNEL_MAX_BITS:
            return super()._expand_array(seeds)
        result = empty(len(seeds), dtype=int64)
        _expand_seeds(self._ell, self._modulus, self._out_len, seeds, result)
        return result


def parity_biases(outputs: NDArray[int64], n: int) -> NDArray:
    """|E[(-1)^<S, y>]| numerators for every mask S over the given output multiset."""
    if n > BIAS_MAX_VARS:
        raise CapacityError(f"Bias sweep supports up to {BIAS_MAX_VARS} outputs", size=n)
    histogram = bincount(outputs, minlength=1 << n).astype(int64)
    return np_abs(walsh(histogram))


def max_parity_bias(ell: int, n: int) -> Fraction:
    """Largest bias of a nonempty parity over all 2^(2 ell) seeds."""
    if 2 * ell > SEED_EXHAUSTIVE_BITS:
        raise CapacityError(f"Bias sweep supports ell up to {SEED_EXHAUSTIVE_BITS // 2}", size=ell)
    generator = SmallBiasGenerator(n, ell=ell)
    biases = parity_biases(generator.expand_all(), n)
    worst = Fraction(int(biases[1:].max()) if n else 0, 1 << generator.seed_len)
    logger.log(
        INFO1, f"Small-bias ell={ell}, n={n}: max bias {worst} (bound {generator.bias_bound})"
    )
    return worst


def small_bias_expand(seed: int, n: int, delta: Fraction | str) -> int:
    return SmallBiasGenerator(n, delta).expand(seed)

"""Arithmetic in GF(2^ell) with elements held as integers, bit i being the coefficient of x^i."""

from __future__ import annotations

from functools import cache
from itertools import combinations

from numba import njit

from ..core.exception import ValidationError

FIELD_MAX_BITS = 64
KERNEL_MAX_BITS = 62


def clmul(a: int, b: int) -> int:
    """Carry-less product of two polynomials over GF(2)."""
    result = 0
    while b:
        if b & 1:
            result ^= a
        a <<= 1
        b >>= 1
    return result


def poly_mod(a: int, modulus: int) -> int:
    degree = modulus.bit_length() - 1
    while a.bit_length() - 1 >= degree:
        a ^= modulus << (a.bit_length() - 1 - degree)
    return a


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a


def is_irreducible(modulus: int) -> bool:
    """Ben-Or test: gcd(f, x^(2^i) - x) = 1 for every i <= deg(f)/2."""
    degree = modulus.bit_length() - 1
    if degree < 1:
        return False
    if degree == 1:
        return True
    if not modulus & 1:
        return False
    power = 0b10
    for _ in range(degree // 2):
        power = poly_mod(clmul(power, power), modulus)
        if poly_gcd(modulus, power ^ 0b10) != 1:
            return False
    return True


@cache
def irreducible_modulus(ell: int) -> int:
    """The lowest-weight irreducible polynomial of degree ell, trinomials first.

    Among polynomials of equal weight the lexicographically smallest exponent tuple wins,
    so the modulus of every degree is fixed once and for all.
    """
    if not 1 <= ell <= FIELD_MAX_BITS:
        raise ValidationError(f"Field degree should be within [1, {FIELD_MAX_BITS}], got {ell}")
    if ell == 1:
        return 0b11
    top = 1 << ell | 1
    for middle in range(1, ell):
        candidate = top | 1 << middle
        if is_irreducible(candidate):
            return candidate
    for exponents in combinations(range(1, ell), 3):
        candidate = top | sum(1 << e for e in exponents)
        if is_irreducible(candidate):
            return candidate
    raise ValidationError(f"No irreducible trinomial or pentanomial of degree {ell}")


def gf_mul(a: int, b: int, ell: int) -> int:
    return poly_mod(clmul(a, b), irreducible_modulus(ell))


def gf_pow(a: int, exponent: int, ell: int) -> int:
    modulus = irreducible_modulus(ell)
    result = 1
    while exponent:
        if exponent & 1:
            result = poly_mod(clmul(result, a), modulus)
        a = poly_mod(clmul(a, a), modulus)
        exponent >>= 1
    return result


@njit(cache=True)
def _gf_mul_kernel(a: int, b: int, ell: int, modulus: int) -> int:
    result = 0
    top = 1 << ell
    while b:
        if b & 1:
            result ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= modulus
    return result


@njit(cache=True)
def _parity64(value: int) -> int:
    parity = 0
    while value:
        value &= value - 1
        parity ^= 1
    return parity

from __future__ import annotations

from zlib import crc32

from numpy.random import PCG64, Generator, SeedSequence

DEFAULT_SEED = 20240229


def seed_sequence(seed: int | None, *purpose: str | int) -> SeedSequence:
    """Splittable stream for a named purpose: the same (seed, purpose) gives the same stream."""
    key = tuple(p if isinstance(p, int) else crc32(p.encode()) for p in purpose)
    return SeedSequence(DEFAULT_SEED if seed is None else seed, spawn_key=key)


def make_rng(seed: int | None, *purpose: str | int) -> Generator:
    return Generator(PCG64(seed_sequence(seed, *purpose)))


def spawn_rngs(rng: Generator, count: int) -> list[Generator]:
    return rng.spawn(count)


def random_bits(rng: Generator, nbits: int) -> int:
    """Uniform integer of `nbits` bits, arbitrary length."""
    if nbits <= 0:
        return 0
    words = rng.integers(0, 1 << 32, size=(nbits + 31) // 32, dtype="u8")
    value = 0
    for word in words[::-1]:
        value = (value << 32) | int(word)
    return value & ((1 << nbits) - 1)

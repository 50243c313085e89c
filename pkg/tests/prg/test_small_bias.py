from fractions import Fraction

from numpy import arange, int64
from numpy.random import default_rng
from pytest import mark, raises

from leafcomm.core import CapacityError, ValidationError, XorMask
from leafcomm.prg import (
    SmallBiasGenerator,
    fooling_gap,
    max_parity_bias,
    parity_biases,
    small_bias_ell,
    small_bias_expand,
)


def test_small_bias_ell_01():
    assert small_bias_ell(8, "1/8") == 6
    assert small_bias_ell(1, 1) == 1
    assert small_bias_ell(3, "1/2") == 3
    for delta in (0, "3/2"):
        with raises(ValidationError):
            small_bias_ell(8, delta)


def test_SmallBiasGenerator_01():
    g = SmallBiasGenerator(8, "1/8")
    assert g.ell == 6
    assert g.seed_len == 12
    assert g.out_len == 8
    assert g.bias_bound == Fraction(1, 8)
    assert g.params["delta"] == Fraction(1, 8)
    assert small_bias_expand(123, 8, "1/8") == g.expand(123)
    out = g.expand(123)
    assert g.expand_bits(123).tolist() == [(out >> i) & 1 for i in range(8)]


def test_SmallBiasGenerator_02_degenerate_seeds():
    g = SmallBiasGenerator(8, ell=4)
    # a = 0 gives the zero string, a = 1 repeats <1, b>
    for b in range(16):
        assert g.expand(b << 4) == 0
        assert g.expand(1 | b << 4) == (0xFF if b & 1 else 0)


@mark.parametrize("n,ell", ((8, 4), (5, 3), (12, 6)))
def test_SmallBiasGenerator_03_kernel(n: int, ell: int):
    g = SmallBiasGenerator(n, ell=ell)
    outputs = g.expand_all()
    assert outputs.tolist() == [g.expand(seed) for seed in range(1 << g.seed_len)]
    seeds = default_rng(3).integers(0, 1 << g.seed_len, size=50, dtype=int64)
    assert g.expand_array(seeds).tolist() == outputs[seeds].tolist()


@mark.parametrize("n,ell", ((8, 4), (6, 5), (10, 7)))
def test_max_parity_bias_01(n: int, ell: int):
    bound = SmallBiasGenerator(n, ell=ell).bias_bound
    worst = max_parity_bias(ell, n)
    assert 0 < worst <= bound


def test_parity_biases_01():
    g = SmallBiasGenerator(6, ell=5)
    biases = parity_biases(g.expand_all(), 6)
    assert biases[0] == 1 << g.seed_len
    for mask in range(1, 64):
        gap = fooling_gap(g, XorMask(mask, n=6))
        assert gap.exact
        assert 2 * gap.gap == Fraction(int(biases[mask]), 1 << g.seed_len)
        assert gap.within(g.bias_bound / 2)


def test_SmallBiasGenerator_04_invalid():
    invalid = (((8,), {}), ((8, "1/4"), {"ell": 3}), ((0, "1/4"), {}), ((8,), {"ell": 0}))
    for args, kwargs in invalid:
        with raises(ValidationError):
            SmallBiasGenerator(*args, **kwargs)
    g = SmallBiasGenerator(4, ell=3)
    with raises(ValidationError):
        g.expand(1 << 6)
    with raises(ValidationError):
        g.expand_array(arange(-1, 3))
    with raises(CapacityError):
        parity_biases(arange(4), 21)
    with raises(CapacityError):
        max_parity_bias(13, 4)
    with raises(CapacityError):
        SmallBiasGenerator(4, ell=13).expand_all()

from numpy import array, int64
from pytest import mark

from leafcomm.tools.bits import (
    all_inputs,
    bits_matrix,
    pack_bits,
    parity_array,
    popcount_array,
    unpack_bits,
)


def test_popcount_array_01():
    values = array([0, 1, 3, 0b1011, (1 << 40) - 1], dtype=int64)
    assert popcount_array(values).tolist() == [0, 1, 2, 3, 40]


def test_parity_array_01():
    xs = all_inputs(3)
    assert parity_array(xs, 0b101).tolist() == [0, 1, 0, 1, 1, 0, 1, 0]
    assert parity_array(xs, 0).tolist() == [0] * 8
    assert parity_array(xs, 0b111).tolist() == [bin(x).count("1") & 1 for x in range(8)]


def test_bits_matrix_01():
    matrix = bits_matrix(array([0b110, 0b001], dtype=int64), 4)
    assert matrix.tolist() == [[0, 1, 1, 0], [1, 0, 0, 0]]


@mark.parametrize("value,size", ((0, 1), (0b1011, 4), (0b1011, 13), ((1 << 70) + 5, 71)))
def test_unpack_bits_01(value: int, size: int):
    bits = unpack_bits(value, size)
    assert len(bits) == size
    assert bits.tolist() == [(value >> i) & 1 for i in range(size)]
    assert pack_bits(bits) == value

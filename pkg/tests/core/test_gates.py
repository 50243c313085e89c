from numpy import array, int64
from pytest import mark, raises

from leafcomm.core import CapacityError, Ltf, Sym, Table, ValidationError, XorMask
from leafcomm.tools.bits import all_inputs


def _bruteforce(gate, n: int) -> list[int]:
    return [gate(x) for x in range(1 << n)]


@mark.parametrize("negated", (False, True))
@mark.parametrize("mask", (0b1, 0b1011, 0b1111))
def test_XorMask_01(mask: int, negated: bool):
    gate = XorMask(mask, negated, n=4)
    expected = [((x & mask).bit_count() & 1) ^ negated for x in range(16)]

    assert gate.evaluate(all_inputs(4)).tolist() == expected
    assert _bruteforce(gate, 4) == expected
    assert gate.support() == mask
    assert gate.kind == "xor"


def test_XorMask_02_unparse():
    assert XorMask(0b100, n=3).unparse() == "(var 3)"
    assert XorMask(0b101, n=3).unparse() == "(xor 1 3)"
    assert XorMask(0b1, True, n=3).unparse() == "(nxor 1)"


def test_XorMask_03_invalid():
    with raises(ValidationError):
        XorMask(0b1000, n=3)
    with raises(ValidationError):
        XorMask(-1, n=3)


@mark.parametrize(
    "weights,threshold",
    (
        ((1, 1, 1), 2),
        ((3, -2, 1, 4), 1),
        ((-1, -1), 0),
        ((2, 0, 0), 5),
    ),
)
def test_Ltf_01(weights, threshold):
    n = len(weights)
    gate = Ltf(weights, threshold, n=n)
    expected = [
        int(sum(w for i, w in enumerate(weights) if x >> i & 1) >= threshold) for x in range(1 << n)
    ]

    assert gate.evaluate(all_inputs(n)).tolist() == expected
    assert _bruteforce(gate, n) == expected
    assert gate.support() == sum(1 << i for i, w in enumerate(weights) if w)


def test_Ltf_02_padding():
    gate = Ltf((1,), 1, n=3)
    assert gate.weights == (1, 0, 0)
    assert gate.unparse() == "(ltf (1 0 0) 1)"


def test_Sym_01():
    majority = Sym((0, 0, 1, 1), n=3)
    xs = all_inputs(3)
    assert majority.evaluate(xs).tolist() == [int(x.bit_count() >= 2) for x in range(8)]
    assert majority.support() == 0b111
    assert Sym((1, 1, 1), n=2).support() == 0


@mark.parametrize("spectrum", ((0, 1), (0, 2, 1, 0)))
def test_Sym_02_invalid(spectrum):
    with raises(ValidationError):
        Sym(spectrum, n=3)


def test_Table_01():
    values = [0, 1, 1, 0, 1, 0, 0, 1]
    gate = Table.from_values(values, 3)

    assert gate.evaluate(all_inputs(3)).tolist() == values
    assert _bruteforce(gate, 3) == values
    assert gate.bits == 0b10010110
    assert gate.support() == 0b111
    assert gate == Table(0b10010110, n=3)
    assert gate.unparse() == "(table 96)"


def test_Table_02_support():
    # x2 only
    gate = Table.from_values([0, 0, 1, 1], 2)
    assert gate.support() == 0b10


def test_Table_03_invalid():
    with raises(ValidationError):
        Table(1 << 8, n=3)
    with raises(ValidationError):
        Table.from_values([0, 1, 1], 2)
    with raises(CapacityError):
        Table(0, n=25)


def test_LeafGate_01_equality():
    assert XorMask(3, n=2) == XorMask(3, n=2)
    assert XorMask(3, n=2) != XorMask(3, n=3)
    assert XorMask(3, n=2) != XorMask(3, True, n=2)
    assert len({Ltf((1, 1), 1, n=2), Ltf((1, 1), 1, n=2), Sym((0, 1, 1), n=2)}) == 2


def test_LeafGate_02_table():
    gate = Ltf((1, 2), 2, n=2)
    assert gate.table().tolist() == [0, 0, 1, 1]
    assert gate.evaluate(array([3, 1], dtype=int64)).tolist() == [1, 0]

from numpy import int64
from numpy.random import default_rng
from pytest import mark, raises

from leafcomm.core import Ltf, Sym, Table, ValidationError, XorMask
from leafcomm.protocols import (
    ConstantProtocol,
    ExplicitProtocol,
    SymNihProtocol,
    TrivialProtocol,
    TwoPartyView,
    XorProtocol,
    as_two_party,
    depth,
    deterministic_protocol,
    enumerate_leaves,
    evaluate_protocol,
    nih_widths,
    random_protocol,
    rectangle_membership,
    sym_nih_protocol,
    to_explicit,
    two_party_widths,
    xor_protocol,
)
from leafcomm.tools.bits import all_inputs

GATES = (
    XorMask(0b10110, n=5),
    XorMask(0b1, True, n=5),
    Ltf((3, -1, 2, 2, -4), 1, n=5),
    Sym((1, 0, 0, 1, 1, 0, 1), n=6),
    Table.from_values([1, 0, 0, 1, 1, 1, 0, 1], 3),
)


def _check_rectangles(p, gate):
    rectangles = enumerate_leaves(p)
    assert sum(rect.size for rect in rectangles) == 1 << gate.n
    for rect in rectangles:
        assert len(rect.transcript) <= p.cost
        # monochromatic
        for x in range(1 << gate.n):
            parts = p.parts(x)
            if rect.contains(parts):
                assert gate(x) == rect.output
                assert p.run(x)[0] == rect.transcript


def test_widths_01():
    assert two_party_widths(5) == (3, 2)
    assert nih_widths(8, 4) == (2, 2, 2, 2)
    with raises(ValidationError):
        nih_widths(7, 2)


@mark.parametrize("gate", GATES)
def test_deterministic_protocol_01(gate):
    p = deterministic_protocol(gate)
    xs = all_inputs(gate.n)

    assert evaluate_protocol(p, xs).tolist() == gate.evaluate(xs).tolist()
    assert all(p(int(x)) == gate(int(x)) for x in xs)
    assert depth(p) <= p.cost
    _check_rectangles(p, gate)


def test_XorProtocol_01():
    p = XorProtocol(XorMask(0b1011, n=4))
    assert p.cost == 2
    assert depth(p) == 2
    with raises(ValidationError):
        XorProtocol(Ltf((1, 1), 1, n=2))
    assert xor_protocol(XorMask(0b11, n=2)).cost == 2
    # one rectangle per transcript of the two parity bits
    assert len(enumerate_leaves(xor_protocol(XorMask(0b11, n=2)))) == 4


@mark.parametrize("k,word", ((1, 4), (2, 3), (4, 2), (8, 1)))
def test_SymNihProtocol_01(k: int, word: int):
    majority = Sym((0,) * 5 + (1,) * 4, n=8)
    p = SymNihProtocol(majority, k)
    xs = all_inputs(8)

    assert p.parties == k
    assert p.word == word
    assert p.cost == k * word
    assert evaluate_protocol(p, xs).tolist() == majority.evaluate(xs).tolist()
    assert sym_nih_protocol(majority, k).cost == p.cost


def test_TrivialProtocol_01():
    gate = Ltf((1, 2, -3, 1, 1), 2, n=5)
    p = TrivialProtocol(gate)
    assert p.widths == (3, 2)
    assert p.cost == 4
    three = TrivialProtocol(Table.from_values([0, 1] * 32, 6), (2, 2, 2))
    assert three.cost == 5
    xs = all_inputs(6)
    assert evaluate_protocol(three, xs).tolist() == (xs & 1).tolist()


def test_TwoPartyView_01():
    gate = Sym((1, 0, 1, 0, 1, 0, 1, 0, 1), n=8)
    inner = SymNihProtocol(gate, 4)
    view = as_two_party(inner)
    xs = all_inputs(8)

    assert isinstance(view, TwoPartyView)
    assert view.widths == (4, 4)
    assert view.cost == inner.cost
    assert evaluate_protocol(view, xs).tolist() == gate.evaluate(xs).tolist()
    _check_rectangles(view, gate)
    assert as_two_party(view) is view
    with raises(ValidationError):
        TwoPartyView(SymNihProtocol(Sym((0, 1, 0, 1), n=3), 3))


def test_ConstantProtocol_01():
    p = ConstantProtocol(4, 1)
    assert p.cost == 0
    assert evaluate_protocol(p, all_inputs(4)).tolist() == [1] * 16
    assert len(enumerate_leaves(p)) == 1


def test_deterministic_protocol_02_parties():
    p = deterministic_protocol(XorMask(0b1111, n=4), parties=4)
    assert isinstance(p, TrivialProtocol)
    assert p.parties == 4
    with raises(ValidationError):
        deterministic_protocol(XorMask(0b111, n=3), parties=4)


def test_rectangle_membership_01():
    p = XorProtocol(XorMask(0b0110, n=4))
    for rect in enumerate_leaves(p):
        for side, values in enumerate(rect.side_sets):
            for value in range(1 << p.widths[side]):
                expected = int(value in values.tolist())
                assert rectangle_membership(p, side, value, rect.transcript) == expected
    with raises(ValidationError):
        rectangle_membership(p, 0, 0, "01x")
    with raises(ValidationError):
        rectangle_membership(p, 0, 0, "011")


def test_enumerate_leaves_01_domains():
    p = XorProtocol(XorMask(0b1111, n=4))
    rectangles = enumerate_leaves(p, [[0, 1], [3]])
    assert sum(rect.size for rect in rectangles) == 2
    with raises(ValidationError):
        enumerate_leaves(p, [[0]])


@mark.parametrize("gate", GATES)
def test_to_explicit_01(gate):
    p = deterministic_protocol(gate)
    explicit = to_explicit(p)
    xs = all_inputs(gate.n)

    assert evaluate_protocol(explicit, xs).tolist() == evaluate_protocol(p, xs).tolist()
    restored = ExplicitProtocol.from_json(explicit.to_json())
    assert restored.nodes == explicit.nodes
    assert restored.leaves == explicit.leaves
    assert to_explicit(explicit) is explicit


def test_random_protocol_01():
    rng = default_rng(11)
    p = random_protocol(8, 3, rng)
    assert p.cost == 3
    assert len(p.nodes) == 7
    assert len(p.leaves) == 8
    assert depth(p) <= 3
    xs = all_inputs(8).astype(int64)
    assert set(evaluate_protocol(p, xs).tolist()) <= {0, 1}
    with raises(ValidationError):
        random_protocol(8, 17, rng)


def test_ExplicitProtocol_01_invalid():
    with raises(ValidationError):
        ExplicitProtocol(2, {}, {})
    with raises(ValidationError):
        ExplicitProtocol(2, {"": (2, 0)}, {"0": 0, "1": 1})
    with raises(ValidationError):
        ExplicitProtocol(2, {"": (0, 0b100)}, {"0": 0, "1": 1})
    with raises(ValidationError):
        ExplicitProtocol.from_dict({"n": 2, "nodes": [{"owner": 0}], "leaves": []})

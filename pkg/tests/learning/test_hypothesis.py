from fractions import Fraction

from numpy import int64
from numpy.random import default_rng
from pytest import raises

from leafcomm.core import CapacityError, SampleBudgetError, ValidationError, parse_formula
from leafcomm.hardness import Distribution
from leafcomm.learning import (
    ExampleOracle,
    MajorityVote,
    SignedParity,
    weak_learn_arrays,
    weak_learn_parity,
)
from leafcomm.tools.bits import all_inputs


def test_SignedParity_01():
    p = SignedParity(0b101)
    q = SignedParity(0b101, True)
    xs = all_inputs(3)
    assert [p(x) for x in range(8)] == [0, 1, 0, 1, 1, 0, 1, 0]
    assert (p.evaluate(xs) ^ q.evaluate(xs)).tolist() == [1] * 8
    assert SignedParity(0, True)(5) == 1
    assert q.to_dict() == {"mask": "0x5", "sign": -1}
    assert SignedParity.from_dict(q.to_dict()) == q
    assert p != q
    assert len({p, q, SignedParity(5)}) == 2
    with raises(ValidationError):
        SignedParity(-1)


def test_MajorityVote_01():
    vote = MajorityVote(
        [(SignedParity(0b01), "1/2"), (SignedParity(0b10), "1/2"), (SignedParity(0b11, True), 1)]
    )
    xs = all_inputs(2)
    assert len(vote) == 3
    # ties count as 0
    assert [vote.score(x) for x in range(4)] == [0, -2, -2, 4]
    assert vote.evaluate(xs).tolist() == [vote(x) for x in range(4)] == [0, 0, 0, 1]
    assert vote.to_list()[2] == ["0x3", -1, "1"]
    restored = MajorityVote.from_json(vote.to_json())
    assert restored.terms == vote.terms
    assert restored.scores(xs).tolist() == vote.scores(xs).tolist()


def test_MajorityVote_02_invalid():
    with raises(ValidationError):
        MajorityVote([(SignedParity(1), "-1/2"), (SignedParity(2), 1)])
    with raises(ValidationError):
        MajorityVote([(SignedParity(1), 0)])
    with raises(ValidationError):
        MajorityVote([])


def test_weak_learn_parity_01():
    f = parse_formula("(xor 1 3)", 3)
    samples = [(x, f(x)) for x in range(8)]
    assert weak_learn_parity(samples) == (SignedParity(0b101), 0)
    flipped = [(x, 1 - y) for x, y in samples]
    assert weak_learn_parity(flipped, n=3) == (SignedParity(0b101, True), 0)


def test_weak_learn_parity_02_ties():
    # OR of two bits: every signed parity errs on exactly one input or on three
    samples = [(0, 0), (1, 1), (2, 1), (3, 1)]
    parity, err = weak_learn_parity(samples)
    assert parity == SignedParity(0, True)
    assert err == Fraction(1, 4)


def test_weak_learn_parity_03_weights():
    samples = [(0, 0), (1, 1), (2, 1), (3, 1)]
    # heavy weight on the input where the constant 1 errs
    parity, err = weak_learn_parity(samples, ["5/8", "1/8", "1/8", "1/8"])
    assert parity.mask != 0
    assert err == Fraction(1, 8)
    assert parity(0) == 0


def test_weak_learn_arrays_01_invalid():
    xs = all_inputs(2)
    ys = (xs & 1).astype("u1")
    assert weak_learn_arrays(xs, ys, [1, 1, 1, 1], 2) == (SignedParity(1), 0)
    with raises(ValidationError):
        weak_learn_arrays(xs[:0], ys[:0], [], 2)
    with raises(ValidationError):
        weak_learn_arrays(xs, ys, [1, 1, 1], 2)
    with raises(ValidationError):
        weak_learn_arrays(xs, ys, [1, -1, 1, 1], 2)
    with raises(ValidationError):
        weak_learn_arrays(xs, ys, [0, 0, 0, 0], 2)
    with raises(CapacityError):
        weak_learn_arrays(xs, ys, [1, 1, 1, 1], 21)
    with raises(ValidationError):
        weak_learn_parity([])


def test_ExampleOracle_01():
    f = parse_formula("(and (var 1) (var 2))", 4)
    oracle = ExampleOracle(f, 4, default_rng(3), budget=100)
    xs, ys = oracle.draw(60)
    assert xs.dtype == int64
    assert ys.tolist() == [f(int(x)) for x in xs]
    assert oracle.drawn == 60
    assert oracle.distribution.is_uniform
    assert oracle.label(all_inputs(4)).sum() == 4
    with raises(SampleBudgetError):
        oracle.draw(41)
    assert oracle.drawn == 60


def test_ExampleOracle_02_distribution():
    corners = Distribution.from_mapping(2, {0: "1/2", 3: "1/2"})
    oracle = ExampleOracle(parse_formula("(xor 1 2)"), 2, default_rng(4), corners)
    xs, ys = oracle.draw(50)
    assert set(xs.tolist()) <= {0, 3}
    assert ys.tolist() == [0] * 50
    with raises(ValidationError):
        ExampleOracle(parse_formula("(xor 1 2)"), 3, default_rng(4), corners)

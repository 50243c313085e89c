from itertools import product

from numpy import array, int64
from pytest import mark, raises

from leafcomm.core import (
    And,
    Formula,
    Leaf,
    Not,
    Or,
    Placeholder,
    ValidationError,
    XorMask,
    count_satisfying,
    evaluate,
    evaluate_many,
    leaf_tables,
    leaf_values,
    parse_formula,
    random_formula,
    skeleton,
    slot_formula,
    truth_table,
)
from leafcomm.core.generate import GateClasses
from leafcomm.tools.bits import all_inputs


def test_Formula_01_evaluate():
    # (x1 xor x2) and x3
    f = Formula(And(Leaf(0), Leaf(1)), 3, [XorMask(0b011, n=3), XorMask(0b100, n=3)])

    assert f.size == 2
    assert f.depth() == 1
    for bits in product((0, 1), repeat=3):
        expected = (bits[0] ^ bits[1]) & bits[2]
        assert f(bits) == expected
        assert evaluate(f, sum(b << i for i, b in enumerate(bits))) == expected
    assert count_satisfying(f) == 2


def test_Formula_02_not_or():
    f = Formula(Not(Or(Leaf(0), Leaf(1))), 2, [XorMask(1, n=2), XorMask(2, n=2)])
    assert truth_table(f).tolist() == [1, 0, 0, 0]


def test_Formula_03_placeholders():
    f = Formula(And(Leaf(0), Placeholder(3)), 2, [XorMask(1, n=2)])
    assert f.size == 1
    assert f.leaf_count == 2
    assert f.placeholders == (3,)
    assert f(1, {3: 1}) == 1
    assert f(1, {3: 0}) == 0
    with raises(ValidationError):
        f(1)
    values = evaluate_many(f, all_inputs(2), {3: array([1, 1, 0, 0])})
    assert values.tolist() == [0, 1, 0, 0]


def test_Formula_04_invalid():
    with raises(ValidationError):
        Formula(Leaf(1), 2, [XorMask(1, n=2)])
    with raises(ValidationError):
        Formula(Leaf(0), 3, [XorMask(1, n=2)])
    f = Formula(Leaf(0), 2, [XorMask(1, n=2)])
    with raises(ValidationError):
        f((1, 0, 1))
    with raises(ValidationError):
        f(4)


def test_Formula_05_equality():
    text = "(or (and (xor 1 2) (ltf (1 -1 2) 1)) (not (sym 0 1 1 0)))"
    f = parse_formula(text)
    g = parse_formula(text)
    assert f == g
    assert hash(f) == hash(g)
    assert f != parse_formula(text.replace("ltf (1 -1 2) 1", "ltf (1 -1 2) 2"))


def test_truth_table_01():
    f = parse_formula("(or (and (xor 1 2) (ltf (1 -1 2) 1)) (not (sym 0 1 1 0)))")
    xs = all_inputs(3)
    expected = [f(int(x)) for x in xs]
    assert truth_table(f).tolist() == expected
    assert evaluate_many(f, xs).tolist() == expected
    assert count_satisfying(f) == sum(expected)


def test_skeleton_01():
    f = parse_formula("(and (xor 1 2) (or (var 3) (not (xor 1 3))))")
    sk = skeleton(f)

    assert sk.num_vars == f.size == 3
    assert all(gate == XorMask(1 << i, n=3) for i, gate in enumerate(sk.gates))
    tables = leaf_tables(f)
    assert tables.shape == (3, 8)
    # f(x) is the skeleton on the leaf outputs
    for x in range(8):
        leaf_bits = sum(int(tables[i, x]) << i for i in range(3))
        assert leaf_values(f, x) == leaf_bits
        assert sk(leaf_bits) == f(x)


def test_slot_formula_01():
    f = Formula(Or(Placeholder(0), Not(Leaf(0))), 2, [XorMask(3, n=2)])
    slots = slot_formula(f)
    assert slots.num_vars == 2
    assert truth_table(slots).tolist() == [1, 1, 0, 1]


@mark.parametrize("gate_class", GateClasses)
def test_random_formula_01(gate_class: str):
    f = random_formula(5, 7, gate_class, rng_seed=1)
    assert f.size == 7
    assert f.num_vars == 5
    assert f == random_formula(5, 7, gate_class, rng_seed=1)
    if gate_class != "mixed":
        kinds = {"var": "xor"}.get(gate_class, gate_class)
        assert all(gate.kind == kinds for gate in f.gates)


def test_random_formula_02_invalid():
    with raises(ValidationError):
        random_formula(3, 0)
    with raises(ValidationError):
        random_formula(0, 2, "var")
    with raises(ValidationError):
        random_formula(3, 2, "maj")


def test_random_formula_03_large():
    # shape counts far beyond 64 bits
    f = random_formula(4, 1500, rng_seed=1)
    assert f.size == 1500
    assert f.leaf_count == 1500
    assert f == random_formula(4, 1500, rng_seed=1)
    assert evaluate(f, 0b1011) in (0, 1)


def test_evaluate_many_01_dtype():
    f = random_formula(6, 5, "mixed", rng_seed=3)
    xs = array([0, 5, 63], dtype=int64)
    assert evaluate_many(f, xs).tolist() == [f(int(x)) for x in xs]

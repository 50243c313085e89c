from fractions import Fraction
from sys import argv

from numpy.random import default_rng
from pytest import mark, raises

from leafcomm.core import (
    SampleBudgetError,
    ValidationError,
    WeakLearnerError,
    evaluate_many,
    parse_formula,
    random_formula,
)
from leafcomm.hardness import gip_array
from leafcomm.learning import (
    ExampleOracle,
    MajorityVote,
    SignedParity,
    boost,
    formula_xor_floor,
    learning_curve,
    pac_learn_formula_xor,
    round_cap,
    run_boost,
    run_pac_learn_formula_xor,
    training_size,
    validation_size,
)
from leafcomm.tools.bits import all_inputs


def _exact_error(hypothesis, target, n: int) -> Fraction:
    xs = all_inputs(n)
    wrong = hypothesis.evaluate(xs) != evaluate_many(target, xs)
    return Fraction(int(wrong.sum()), 1 << n)


def test_sizes_01():
    assert round_cap(Fraction(1, 4), Fraction(1, 2)) == 17
    assert round_cap(Fraction(1, 4), Fraction(1, 1000)) == 200
    assert round_cap(Fraction(1, 4), Fraction(1, 1000), 30) == 30
    assert validation_size(Fraction(1, 4), Fraction(1, 10)) == 119
    assert training_size(8, Fraction(1, 4), Fraction(1, 20), 100) <= 20000
    assert training_size(2, Fraction(1, 2), Fraction(1, 2), 1) < training_size(
        8, Fraction(1, 2), Fraction(1, 2), 1
    )


def test_formula_xor_floor_01():
    assert formula_xor_floor(1) == Fraction(1, 2)
    assert formula_xor_floor(4) == Fraction(1, 8)
    assert formula_xor_floor(16) < formula_xor_floor(4)


def test_run_boost_01_parity():
    target = parse_formula("(xor 1 3 4)", 8)
    oracle = ExampleOracle(target, 8, default_rng(7))
    report = run_pac_learn_formula_xor(oracle, 8, 1, "1/10", "1/10")

    assert report.floor == Fraction(1, 2)
    assert report.rounds == 1
    assert report.hypothesis.terms == ((SignedParity(0b1101), Fraction(1)),)
    assert report.training_errors == [0]
    assert report.validation_error == 0
    assert report.validated
    assert oracle.drawn == report.train_size + report.validation_size
    assert learning_curve(report) == [(1, 0, 0)]
    data = report.to_dict()
    assert data["hypothesis"] == [["0xd", 1, "1"]]
    assert data["validated"] is True


def test_run_boost_02_majority():
    target = parse_formula("(ltf (1 1 1) 2)")
    oracle = ExampleOracle(target, 3, default_rng(8))
    report = run_boost(oracle, "1/4", "1/10", "1/8")

    assert report.rounds >= 2
    assert report.training_errors[-1] <= Fraction(1, 8)
    assert all(a >= b for a, b in zip(report.training_errors, report.training_errors[1:]))
    assert all(advantage >= Fraction(1, 8) for advantage in report.advantages)
    assert len(report.loss_bounds) == report.rounds
    assert report.validation_error <= Fraction(1, 4)
    assert isinstance(report.hypothesis, MajorityVote)
    assert len(report.hypothesis) <= report.rounds
    assert [row[0] for row in learning_curve(report)] == list(range(1, report.rounds + 1))


def test_run_boost_03_weak_learner_error():
    # inner product is bent: no parity has advantage above 1/8
    table = gip_array(2, all_inputs(4), 4)
    oracle = ExampleOracle(table, 4, default_rng(9))
    with raises(WeakLearnerError) as excinfo:
        run_boost(oracle, "1/4", "1/10", "1/4")
    assert excinfo.value.details["round"] == 0


def test_run_boost_04_options():
    target = parse_formula("(xor 1 2)", 4)
    oracle = ExampleOracle(target, 4, default_rng(10))
    report = run_boost(oracle, "1/2", "1/2", 0, train_size=16, validate=False)
    assert report.round_cap == 1
    assert report.train_size == 16
    assert report.validation_error is None
    assert report.validated is None
    assert oracle.drawn == 16

    hypothesis = boost(ExampleOracle(target, 4, default_rng(11)), "1/4", "1/4", "1/4")
    assert hypothesis(0b01) == 1
    assert hypothesis(0b11) == 0


def test_run_boost_05_invalid():
    target = parse_formula("(xor 1 2)")
    oracle = ExampleOracle(target, 2, default_rng(12))
    for eps, delta, floor in ((0, "1/4", 0), ("1/4", 1, 0), ("1/4", "1/4", "3/4")):
        with raises(ValidationError):
            run_boost(oracle, eps, delta, floor)
    with raises(ValidationError):
        run_pac_learn_formula_xor(oracle, 3, 1, "1/4", "1/4")
    with raises(ValidationError):
        run_pac_learn_formula_xor(oracle, 2, 0, "1/4", "1/4")
    with raises(SampleBudgetError):
        run_boost(ExampleOracle(target, 2, default_rng(12), budget=10), "1/4", "1/4", 0)


@mark.skipif("--include-long-time-tests" not in argv, reason="long-time tests switched off")
@mark.parametrize("seed", range(5))
def test_pac_learn_formula_xor_01_random(seed: int):
    target = random_formula(8, 4, "xor", rng_seed=seed)
    oracle = ExampleOracle(target, 8, default_rng(seed))
    hypothesis = pac_learn_formula_xor(oracle, 8, 4, "1/4", "1/10")
    assert _exact_error(hypothesis, target, 8) <= Fraction(1, 4)

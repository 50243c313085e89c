from fractions import Fraction
from sys import argv

from numpy import array, int64
from pytest import approx, mark, raises

from leafcomm.core import CalculationError, ValidationError, parse_formula, random_formula
from leafcomm.core.formula import skeleton, slot_formula, truth_table
from leafcomm.polynomial import (
    ErrorBudget,
    MultilinearPoly,
    amplification_rounds,
    amplifier_value,
    amplify,
    approx_base,
    approx_table,
    bernstein_amplifier,
    build_approx,
    build_approximation,
    compose,
    exact_multilinear,
    expand_over_inputs,
    lp_min_error,
    max_error,
    monomials,
    shift_piece,
    table_of,
)
from leafcomm.tools.bits import all_inputs, popcount_array

AND2 = array([0, 0, 0, 1], dtype=int64)


def test_monomials_01():
    assert monomials(3, 1) == [0, 1, 2, 4]
    assert len(monomials(4, 2)) == 11


def test_lp_min_error_01():
    assert lp_min_error(AND2, 0) == approx(0.5)
    assert lp_min_error(AND2, 1) == approx(0.25)
    assert lp_min_error(AND2, 2) == approx(0.0, abs=1e-9)
    with raises(ValidationError):
        lp_min_error(AND2, 3)


def test_approx_table_01_and():
    p = approx_table(AND2, "1/3")
    assert p.degree == 1
    assert max_error(p, AND2) <= Fraction(1, 3)


def test_approx_table_02_or():
    table = (popcount_array(all_inputs(4)) > 0).astype(int64)
    p = approx_table(table, "1/3")
    assert p.degree == 2
    assert max_error(p, table) <= Fraction(1, 3)


def test_approx_table_03_parity():
    # parity has no approximation below full degree
    table = (popcount_array(all_inputs(3)) & 1).astype(int64)
    p = approx_table(table, "1/3")
    assert p == exact_multilinear(table)
    assert p.degree == 3


@mark.parametrize("sparse", (True, False))
def test_approx_table_04_tight(sparse: bool):
    # degree-1 optima equal eps: 1/4 for AND of two bits, 1/3 with thirds for OR of three
    p = approx_table(AND2, "1/4", sparse=sparse)
    assert p.degree == 1
    assert max_error(p, AND2) == Fraction(1, 4)

    or3 = (popcount_array(all_inputs(3)) > 0).astype(int64)
    assert lp_min_error(or3, 1) == approx(1 / 3)
    p = approx_table(or3, "1/3", sparse=sparse)
    assert p.degree == 1
    assert max_error(p, or3) == Fraction(1, 3)


def test_approx_table_05_exact():
    table = array([0, 1, 1, 1, 0, 0, 1, 0], dtype=int64)
    assert approx_table(table, 0) == exact_multilinear(table)
    with raises(ValidationError):
        approx_table(table, "-1/3")
    with raises(ValidationError):
        approx_table(table[:6], "1/3")


def test_approx_base_01():
    f = parse_formula("(or (and (var 1) (xor 2 3)) (and (var 4) (not (var 5))))")
    p = approx_base(f, "1/4")
    assert p.n == f.leaf_count
    assert max_error(p, truth_table(slot_formula(f))) <= Fraction(1, 4)


def test_bernstein_amplifier_01():
    assert bernstein_amplifier(1) == (0, 1)
    assert bernstein_amplifier(3) == (0, 0, 3, -2)
    assert amplifier_value(3, Fraction(1, 2)) == Fraction(1, 2)
    assert amplifier_value(3, Fraction(1, 4)) == Fraction(5, 32)
    with raises(ValidationError):
        bernstein_amplifier(2)


def test_amplification_rounds_01():
    assert amplification_rounds("1/3", "1/3") == 0
    assert amplification_rounds("1/4", "1/2") == 0
    r = amplification_rounds("1/3", "1/10")
    worst = Fraction(2, 5)
    assert r % 2 == 1
    assert amplifier_value(r, worst) <= Fraction(1, 10) < amplifier_value(r - 2, worst)
    with raises(ValidationError):
        amplification_rounds("1/2", "1/10")
    with raises(ValidationError):
        amplification_rounds("1/3", 0)


def test_amplify_01():
    # (x1 + x2)/2 - 1/4 is within 1/4 of AND
    p = MultilinearPoly(2, {0: Fraction(-1, 4), 1: Fraction(1, 2), 2: Fraction(1, 2)})
    assert max_error(p, AND2) == Fraction(1, 4)
    q = amplify(p, "1/10", "1/4")
    assert max_error(q, AND2) <= Fraction(1, 10)
    assert amplify(p, "1/4", "1/4") is p


def test_shift_piece_01():
    p = MultilinearPoly.constant(1, Fraction(-1, 3))
    assert shift_piece(p, "1/3")(0) == 0
    assert shift_piece(p, 0) is p


def test_compose_01_exact_pieces():
    # AND of (x1 xor x2) and x3
    top = MultilinearPoly(2, {3: 1})
    xor12 = exact_multilinear(array([0, 1, 1, 0, 0, 1, 1, 0], dtype=int64))
    x3 = MultilinearPoly.variable(3, 2)
    p = compose(top, [xor12, x3], ErrorBudget("1/3", piece_eps=0))
    expected = [(x & 1 ^ x >> 1 & 1) & x >> 2 for x in range(8)]
    assert table_of(p).tolist() == expected


def test_compose_02_invalid():
    top = MultilinearPoly(2, {3: 1})
    budget = ErrorBudget("1/3")
    with raises(ValidationError):
        compose(top, [MultilinearPoly.variable(3, 0)], budget)
    with raises(ValidationError):
        compose(top, [MultilinearPoly.variable(3, 0), MultilinearPoly.variable(2, 0)], budget)


@mark.parametrize("seed", range(3))
def test_build_approximation_01(seed: int):
    f = random_formula(8, 16, "mixed", rng_seed=seed)
    result = build_approximation(f, "1/3")

    assert max_error(result.poly, truth_table(f)) == result.error <= Fraction(1, 3)
    assert result.stats["threshold"] == 4
    assert all(size <= 8 for size in result.stats["piece_sizes"])
    summary = result.to_dict()
    assert summary["degree"] == result.poly.degree
    assert summary["terms"] == len(result.poly)


def test_build_approximation_02_amplified():
    f = random_formula(6, 9, "xor", rng_seed=7)
    result = build_approximation(f, "1/10")
    assert result.error <= Fraction(1, 10)
    assert max_error(build_approx(f, "1/10"), truth_table(f)) <= Fraction(1, 10)
    if result.stats["composed_error"] > Fraction(1, 10):
        assert result.rounds % 2 == 1


def test_build_approximation_03_invalid():
    f = parse_formula("(var 1)")
    for eps in (0, 1, "3/2"):
        with raises(ValidationError):
            build_approximation(f, eps)


def test_expand_over_inputs_01():
    f = parse_formula("(or (and (xor 1 2) (ltf (1 1 -1) 1)) (not (sym 0 1 1 0)))")
    p = exact_multilinear(truth_table(skeleton(f)))
    assert table_of(expand_over_inputs(p, f)).tolist() == truth_table(f).tolist()
    with raises(ValidationError):
        expand_over_inputs(MultilinearPoly(2), f)


@mark.skipif("--include-long-time-tests" not in argv, reason="long-time tests switched off")
@mark.parametrize("eps", ("1/3", "1/10"))
def test_build_approximation_04_many(eps: str):
    target = Fraction(eps)
    for seed in range(100):
        f = random_formula(4 + seed % 9, 1 + seed % 36, "mixed", rng_seed=seed)
        try:
            result = build_approximation(f, eps)
        except CalculationError as exc:
            raise AssertionError(f"seed {seed}: {exc}") from exc
        assert max_error(result.poly, truth_table(f)) <= target

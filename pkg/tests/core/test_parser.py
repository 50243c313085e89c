from pytest import mark, raises

from leafcomm.core import (
    FormulaSyntaxError,
    Ltf,
    Sym,
    Table,
    ValidationError,
    XorMask,
    load_formula,
    parse_formula,
    random_formula,
    truth_table,
    unparse,
)
from leafcomm.core.generate import GateClasses


def test_parse_formula_01():
    f = parse_formula(
        """
        ; a comment line
        (or (and (xor 1 2) (var 4))  ; trailing comment
            (not (ltf (1 -2 3) 2)))
        """
    )
    assert f.num_vars == 4
    assert f.size == 3
    assert f.gates == (
        XorMask(0b0011, n=4),
        XorMask(0b1000, n=4),
        Ltf((1, -2, 3), 2, n=4),
    )


def test_parse_formula_02_gates():
    f = parse_formula("(and (nxor 1 3) (and (sym 1 0 0 1) (table ff)))", nvars=3)
    assert f.gates == (XorMask(0b101, True, n=3), Sym((1, 0, 0, 1), n=3), Table(0xFF, n=3))


def test_parse_formula_03_nvars():
    f = parse_formula("(var 2)", nvars=5)
    assert f.num_vars == 5
    assert truth_table(f).sum() == 16


@mark.parametrize(
    "text,offset",
    (
        ("(and (var 1))", 13),
        ("(foo 1)", 2),
        ("(var 0)", 6),
        ("(var x)", 6),
        ("(var 1) (var 2)", 9),
        ("(and (var 1) (var 2)", 21),
        ("var 1", 1),
        ("(table zz)", 8),
    ),
)
def test_parse_formula_04_errors(text: str, offset: int):
    with raises(FormulaSyntaxError) as excinfo:
        parse_formula(text)
    assert excinfo.value.offset == offset


def test_parse_formula_05_range():
    with raises(FormulaSyntaxError):
        parse_formula("(var 4)", nvars=3)
    with raises(ValidationError):
        parse_formula("(table 3)")
    with raises(FormulaSyntaxError):
        parse_formula("(and (sym 0 1) (var 3))")


def test_unparse_01():
    text = "(or (and (xor 1 2) (var 4)) (not (ltf (1 -2 3 0) 2)))"
    assert unparse(parse_formula(text)) == text


@mark.parametrize("gate_class", GateClasses)
@mark.parametrize("seed", (0, 1, 2))
def test_unparse_02_round_trip(gate_class: str, seed: int):
    f = random_formula(4, 6, gate_class, rng_seed=seed)
    assert parse_formula(unparse(f), f.num_vars) == f


def test_load_formula_01(tmp_path):
    path = tmp_path / "formula.sexp"
    path.write_text("(and (xor 1 2) (var 4))\n")
    f = load_formula(path)
    assert f.num_vars == 4
    assert truth_table(f).sum() == 4

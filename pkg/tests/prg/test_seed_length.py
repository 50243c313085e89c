from math import isclose

from pytest import mark, raises

from leafcomm.core import ValidationError
from leafcomm.prg import (
    DEFAULT_PRG_C,
    SEED_MODELS,
    GipStretchGenerator,
    InwGenerator,
    prg_main_delta,
    prg_main_ell,
    seed_length_report,
    small_bias_for_formulas,
)


@mark.parametrize(
    "model,params,expected",
    (
        ("formula_xor", {"n": 16, "s": 16, "eps": "1/4"}, 36.0),
        ("formula_xor", {"n": 1024, "s": 64, "eps": "1/16"}, 202.0),
        ("formula_ltf", {"n": 256, "s": 16, "eps": "1/4"}, 2560.0),
        ("formula_sym", {"n": 256, "s": 16, "eps": "1/4"}, 512.0),
        ("formula_nih", {"n": 64, "s": 16, "eps": "1/4", "k": 4, "R": 2}, 116.0),
        ("formula_nih", {"n": 64, "s": 4, "eps": "1/2", "k": 2, "R": 0}, 37.0),
        ("formula_nof", {"n": 1024, "s": 4, "eps": "1/4", "k": 2, "R": 6}, 1024 - 1 / 12),
    ),
)
def test_seed_length_report_01(model: str, params: dict, expected: float):
    report = seed_length_report(model, params)
    assert model in SEED_MODELS
    assert isclose(report.theoretical, expected, rel_tol=1e-12)
    data = report.to_dict()
    assert data["model"] == model
    assert data["params"] == params
    assert data["theoretical"] == round(expected, 6)
    assert "up to constants" in data["note"]


def test_seed_length_report_02_implemented():
    xor = seed_length_report("formula_xor", {"n": 16, "s": 16, "eps": "1/4"})
    assert xor.implemented == 2 * prg_main_ell(16, 16, "1/4", 1) == 72

    # a one-level generator with small-bias XOR extraction stretches 50 bits to 64
    nih = seed_length_report("formula_nih", {"n": 64, "s": 1, "eps": "1/2", "k": 2, "R": 0})
    assert nih.theoretical == 33.0
    assert nih.implemented == InwGenerator(64, 2, 0, "1/2", "small_bias_xor").seed_len == 50
    # no extractor backend meets the margins of four parties at cost 2
    wide = seed_length_report("formula_nih", {"n": 64, "s": 16, "eps": "1/4", "k": 4, "R": 2})
    assert wide.implemented is None
    # three parties cannot be halved into INW levels
    odd = seed_length_report("formula_nih", {"n": 63, "s": 4, "eps": "1/2", "k": 3, "R": 1})
    assert odd.implemented is None

    params = {"n": 1024, "s": 4, "eps": "1/4", "k": 2, "R": 6}
    assert seed_length_report("formula_nof", params).implemented is None
    nof = seed_length_report("formula_nof", {**params, "m": 30, "t": 30})
    assert nof.implemented == GipStretchGenerator(30, 30, 2).seed_len == 900
    with raises(ValidationError):
        seed_length_report("formula_nof", {**params, "m": 31, "t": 30})
    assert seed_length_report("formula_ltf", {"n": 256, "s": 16, "eps": "1/4"}).implemented is None


def test_seed_length_report_03_constant():
    params = {"n": 16, "s": 16, "eps": "1/4"}
    half = seed_length_report("formula_xor", {**params, "c": 0.5})
    assert half.theoretical == 20.0
    assert half.implemented == 2 * prg_main_ell(16, 16, "1/4", 0.5) == 40


def test_seed_length_report_04_invalid():
    with raises(ValidationError):
        seed_length_report("formula_and", {"n": 16, "s": 16, "eps": "1/4"})
    with raises(ValidationError):
        seed_length_report("formula_xor", {"n": 16, "s": 16})
    with raises(ValidationError):
        seed_length_report("formula_nih", {"n": 16, "s": 16, "eps": "1/4", "k": 2})
    for params in ({"n": 0, "s": 1, "eps": "1/4"}, {"n": 4, "s": 1, "eps": 1}):
        with raises(ValidationError):
            seed_length_report("formula_xor", params)


def test_prg_main_01():
    assert DEFAULT_PRG_C == 0.5
    assert prg_main_delta(1, "1/2", 1) == 0.5
    assert prg_main_delta(16, "1/2", 1) == 2.0**-16
    assert prg_main_ell(16, 16, "1/4", 1) == 36
    assert prg_main_ell(2, 1, "1/2", 1) == 2
    g = small_bias_for_formulas(16, 16, "1/4", c=1)
    assert g.seed_len == 72
    assert g.out_len == 16
    assert float(g.bias_bound) <= 16 * prg_main_delta(16, "1/4", 1)

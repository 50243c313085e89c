from fractions import Fraction
from json import dumps, loads
from os.path import join
from pathlib import Path

from pytest import fixture, mark, raises
from schema import SchemaError

from leafcomm.cli import (
    EXIT_FAILED,
    EXIT_INVALID,
    EXIT_OK,
    Outcome,
    check_names,
    deterministic_part,
    make_report,
    register_check,
    render_checks,
    render_result,
    run,
    validate_config,
)
from leafcomm.core import ValidationError


@fixture
def formula_file(tmp_path: Path):
    def write(text: str, name: str = "formula.sexp") -> str:
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write


def _report(capsys) -> dict:
    return loads(capsys.readouterr().out)


def test_sat_01_modes(formula_file, capsys):
    path = formula_file("(and (xor 1 2) (var 4))")
    for mode in ("brute", "protocols", "fast"):
        assert run(["sat", path, "--mode", mode, "--json"]) == EXIT_OK
        report = _report(capsys)
        assert report["command"] == "sat"
        assert report["parameters"]["mode"] == mode
        assert report["result"]["count"] == 4
        assert report["passed"]
        assert "wall_ms" in report["timing"]
        if mode == "fast":
            assert report["result"]["mode"] == "approx"

    assert run(["sat", path, "--nprime", "2", "--verify", "--json"]) == EXIT_OK
    report = _report(capsys)
    assert report["result"]["nprime"] == 2
    assert report["checks"][0]["check"] == "bruteforce_agreement"


def test_sat_02_randomized(formula_file, capsys):
    path = formula_file("(or (ltf (1 1 -1 2) 2) (xor 1 3))")
    argv = ["sat", path, "--mode", "randomized", "--kind", "randomized", "--seed", "3"]
    assert run([*argv, "--verify", "--json"]) == EXIT_OK
    report = _report(capsys)
    assert report["parameters"]["seed"] == 3
    assert report["parameters"]["confidence"] == "99/100"
    assert report["checks"][0]["passed"]


def test_run_01_invalid(formula_file):
    path = formula_file("(xor 1 2)")
    assert run(["approx", path, "--eps", "1/0"]) == EXIT_INVALID
    assert run(["approx", path, "--eps", "3/2"]) == EXIT_INVALID
    assert run(["sat", str(Path(path).with_name("missing.sexp"))]) == EXIT_INVALID
    assert run(["sat", formula_file("(xor 1", "broken.sexp")]) == EXIT_INVALID
    assert run(["prg", "--generator", "inw", "--n", "8"]) == EXIT_INVALID
    assert run(["suite", "--only", "no_such_check"]) == EXIT_INVALID
    with raises(SystemExit):
        run(["sat", path, "--mode", "lp"])


def test_run_02_config(formula_file, tmp_path: Path, capsys):
    path = formula_file("(and (xor 1 2) (var 4))")
    config = tmp_path / "sat.yaml"
    config.write_text(f"formula: {path}\nmode: brute\nseed: 17\n")
    assert run(["sat", "--config", str(config), "--json"]) == EXIT_OK
    report = _report(capsys)
    assert report["parameters"]["mode"] == "brute"
    assert report["parameters"]["seed"] == 17
    assert report["result"]["count"] == 4

    # the command line overrides the file
    assert run(["sat", "--config", str(config), "--mode", "protocols", "--json"]) == EXIT_OK
    assert _report(capsys)["parameters"]["mode"] == "protocols"

    unknown = tmp_path / "unknown.yaml"
    unknown.write_text(f"formula: {path}\ncolour: red\n")
    assert run(["sat", "--config", str(unknown)]) == EXIT_INVALID
    not_yaml = tmp_path / "sat.toml"
    not_yaml.write_text("mode = 'brute'\n")
    assert run(["sat", "--config", str(not_yaml)]) == EXIT_INVALID


def test_run_03_output(formula_file, output_path: str, test_name: str, capsys):
    path = formula_file("(or (var 1) (xor 2 3))")
    report_path = join(output_path, f"{test_name}.json")
    poly_path = join(output_path, f"{test_name}_poly.json")
    assert run(["approx", path, "--output", report_path, "--poly-output", poly_path]) == EXIT_OK
    assert "pointwise_error" in capsys.readouterr().out
    report = loads(Path(report_path).read_text())
    assert report["parameters"]["eps"] == "1/3"
    assert Fraction(report["result"]["measured_error"]) <= Fraction(1, 3)
    assert Path(poly_path).exists()


def test_run_04_deterministic(formula_file, capsys):
    path = formula_file("(xor 1 3)", "target.sexp")
    reports = []
    for _ in range(2):
        assert run(["learn", path, "--eps", "1/4", "--seed", "11", "--json"]) == EXIT_OK
        reports.append(_report(capsys))
    assert deterministic_part(reports[0]) == deterministic_part(reports[1])
    assert reports[0]["result"]["hypothesis"] == [["0x5", 1, "1"]]
    assert "timing" not in deterministic_part(reports[0])


def test_prg_01(formula_file, capsys):
    path = formula_file("(and (xor 1 2) (or (var 3) (var 4)))")
    argv = ["prg", "--generator", "small_bias", "--n", "4", "--ell", "4", "--against", path]
    assert run([*argv, "--eps", "1/2", "--json"]) == EXIT_OK
    report = _report(capsys)
    assert report["result"]["seed_len"] == 8
    assert {row["check"] for row in report["checks"]} == {"parity_bias", "fooling_gap"}
    assert report["result"]["fooling"]["exact"]

    # a = 1 is a root of every even sum of powers, so the parity of four bits is biased
    parity = formula_file("(xor 1 2 3 4)", "parity.sexp")
    argv = ["prg", "--generator", "small_bias", "--n", "4", "--ell", "4", "--against", parity]
    assert run([*argv, "--eps", "1/1000"]) == EXIT_FAILED

    assert run(["prg", "--generator", "gip_stretch", "--m", "4", "--t", "2", "--k", "2"]) == 0
    assert "gip_consistency" in capsys.readouterr().out


def test_prg_02_inw(capsys):
    argv = ["prg", "--generator", "inw", "--n", "8", "--k", "2", "--dprime", "2", "--delta", "1/4"]
    # no extractor margin at this size
    assert run(argv) == EXIT_INVALID
    assert run([*argv, "--passthrough", "--json"]) == EXIT_OK
    assert _report(capsys)["result"]["seed_len"] == 8

    argv = ["prg", "--generator", "inw", "--n", "20", "--k", "2", "--dprime", "0", "--delta", "1/2"]
    assert run([*argv, "--json"]) == EXIT_OK
    result = _report(capsys)["result"]
    assert result["seed_len"] == 20
    assert result["params"]["extractors"][0]["hashed"] == 1


def test_lbcalc_01(capsys):
    assert run(["lbcalc", "--n", "1024", "--eps", "1/4", "-R", "1", "--json"]) == EXIT_OK
    assert _report(capsys)["result"]["bound"] == "256/121"
    argv = ["lbcalc", "--model", "formula_xor", "--n", "16", "--s", "16", "--eps", "1/4"]
    assert run([*argv, "--json"]) == EXIT_OK
    result = _report(capsys)["result"]
    assert result["theoretical"] == 36.0
    assert result["implemented"] == 72
    assert run(["lbcalc", "--model", "formula_or", "--n", "16"]) == EXIT_INVALID


def test_corr_01(formula_file, tmp_path: Path, capsys):
    f = formula_file("(xor 1 2)", "f.sexp")
    g = formula_file("(and (var 1) (var 2))", "g.sexp")
    assert run(["corr", f, g, "--json"]) == EXIT_OK
    result = _report(capsys)["result"]
    assert result["best_parity"] == {"mask": "0x3", "sign": 1, "correlation": "1"}
    assert Fraction(result["correlation"]["agreement"]) == Fraction(1, 4)

    corners = tmp_path / "corners.json"
    corners.write_text(dumps({"0": "1/2", "3": "1/2"}))
    assert run(["corr", f, "--distribution", str(corners), "--json"]) == EXIT_OK
    result = _report(capsys)["result"]
    assert result["best_parity"]["mask"] == "0x0"
    assert Fraction(result["best_parity"]["correlation"]) == 1


def test_parse_01(formula_file, capsys):
    path = formula_file("(or (not (var 1)) (and (xor 2 3) (ltf (1 -2 1) 0)))")
    assert run(["parse", path, "--nvars", "5", "--json"]) == EXIT_OK
    result = _report(capsys)["result"]
    assert result["n"] == 5
    assert result["size"] == 3
    assert result["gates"] == {"ltf": 1, "xor": 2}


def test_protocol_01(formula_file, output_path: str, test_name: str, capsys):
    path = formula_file("(and (xor 1 2) (ltf (1 1 1 1) 2))")
    explicit = join(output_path, f"{test_name}.json")
    assert run(["protocol", path, "--explicit-output", explicit, "--json"]) == EXIT_OK
    report = _report(capsys)
    assert report["result"]["deterministic"]
    assert len(report["result"]["leaves"]) == 2
    assert len(loads(Path(explicit).read_text())) == 2
    argv = ["protocol", path, "--kind", "randomized", "--explicit-output", explicit]
    assert run(argv) == EXIT_INVALID


def test_suite_01(capsys):
    only = ["small_bias_soundness", "gip_stretch_consistency", "calculators"]
    assert set(only) <= set(check_names())
    assert run(["suite", "--only", *only, "--json"]) == EXIT_OK
    report = _report(capsys)
    assert report["result"]["failed"] == []
    assert report["result"]["checks"] == len(report["checks"]) > 3


def test_suite_02_inw(capsys):
    assert run(["suite", "--only", "inw_toy_fooling", "--json"]) == EXIT_OK
    rows = _report(capsys)["checks"]
    assert len(rows) == 2
    assert "seed_len 20 for n=20" in rows[0]["detail"]
    assert all(row["passed"] for row in rows)


def test_register_check_01():
    with raises(ValidationError):
        register_check("small_bias_soundness")(lambda rng, long: [])


def test_validate_config_01():
    cfg = validate_config("lbcalc", {"n": "64"})
    assert cfg["n"] == 64
    assert cfg["eps"] == Fraction(1, 4)
    assert cfg["seed"] >= 0
    with raises(SchemaError):
        validate_config("lbcalc", {"n": "64", "depth": 3})
    with raises(SchemaError):
        validate_config("lbcalc", {"n": 0})


@mark.parametrize("passed", (True, False))
def test_Outcome_01(passed: bool):
    outcome = Outcome({"count": Fraction(1, 2)})
    assert outcome.passed
    assert outcome.check("first", passed, "detail") is passed
    assert outcome.passed is passed
    report = make_report("sat", {"eps": Fraction(1, 3)}, outcome, 1.23456)
    assert report["timing"] == {"wall_ms": 1.235}
    assert "1/2" in render_result(outcome.result)
    assert "first" in render_checks(outcome.checks)

from fractions import Fraction
from json import dumps
from logging import DEBUG, INFO
from pathlib import Path

from pytest import raises
from schema import Schema, SchemaError

from leafcomm.tools.logger import INFO1, INFO3, verbosity_level
from leafcomm.tools.schema import (
    IsNonnegativeInt,
    IsPositiveInt,
    IsProbability,
    IsRational,
    IsReadableFilename,
    LoadFileWithExt,
    LoadJson,
    LoadYaml,
)
from leafcomm.tools.timer import Timer


def test_IsProbability_01():
    assert Schema(IsProbability).validate("1/3") == Fraction(1, 3)
    assert Schema(IsRational).validate("-2") == -2
    for value in ("0", "1", "3/2", "1/0", "half"):
        with raises(SchemaError):
            Schema(IsProbability).validate(value)


def test_IsPositiveInt_01():
    assert Schema(IsPositiveInt).validate("12") == 12
    assert Schema(IsNonnegativeInt).validate(0) == 0
    with raises(SchemaError):
        Schema(IsPositiveInt).validate(0)
    with raises(SchemaError):
        Schema(IsNonnegativeInt).validate("-1")


def test_LoadFileWithExt_01(tmp_path: Path):
    yaml_path = tmp_path / "cfg.yaml"
    yaml_path.write_text("mode: brute\nseed: 3\n")
    json_path = tmp_path / "dist.json"
    json_path.write_text(dumps({"0": "1/2", "3": "1/2"}))
    assert Schema(IsReadableFilename).validate(str(yaml_path)) == str(yaml_path)

    loader = LoadFileWithExt(yaml=LoadYaml, json=LoadJson)
    assert loader(str(yaml_path)) == {"mode": "brute", "seed": 3}
    assert loader(str(json_path)) == {"0": "1/2", "3": "1/2"}

    merging = LoadFileWithExt(yaml=LoadYaml, key="load", update=True)
    assert merging({"load": str(yaml_path), "seed": 9}) == {"mode": "brute", "seed": 9}
    assert merging({"seed": 9}) == {"seed": 9}


def test_LoadFileWithExt_02_invalid(tmp_path: Path):
    listing = tmp_path / "list.yaml"
    listing.write_text("- 1\n- 2\n")
    loader = LoadFileWithExt(yaml=LoadYaml)
    with raises(SchemaError):
        loader(str(listing))
    with raises(SchemaError):
        loader(str(tmp_path / "cfg.toml"))
    with raises(SchemaError):
        loader(3)
    with raises(SchemaError):
        LoadFileWithExt(yaml=LoadYaml, key="load")("cfg.yaml")


def test_verbosity_level_01():
    assert verbosity_level(0) == INFO
    assert verbosity_level(1) == INFO1
    assert verbosity_level(3) == INFO3
    assert verbosity_level(7) == DEBUG


def test_Timer_01():
    with Timer() as timer:
        sum(range(1000))
    assert timer.elapsed_ms > 0

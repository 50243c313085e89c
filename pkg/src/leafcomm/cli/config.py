from __future__ import annotations

from fractions import Fraction
from typing import TYPE_CHECKING

from schema import And, Optional, Or, Schema, Use

from ..counting.matmul import BACKENDS
from ..prg.extractor import EXTRACTOR_BACKENDS
from ..prg.seed_length import SEED_MODELS
from ..tools.schema import (
    IsFilename,
    IsFilewithExt,
    IsNonnegativeInt,
    IsPositiveInt,
    IsProbability,
    IsReadableFilename,
    LoadFileWithExt,
    LoadYaml,
)
from ..tools.seeding import DEFAULT_SEED

if TYPE_CHECKING:
    from collections.abc import Mapping
    from typing import Any

COMMANDS = ("parse", "approx", "protocol", "sat", "prg", "corr", "lbcalc", "learn", "suite")

IsFormulaFile = IsReadableFilename
IsDistributionFile = And(
    IsReadableFilename,
    IsFilewithExt(".yaml", ".yml", ".json"),
    error="Distribution should be a readable .yaml or .json file",
)
IsPositiveFloat = And(Use(float), lambda value: value > 0, error="Expect a positive number")
MaybeFile = Or(None, IsFilename)

_common = {
    Optional("seed", default=DEFAULT_SEED): IsNonnegativeInt,
    Optional("output", default=None): MaybeFile,
}

_commands: dict[str, dict] = {
    "parse": {
        "formula": IsFormulaFile,
        Optional("nvars", default=None): Or(None, IsPositiveInt),
    },
    "approx": {
        "formula": IsFormulaFile,
        Optional("eps", default=Fraction(1, 3)): IsProbability,
        Optional("sparse", default=True): bool,
        Optional("poly_output", default=None): MaybeFile,
    },
    "protocol": {
        "formula": IsFormulaFile,
        Optional("kind", default="deterministic"): Or("deterministic", "randomized"),
        Optional("parties", default=2): IsPositiveInt,
        Optional("delta", default=Fraction(1, 3)): IsProbability,
        Optional("explicit_output", default=None): MaybeFile,
    },
    "sat": {
        "formula": IsFormulaFile,
        Optional("mode", default="fast"): Or("brute", "protocols", "fast", "randomized"),
        Optional("kind", default="deterministic"): Or("deterministic", "randomized"),
        Optional("parties", default=2): IsPositiveInt,
        Optional("delta", default=Fraction(1, 3)): IsProbability,
        Optional("nprime", default=None): Or(None, IsPositiveInt),
        Optional("poly_mode", default="approx"): Or("approx", "exact"),
        Optional("backend", default="standard"): Or(*BACKENDS),
        Optional("confidence", default=Fraction(99, 100)): IsProbability,
        Optional("c", default=None): Or(None, IsPositiveFloat),
        Optional("verify", default=False): bool,
    },
    "prg": {
        "generator": Or("small_bias", "inw", "gip_stretch"),
        Optional("n", default=None): Or(None, IsPositiveInt),
        Optional("delta", default=None): Or(None, IsProbability),
        Optional("ell", default=None): Or(None, IsPositiveInt),
        Optional("k", default=None): Or(None, IsPositiveInt),
        Optional("dprime", default=None): Or(None, IsNonnegativeInt),
        Optional("m", default=None): Or(None, IsPositiveInt),
        Optional("t", default=None): Or(None, IsPositiveInt),
        Optional("extractor", default="toeplitz_hash"): Or(*EXTRACTOR_BACKENDS),
        Optional("passthrough", default=False): bool,
        Optional("against", default=None): Or(None, IsFormulaFile),
        Optional("eps", default=None): Or(None, IsProbability),
        Optional("samples", default=10**5): IsPositiveInt,
    },
    "corr": {
        "f": IsFormulaFile,
        Optional("g", default=None): Or(None, IsFormulaFile),
        Optional("distribution", default=None): Or(None, IsDistributionFile),
    },
    "lbcalc": {
        Optional("model", default="size"): Or("size", *SEED_MODELS),
        "n": IsPositiveInt,
        Optional("k", default=2): IsPositiveInt,
        Optional("eps", default=Fraction(1, 4)): IsProbability,
        Optional("R", default=1): IsNonnegativeInt,
        Optional("s", default=None): Or(None, IsPositiveInt),
        Optional("c", default=1.0): IsPositiveFloat,
        Optional("m", default=None): Or(None, IsPositiveInt),
        Optional("t", default=None): Or(None, IsPositiveInt),
    },
    "learn": {
        Optional("target", default=None): Or(None, IsFormulaFile),
        Optional("n", default=10): IsPositiveInt,
        Optional("s", default=9): IsPositiveInt,
        Optional("eps", default=Fraction(1, 10)): IsProbability,
        Optional("delta", default=Fraction(1, 10)): IsProbability,
        Optional("distribution", default=None): Or(None, IsDistributionFile),
        Optional("c", default=None): Or(None, IsPositiveFloat),
        Optional("max_rounds", default=None): Or(None, IsPositiveInt),
        Optional("train_size", default=None): Or(None, IsPositiveInt),
    },
    "suite": {
        Optional("long", default=False): bool,
        Optional("only", default=None): Or(None, [str]),
    },
}

_schemas = {name: Schema({**_common, **spec}) for name, spec in _commands.items()}


def _loadable(schema: Schema) -> And:
    return And(
        {"load": IsReadableFilename, Optional(str): object},
        Use(
            LoadFileWithExt(yaml=LoadYaml, yml=LoadYaml, key="load", update=True),
            error="Failed to load {}",
        ),
        schema,
    )


def validate_config(command: str, cfg: Mapping[str, Any]) -> dict[str, Any]:
    """Validated parameters of a subcommand; a "load" key merges a YAML file below them.

    Raises SchemaError for unknown keys and malformed values.
    """
    schema = _schemas[command]
    if "load" in cfg:
        return _loadable(schema).validate(dict(cfg))
    return schema.validate(dict(cfg))

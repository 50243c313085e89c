from __future__ import annotations

from collections.abc import Mapping
from fractions import Fraction
from json import load as load_json
from os import R_OK, access
from pathlib import Path
from typing import TYPE_CHECKING

from schema import And, Or, SchemaError, Use
from yaml import SafeLoader, load

from ..core.exception import ValidationError
from .logger import INFO1, logger
from .rational import parse_rational

if TYPE_CHECKING:
    from collections.abc import Callable


def IsReadable(filename: str):
    """Returns True if the file is readable"""
    return access(filename, R_OK)


IsFilename = Or(str, And(Path, Use(str)))

IsReadableFilename = And(IsFilename, IsReadable)


def _rational(value) -> Fraction:
    try:
        return parse_rational(value)
    except ValidationError as exc:
        raise SchemaError(str(exc)) from exc


IsRational = Use(_rational)

IsProbability = And(
    IsRational, And(lambda value: 0 < value < 1, error="Expect a rational within (0, 1)")
)

IsPositiveInt = And(Use(int), lambda value: value > 0, error="Expect a positive integer")

IsNonnegativeInt = And(Use(int), lambda value: value >= 0, error="Expect a nonnegative integer")


def IsFilewithExt(*exts: str):
    """Returns a function that returns True if the file extension is consistent"""
    return lambda filename: filename.endswith(exts)


def LoadFileWithExt(*, key: str | None = None, update: bool = False, **kwargs: Callable):
    """Returns a function that loads a file by its extension.

    With `key`, the input is a mapping holding the filename under `key`; the remaining
    items override the loaded ones when `update` is set.
    """

    def checkfilename(filename_or_dict: str | Mapping):
        if key is not None:
            if not isinstance(filename_or_dict, Mapping):
                raise SchemaError("Expect dictionary as a filename")
            dct = dict(filename_or_dict)
            if key not in dct:
                return dct
            filename = dct.pop(key)
        else:
            if not isinstance(filename_or_dict, str):
                raise SchemaError("Expect str as a filename")
            filename, dct = filename_or_dict, None
        for ext, loader in kwargs.items():
            if filename.endswith(f".{ext}"):
                break
        else:
            raise SchemaError(
                f"Do not know how to load {filename}: no extension handler provided"
                f" ({', '.join(kwargs.keys())})"
            )

        ret = loader(filename)
        if not isinstance(ret, dict):
            raise SchemaError(f"File {filename} should contain a mapping")
        if update and dct is not None:
            ret.update(dct)

        return ret

    return checkfilename


def LoadYaml(fname: Path | str):
    if isinstance(fname, Path):
        fname = str(fname)
    with open(fname) as file:
        ret = load(file, SafeLoader)

    logger.log(INFO1, f"Read: {fname}")
    return ret


def LoadJson(fname: Path | str):
    with open(fname) as file:
        ret = load_json(file)

    logger.log(INFO1, f"Read: {fname}")
    return ret

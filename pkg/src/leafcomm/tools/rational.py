from __future__ import annotations

from fractions import Fraction
from math import lcm
from numbers import Integral, Rational
from typing import TYPE_CHECKING

from ..core.exception import ValidationError

if TYPE_CHECKING:
    from collections.abc import Iterable
    from typing import Any


def parse_rational(value: str | int | Fraction) -> Fraction:
    """Parses "A/B", "A" or an exact number into a Fraction. Floats are rejected."""
    if isinstance(value, bool):
        raise ValidationError(f"Expect a rational number, got {value!r}")
    if isinstance(value, (Integral, Rational)):
        return Fraction(value)
    if not isinstance(value, str):
        raise ValidationError(f"Expect a rational number, got {value!r}")

    text = value.strip()
    num, sep, den = text.partition("/")
    try:
        numerator = int(num)
        denominator = int(den) if sep else 1
    except ValueError as exc:
        raise ValidationError(f'Malformed rational "{value}", expect "A/B"') from exc
    if denominator == 0:
        raise ValidationError(f'Malformed rational "{value}": zero denominator')
    return Fraction(numerator, denominator)


def format_rational(value: Fraction | int) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def common_denominator(values: Iterable[Fraction]) -> int:
    return lcm(1, *(Fraction(v).denominator for v in values))


def to_jsonable(obj: Any) -> Any:
    """Recursively converts Fractions into "A/B" strings and tuples into lists."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, dict):
        return {str(key): to_jsonable(val) for key, val in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(val) for val in obj]
    if hasattr(obj, "item") and callable(obj.item):
        return to_jsonable(obj.item())
    return obj

from __future__ import annotations

from fractions import Fraction
from json import dumps, loads
from typing import TYPE_CHECKING, Any

from numpy import int64, zeros

from ..core.exception import ValidationError
from ..tools.bits import parity_array
from ..tools.rational import common_denominator, format_rational, parse_rational

if TYPE_CHECKING:
    from collections.abc import Sequence

    from numpy import uint8
    from numpy.typing import NDArray


class SignedParity:
    """x -> <mask, x> mod 2, flipped when negated. The empty mask gives a constant."""

    __slots__ = ("_mask", "_negated")
    _mask: int
    _negated: bool

    def __init__(self, mask: int, negated: bool = False):
        if mask < 0:
            raise ValidationError(f"Parity mask should be nonnegative, got {mask}")
        self._mask = int(mask)
        self._negated = bool(negated)

    @property
    def mask(self) -> int:
        return self._mask

    @property
    def negated(self) -> bool:
        return self._negated

    def __call__(self, x: int) -> int:
        return ((int(x) & self._mask).bit_count() & 1) ^ self._negated

    def evaluate(self, xs: NDArray[int64]) -> NDArray[uint8]:
        return parity_array(xs, self._mask) ^ int(self._negated)

    def to_dict(self) -> dict[str, Any]:
        return {"mask": hex(self._mask), "sign": -1 if self._negated else 1}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> SignedParity:
        return cls(int(data["mask"], 16), data["sign"] == -1)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SignedParity)
            and self._mask == other._mask
            and self._negated == other._negated
        )

    def __hash__(self) -> int:
        return hash((self._mask, self._negated))

    def __repr__(self) -> str:
        sign = "-" if self._negated else "+"
        return f"SignedParity({sign}{self._mask:#x})"


class MajorityVote:
    """Weighted vote of signed parities: 1 iff the weighted sum of +-1 votes is positive."""

    __slots__ = ("_terms", "_denominator", "_numerators")
    _terms: tuple[tuple[SignedParity, Fraction], ...]
    _denominator: int
    _numerators: tuple[int, ...]

    def __init__(self, terms: Sequence[tuple[SignedParity, Fraction | int | str]]):
        parsed = tuple((parity, parse_rational(weight)) for parity, weight in terms)
        if any(weight < 0 for _, weight in parsed):
            raise ValidationError("Vote weights should be nonnegative")
        if sum(weight for _, weight in parsed) <= 0:
            raise ValidationError("Total vote weight should be positive")
        self._terms = parsed
        self._denominator = common_denominator(weight for _, weight in parsed)
        self._numerators = tuple(int(weight * self._denominator) for _, weight in parsed)

    @property
    def terms(self) -> tuple[tuple[SignedParity, Fraction], ...]:
        return self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def score(self, x: int) -> int:
        """Weighted +-1 vote sum, scaled by the common weight denominator."""
        return sum(
            numerator * (2 * parity(x) - 1)
            for (parity, _), numerator in zip(self._terms, self._numerators)
        )

    def __call__(self, x: int) -> int:
        return int(self.score(x) > 0)

    def scores(self, xs: NDArray[int64]) -> NDArray:
        total = zeros(len(xs), dtype=object)
        for (parity, _), numerator in zip(self._terms, self._numerators):
            total += numerator * (2 * parity.evaluate(xs).astype(int64) - 1)
        return total

    def evaluate(self, xs: NDArray[int64]) -> NDArray[uint8]:
        return (self.scores(xs) > 0).astype("u1")

    def to_list(self) -> list[list]:
        """[[mask hex, sign, weight], ...] with weights as exact rationals."""
        return [
            [hex(parity.mask), -1 if parity.negated else 1, format_rational(weight)]
            for parity, weight in self._terms
        ]

    def to_json(self) -> str:
        return dumps(self.to_list())

    @classmethod
    def from_list(cls, data: Sequence[Sequence]) -> MajorityVote:
        return cls(
            [(SignedParity(int(mask, 16), sign == -1), weight) for mask, sign, weight in data]
        )

    @classmethod
    def from_json(cls, text: str) -> MajorityVote:
        return cls.from_list(loads(text))

    def __repr__(self) -> str:
        return f"MajorityVote({len(self._terms)} terms)"


Hypothesis = SignedParity | MajorityVote

from __future__ import annotations

from fractions import Fraction
from types import MappingProxyType
from typing import TYPE_CHECKING, Literal

from numpy import array, asarray, int64, zeros

from ..core.exception import CalculationError, CapacityError, ValidationError
from ..core.formula import as_bitmask
from ..tools.rational import common_denominator, format_rational, parse_rational
from .transforms import mobius, table_size_bits, walsh, zeta

if TYPE_CHECKING:
    from collections.abc import Iterable, Mapping

    from numpy.typing import NDArray

Basis = Literal["zero_one", "plus_minus"]
Bases = ("zero_one", "plus_minus")

EXHAUSTIVE_MAX_VARS = 20


def _submasks(mask: int):
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


class MultilinearPoly:
    """Sparse multilinear polynomial with exact rational coefficients.

    In the zero_one basis the monomial of a subset S is prod_{i in S} x_i over x in {0,1}^n.
    In the plus_minus basis it is prod_{i in S} z_i with z_i = 1 - 2 x_i in {1, -1}.
    """

    __slots__ = ("_basis", "_n", "_terms")
    _basis: Basis
    _n: int
    _terms: dict[int, Fraction]

    def __init__(
        self,
        n: int,
        terms: Mapping[int, Fraction | int] | None = None,
        basis: Basis = "zero_one",
    ):
        if basis not in Bases:
            raise ValidationError(f"Unknown basis {basis}, expect one of {Bases}")
        if n < 0:
            raise ValidationError(f"Number of variables should be nonnegative, got {n}")
        self._basis = basis
        self._n = n
        self._terms = {}
        for mask, coef in (terms or {}).items():
            if mask < 0 or mask >> n:
                raise ValidationError(f"Monomial {mask:#x} does not fit into {n} variables")
            if coef:
                self._terms[int(mask)] = Fraction(coef)

    @classmethod
    def constant(cls, n: int, value: Fraction | int, basis: Basis = "zero_one") -> MultilinearPoly:
        return cls(n, {0: value}, basis)

    @classmethod
    def variable(cls, n: int, index: int, basis: Basis = "zero_one") -> MultilinearPoly:
        return cls(n, {1 << index: 1}, basis)

    @property
    def basis(self) -> Basis:
        return self._basis

    @property
    def n(self) -> int:
        return self._n

    @property
    def terms(self) -> Mapping[int, Fraction]:
        return MappingProxyType(self._terms)

    @property
    def degree(self) -> int:
        return max((mask.bit_count() for mask in self._terms), default=0)

    @property
    def l1_norm(self) -> Fraction:
        return sum((abs(c) for c in self._terms.values()), Fraction(0))

    @property
    def max_abs_coefficient(self) -> Fraction:
        return max((abs(c) for c in self._terms.values()), default=Fraction(0))

    def __len__(self) -> int:
        return len(self._terms)

    def __call__(self, x) -> Fraction:
        return eval_poly(self, x)

    def _check_compatible(self, other: MultilinearPoly):
        if self._basis != other._basis or self._n != other._n:
            raise ValidationError(
                f"Incompatible polynomials: ({self._basis}, n={self._n}) "
                f"and ({other._basis}, n={other._n})"
            )

    def __add__(self, other) -> MultilinearPoly:
        if not isinstance(other, MultilinearPoly):
            other = MultilinearPoly.constant(self._n, Fraction(other), self._basis)
        self._check_compatible(other)
        terms = dict(self._terms)
        for mask, coef in other._terms.items():
            terms[mask] = terms.get(mask, 0) + coef
        return MultilinearPoly(self._n, terms, self._basis)

    __radd__ = __add__

    def __neg__(self) -> MultilinearPoly:
        return MultilinearPoly(self._n, {m: -c for m, c in self._terms.items()}, self._basis)

    def __sub__(self, other) -> MultilinearPoly:
        return self + (-other)

    def __rsub__(self, other) -> MultilinearPoly:
        return (-self) + other

    def __mul__(self, other) -> MultilinearPoly:
        if not isinstance(other, MultilinearPoly):
            scale = Fraction(other)
            terms = {m: c * scale for m, c in self._terms.items()}
            return MultilinearPoly(self._n, terms, self._basis)
        self._check_compatible(other)
        # x_i^2 = x_i for bits, z_i^2 = 1 for signs
        combine = int.__or__ if self._basis == "zero_one" else int.__xor__
        terms: dict[int, Fraction] = {}
        for mask1, coef1 in self._terms.items():
            for mask2, coef2 in other._terms.items():
                mask = combine(mask1, mask2)
                terms[mask] = terms.get(mask, 0) + coef1 * coef2
        return MultilinearPoly(self._n, terms, self._basis)

    __rmul__ = __mul__

    def __truediv__(self, other) -> MultilinearPoly:
        return self * (1 / Fraction(other))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MultilinearPoly)
            and self._basis == other._basis
            and self._n == other._n
            and self._terms == other._terms
        )

    def __hash__(self) -> int:
        return hash((self._basis, self._n, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        if not self._terms:
            return f"MultilinearPoly(0, n={self._n}, {self._basis})"
        symbol = "x" if self._basis == "zero_one" else "z"
        parts = []
        for mask in sorted(self._terms, key=lambda m: (m.bit_count(), m)):
            monomial = "*".join(f"{symbol}{i + 1}" for i in range(self._n) if mask >> i & 1)
            coef = format_rational(self._terms[mask])
            parts.append(f"{coef}*{monomial}" if monomial else coef)
        return f"MultilinearPoly({' + '.join(parts)}, n={self._n}, {self._basis})"

    def to_json(self) -> dict:
        return {
            "basis": self._basis,
            "n": self._n,
            "terms": [
                {
                    "subset_mask": f"{mask:x}",
                    "num": str(coef.numerator),
                    "den": str(coef.denominator),
                }
                for mask, coef in sorted(self._terms.items())
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> MultilinearPoly:
        try:
            terms = {
                int(item["subset_mask"], 16): Fraction(int(item["num"]), int(item["den"]))
                for item in data["terms"]
            }
            return cls(int(data["n"]), terms, data.get("basis", "zero_one"))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"Malformed polynomial dump: {exc}") from exc


class ErrorBudget:
    """Error targets of the composition pipeline."""

    __slots__ = ("_top_eps", "_piece_eps", "_final_eps")
    _top_eps: Fraction
    _piece_eps: Fraction
    _final_eps: Fraction

    def __init__(
        self,
        final_eps: Fraction | str | int,
        *,
        top_eps: Fraction | str | int = Fraction(1, 20),
        piece_eps: Fraction | str | int = Fraction(1, 20),
    ):
        self._final_eps = parse_rational(final_eps)
        self._top_eps = parse_rational(top_eps)
        self._piece_eps = parse_rational(piece_eps)
        for name, value in (
            ("final_eps", self._final_eps),
            ("top_eps", self._top_eps),
            ("piece_eps", self._piece_eps),
        ):
            if not 0 <= value < 1:
                raise ValidationError(f"{name}={value} should be within [0, 1)")

    @classmethod
    def for_pieces(cls, final_eps: Fraction | str | int, pieces: int) -> ErrorBudget:
        return cls(final_eps, piece_eps=Fraction(1, 20 * max(pieces, 1)))

    @property
    def top_eps(self) -> Fraction:
        return self._top_eps

    @property
    def piece_eps(self) -> Fraction:
        return self._piece_eps

    @property
    def final_eps(self) -> Fraction:
        return self._final_eps

    def __repr__(self) -> str:
        return (
            f"ErrorBudget(final={format_rational(self._final_eps)}, "
            f"top={format_rational(self._top_eps)}, piece={format_rational(self._piece_eps)})"
        )


def _check_exhaustive(n: int):
    if n > EXHAUSTIVE_MAX_VARS:
        raise CapacityError(
            f"Value tables support up to {EXHAUSTIVE_MAX_VARS} variables", size=n
        )


def scale_values(values: Iterable) -> tuple[NDArray, int]:
    """Integer numerators with a common denominator for a table of rationals."""
    fractions = [Fraction(v) for v in values]
    denominator = common_denominator(fractions)
    numerators = array([int(v * denominator) for v in fractions], dtype=object)
    return numerators, denominator


def from_scaled(numerators: NDArray, denominator: int) -> MultilinearPoly:
    """Möbius interpolation of the table numerators/denominator in the zero_one basis."""
    n = table_size_bits(numerators)
    _check_exhaustive(n)
    coefs = mobius(numerators)
    terms = {mask: Fraction(int(c), denominator) for mask, c in enumerate(coefs) if c}
    return MultilinearPoly(n, terms)


def from_table(values) -> MultilinearPoly:
    """The unique zero_one polynomial taking the given values on {0,1}^n."""
    values = asarray(values)
    if values.dtype.kind in "iub":
        return from_scaled(values, 1)
    return from_scaled(*scale_values(values))


def exact_multilinear(table) -> MultilinearPoly:
    """Exact interpolation of a Boolean (or integer) table of length 2^m."""
    table = asarray(table)
    m = table_size_bits(table)
    _check_exhaustive(m)
    if table.dtype.kind not in "iub":
        return from_table(table)
    return from_scaled(table.astype(int64), 1)


def scaled_table_of(p: MultilinearPoly) -> tuple[NDArray, int]:
    """Values of p over {0,1}^n as integer numerators with a common denominator."""
    _check_exhaustive(p.n)
    denominator = common_denominator(p.terms.values())
    coefs = zeros(1 << p.n, dtype=int64)
    ints = {mask: int(c * denominator) for mask, c in p.terms.items()}
    bound = sum(abs(v) for v in ints.values())
    if bound >= 1 << 62:
        coefs = coefs.astype(object)
    for mask, value in ints.items():
        coefs[mask] = value
    if p.basis == "zero_one":
        return zeta(coefs), denominator
    return walsh(coefs), denominator


def table_of(p: MultilinearPoly) -> NDArray:
    """Values of p over {0,1}^n as an object array of Fractions."""
    numerators, denominator = scaled_table_of(p)
    return array([Fraction(int(v), denominator) for v in numerators], dtype=object)


def max_error(p: MultilinearPoly, table) -> Fraction:
    """Exact sup-norm distance between p and a table over {0,1}^n."""
    table = asarray(table)
    if len(table) != 1 << p.n:
        raise ValidationError(f"Table of length {len(table)} does not match n={p.n}")
    numerators, denominator = scaled_table_of(p)
    return scaled_error(numerators, denominator, table)


def scaled_error(numerators: NDArray, denominator: int, table) -> Fraction:
    if table.dtype.kind in "iub":
        if denominator >= 1 << 30:
            numerators = numerators.astype(object)
        diff = numerators - table.astype(numerators.dtype) * denominator
        return Fraction(int(abs(diff).max()), denominator)
    return max(abs(Fraction(int(v), denominator) - Fraction(t)) for v, t in zip(numerators, table))


def eval_poly(p: MultilinearPoly, x) -> Fraction:
    """Exact value at x (bitmask with x1 as the low bit, or a bit sequence)."""
    x = as_bitmask(x, p.n)
    total = Fraction(0)
    if p.basis == "zero_one":
        for mask, coef in p.terms.items():
            if mask & x == mask:
                total += coef
    else:
        for mask, coef in p.terms.items():
            total += -coef if (mask & x).bit_count() & 1 else coef
    return total


def convert_basis(p: MultilinearPoly) -> MultilinearPoly:
    """Re-expands p in the other basis; both represent the same function of x in {0,1}^n.

    z_S = prod (1 - 2 x_i) and x_S = prod (1 - z_i)/2 are expanded over submasks.
    """
    terms: dict[int, Fraction] = {}
    if p.basis == "plus_minus":
        for mask, coef in p.terms.items():
            for sub in _submasks(mask):
                terms[sub] = terms.get(sub, 0) + coef * (-2) ** sub.bit_count()
        result = MultilinearPoly(p.n, terms, "zero_one")
    else:
        for mask, coef in p.terms.items():
            scale = coef / (1 << mask.bit_count())
            for sub in _submasks(mask):
                terms[sub] = terms.get(sub, 0) + (-scale if sub.bit_count() & 1 else scale)
        result = MultilinearPoly(p.n, terms, "plus_minus")

    degree = p.degree
    bound = p.n**degree * 4**degree * p.max_abs_coefficient
    if result.l1_norm > bound:
        raise CalculationError(
            f"Basis change broke the l1 bound: {result.l1_norm} > n^d 4^d max|c| = {bound}"
        )
    return result

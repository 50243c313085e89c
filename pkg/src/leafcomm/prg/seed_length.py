"""Closed-form seed lengths next to the seed lengths of the generators built here.

Every asymptotic bound is evaluated with its hidden constant replaced by `c` (1 unless
configured), logarithms base 2. The numbers are up to constants by nature.
"""

from __future__ import annotations

from fractions import Fraction
from math import ceil, log2, sqrt
from typing import TYPE_CHECKING, Any, Literal

from ..core.exception import CalculationError, ExtractorError, ValidationError
from ..tools.logger import INFO1, INFO2, logger
from ..tools.rational import parse_rational
from .extractor import EXTRACTOR_BACKENDS
from .gip_stretch import GipStretchGenerator
from .inw import InwGenerator
from .small_bias import SmallBiasGenerator

if TYPE_CHECKING:
    from collections.abc import Mapping

SeedModel = Literal["formula_xor", "formula_ltf", "formula_sym", "formula_nih", "formula_nof"]
SEED_MODELS = ("formula_xor", "formula_ltf", "formula_sym", "formula_nih", "formula_nof")
DEFAULT_PRG_C = 0.5
INW_MAX_EXPONENT = 1000


def prg_main_exponent(s: int, eps: Fraction, c: float) -> float:
    """c sqrt(s) log2(s) log2(1/eps), with log2(s) floored at 1."""
    return c * sqrt(s) * max(1.0, log2(s)) * log2(1 / eps)


def prg_main_delta(s: int, eps: Fraction | str, c: float = DEFAULT_PRG_C) -> float:
    """The bias 2^-(c sqrt(s) log s log(1/eps)) that fools size-s formulas over parities."""
    return 2.0 ** -prg_main_exponent(s, parse_rational(eps), c)


def prg_main_ell(n: int, s: int, eps: Fraction | str, c: float = DEFAULT_PRG_C) -> int:
    """Field degree with n / 2^ell below the scheduled bias."""
    return max(1, ceil(log2(n) + prg_main_exponent(s, parse_rational(eps), c)))


def small_bias_for_formulas(
    n: int, s: int, eps: Fraction | str, c: float = DEFAULT_PRG_C
) -> SmallBiasGenerator:
    """Small-bias generator meant to eps-fool size-s formulas over parities of n bits."""
    return SmallBiasGenerator(n, ell=prg_main_ell(n, s, eps, c))


class SeedLengthReport:
    __slots__ = ("model", "params", "expression", "theoretical", "implemented")
    model: str
    params: dict[str, Any]
    expression: str
    theoretical: float
    implemented: int | None

    def __init__(self, model, params, expression, theoretical, implemented):
        self.model = model
        self.params = params
        self.expression = expression
        self.theoretical = theoretical
        self.implemented = implemented

    def to_dict(self) -> dict[str, Any]:
        return {
            "model": self.model,
            "params": self.params,
            "expression": self.expression,
            "theoretical": round(self.theoretical, 6),
            "implemented": self.implemented,
            "note": "theoretical value is up to constants",
        }

    def __repr__(self) -> str:
        return (
            f"SeedLengthReport({self.model}, theoretical={self.theoretical:.2f}, "
            f"implemented={self.implemented})"
        )


def _require(params: Mapping[str, Any], *names: str) -> list:
    missing = [name for name in names if name not in params]
    if missing:
        raise ValidationError(f"Missing seed-length parameters: {', '.join(missing)}")
    return [params[name] for name in names]


def _inw_seed_length(n: int, s: int, eps: Fraction, c: float, k: int, cost: int) -> int | None:
    """Shortest seed of an INW generator for the XOR of the degree-many leaves of a size-s
    formula over the extractor backends that meet their margins."""
    if k < 2 or k & (k - 1) or n % k:
        return None
    degree = max(1, ceil(c * sqrt(s) * log2(1 / eps)))
    exponent = ceil(c * sqrt(s) * (cost + log2(s)) * log2(1 / eps))
    if exponent > INW_MAX_EXPONENT:
        return None
    delta = Fraction(1, 1 << max(1, exponent))
    seeds = []
    for backend in EXTRACTOR_BACKENDS:
        try:
            seeds.append(InwGenerator(n, k, degree * cost, delta, backend).seed_len)
        except (ExtractorError, ValidationError) as exc:
            logger.log(INFO2, f"No INW generator with {backend}: {exc}")
    return min(seeds, default=None)


def seed_length_report(model: SeedModel, params: Mapping[str, Any]) -> SeedLengthReport:
    """Parameters: n, s, eps, optional c (default 1), k and R for the party models,
    m and t for the generalized inner product stretch."""
    n, s, eps = _require(params, "n", "s", "eps")
    eps = parse_rational(eps)
    c = float(params.get("c", 1))
    if n < 1 or s < 1 or not 0 < eps < 1:
        raise ValidationError(f"Invalid seed-length parameters n={n}, s={s}, eps={eps}")
    log_n, log_s, log_eps = log2(n), log2(s), log2(1 / eps)
    implemented = None
    match model:
        case "formula_xor":
            expression = "c sqrt(s) log(s) log(1/eps) + log(n)"
            theoretical = c * sqrt(s) * log_s * log_eps + log_n
            implemented = 2 * prg_main_ell(n, s, eps, c)
        case "formula_ltf":
            expression = "c n^(1/2) s^(1/4) log(n) log(n/eps)"
            theoretical = c * sqrt(n) * s**0.25 * log_n * (log_n + log_eps)
        case "formula_sym":
            expression = "c n^(1/2) s^(1/4) log(n) log(1/eps)"
            theoretical = c * sqrt(n) * s**0.25 * log_n * log_eps
        case "formula_nih":
            k, cost = _require(params, "k", "R")
            expression = "n/k + c (sqrt(s) (R + log(s)) log(1/eps) + log(k)) log(k)"
            theoretical = n / k + c * (sqrt(s) * (cost + log_s) * log_eps + log2(k)) * log2(k)
            implemented = _inw_seed_length(n, s, eps, c, k, cost)
        case "formula_nof":
            k, cost = _require(params, "k", "R")
            expression = "n - n / (c sqrt(s) k 4^k (R + log(n)) log(n/eps))"
            denominator = c * sqrt(s) * k * 4**k * (cost + log_n) * (log_n + log_eps)
            if denominator <= 0:
                raise CalculationError(f"Degenerate denominator {denominator}")
            theoretical = n - n / denominator
            if "m" in params and "t" in params:
                implemented = GipStretchGenerator(params["m"], params["t"], k).seed_len
        case _:
            raise ValidationError(f"Unknown model {model}, expect one of {SEED_MODELS}")
    report = SeedLengthReport(model, dict(params), expression, theoretical, implemented)
    logger.log(INFO1, repr(report))
    return report

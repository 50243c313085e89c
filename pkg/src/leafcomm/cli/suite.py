"""Registry of named regression checks run by `leafcomm suite`.

A check receives its own seeded stream and the long flag and returns rows of
{check, passed, detail}. Long runs use the desk-scale instance counts.
"""

from __future__ import annotations

from fractions import Fraction
from math import isclose
from typing import TYPE_CHECKING

from numpy import uint8

from ..core.exception import LeafcommError, ValidationError
from ..core.formula import truth_table
from ..core.generate import random_formula
from ..core.parser import parse_formula
from ..counting.bruteforce import count_sat_bruteforce
from ..counting.device import LeafDevice
from ..counting.fast import count_sat_fast
from ..counting.randomized import count_sat_randomized
from ..hardness.bounds import lb_size_bound
from ..hardness.correlation import best_parity_correlation, checked_approximator_correlation
from ..hardness.distribution import Distribution
from ..hardness.functions import gip_array, inner_product
from ..learning.boosting import run_pac_learn_formula_xor
from ..learning.hypothesis import SignedParity
from ..learning.oracle import ExampleOracle
from ..polynomial.compose import build_approximation
from ..polynomial.multilinear import max_error
from ..prg.fooling import fooling_gap
from ..prg.gip_stretch import GipStretchGenerator
from ..prg.inw import InwGenerator
from ..prg.seed_length import seed_length_report, small_bias_for_formulas
from ..prg.small_bias import max_parity_bias
from ..protocols.explicit import random_protocol
from ..tools.bits import all_inputs
from ..tools.logger import INFO1, logger
from ..tools.rational import format_rational
from ..tools.seeding import make_rng
from ..tools.timer import Timer

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence
    from typing import Any

    from numpy.random import Generator
    from numpy.typing import NDArray

    Check = Callable[[Generator, bool], list[dict[str, Any]]]

_checks: dict[str, Check] = {}

# (n, k, eps, R) -> exact size bound
LB_FIXTURES = (
    ((1 << 10, 2, Fraction(1, 4), 1), Fraction(256, 121)),
    ((1 << 12, 2, Fraction(1, 16), 4), Fraction(4)),
    ((1 << 8, 2, Fraction(1, 2), 0), Fraction(1)),
)

# (model, parameters) -> theoretical seed length with c = 1
SEED_FIXTURES = (
    ("formula_xor", {"n": 16, "s": 16, "eps": "1/4"}, 36.0),
    ("formula_xor", {"n": 1024, "s": 64, "eps": "1/16"}, 202.0),
    ("formula_ltf", {"n": 256, "s": 16, "eps": "1/4"}, 2560.0),
    ("formula_sym", {"n": 256, "s": 16, "eps": "1/4"}, 512.0),
    ("formula_nih", {"n": 64, "s": 16, "eps": "1/4", "k": 4, "R": 2}, 116.0),
    ("formula_nih", {"n": 64, "s": 4, "eps": "1/2", "k": 2, "R": 0}, 37.0),
    ("formula_nof", {"n": 1024, "s": 4, "eps": "1/4", "k": 2, "R": 6}, 1024 - 1 / 12),
)


def register_check(name: str) -> Callable[[Check], Check]:
    def decorator(fn: Check) -> Check:
        if name in _checks:
            raise ValidationError(f"Check {name} is already registered")
        _checks[name] = fn
        return fn

    return decorator


def check_names() -> tuple[str, ...]:
    return tuple(_checks)


def _row(check: str, passed: bool, detail: str = "") -> dict[str, Any]:
    return {"check": check, "passed": bool(passed), "detail": detail}


def _sizes(rng: Generator, count: int, n_range: tuple[int, int], s_range: tuple[int, int]):
    for _ in range(count):
        yield int(rng.integers(n_range[0], n_range[1] + 1)), int(
            rng.integers(s_range[0], s_range[1] + 1)
        )


@register_check("approx_random_formulas")
def _approx_random_formulas(rng: Generator, long: bool) -> list[dict[str, Any]]:
    count, n_max, s_max = (100, 12, 36) if long else (4, 8, 9)
    rows = []
    for eps in (Fraction(1, 3), Fraction(1, 10)) if long else (Fraction(1, 3),):
        worst, failures = Fraction(0), 0
        for n, s in _sizes(rng, count, (3, n_max), (1, s_max)):
            f = random_formula(n, s, "mixed", rng=rng)
            error = max_error(build_approximation(f, eps).poly, truth_table(f))
            worst = max(worst, error)
            failures += error > eps
        rows.append(
            _row(
                f"approx_random_formulas[eps={eps}]",
                failures == 0,
                f"{count} formulas, worst error {format_rational(worst)}",
            )
        )
    return rows


def _sat_agreement(
    name: str, rng: Generator, count: int, n_range, s_range, gate_class: str, parties: int
) -> dict[str, Any]:
    failures = []
    for n, s in _sizes(rng, count, n_range, s_range):
        f = random_formula(n, s, gate_class, rng=rng)
        device = LeafDevice.from_formula(f, parties)
        if count_sat_fast(device, mode="approx") != count_sat_bruteforce(f):
            failures.append(f"n={n}, s={s}")
    return _row(name, not failures, f"{count} devices" + "; ".join(["", *failures]))


@register_check("sat_formula_xor")
def _sat_formula_xor(rng: Generator, long: bool) -> list[dict[str, Any]]:
    count, n_max, s_max = (200, 14, 16) if long else (8, 10, 6)
    return [_sat_agreement("sat_formula_xor", rng, count, (4, n_max), (1, s_max), "xor", 2)]


@register_check("sat_formula_sym_nih")
def _sat_formula_sym_nih(rng: Generator, long: bool) -> list[dict[str, Any]]:
    count = 30 if long else 3
    return [_sat_agreement("sat_formula_sym_nih", rng, count, (8, 8), (1, 4), "sym", 4)]


@register_check("sat_formula_ltf_randomized")
def _sat_formula_ltf_randomized(rng: Generator, long: bool) -> list[dict[str, Any]]:
    if not long:
        return []
    agreements, runs = 0, 0
    for n, s in _sizes(rng, 30, (4, 10), (1, 4)):
        f = random_formula(n, s, "ltf", rng=rng)
        device = LeafDevice.from_formula(f, kind="randomized")
        runs += 1
        agreements += count_sat_randomized(device, rng=rng) == count_sat_bruteforce(f)
    return [
        _row(
            "sat_formula_ltf_randomized",
            20 * agreements >= 19 * runs,
            f"{agreements}/{runs} runs agree with brute force",
        )
    ]


@register_check("small_bias_soundness")
def _small_bias_soundness(rng: Generator, long: bool) -> list[dict[str, Any]]:
    exceptions = []
    for ell in range(1, 13 if long else 7):
        for n in sorted({2, ell + 1, min(20, 2 * ell)}):
            bias = max_parity_bias(ell, n)
            if bias > Fraction(n, 1 << ell):
                exceptions.append(f"ell={ell}, n={n}: {format_rational(bias)}")
    return [_row("small_bias_soundness", not exceptions, "; ".join(exceptions) or "no exceptions")]


@register_check("prg_formula_xor")
def _prg_formula_xor(rng: Generator, long: bool) -> list[dict[str, Any]]:
    eps = Fraction(1, 4)
    count, n_max, s_max = (30, 10, 8) if long else (5, 8, 4)
    worst, failures = Fraction(0), 0
    for n, s in _sizes(rng, count, (2, n_max), (1, s_max)):
        f = random_formula(n, s, "xor", rng=rng)
        gap = fooling_gap(small_bias_for_formulas(n, s, eps), f, rng=rng)
        worst = max(worst, gap.gap)
        failures += not gap.within(eps)
    detail = f"{count} devices, worst gap {float(worst):.4g}"
    return [_row("prg_formula_xor", failures == 0, detail)]


# (n, k, D', delta) of INW generators whose extractors all hash
INW_FIXTURES = ((20, 2, 0, Fraction(1, 2)), (22, 2, 1, Fraction(3, 4)))
INW_SAMPLES = 20000


def _random_rectangle(rng: Generator, n: int) -> NDArray[uint8]:
    """Truth table of S x T for random subsets S and T of the two halves."""
    half = n // 2
    left = rng.integers(0, 2, size=1 << half, dtype=uint8)
    right = rng.integers(0, 2, size=1 << (n - half), dtype=uint8)
    return (right[:, None] & left[None, :]).ravel()


@register_check("inw_toy_fooling")
def _inw_toy_fooling(rng: Generator, long: bool) -> list[dict[str, Any]]:
    count = 50 if long else 10
    rows = []
    for n, k, dprime, delta in INW_FIXTURES:
        generator = InwGenerator(n, k, dprime, delta)
        hashed = [config.hashed for config in generator.extractors]
        if dprime:
            tests = [random_protocol(n, dprime, rng) for _ in range(count)]
            bound = delta
        else:
            # zero communication leaves products of per-party tests
            tests = [_random_rectangle(rng, n) for _ in range(count)]
            bound = generator.hybrid_bound
        gaps = [fooling_gap(generator, test, samples=INW_SAMPLES, rng=rng) for test in tests]
        worst = max(gaps, key=lambda gap: gap.gap)
        rows.append(
            _row(
                f"inw_toy_fooling[n={n},k={k},D'={dprime}]",
                min(hashed) > 0 and all(gap.within(bound) for gap in gaps),
                f"seed_len {generator.seed_len} for n={n}, hashed bits {hashed}, "
                f"worst gap {worst!r} over {count} tests, bound {format_rational(bound)}",
            )
        )
    return rows


@register_check("gip_stretch_consistency")
def _gip_stretch_consistency(rng: Generator, long: bool) -> list[dict[str, Any]]:
    rows = []
    for m, t, k in ((4, 2, 2), (4, 4, 2), (4, 4, 4), (8, 2, 2)):
        generator = GipStretchGenerator(m, t, k)
        consistent = all(generator.is_consistent(int(out)) for out in generator.expand_all())
        rows.append(_row(f"gip_stretch_consistency[m={m},t={t},k={k}]", consistent))
    mismatches = []
    for n in range(2, (16 if long else 12) + 1, 2):
        xs = all_inputs(n)
        expected = [inner_product(int(x), n) for x in xs]
        if gip_array(2, xs, n).tolist() != expected:
            mismatches.append(str(n))
    rows.append(_row("gip_equals_inner_product", not mismatches, ", ".join(mismatches)))
    return rows


@register_check("correlation_bounds")
def _correlation_bounds(rng: Generator, long: bool) -> list[dict[str, Any]]:
    count, eps = (100 if long else 20), Fraction(1, 8)
    checked, failures = 0, 0
    while checked < count:
        n = int(rng.integers(2, 11 if long else 8))
        dist = Distribution.random(n, rng)
        f = rng.integers(0, 2, size=1 << n).astype("u1")
        flips = rng.random(1 << n) < 0.2
        c = f ^ flips.astype("u1")
        if dist.expectation((c == f).astype("i8")) < Fraction(1, 2) + eps:
            continue
        approx = [
            (1 - 2 * int(bit)) * (1 - Fraction(int(rng.integers(0, 9)), 64)) for bit in c
        ]
        checked += 1
        failures += checked_approximator_correlation(c, f, approx, eps, n, dist) < eps
    rows = [_row("approximator_correlation", failures == 0, f"{checked} instances")]

    values = []
    for n in (4, 8, 12):
        _, _, value = best_parity_correlation(gip_array(2, all_inputs(n), n), n)
        values.append(value)
    decreasing = all(a > b for a, b in zip(values, values[1:]))
    rows.append(
        _row("gip_best_parity_decreases", decreasing, ", ".join(map(format_rational, values)))
    )
    return rows


@register_check("learning_parity")
def _learning_parity(rng: Generator, long: bool) -> list[dict[str, Any]]:
    target = parse_formula("(xor 1 3 4)", 8)
    oracle = ExampleOracle(target, 8, rng)
    report = run_pac_learn_formula_xor(oracle, 8, 1, Fraction(1, 10), Fraction(1, 10))
    terms = report.hypothesis.terms
    recovered = len(terms) == 1 and terms[0][0] == SignedParity(0b1101)
    return [_row("learning_parity", recovered, repr(report.hypothesis))]


@register_check("learning_fixtures")
def _learning_fixtures(rng: Generator, long: bool) -> list[dict[str, Any]]:
    if not long:
        return []
    eps, delta, n, s = Fraction(1, 10), Fraction(1, 10), 10, 9
    xs = all_inputs(n)
    errors = []
    for _ in range(20):
        target = random_formula(n, s, "xor", rng=rng)
        report = run_pac_learn_formula_xor(ExampleOracle(target, n, rng), n, s, eps, delta)
        wrong = report.hypothesis.evaluate(xs) != truth_table(target)
        errors.append(Fraction(int(wrong.sum()), 1 << n))
    mean = sum(errors) / len(errors)
    successes = sum(error <= eps for error in errors)
    return [
        _row("learning_fixtures[mean]", mean <= eps, f"mean error {float(mean):.4f}"),
        _row("learning_fixtures[success]", 10 * successes >= 9 * len(errors), f"{successes}/20"),
    ]


@register_check("calculators")
def _calculators(rng: Generator, long: bool) -> list[dict[str, Any]]:
    rows = []
    for (n, k, eps, cost), expected in LB_FIXTURES:
        bound = lb_size_bound(n, k, eps, cost)
        rows.append(
            _row(f"lb_size_bound[n={n},k={k},eps={eps},R={cost}]", bound == expected, str(bound))
        )
    for model, params, expected in SEED_FIXTURES:
        theoretical = seed_length_report(model, params).theoretical
        name = f"seed_length[{model},{','.join(f'{k}={v}' for k, v in params.items())}]"
        rows.append(_row(name, isclose(theoretical, expected, rel_tol=1e-12), f"{theoretical:.6f}"))
    return rows


def run_suite(
    seed: int | None, *, long: bool = False, only: Sequence[str] | None = None
) -> list[dict[str, Any]]:
    """Rows of every registered check, each driven by its own stream of the seed."""
    if only is not None and (unknown := set(only) - set(_checks)):
        raise ValidationError(f"Unknown checks {sorted(unknown)}, expect some of {check_names()}")
    rows = []
    for name, check in _checks.items():
        if only is not None and name not in only:
            continue
        with Timer() as timer:
            try:
                produced = check(make_rng(seed, "suite", name), long)
            except LeafcommError as exc:
                produced = [_row(name, False, f"{type(exc).__name__}: {exc}")]
        logger.log(INFO1, f"Check {name}: {len(produced)} rows ({timer.elapsed_ms:.1f} ms)")
        rows.extend(produced)
    return rows

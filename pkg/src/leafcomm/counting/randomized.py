from __future__ import annotations

from fractions import Fraction
from math import ceil, log
from typing import TYPE_CHECKING

from numpy import stack
from scipy.stats import mode as stats_mode

from ..core.exception import ValidationError
from ..tools.logger import INFO1, INFO2, logger
from ..tools.rational import parse_rational
from ..tools.seeding import make_rng, spawn_rngs
from ..tools.timer import Timer
from .fast import (
    DEFAULT_C,
    TERM_CAP,
    Restriction,
    SatReport,
    _check_cap,
    _resolve_nprime,
    expand_terms,
    restricted_counts,
    run_sat_fast,
    skeleton_polynomial,
)

if TYPE_CHECKING:
    from numpy.random import Generator

    from .device import LeafDevice
    from .fast import PolynomialMode

MAJORITY_FACTOR = 18
DEFAULT_CONFIDENCE = Fraction(99, 100)


def leaf_error_target(size: int, nprime: int) -> Fraction:
    """1/(3 s 2^n'): a union bound over the leaves keeps every restriction count within reach."""
    return Fraction(1, 3 * max(size, 1) << nprime)


def whole_run_trials(n: int, nprime: int, confidence: Fraction) -> int:
    """Smallest odd T >= 18 (ln 2^(n - n') + ln(1/(1 - confidence)))."""
    value = MAJORITY_FACTOR * ((n - nprime) * log(2) + log(1 / (1 - confidence)))
    trials = max(1, ceil(value))
    return trials + 1 - trials % 2


def run_sat_randomized(
    d: LeafDevice,
    nprime: int | None = None,
    confidence: Fraction | str = DEFAULT_CONFIDENCE,
    *,
    rng: Generator | None = None,
    seed: int | None = None,
    c: float = DEFAULT_C,
    mode: PolynomialMode = "approx",
    backend: str = "standard",
    term_cap: int = TERM_CAP,
    trials: int | None = None,
) -> SatReport:
    """Counting through randomized leaf protocols.

    Every leaf is reduced to error 1/(3 s 2^n'), one deterministic protocol per leaf is
    sampled, and the deterministic pipeline yields the count of every free input. The whole
    run is repeated T times and each free input takes its majority count.
    """
    confidence = parse_rational(confidence)
    if not 0 < confidence < 1:
        raise ValidationError(f"Confidence should be within (0, 1), got {confidence}")
    nprime = _resolve_nprime(d, nprime, c)
    reduced = d.reduce_error(leaf_error_target(d.size, nprime))
    if reduced.deterministic:
        logger.log(INFO2, "All leaf protocols are deterministic, running the deterministic path")
        return run_sat_fast(reduced, nprime, c=c, mode=mode, backend=backend, term_cap=term_cap)

    if rng is None:
        rng = make_rng(seed, "count_sat_randomized")
    if trials is None:
        trials = whole_run_trials(d.n, nprime, confidence)
    elif trials < 1 or trials % 2 == 0:
        raise ValidationError(f"Number of trials should be odd, got {trials}")

    with Timer() as timer:
        restriction = Restriction(d.n, nprime)
        poly = skeleton_polynomial(d.formula, nprime, mode)
        runs, largest = [], 0
        for trial_rng in spawn_rngs(rng, trials):
            sampled = reduced.sample(trial_rng)
            expansion = expand_terms(
                sampled.two_party_protocols(), d.formula, poly, restriction, check=False
            )
            _check_cap(expansion, term_cap)
            largest = max(largest, expansion.m)
            runs.append(restricted_counts(expansion, backend))
        counts = stats_mode(stack(runs), axis=0, keepdims=False).mode
        count = int(counts.sum())
    logger.log(
        INFO1,
        f"Randomized count over n={d.n}, n'={nprime}: {count} after {trials} runs, "
        f"largest m={largest} ({timer.elapsed_ms:.1f} ms)",
    )
    return SatReport(
        count,
        largest,
        nprime,
        poly.degree,
        timer.elapsed_ms,
        backend,
        mode,
        n=d.n,
        size=d.size,
        cost=reduced.cost,
        trials=trials,
        leaf_error=leaf_error_target(d.size, nprime),
        confidence=confidence,
    )


def count_sat_randomized(
    d: LeafDevice,
    nprime: int | None = None,
    confidence: Fraction | str = DEFAULT_CONFIDENCE,
    **kwargs,
) -> int:
    return run_sat_randomized(d, nprime, confidence, **kwargs).count

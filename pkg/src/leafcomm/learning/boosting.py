"""Multiplicative-weights boosting of a parity weak learner.

Sample weights stay exact integers: every round multiplies the weights of correctly
labelled samples by beta = err / (1 - err), rounded to a dyadic rational with
ALPHA_BITS fractional bits, and the vote weight is ln(1/beta) rounded the same way.
The returned vote is the prefix with the least training error seen so far.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import ceil, gcd, log, sqrt
from typing import TYPE_CHECKING, Any

from numpy import count_nonzero, int64, zeros

from ..core.exception import ValidationError, WeakLearnerError
from ..hardness.correlation import parity_correlation_floor
from ..tools.logger import INFO1, INFO2, logger
from ..tools.rational import parse_rational
from ..tools.timer import Timer
from .hypothesis import MajorityVote
from .weak import weak_learn_arrays

if TYPE_CHECKING:
    from numpy import uint8
    from numpy.typing import NDArray

    from .hypothesis import Hypothesis, SignedParity
    from .oracle import ExampleOracle
    from .weak import WeakLearner

ALPHA_BITS = 16
MAX_ROUNDS = 200
SAMPLE_CAP = 20000
SAMPLE_ROUNDS = 10
DEFAULT_FLOOR_C = 0.25
FLOOR_EPS0 = Fraction(1, 4)
MIN_FLOOR = Fraction(1, 1 << 20)


def round_cap(eps: Fraction, floor: Fraction, max_rounds: int = MAX_ROUNDS) -> int:
    """ceil(2 ln(2/eps) / floor^2), capped by max_rounds."""
    return max(1, min(max_rounds, ceil(2 * log(2 / eps) / float(floor) ** 2)))


def training_size(n: int, eps: Fraction, delta: Fraction, rounds: int) -> int:
    """Occam-style sample size for a vote of up to SAMPLE_ROUNDS parities, capped."""
    terms = (n + 1) * log(2) * min(rounds, SAMPLE_ROUNDS) + log(2 / delta)
    return min(SAMPLE_CAP, ceil(4 / eps * terms))


def validation_size(eps: Fraction, delta: Fraction) -> int:
    """ceil(2 ln(4/delta) / eps^2) held-out examples."""
    return ceil(2 * log(4 / delta) / eps**2)


def _dyadic(value: float) -> int:
    """Numerator of value rounded to ALPHA_BITS fractional bits, at least 1."""
    return max(1, round(value * (1 << ALPHA_BITS)))


class BoostReport:
    __slots__ = (
        "hypothesis",
        "rounds",
        "training_errors",
        "vote_errors",
        "loss_bounds",
        "advantages",
        "train_size",
        "validation_size",
        "validation_error",
        "floor",
        "round_cap",
        "wall_ms",
        "eps",
    )
    hypothesis: MajorityVote
    rounds: int
    training_errors: list[Fraction]
    vote_errors: list[Fraction]
    loss_bounds: list[float]
    advantages: list[Fraction]
    train_size: int
    validation_size: int
    validation_error: Fraction | None
    floor: Fraction
    round_cap: int
    wall_ms: float
    eps: Fraction

    def __init__(self, **kwargs):
        for name in self.__slots__:
            setattr(self, name, kwargs.get(name))

    @property
    def validated(self) -> bool | None:
        return None if self.validation_error is None else self.validation_error <= self.eps

    def to_dict(self) -> dict[str, Any]:
        return {
            "hypothesis": self.hypothesis.to_list(),
            "rounds": self.rounds,
            "training_errors": self.training_errors,
            "advantages": self.advantages,
            "train_size": self.train_size,
            "validation_size": self.validation_size,
            "validation_error": self.validation_error,
            "validated": self.validated,
            "floor": float(self.floor),
            "round_cap": self.round_cap,
        }

    def __repr__(self) -> str:
        return (
            f"BoostReport(rounds={self.rounds}, training={self.training_errors[-1]}, "
            f"validation={self.validation_error})"
        )


def _error(predictions: NDArray[uint8], ys: NDArray[uint8]) -> Fraction:
    return Fraction(count_nonzero(predictions != ys), len(ys))


def run_boost(
    oracle: ExampleOracle,
    eps: Fraction | str,
    delta: Fraction | str,
    weak_advantage_floor: Fraction | float | str,
    *,
    weak_learner: WeakLearner = weak_learn_arrays,
    max_rounds: int = MAX_ROUNDS,
    train_size: int | None = None,
    validate: bool = True,
) -> BoostReport:
    """Boosts the weak learner to training error eps/2 and validates on held-out examples.

    The confidence delta is split evenly between the training draw and the validation.
    A round whose weak advantage 1/2 - err falls below the floor raises WeakLearnerError.
    """
    eps, delta = parse_rational(eps), parse_rational(delta)
    floor = (
        Fraction(weak_advantage_floor)
        if isinstance(weak_advantage_floor, float)
        else parse_rational(weak_advantage_floor)
    )
    if not 0 < eps <= 1 or not 0 < delta < 1 or not 0 <= floor <= Fraction(1, 2):
        raise ValidationError(
            f"Invalid boosting parameters eps={eps}, delta={delta}, floor={floor}"
        )
    n = oracle.n
    if eps >= Fraction(1, 2):
        cap = 1
    else:
        cap = round_cap(eps, max(floor, MIN_FLOOR), max_rounds)
    size = train_size or training_size(n, min(eps, Fraction(1, 2)), delta / 2, cap)

    with Timer() as timer:
        xs, ys = oracle.draw(size)
        weights = [1] * size
        scores = zeros(size, dtype=int64)
        terms: list[tuple[SignedParity, Fraction]] = []
        best_error, best_length = None, 0
        training_errors, vote_errors, loss_bounds, advantages = [], [], [], []
        loss = 1.0
        for round_index in range(cap):
            parity, err = weak_learner(xs, ys, weights, n)
            advantage = Fraction(1, 2) - err
            advantages.append(advantage)
            if advantage < floor:
                raise WeakLearnerError(
                    f"Round {round_index}: weak advantage {float(advantage):.4g} is below "
                    f"the floor {float(floor):.4g}",
                    details={"round": round_index, "advantage": advantage},
                )
            if err == 0:
                terms, best_length, best_error = [(parity, Fraction(1))], 1, Fraction(0)
                training_errors.append(best_error)
                vote_errors.append(best_error)
                loss_bounds.append(0.0)
                break
            beta = _dyadic(float(err / (1 - err)))
            alpha = _dyadic(log((1 << ALPHA_BITS) / beta))
            terms.append((parity, Fraction(alpha, 1 << ALPHA_BITS)))
            predictions = parity.evaluate(xs)
            scores += alpha * (2 * predictions.astype(int64) - 1)
            vote_error = _error((scores > 0).astype("u1"), ys)
            if best_error is None or vote_error < best_error:
                best_error, best_length = vote_error, len(terms)
            vote_errors.append(vote_error)
            training_errors.append(best_error)
            loss *= 2 * sqrt(float(err * (1 - err)))
            loss_bounds.append(loss)
            logger.log(
                INFO2,
                f"Round {round_index}: {parity!r}, err={float(err):.4f}, "
                f"vote error={float(vote_error):.4f}",
            )
            if best_error <= eps / 2:
                break
            correct = (predictions == ys).tolist()
            weights = [
                weight * beta if hit else weight << ALPHA_BITS
                for weight, hit in zip(weights, correct)
            ]
            common = reduce(gcd, weights)
            if common > 1:
                weights = [weight // common for weight in weights]
        hypothesis = MajorityVote(terms[:best_length])

        validation_error, held_out = None, 0
        if validate:
            held_out = validation_size(min(eps, Fraction(1, 2)), delta / 2)
            vx, vy = oracle.draw(held_out)
            validation_error = _error(hypothesis.evaluate(vx), vy)

    report = BoostReport(
        hypothesis=hypothesis,
        rounds=len(advantages),
        training_errors=training_errors,
        vote_errors=vote_errors,
        loss_bounds=loss_bounds,
        advantages=advantages,
        train_size=size,
        validation_size=held_out,
        validation_error=validation_error,
        floor=floor,
        round_cap=cap,
        wall_ms=timer.elapsed_ms,
        eps=eps,
    )
    logger.log(
        INFO1,
        f"Boosting: {report.rounds} rounds, {len(hypothesis)} terms, training error "
        f"{best_error}, validation error {validation_error} ({timer.elapsed_ms:.1f} ms)",
    )
    return report


def boost(
    oracle: ExampleOracle,
    eps: Fraction | str,
    delta: Fraction | str,
    weak_advantage_floor: Fraction | float | str,
    **kwargs,
) -> Hypothesis:
    return run_boost(oracle, eps, delta, weak_advantage_floor, **kwargs).hypothesis


def learning_curve(report: BoostReport) -> list[tuple[int, Fraction, Fraction]]:
    """(round, error of that round's vote, error of the best vote so far) per round."""
    return list(zip(range(1, report.rounds + 1), report.vote_errors, report.training_errors))


def formula_xor_floor(s: int, c: float = DEFAULT_FLOOR_C) -> Fraction:
    """Weak advantage floor: half the best-parity correlation guaranteed at eps0 = 1/4."""
    return Fraction(parity_correlation_floor(s, FLOOR_EPS0, c) / 2)


def run_pac_learn_formula_xor(
    oracle: ExampleOracle,
    n: int,
    s: int,
    eps: Fraction | str,
    delta: Fraction | str,
    *,
    c: float = DEFAULT_FLOOR_C,
    **kwargs,
) -> BoostReport:
    if oracle.n != n:
        raise ValidationError(f"Oracle over {oracle.n} variables, expect {n}")
    if s < 1:
        raise ValidationError(f"Formula size should be positive, got {s}")
    if s > n * n:
        logger.log(INFO1, f"Formula size {s} exceeds n^2={n * n}, the learner is not guaranteed")
    return run_boost(oracle, eps, delta, formula_xor_floor(s, c), **kwargs)


def pac_learn_formula_xor(
    oracle: ExampleOracle,
    n: int,
    s: int,
    eps: Fraction | str,
    delta: Fraction | str,
    **kwargs,
) -> Hypothesis:
    return run_pac_learn_formula_xor(oracle, n, s, eps, delta, **kwargs).hypothesis

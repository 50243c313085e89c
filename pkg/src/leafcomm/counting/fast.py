"""Exact #SAT through leaf protocols and an approximating polynomial of the skeleton.

Alice holds the low ceil(n/2) inputs and Bob the rest. The restriction set takes the lowest
ceil(n'/2) Alice variables and the lowest floor(n'/2) Bob variables. For every assignment w
of the remaining inputs Q(w) counts the restriction assignments z with f(z, w) = 1, and

    Q'(w) = sum_z p(leaf values at (z, w))

is within 1/3 of Q(w) when p is within 1/(3 2^n') of the skeleton. A leaf value is the sum
of the indicators of the accepting rectangles of its protocol, so expanding the monomials of
p gives Q' as a product of a matrix over (Alice's free inputs) x (terms) and a matrix over
(terms) x (Bob's free inputs).
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import floor, log2, sqrt
from typing import TYPE_CHECKING, Literal

from numpy import arange, hstack, int64, ones, vstack, zeros
from scipy.linalg import khatri_rao

from ..core.exception import (
    CalculationError,
    CapacityError,
    MonochromaticityError,
    RoundingGapError,
    ValidationError,
)
from ..core.formula import Leaf, skeleton, truth_table
from ..polynomial.compose import build_approx
from ..polynomial.multilinear import EXHAUSTIVE_MAX_VARS, exact_multilinear
from ..protocols.tree import enumerate_leaves, two_party_widths
from ..tools.logger import INFO1, INFO2, INFO3, logger
from ..tools.rational import common_denominator, parse_rational
from ..tools.timer import Timer
from .matmul import matmul

if TYPE_CHECKING:
    from collections.abc import Iterator, Sequence

    from numpy.typing import NDArray

    from ..core.gates import LeafGate
    from ..polynomial.multilinear import MultilinearPoly
    from ..protocols.tree import ProtocolTree
    from .device import LeafDevice

PolynomialMode = Literal["approx", "exact"]

TERM_CAP = 1 << 26
DEFAULT_C = 1
CHECK_MAX_VARS = 20
TERM_FORMULA_MAX_VARS = 16
INT64_ACCUMULATOR = 1 << 60


def choose_nprime(n: int, s: int, D: int, c: float = DEFAULT_C) -> int:
    """n / (c sqrt(s) log^2(s) D), floored at 1 and capped at n - 2."""
    if min(n, s, c) <= 0 or D < 0:
        raise ValidationError(f"Parameters should be positive: n={n}, s={s}, D={D}, c={c}")
    log_squared = max(log2(s) ** 2, 1.0)
    value = floor(n / (c * sqrt(s) * log_squared * max(D, 1)))
    return max(1, min(value, n - 2))


class Restriction:
    """The restricted variables and the block values of both parties for a fixed z."""

    __slots__ = ("n", "nprime", "alice_width", "bob_width", "alice_fixed", "bob_fixed")
    n: int
    nprime: int
    alice_width: int
    bob_width: int
    alice_fixed: int
    bob_fixed: int

    def __init__(self, n: int, nprime: int):
        if not 1 <= nprime <= n - 2:
            raise ValidationError(f"Restriction size n'={nprime} should be within [1, n-2={n - 2}]")
        self.n = n
        self.nprime = nprime
        self.alice_width, self.bob_width = two_party_widths(n)
        self.alice_fixed = (nprime + 1) // 2
        self.bob_fixed = nprime // 2

    @property
    def variables(self) -> tuple[int, ...]:
        """Restricted input indices, zero-based."""
        return tuple(range(self.alice_fixed)) + tuple(
            range(self.alice_width, self.alice_width + self.bob_fixed)
        )

    @property
    def alice_free(self) -> int:
        return self.alice_width - self.alice_fixed

    @property
    def bob_free(self) -> int:
        return self.bob_width - self.bob_fixed

    def assignments(self) -> range:
        return range(1 << self.nprime)

    def domains(self, z: int) -> tuple[NDArray[int64], NDArray[int64]]:
        """Block values of Alice and Bob consistent with z, ordered by the free part."""
        alice_z = z & ((1 << self.alice_fixed) - 1)
        bob_z = z >> self.alice_fixed
        alice = alice_z | (arange(1 << self.alice_free, dtype=int64) << self.alice_fixed)
        bob = bob_z | (arange(1 << self.bob_free, dtype=int64) << self.bob_fixed)
        return alice, bob

    def __repr__(self) -> str:
        return f"Restriction(n={self.n}, n'={self.nprime}, variables={self.variables})"


class LeafIndicators:
    """Accepting rectangles of one leaf protocol under one restriction, as 0/1 matrices.

    `alice[x_L, j]` and `bob[j, y_R]` tell whether the free inputs lie in rectangle j.
    """

    __slots__ = ("alice", "bob", "rectangles")
    alice: NDArray[int64]
    bob: NDArray[int64]
    rectangles: int

    def __init__(self, alice: NDArray[int64], bob: NDArray[int64], rectangles: int):
        self.alice = alice
        self.bob = bob
        self.rectangles = rectangles

    @property
    def accepting(self) -> int:
        return self.alice.shape[1]


def leaf_indicators(
    protocol: ProtocolTree,
    restriction: Restriction,
    z: int,
    gate: LeafGate | None = None,
) -> LeafIndicators:
    """Restricted rectangles of a leaf; with `gate`, every rectangle is checked against it."""
    alice_domain, bob_domain = restriction.domains(z)
    rectangles = enumerate_leaves(protocol, (alice_domain, bob_domain))
    accepting = [rect for rect in rectangles if rect.output]
    alice = zeros((1 << restriction.alice_free, len(accepting)), dtype=int64)
    bob = zeros((len(accepting), 1 << restriction.bob_free), dtype=int64)
    for j, rect in enumerate(accepting):
        alice[rect.side_sets[0] >> restriction.alice_fixed, j] = 1
        bob[j, rect.side_sets[1] >> restriction.bob_fixed] = 1
    if gate is not None:
        for rect in rectangles:
            left, right = rect.side_sets
            xs = (left[:, None] | (right[None, :] << restriction.alice_width)).ravel()
            if (gate.evaluate(xs) != rect.output).any():
                raise MonochromaticityError(
                    f"Rectangle {rect.transcript!r} is not monochromatic under {gate.unparse()}",
                    details={"z": z},
                )
    return LeafIndicators(alice, bob, len(rectangles))


def leaf_gate_ids(f) -> tuple[int, ...]:
    """Gate of every skeleton variable, i.e. of every leaf occurrence left to right."""
    return tuple(node.gate_id for node in f.leaf_nodes if isinstance(node, Leaf))


class TermExpansion:
    """Terms (z, S, accepting rectangles of the leaves in S) with their coefficients.

    The column block of a fixed z is built on demand from the per-leaf indicators.
    """

    __slots__ = (
        "restriction",
        "poly",
        "scale",
        "coefficients",
        "leaf_gates",
        "indicators",
        "per_z",
    )
    restriction: Restriction
    poly: MultilinearPoly
    scale: int
    coefficients: dict[int, int]
    leaf_gates: tuple[int, ...]
    indicators: list[dict[int, LeafIndicators]]
    per_z: list[int]

    def __init__(
        self,
        restriction: Restriction,
        poly: MultilinearPoly,
        leaf_gates: Sequence[int],
        indicators: list[dict[int, LeafIndicators]],
    ):
        self.restriction = restriction
        self.poly = poly
        self.scale = common_denominator(poly.terms.values())
        self.coefficients = {mask: int(coef * self.scale) for mask, coef in poly.terms.items()}
        self.leaf_gates = tuple(leaf_gates)
        self.indicators = indicators
        self.per_z = [self._count(z) for z in restriction.assignments()]

    def _gates_of(self, mask: int) -> list[int]:
        return [gate_id for i, gate_id in enumerate(self.leaf_gates) if mask >> i & 1]

    def _count(self, z: int) -> int:
        total = 0
        for mask in self.coefficients:
            product = 1
            for gate_id in self._gates_of(mask):
                product *= self.indicators[z][gate_id].accepting
            total += product
        return total

    @property
    def m(self) -> int:
        return sum(self.per_z)

    @property
    def value_bound(self) -> int:
        """Bound on |Q'(w)| times the scale: one rectangle per leaf contains a point."""
        return (1 << self.restriction.nprime) * sum(abs(c) for c in self.coefficients.values())

    def blocks(self, z: int) -> tuple[NDArray, NDArray]:
        """(A_z, B_z): coefficient-weighted Alice indicators and the matching Bob indicators."""
        restriction = self.restriction
        left, right = [], []
        largest = max(map(abs, self.coefficients.values()), default=0)
        dtype = int64 if largest < INT64_ACCUMULATOR else object
        for mask, coef in sorted(self.coefficients.items()):
            parts = [self.indicators[z][gate_id] for gate_id in self._gates_of(mask)]
            if any(part.accepting == 0 for part in parts):
                continue
            if parts:
                alice = reduce(khatri_rao, [part.alice.T for part in parts]).T
                bob = reduce(khatri_rao, [part.bob for part in parts])
            else:
                alice = ones((1 << restriction.alice_free, 1), dtype=int64)
                bob = ones((1, 1 << restriction.bob_free), dtype=int64)
            left.append(alice.astype(dtype) * coef)
            right.append(bob)
        if not left:
            return (
                zeros((1 << restriction.alice_free, 0), dtype=int64),
                zeros((0, 1 << restriction.bob_free), dtype=int64),
            )
        return hstack(left), vstack(right)

    def iter_blocks(self) -> Iterator[tuple[int, NDArray, NDArray]]:
        for z in self.restriction.assignments():
            yield (z, *self.blocks(z))


def expand_terms(
    protocols: Sequence[ProtocolTree],
    f,
    poly: MultilinearPoly,
    restriction: Restriction,
    *,
    check: bool = True,
) -> TermExpansion:
    """Restricted accepting rectangles of every leaf gate for every z."""
    gates = f.gates if check and f.num_vars <= CHECK_MAX_VARS else None
    used = sorted(set(leaf_gate_ids(f)))
    indicators = []
    for z in restriction.assignments():
        indicators.append(
            {
                gate_id: leaf_indicators(
                    protocols[gate_id], restriction, z, gates[gate_id] if gates else None
                )
                for gate_id in used
            }
        )
    return TermExpansion(restriction, poly, leaf_gate_ids(f), indicators)


def skeleton_polynomial(
    f, nprime: int, mode: PolynomialMode = "approx", eps=None
) -> MultilinearPoly:
    """Polynomial of the skeleton within eps <= 1/(3 2^n') of it.

    "approx" runs the composition pipeline at eps, so the restricted counts are only within
    1/3 of integers and are rounded. "exact" interpolates the skeleton truth table; it is a
    zero-error reference for cross-checks.
    """
    limit = Fraction(1, 3 << nprime)
    eps = limit if eps is None else parse_rational(eps)
    if not 0 < eps <= limit:
        raise ValidationError(f"Polynomial error {eps} should be within (0, 1/(3*2^{nprime})]")
    if f.size > EXHAUSTIVE_MAX_VARS:
        raise CapacityError(
            f"Skeleton polynomials support up to {EXHAUSTIVE_MAX_VARS} leaves", size=f.size
        )
    tree = skeleton(f)
    match mode:
        case "exact":
            return exact_multilinear(truth_table(tree))
        case "approx":
            return build_approx(tree, eps)
    raise ValidationError(f"Unknown polynomial mode {mode}")


def round_counts(values: NDArray, scale: int, nprime: int) -> NDArray:
    """Nearest integers of values/scale, each required to be within 1/3."""
    values = values.astype(object) if scale >= INT64_ACCUMULATOR >> 4 else values
    counts = (2 * values + scale) // (2 * scale)
    gaps = abs(values - counts * scale)
    if (3 * gaps > scale).any():
        worst = Fraction(int(gaps.max()), scale)
        raise RoundingGapError(
            f"Approximate count is {worst} away from the nearest integer",
            details={"cells": int((3 * gaps > scale).sum())},
        )
    if (counts < 0).any() or (counts > 1 << nprime).any():
        raise CalculationError("Rounded counts leave the range [0, 2^n']")
    return counts.astype(int64)


def restricted_counts(
    expansion: TermExpansion, backend: str = "standard"
) -> NDArray[int64]:
    """Q(w) for every free input w, as a matrix over (Alice's free part) x (Bob's free part)."""
    restriction = expansion.restriction
    total = zeros((1 << restriction.alice_free, 1 << restriction.bob_free), dtype=int64)
    if expansion.value_bound >= INT64_ACCUMULATOR:
        total = total.astype(object)
    for z, left, right in expansion.iter_blocks():
        if left.shape[1]:
            total = total + matmul(left, right, backend)
            logger.log(INFO3, f"z={z}: {left.shape[1]} terms")
    return round_counts(total, expansion.scale, restriction.nprime)


class SatReport:
    """Outcome of a counting run."""

    __slots__ = ("count", "m", "nprime", "degree", "wall_ms", "backend", "mode", "extra")
    count: int
    m: int
    nprime: int
    degree: int
    wall_ms: float
    backend: str
    mode: str
    extra: dict

    def __init__(self, count, m, nprime, degree, wall_ms, backend, mode, **extra):
        self.count = count
        self.m = m
        self.nprime = nprime
        self.degree = degree
        self.wall_ms = wall_ms
        self.backend = backend
        self.mode = mode
        self.extra = extra

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "m": self.m,
            "nprime": self.nprime,
            "degree": self.degree,
            "backend": self.backend,
            "mode": self.mode,
            **self.extra,
        }

    def __repr__(self) -> str:
        return f"SatReport(count={self.count}, m={self.m}, n'={self.nprime}, {self.wall_ms:.1f} ms)"


def _resolve_nprime(d: LeafDevice, nprime: int | None, c: float) -> int:
    if nprime is None:
        return choose_nprime(d.n, max(d.size, 1), d.cost, c)
    return nprime


def run_sat_fast(
    d: LeafDevice,
    nprime: int | None = None,
    eps_budget: Fraction | str | None = None,
    *,
    c: float = DEFAULT_C,
    mode: PolynomialMode = "approx",
    backend: str = "standard",
    term_cap: int = TERM_CAP,
    check: bool = True,
) -> SatReport:
    """Deterministic counting for a device with deterministic two-party leaf protocols."""
    if d.n < 3:
        raise ValidationError(f"Fast counting needs n >= 3, got {d.n}")
    with Timer() as timer:
        nprime = _resolve_nprime(d, nprime, c)
        restriction = Restriction(d.n, nprime)
        protocols = d.two_party_protocols()
        poly = skeleton_polynomial(d.formula, nprime, mode, eps_budget)
        expansion = expand_terms(protocols, d.formula, poly, restriction, check=check)
        _check_cap(expansion, term_cap)
        counts = restricted_counts(expansion, backend)
        count = int(counts.sum())
    logger.log(
        INFO1,
        f"Fast count over n={d.n}, n'={nprime}: {count}, m={expansion.m}, "
        f"degree {poly.degree} ({timer.elapsed_ms:.1f} ms)",
    )
    return SatReport(
        count,
        expansion.m,
        nprime,
        poly.degree,
        timer.elapsed_ms,
        backend,
        mode,
        n=d.n,
        size=d.size,
        cost=d.cost,
        restricted=list(restriction.variables),
    )


def _check_cap(expansion: TermExpansion, term_cap: int):
    if expansion.m > term_cap:
        raise CapacityError(
            f"Term count m={expansion.m} exceeds the cap {term_cap}", size=expansion.m
        )
    logger.log(INFO2, f"Term expansion: m={expansion.m} over {len(expansion.per_z)} restrictions")


def count_sat_fast(
    d: LeafDevice, nprime: int | None = None, eps_budget: Fraction | str | None = None, **kwargs
) -> int:
    return run_sat_fast(d, nprime, eps_budget, **kwargs).count


def term_count_formula(d: LeafDevice, poly: MultilinearPoly, nprime: int) -> int:
    """sum_z sum_S prod_{i in S} |accepting leaves of leaf i under z|, counted by running
    every leaf protocol on every input and collecting the distinct accepting transcripts."""
    if d.n > TERM_FORMULA_MAX_VARS:
        raise CapacityError(
            f"Term counting supports up to {TERM_FORMULA_MAX_VARS} inputs", size=d.n
        )
    restriction = Restriction(d.n, nprime)
    protocols = d.two_party_protocols()
    gate_ids = leaf_gate_ids(d.formula)
    total = 0
    for z in restriction.assignments():
        alice, bob = restriction.domains(z)
        inputs = [int(a) | int(b) << restriction.alice_width for a in alice for b in bob]
        accepting = {}
        for gate_id in set(gate_ids):
            transcripts = set()
            for x in inputs:
                transcript, output = protocols[gate_id].run(x)
                if output:
                    transcripts.add(transcript)
            accepting[gate_id] = len(transcripts)
        for mask in poly.terms:
            product = 1
            for i, gate_id in enumerate(gate_ids):
                if mask >> i & 1:
                    product *= accepting[gate_id]
            total += product
    return total


def term_count_bound(d: LeafDevice, poly: MultilinearPoly, nprime: int) -> int:
    """2^n' sum_S prod_{i in S} |accepting leaves of leaf i|, unrestricted."""
    protocols = d.two_party_protocols()
    gate_ids = leaf_gate_ids(d.formula)
    accepting = {
        gate_id: sum(rect.output for rect in enumerate_leaves(protocols[gate_id]))
        for gate_id in set(gate_ids)
    }
    total = 0
    for mask in poly.terms:
        product = 1
        for i, gate_id in enumerate(gate_ids):
            if mask >> i & 1:
                product *= accepting[gate_id]
        total += product
    return total << nprime

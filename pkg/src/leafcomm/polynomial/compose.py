"""Approximating polynomials of whole formulas: decomposition, base pieces, substitution."""

from __future__ import annotations

from fractions import Fraction
from typing import TYPE_CHECKING

from numpy import full, int64

from ..core.decompose import ceil_sqrt, decompose
from ..core.exception import CalculationError, CapacityError, ValidationError
from ..core.formula import Leaf, Placeholder, slot_formula, truth_table
from ..tools.logger import INFO1, INFO2, logger
from ..tools.rational import common_denominator, parse_rational
from ..tools.timer import Timer
from .amplify import amplification_rounds, amplify_scaled
from .approx_base import approx_base
from .multilinear import (
    EXHAUSTIVE_MAX_VARS,
    ErrorBudget,
    MultilinearPoly,
    convert_basis,
    from_scaled,
    max_error,
    scaled_error,
    scaled_table_of,
)

if TYPE_CHECKING:
    from collections.abc import Sequence

    from numpy.typing import NDArray

    from ..core.decompose import CompositionTree
    from ..core.formula import Formula

ScaledTable = tuple["NDArray", int]

COMPOSED_EPS = Fraction(1, 3)


def evaluate_scaled(p: MultilinearPoly, slots: Sequence[ScaledTable], size: int) -> ScaledTable:
    """Pointwise value of a zero_one polynomial at rational points given slot-wise.

    Slot j holds numerators N_j over the scalar denominator D_j. The result is returned
    as numerators over C * prod D_j, with C the common denominator of the coefficients.
    """
    if p.basis != "zero_one":
        p = convert_basis(p)
    if len(slots) != p.n:
        raise ValidationError(f"Polynomial over {p.n} variables got {len(slots)} slot tables")
    scale = common_denominator(p.terms.values())
    terms = [(mask, int(coef * scale)) for mask, coef in p.terms.items()]
    denominators = [int(d) for _, d in slots]
    suffix = [1] * (p.n + 1)
    for j in reversed(range(p.n)):
        suffix[j] = suffix[j + 1] * denominators[j]

    bound = sum(abs(c) for _, c in terms)
    for numerators, denominator in slots:
        peak = max(int(numerators.max()), -int(numerators.min()), 0) if len(numerators) else 0
        bound *= max(peak, denominator)
    dtype = int64 if bound < 1 << 62 else object
    tables = [numerators.astype(dtype) for numerators, _ in slots]

    def horner(subset: list[tuple[int, int]], j: int):
        if not subset:
            return 0
        if all(mask >> j == 0 for mask, _ in subset):
            return sum(c for _, c in subset) * suffix[j]
        low = [(mask, c) for mask, c in subset if not mask >> j & 1]
        high = [(mask, c) for mask, c in subset if mask >> j & 1]
        # p = p_low + y_j p_high, with y_j = N_j / D_j
        result = horner(low, j + 1) * denominators[j]
        if high:
            result = result + tables[j] * horner(high, j + 1)
        return result

    values = horner(terms, 0)
    result = full(size, 0, dtype=dtype) + values
    return result, scale * suffix[0]


def shift_scaled(numerators: NDArray, denominator: int, error: Fraction) -> ScaledTable:
    """(v + e) / (1 + 2e) over a scaled table; maps [-e, 1 + e] onto [0, 1]."""
    if not error:
        return numerators, denominator
    a, b = error.numerator, error.denominator
    return numerators.astype(object) * b + a * denominator, denominator * (b + 2 * a)


def shift_piece(q: MultilinearPoly, error: Fraction | str) -> MultilinearPoly:
    """q' = (q + e) / (1 + 2e): a Boolean approximator with error e moved into [0, 1]."""
    error = parse_rational(error)
    if not error:
        return q
    return (q + error) / (1 + 2 * error)


def _substitute_symbolic(
    top: MultilinearPoly, pieces: Sequence[MultilinearPoly]
) -> MultilinearPoly:
    n = pieces[0].n
    result = MultilinearPoly(n)
    for mask, coef in top.terms.items():
        term = MultilinearPoly.constant(n, coef)
        for j, piece in enumerate(pieces):
            if mask >> j & 1:
                term = term * piece
        result = result + term
    return result


def compose(
    top: MultilinearPoly,
    pieces: Sequence[MultilinearPoly],
    budget: ErrorBudget,
    piece_errors: Sequence[Fraction] | None = None,
) -> MultilinearPoly:
    """P(q_1(x), ..., q_t(x)) with q_j = (Q_j + e_j) / (1 + 2 e_j).

    e_j is the budgeted piece error unless per-piece errors are given; zero-error pieces
    are substituted unshifted. The expansion is exact.
    """
    if top.n != len(pieces):
        raise ValidationError(f"Top polynomial over {top.n} variables got {len(pieces)} pieces")
    if top.basis != "zero_one":
        top = convert_basis(top)
    if not pieces:
        return top
    n = pieces[0].n
    if any(piece.n != n for piece in pieces):
        raise ValidationError("Pieces should be defined over the same variables")
    if piece_errors is None:
        piece_errors = [budget.piece_eps] * len(pieces)
    elif len(piece_errors) != len(pieces):
        raise ValidationError(f"{len(piece_errors)} piece errors given for {len(pieces)} pieces")
    errors = [parse_rational(e) for e in piece_errors]
    pieces = [piece if piece.basis == "zero_one" else convert_basis(piece) for piece in pieces]

    if n > EXHAUSTIVE_MAX_VARS:
        return _substitute_symbolic(top, [shift_piece(q, e) for q, e in zip(pieces, errors)])
    tables = [shift_scaled(*scaled_table_of(q), e) for q, e in zip(pieces, errors)]
    return from_scaled(*evaluate_scaled(top, tables, 1 << n))


class TreeApproximation:
    """Base polynomials of a composition tree over their leaf slots, with certified errors."""

    __slots__ = ("tree", "top", "top_error", "pieces", "piece_errors")
    tree: CompositionTree
    top: MultilinearPoly
    top_error: Fraction
    pieces: tuple[MultilinearPoly, ...]
    piece_errors: tuple[Fraction, ...]

    def __init__(self, tree, top, top_error, pieces, piece_errors):
        self.tree = tree
        self.top = top
        self.top_error = top_error
        self.pieces = tuple(pieces)
        self.piece_errors = tuple(piece_errors)


def _certified(formula: Formula, eps: Fraction, sparse: bool) -> tuple[MultilinearPoly, Fraction]:
    poly = approx_base(formula, eps, sparse=sparse)
    return poly, max_error(poly, truth_table(slot_formula(formula)))


def approximate_tree(
    tree: CompositionTree, budget: ErrorBudget, *, sparse: bool = True
) -> TreeApproximation:
    """approx_base on every piece with budget.piece_eps and on the top with budget.top_eps."""
    pieces, piece_errors = [], []
    for piece in tree.pieces:
        poly, error = _certified(piece.formula, budget.piece_eps, sparse)
        pieces.append(poly)
        piece_errors.append(error)
    top, top_error = _certified(tree.top, budget.top_eps, sparse)
    return TreeApproximation(tree, top, top_error, pieces, piece_errors)


def _slot_degree(p: MultilinearPoly, slot_degrees: Sequence[int]) -> int:
    """Degree in the leaf outputs after substituting polynomials of the given degrees."""
    return max(
        (sum(slot_degrees[j] for j in range(p.n) if mask >> j & 1) for mask in p.terms), default=0
    )


def _slot_tables(
    formula: Formula,
    leaf_tables: dict[int, ScaledTable],
    piece_values: dict[int, ScaledTable],
):
    tables = []
    for node in formula.leaf_nodes:
        if isinstance(node, Leaf):
            tables.append(leaf_tables[node.gate_id])
        elif isinstance(node, Placeholder):
            tables.append(piece_values[node.index])
    return tables


class Approximation:
    """Approximating polynomial of a formula with its certified error and build statistics."""

    __slots__ = ("poly", "error", "eps", "leaf_degree", "rounds", "stats")
    poly: MultilinearPoly
    error: Fraction
    eps: Fraction
    leaf_degree: int
    rounds: int
    stats: dict

    def __init__(self, poly, error, eps, leaf_degree, rounds, stats):
        self.poly = poly
        self.error = error
        self.eps = eps
        self.leaf_degree = leaf_degree
        self.rounds = rounds
        self.stats = stats

    @property
    def degree(self) -> int:
        return self.poly.degree

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "leaf_degree": self.leaf_degree,
            "error": self.error,
            "eps": self.eps,
            "rounds": self.rounds,
            "terms": len(self.poly),
            **self.stats,
        }


def build_approximation(f: Formula, eps: Fraction | str, *, sparse: bool = True) -> Approximation:
    """Full pipeline with exhaustive certification over the 2^n inputs.

    Pieces of a threshold-ceil(sqrt(s)) decomposition get error 1/(20 #pieces), the top
    1/20; each piece value is shifted by its certified error before substitution. The
    composed values are amplified to eps when needed and interpolated.
    """
    eps = parse_rational(eps)
    if not 0 < eps < 1:
        raise ValidationError(f"Target error should be within (0, 1), got {eps}")
    n = f.num_vars
    if n > EXHAUSTIVE_MAX_VARS:
        raise CapacityError(
            f"Pointwise composition supports up to {EXHAUSTIVE_MAX_VARS} inputs", size=n
        )

    with Timer() as timer:
        t = ceil_sqrt(max(f.size, 1))
        tree = decompose(f, t)
        budget = ErrorBudget.for_pieces(eps, len(tree.pieces))
        approx = approximate_tree(tree, budget, sparse=sparse)

        size = 1 << n
        leaf_tables = {
            gate_id: (gate.table().astype(int64), 1) for gate_id, gate in enumerate(f.gates)
        }
        piece_values: dict[int, ScaledTable] = {}
        piece_degrees: dict[int, int] = {}
        for piece, poly, error in zip(tree.pieces, approx.pieces, approx.piece_errors):
            slots = _slot_tables(piece.formula, leaf_tables, piece_values)
            values = evaluate_scaled(poly, slots, size)
            piece_values[piece.placeholder_id] = shift_scaled(*values, error)
            piece_degrees[piece.placeholder_id] = _slot_degree(
                poly, _leaf_node_degrees(piece.formula, piece_degrees)
            )

        slots = _slot_tables(tree.top, leaf_tables, piece_values)
        numerators, denominator = evaluate_scaled(approx.top, slots, size)
        target = truth_table(f)
        composed_error = scaled_error(numerators, denominator, target)
        if composed_error > COMPOSED_EPS:
            raise CalculationError(
                f"Composed polynomial has error {composed_error} > 1/3",
                details={"threshold": t, "pieces": len(tree.pieces)},
            )
        leaf_degree = _slot_degree(approx.top, _leaf_node_degrees(tree.top, piece_degrees))

        rounds = 0
        error = composed_error
        if composed_error > eps:
            rounds = amplification_rounds(composed_error, eps)
            numerators, denominator = amplify_scaled(
                numerators, denominator, composed_error, rounds
            )
            error = scaled_error(numerators, denominator, target)
            leaf_degree *= rounds
        if error > eps:
            raise CalculationError(f"Certified error {error} exceeds the target {eps}")
        poly = from_scaled(numerators, denominator)

    stats = {
        "threshold": t,
        "pieces": len(tree.pieces),
        "piece_sizes": tree.piece_sizes(),
        "piece_degrees": [p.degree for p in approx.pieces],
        "piece_errors": list(approx.piece_errors),
        "top_degree": approx.top.degree,
        "top_error": approx.top_error,
        "composed_error": composed_error,
        "wall_ms": timer.elapsed_ms,
    }
    logger.log(
        INFO1,
        f"Approximation of a size-{f.size} formula: degree {poly.degree}, "
        f"leaf degree {leaf_degree}, error {error} <= {eps}, r={rounds}",
    )
    logger.log(INFO2, f"Approximation statistics: {stats}")
    return Approximation(poly, error, eps, leaf_degree, rounds, stats)


def _leaf_node_degrees(formula: Formula, piece_degrees: dict[int, int]) -> list[int]:
    return [
        1 if isinstance(node, Leaf) else piece_degrees[node.index] for node in formula.leaf_nodes
    ]


def build_approx(f: Formula, eps: Fraction | str, *, sparse: bool = True) -> MultilinearPoly:
    """eps-approximating polynomial of f over its n inputs."""
    return build_approximation(f, eps, sparse=sparse).poly


def expand_over_inputs(p: MultilinearPoly, f: Formula) -> MultilinearPoly:
    """Substitutes skeleton variable i by the exact polynomial of the i-th leaf gate of f."""
    if p.n != f.size:
        raise ValidationError(f"Polynomial over {p.n} variables does not match {f.size} leaves")
    if f.num_vars > EXHAUSTIVE_MAX_VARS:
        raise CapacityError(
            f"Expansion supports up to {EXHAUSTIVE_MAX_VARS} inputs", size=f.num_vars
        )
    slots = [(gate.table().astype(int64), 1) for gate in f.leaf_gates]
    size = 1 << f.num_vars
    return from_scaled(*evaluate_scaled(p, slots, size))

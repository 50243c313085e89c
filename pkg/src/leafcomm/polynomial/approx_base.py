"""Minimum-degree approximating polynomials of small Boolean functions by linear programming."""

from __future__ import annotations

from fractions import Fraction
from typing import TYPE_CHECKING

from numpy import asarray, concatenate, float64, full, int64, ones, zeros
from scipy.optimize import linprog
from scipy.sparse import csr_array, hstack, vstack

from ..core.exception import CalculationError, CapacityError, ValidationError
from ..core.formula import slot_formula, truth_table
from ..tools.bits import all_inputs
from ..tools.logger import INFO1, INFO2, INFO3, logger
from ..tools.rational import parse_rational
from .multilinear import MultilinearPoly, exact_multilinear, max_error

if TYPE_CHECKING:
    from numpy.typing import NDArray

    from ..core.formula import Formula

BASE_MAX_VARS = 16
LP_TOLERANCE = 1e-9
DYADIC_PRECISIONS = (16, 24, 32, 40, 48)
SNAP_DENOMINATORS = (1 << 6, 1 << 10, 1 << 16, 1 << 20)


def monomials(m: int, degree: int) -> list[int]:
    """Subsets of size at most `degree`, ordered by size and then by value."""
    masks = [mask for mask in range(1 << m) if mask.bit_count() <= degree]
    return sorted(masks, key=lambda mask: (mask.bit_count(), mask))


def _evaluation_matrix(m: int, masks: list[int]) -> csr_array:
    """M[x, k] = 1 iff masks[k] is a subset of x."""
    xs = all_inputs(m)
    rows, cols = [], []
    for col, mask in enumerate(masks):
        hits = xs[(xs & mask) == mask]
        rows.append(hits)
        cols.append(full(len(hits), col, dtype=int64))
    rows_all = concatenate(rows)
    data = ones(len(rows_all), dtype=float64)
    return csr_array((data, (rows_all, concatenate(cols))), shape=(1 << m, len(masks)))


def _solve_min_error(table: NDArray, m: int, degree: int) -> tuple[float, list[int], NDArray]:
    masks = monomials(m, degree)
    matrix = _evaluation_matrix(m, masks)
    size = len(masks)
    column = csr_array(ones((1 << m, 1), dtype=float64))
    a_ub = vstack([hstack([matrix, -column]), hstack([-matrix, -column])])
    values = table.astype(float64)
    b_ub = concatenate([values, -values])
    objective = zeros(size + 1, dtype=float64)
    objective[-1] = 1.0
    bounds = [(None, None)] * size + [(0, None)]
    result = linprog(objective, A_ub=a_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if result.status != 0:
        raise CalculationError(f"LP for degree {degree} failed: {result.message}")
    return float(result.x[-1]), masks, result.x[:-1]


def _solve_min_l1(table: NDArray, m: int, degree: int, target: float) -> NDArray | None:
    """Coefficients of least l1 norm with error at most `target`, or None if the LP fails."""
    masks = monomials(m, degree)
    matrix = _evaluation_matrix(m, masks)
    size = len(masks)
    a_ub = vstack([hstack([matrix, -matrix]), hstack([-matrix, matrix])])
    values = table.astype(float64)
    b_ub = concatenate([values + target, target - values])
    result = linprog(
        ones(2 * size, dtype=float64), A_ub=a_ub, b_ub=b_ub, bounds=(0, None), method="highs"
    )
    if result.status != 0:
        return None
    return result.x[:size] - result.x[size:]


def lp_min_error(table, degree: int) -> float:
    """Least sup-norm error of a degree-bounded polynomial for the table, as solved by the LP."""
    table = asarray(table)
    m = len(table).bit_length() - 1
    if len(table) != 1 << m:
        raise ValidationError(f"Table length should be a power of two, got {len(table)}")
    if not 0 <= degree <= m:
        raise ValidationError(f"Degree {degree} should be within [0, {m}]")
    return _solve_min_error(table, m, degree)[0]


def _roundings(coefs: NDArray):
    """Candidate exact coefficients: dyadic roundings, then snaps to small denominators.

    At a tight optimum the LP vertex has rational coefficients that no dyadic rounding
    reaches exactly; limit_denominator recovers them from the floats.
    """
    for bits in DYADIC_PRECISIONS:
        scale = 1 << bits
        yield f"2^-{bits}", [Fraction(round(float(c) * scale), scale) for c in coefs]
    for limit in SNAP_DENOMINATORS:
        yield f"1/{limit}", [Fraction(float(c)).limit_denominator(limit) for c in coefs]


def _rationalize(masks: list[int], coefs: NDArray, m: int, table: NDArray, eps: Fraction):
    """Exact coefficients near the LP solution whose error verifies exactly, coarsest first."""
    for precision, values in _roundings(coefs):
        poly = MultilinearPoly(m, dict(zip(masks, values)))
        error = max_error(poly, table)
        if error <= eps:
            return poly, error
        logger.log(
            INFO3,
            f"Rounding to {precision} failed: error {float(error):.3g} > {float(eps):.3g}",
        )
    return None


def approx_table(table, eps: Fraction | str | int, *, sparse: bool = True) -> MultilinearPoly:
    """Minimum-degree polynomial within eps of a Boolean table over {0,1}^m, m <= 16.

    The degree is found by binary search over LP feasibility, and the solution is
    rationalized and verified exactly, by dyadic rounding and then by snapping to small
    denominators. Only when every rounding fails does the search move to the next degree;
    degree m always succeeds by exact interpolation. With `sparse`, the least l1 norm
    solution of the minimal degree is preferred.
    """
    eps = parse_rational(eps)
    if eps < 0:
        raise ValidationError(f"Approximation error should be nonnegative, got {eps}")
    table = asarray(table).astype(int64)
    m = len(table).bit_length() - 1
    if len(table) != 1 << m:
        raise ValidationError(f"Table length should be a power of two, got {len(table)}")
    if m > BASE_MAX_VARS:
        raise CapacityError(f"Base approximation supports up to {BASE_MAX_VARS} variables", size=m)
    exact = exact_multilinear(table)
    if eps == 0:
        return exact

    errors: dict[int, tuple[float, list[int], NDArray]] = {}

    def solve(degree: int):
        if degree not in errors:
            errors[degree] = _solve_min_error(table, m, degree)
        return errors[degree]

    low, high = 0, exact.degree
    while low < high:
        middle = (low + high) // 2
        if solve(middle)[0] <= float(eps) + LP_TOLERANCE:
            high = middle
        else:
            low = middle + 1

    # the interpolant is a zero-error solution whenever its degree is minimal
    if exact.degree <= low:
        return exact
    for degree in range(low, exact.degree):
        optimum, masks, coefs = solve(degree)
        if optimum > float(eps) + LP_TOLERANCE:
            continue
        if sparse:
            target = min(float(eps), (optimum + float(eps)) / 2)
            if (sparse_coefs := _solve_min_l1(table, m, degree, target)) is not None:
                if (found := _rationalize(masks, sparse_coefs, m, table, eps)) is not None:
                    return _accepted(found, m, degree, eps)
        if (found := _rationalize(masks, coefs, m, table, eps)) is not None:
            return _accepted(found, m, degree, eps)
        logger.log(
            INFO1,
            f"Degree {degree} reaches LP error {optimum:.6g} <= {float(eps):.6g} but no exact "
            f"rounding verifies, escalating to degree {degree + 1}",
        )
    return exact


def _accepted(found, m: int, degree: int, eps: Fraction) -> MultilinearPoly:
    poly, error = found
    logger.log(
        INFO2,
        f"Base approximation over {m} slots: degree {poly.degree} (LP degree {degree}), "
        f"error {error} <= {eps}, {len(poly)} terms",
    )
    return poly


def approx_base(f: Formula, eps: Fraction | str | int, *, sparse: bool = True) -> MultilinearPoly:
    """Approximating polynomial of a formula piece over its leaf slots.

    Slot i is the i-th leaf or placeholder from the left, so the polynomial is a
    function of the leaf outputs rather than of the formula inputs.
    """
    slots = slot_formula(f)
    if slots.num_vars > BASE_MAX_VARS:
        raise CapacityError(
            f"Base approximation supports pieces with up to {BASE_MAX_VARS} leaves",
            size=slots.num_vars,
        )
    return approx_table(truth_table(slots), eps, sparse=sparse)

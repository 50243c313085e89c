from .amplify import amplification_rounds, amplifier_value, amplify, bernstein_amplifier
from .approx_base import approx_base, approx_table, lp_min_error, monomials
from .compose import (
    Approximation,
    TreeApproximation,
    approximate_tree,
    build_approx,
    build_approximation,
    compose,
    evaluate_scaled,
    expand_over_inputs,
    shift_piece,
)
from .multilinear import (
    ErrorBudget,
    MultilinearPoly,
    convert_basis,
    eval_poly,
    exact_multilinear,
    from_table,
    max_error,
    table_of,
)
from .transforms import mobius, walsh, zeta

del multilinear
del transforms

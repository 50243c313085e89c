from .bounds import exact_log2, lb_size_bound
from .correlation import (
    CorrelationReport,
    approximation_correlation,
    best_parity_correlation,
    checked_approximator_correlation,
    correlation,
    implied_constant,
    parity_correlation_floor,
    signed_spectrum,
)
from .distribution import Distribution
from .functions import Distinguisher, as_vectorized, gip, gip_array, inner_product

del bounds
del distribution
del functions

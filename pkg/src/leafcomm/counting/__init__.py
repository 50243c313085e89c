from .bruteforce import count_sat_bruteforce, count_sat_protocols
from .device import LeafDevice
from .fast import (
    Restriction,
    SatReport,
    TermExpansion,
    choose_nprime,
    count_sat_fast,
    expand_terms,
    restricted_counts,
    run_sat_fast,
    skeleton_polynomial,
    term_count_bound,
    term_count_formula,
)
from .matmul import BACKENDS, matmul, register_backend
from .randomized import (
    count_sat_randomized,
    leaf_error_target,
    run_sat_randomized,
    whole_run_trials,
)

del bruteforce
del device
del fast
del randomized

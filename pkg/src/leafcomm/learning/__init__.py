from .boosting import (
    BoostReport,
    boost,
    formula_xor_floor,
    learning_curve,
    pac_learn_formula_xor,
    round_cap,
    run_boost,
    run_pac_learn_formula_xor,
    training_size,
    validation_size,
)
from .hypothesis import Hypothesis, MajorityVote, SignedParity
from .oracle import ExampleOracle
from .weak import WeakLearner, weak_learn_arrays, weak_learn_parity

del boosting
del hypothesis
del oracle
del weak

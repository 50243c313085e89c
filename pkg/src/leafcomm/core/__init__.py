from .decompose import (
    CompositionTree,
    Piece,
    ceil_sqrt,
    decompose,
    max_pieces,
    peeling_pieces,
    recompose,
)
from .exception import (
    CalculationError,
    CapacityError,
    CriticalError,
    ExtractorError,
    FormulaSyntaxError,
    LeafcommError,
    MonochromaticityError,
    NoncriticalError,
    RoundingGapError,
    SampleBudgetError,
    ValidationError,
    WeakLearnerError,
)
from .formula import (
    And,
    Formula,
    FormulaNode,
    Leaf,
    Not,
    Or,
    Placeholder,
    count_satisfying,
    eval_formula,
    evaluate,
    evaluate_many,
    leaf_tables,
    leaf_values,
    skeleton,
    slot_formula,
    truth_table,
)
from .gates import LeafGate, Ltf, Sym, Table, XorMask
from .generate import random_formula, random_gate
from .parser import load_formula, parse_formula, unparse

del exception
del formula
del gates
del generate
del parser

from .explicit import ExplicitProtocol, random_protocol, to_explicit
from .factory import deterministic_protocol, randomized_protocol
from .ltf import FingerprintLtf, FingerprintLtfFamily, ltf_randomized_protocol, ltf_widths
from .randomized import (
    DeterministicFamily,
    MajorityComposition,
    MajorityProtocol,
    ProtocolError,
    RandomizedProtocol,
    protocol_error,
    reduce_error,
    sample_deterministic,
)
from .sym import SymNihProtocol, sym_nih_protocol
from .tree import (
    ConstantProtocol,
    ProtocolTree,
    Rectangle,
    TrivialProtocol,
    TwoPartyView,
    as_two_party,
    depth,
    enumerate_leaves,
    evaluate_protocol,
    nih_widths,
    rectangle_membership,
    two_party_widths,
)
from .xor import XorProtocol, xor_protocol

del explicit
del factory
del ltf
del randomized
del sym
del tree
del xor

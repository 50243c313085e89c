from __future__ import annotations

from fractions import Fraction
from typing import TYPE_CHECKING

from ..core.exception import ValidationError
from ..tools.rational import parse_rational
from .ltf import ltf_randomized_protocol
from .randomized import DeterministicFamily
from .sym import SymNihProtocol
from .tree import TrivialProtocol, nih_widths
from .xor import XorProtocol

if TYPE_CHECKING:
    from ..core.gates import LeafGate
    from .randomized import RandomizedProtocol
    from .tree import ProtocolTree

DEFAULT_DELTA = Fraction(1, 3)


def deterministic_protocol(gate: LeafGate, parties: int = 2) -> ProtocolTree:
    """The concrete deterministic protocol of a gate class.

    Parities and symmetric gates get their cheap protocols; threshold and table gates fall
    back to the trivial protocol. More than two parties is supported for symmetric and
    trivial protocols over contiguous blocks.
    """
    match gate.kind:
        case "xor" if parties == 2:
            return XorProtocol(gate)
        case "sym":
            return SymNihProtocol(gate, parties)
        case "xor" | "ltf" | "table":
            widths = None if parties == 2 else nih_widths(gate.n, parties)
            return TrivialProtocol(gate, widths)
    raise ValidationError(f"No deterministic protocol for gate {gate!r}")


def randomized_protocol(
    gate: LeafGate, delta: Fraction | str = DEFAULT_DELTA, parties: int = 2
) -> RandomizedProtocol:
    """Threshold gates get the fingerprint protocol; other gates are deterministic."""
    delta = parse_rational(delta)
    if gate.kind == "ltf":
        return ltf_randomized_protocol(gate, delta, parties)
    return DeterministicFamily(deterministic_protocol(gate, parties))

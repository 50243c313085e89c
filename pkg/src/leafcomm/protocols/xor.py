from __future__ import annotations

from typing import TYPE_CHECKING

from ..core.exception import ValidationError
from ..tools.bits import parity_array
from .tree import ProtocolTree, two_party_widths

if TYPE_CHECKING:
    from numpy import int64, uint8
    from numpy.typing import NDArray

    from ..core.gates import XorMask


class XorProtocol(ProtocolTree):
    """Cost-2 protocol for a parity gate.

    Alice sends the parity of her masked bits, Bob answers with that bit XOR his masked
    parity XOR the negation flag, and the answer is the output.
    """

    __slots__ = ("_gate", "_masks")
    _gate: XorMask
    _masks: tuple[int, int]

    def __init__(self, gate: XorMask):
        if gate.kind != "xor":
            raise ValidationError(f"Parity protocol needs a parity gate, got {gate!r}")
        super().__init__(gate.n, 2, two_party_widths(gate.n))
        self._gate = gate
        alice = self._widths[0]
        self._masks = (gate.mask & ((1 << alice) - 1), gate.mask >> alice)

    @property
    def gate(self) -> XorMask:
        return self._gate

    def is_leaf(self, transcript: str) -> bool:
        return len(transcript) == 2

    def owner(self, transcript: str) -> int:
        return len(transcript)

    def message(self, part: int, transcript: str) -> int:
        parity = (part & self._masks[len(transcript)]).bit_count() & 1
        if transcript:
            return int(transcript[0]) ^ parity ^ self._gate.negated
        return parity

    def messages(self, parts: NDArray[int64], transcript: str) -> NDArray[uint8]:
        result = parity_array(parts, self._masks[len(transcript)])
        if transcript:
            result ^= int(transcript[0]) ^ self._gate.negated
        return result

    def output(self, transcript: str) -> int:
        return int(transcript[1])


def xor_protocol(gate: XorMask) -> XorProtocol:
    return XorProtocol(gate)

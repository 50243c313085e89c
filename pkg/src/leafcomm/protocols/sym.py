from __future__ import annotations

from typing import TYPE_CHECKING

from ..core.exception import ValidationError
from ..tools.bits import popcount_array
from .tree import ProtocolTree, nih_widths, two_party_widths

if TYPE_CHECKING:
    from numpy import int64, uint8
    from numpy.typing import NDArray

    from ..core.gates import Sym


class SymNihProtocol(ProtocolTree):
    """Number-in-hand protocol for a symmetric gate over k contiguous blocks.

    Party i announces the Hamming weight of its block in ceil(log2(n/k + 1)) bits, most
    significant first; the output is the spectrum at the announced total. Two parties split
    any n as ceil(n/2) + floor(n/2), more parties need k | n.
    """

    __slots__ = ("_gate", "_word")
    _gate: Sym
    _word: int

    def __init__(self, gate: Sym, k: int = 2):
        if gate.kind != "sym":
            raise ValidationError(f"Symmetric protocol needs a symmetric gate, got {gate!r}")
        widths = two_party_widths(gate.n) if k == 2 else nih_widths(gate.n, k)
        word = max(widths).bit_length()
        super().__init__(gate.n, k * word, widths)
        self._gate = gate
        self._word = word

    @property
    def gate(self) -> Sym:
        return self._gate

    @property
    def word(self) -> int:
        return self._word

    def is_leaf(self, transcript: str) -> bool:
        return len(transcript) == self._cost

    def owner(self, transcript: str) -> int:
        return len(transcript) // self._word

    def message(self, part: int, transcript: str) -> int:
        shift = self._word - 1 - len(transcript) % self._word
        return part.bit_count() >> shift & 1

    def messages(self, parts: NDArray[int64], transcript: str) -> NDArray[uint8]:
        shift = self._word - 1 - len(transcript) % self._word
        return ((popcount_array(parts) >> shift) & 1).astype("u1")

    def output(self, transcript: str) -> int:
        word = self._word
        if not word:
            return self._gate.spectrum[0]
        total = sum(int(transcript[i : i + word], 2) for i in range(0, len(transcript), word))
        return self._gate.spectrum[min(total, self._n)]


def sym_nih_protocol(gate: Sym, k: int = 2) -> SymNihProtocol:
    return SymNihProtocol(gate, k)

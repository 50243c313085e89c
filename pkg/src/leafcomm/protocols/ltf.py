"""Randomized greater-than protocol for linear threshold gates.

Party 0 (Alice) holds u = the weighted sum of her block plus an offset, the last party
(Bob) holds v = threshold minus the weighted sum of his block plus the same offset, and
the gate is 1 iff u >= v. With more than two number-in-hand blocks the middle parties first
write the shifted weighted sums of their blocks on the blackboard, and Bob subtracts
them from his threshold. Both values are m-bit nonnegative integers. Alice and Bob then
binary-search the longest common prefix of u and v (most significant bits first); each
equality test compares k random parities of the prefixes. Alice finally sends her bit
right after the common prefix, which decides the comparison, or 1 when u == v.
"""

from __future__ import annotations

from fractions import Fraction
from typing import TYPE_CHECKING

from numpy import array, int64, ones, uint8

from ..core.exception import ValidationError
from ..tools.bits import bits_matrix, parity_array
from ..tools.logger import INFO3, logger
from ..tools.rational import parse_rational
from .randomized import DeterministicFamily, RandomizedProtocol
from .tree import ConstantProtocol, ProtocolTree, nih_widths, two_party_widths

if TYPE_CHECKING:
    from collections.abc import Sequence

    from numpy.typing import NDArray

    from ..core.gates import Ltf


def ltf_widths(n: int, parties: int) -> tuple[int, ...]:
    if parties < 2:
        raise ValidationError(f"Threshold protocol needs at least 2 parties, got {parties}")
    return two_party_widths(n) if parties == 2 else nih_widths(n, parties)


class LtfLayout:
    """Offsets and bit length of the shifted comparison operands over the party blocks."""

    __slots__ = ("blocks", "lows", "words", "threshold", "offset", "bits", "constant")
    blocks: tuple[tuple[int, ...], ...]
    lows: tuple[int, ...]
    words: tuple[int, ...]
    threshold: int
    offset: int
    bits: int
    constant: int | None

    def __init__(self, gate: Ltf, widths: Sequence[int]):
        weights, blocks, start = gate.weights, [], 0
        for width in widths:
            blocks.append(weights[start : start + width])
            start += width
        self.blocks = tuple(blocks)
        self.lows = tuple(sum(w for w in block if w < 0) for block in blocks)
        highs = tuple(sum(w for w in block if w > 0) for block in blocks)
        self.words = tuple((high - low).bit_length() for low, high in zip(self.lows, highs))
        self.threshold = gate.threshold
        a_min, a_max = self.lows[0], highs[0]
        b_min, b_max = sum(self.lows[1:]), sum(highs[1:])
        if a_min + b_min >= self.threshold:
            self.constant = 1
        elif a_max + b_max < self.threshold:
            self.constant = 0
        else:
            self.constant = None
        self.offset = -min(a_min, self.threshold - b_max)
        self.bits = max(1, (max(a_max, self.threshold - b_min) + self.offset).bit_length())

    @property
    def alice_weights(self) -> tuple[int, ...]:
        return self.blocks[0]

    @property
    def bob_weights(self) -> tuple[int, ...]:
        return self.blocks[-1]

    @property
    def middle(self) -> range:
        """Parties announcing their block sums."""
        return range(1, len(self.blocks) - 1)

    def block_value(self, party: int, part: int) -> int:
        return sum(w for i, w in enumerate(self.blocks[party]) if part >> i & 1)

    def block_values(self, party: int, parts: NDArray[int64]) -> NDArray[int64]:
        block = self.blocks[party]
        matrix = bits_matrix(parts, len(block)).astype(int64)
        return matrix @ array(block, dtype=int64)

    def alice_value(self, part: int) -> int:
        return self.block_value(0, part) + self.offset

    def bob_value(self, part: int, announced: int = 0) -> int:
        return self.threshold - announced - self.block_value(-1, part) + self.offset

    def alice_values(self, parts: NDArray[int64]) -> NDArray[int64]:
        return self.block_values(0, parts) + self.offset

    def bob_values(self, parts: NDArray[int64], announced: int = 0) -> NDArray[int64]:
        return self.threshold - announced - self.block_values(-1, parts) + self.offset


def search_steps(bits: int) -> int:
    """ceil(log2(bits + 1)): the depth of a binary search over prefix lengths 0..bits."""
    return bits.bit_length()


def fingerprint_repetitions(steps: int, delta: Fraction) -> int:
    """Least k >= 1 with steps * 2^-k <= delta."""
    k = 1
    while Fraction(steps, 1 << k) > delta:
        k += 1
    return k


def announcement_bits(layout: LtfLayout) -> int:
    return sum(layout.words[party] for party in layout.middle)


class FingerprintLtf(ProtocolTree):
    """The deterministic member of the fingerprint family fixed by a random string.

    The middle parties announce their block sums minus the block's negative weight mass,
    each in a fixed word, most significant bit first. Each search step is then k Alice
    bits followed by one Bob bit ("1" = prefixes equal).
    """

    __slots__ = ("_gate", "_layout", "_repetitions", "_random_string", "_header")
    _gate: Ltf
    _layout: LtfLayout
    _repetitions: int
    _random_string: int
    _header: int

    def __init__(self, gate: Ltf, repetitions: int, random_string: int, parties: int = 2):
        widths = ltf_widths(gate.n, parties)
        layout = LtfLayout(gate, widths)
        steps = search_steps(layout.bits)
        header = announcement_bits(layout)
        super().__init__(gate.n, header + steps * (repetitions + 1) + 1, widths)
        self._gate = gate
        self._layout = layout
        self._repetitions = repetitions
        self._random_string = random_string
        self._header = header

    @property
    def gate(self) -> Ltf:
        return self._gate

    def _vector(self, step: int, index: int) -> int:
        m = self._layout.bits
        return self._random_string >> ((step * self._repetitions + index) * m) & ((1 << m) - 1)

    def _prefix_mask(self, length: int) -> int:
        m = self._layout.bits
        return ((1 << length) - 1) << (m - length)

    def _speaker(self, position: int) -> tuple[int, int]:
        """(middle party, bit shift of its word) writing header bit `position`."""
        words = self._layout.words
        for party in self._layout.middle:
            if position < words[party]:
                return party, words[party] - 1 - position
            position -= words[party]
        raise ValidationError(f"Header bit {position} past the announcements")

    def _announced(self, transcript: str) -> int:
        layout, total, position = self._layout, 0, 0
        for party in layout.middle:
            word = layout.words[party]
            if word:
                total += int(transcript[position : position + word], 2)
            total += layout.lows[party]
            position += word
        return total

    def _replay(self, transcript: str) -> tuple[str, int, int, int, int]:
        """(phase, step, prefix length under test or found, offset within the step, step start)."""
        k, header = self._repetitions, self._header
        if len(transcript) < header:
            return "announce", 0, 0, len(transcript), 0
        low, high, position, step = 0, self._layout.bits, header, 0
        while low < high:
            middle = (low + high + 1) // 2
            if len(transcript) < position + k + 1:
                return "search", step, middle, len(transcript) - position, position
            if transcript[position + k] == "1":
                low = middle
            else:
                high = middle - 1
            position += k + 1
            step += 1
        if len(transcript) == position:
            return "final", step, low, 0, position
        if len(transcript) == position + 1:
            return "leaf", step, low, 0, position
        raise ValidationError(f"Transcript {transcript!r} runs past a leaf")

    def is_leaf(self, transcript: str) -> bool:
        return self._replay(transcript)[0] == "leaf"

    def owner(self, transcript: str) -> int:
        phase, _, _, offset, _ = self._replay(transcript)
        if phase == "announce":
            return self._speaker(offset)[0]
        if phase == "search" and offset == self._repetitions:
            return self.parties - 1
        return 0

    def message(self, part: int, transcript: str) -> int:
        phase, step, length, offset, start = self._replay(transcript)
        layout = self._layout
        if phase == "announce":
            party, shift = self._speaker(offset)
            return (layout.block_value(party, part) - layout.lows[party]) >> shift & 1
        if phase == "final":
            if length == layout.bits:
                return 1
            return layout.alice_value(part) >> (layout.bits - 1 - length) & 1
        mask = self._prefix_mask(length)
        if offset < self._repetitions:
            return (self._vector(step, offset) & mask & layout.alice_value(part)).bit_count() & 1
        value = layout.bob_value(part, self._announced(transcript))
        return int(
            all(
                (self._vector(step, j) & mask & value).bit_count() & 1 == int(transcript[start + j])
                for j in range(self._repetitions)
            )
        )

    def messages(self, parts: NDArray[int64], transcript: str) -> NDArray[uint8]:
        phase, step, length, offset, start = self._replay(transcript)
        layout = self._layout
        if phase == "announce":
            party, shift = self._speaker(offset)
            values = layout.block_values(party, parts) - layout.lows[party]
            return ((values >> shift) & 1).astype(uint8)
        if phase == "final":
            if length == layout.bits:
                return ones(len(parts), dtype=uint8)
            values = layout.alice_values(parts)
            return ((values >> (layout.bits - 1 - length)) & 1).astype(uint8)
        mask = self._prefix_mask(length)
        if offset < self._repetitions:
            return parity_array(layout.alice_values(parts), self._vector(step, offset) & mask)
        values = layout.bob_values(parts, self._announced(transcript))
        equal = ones(len(parts), dtype=uint8)
        for j in range(self._repetitions):
            sent = int(transcript[start + j])
            equal &= parity_array(values, self._vector(step, j) & mask) == sent
        return equal

    def output(self, transcript: str) -> int:
        return int(transcript[-1])


class FingerprintLtfFamily(RandomizedProtocol):
    """Shared-randomness protocol for a threshold gate with error at most steps * 2^-k."""

    __slots__ = ("_gate", "_layout_bits", "_repetitions")
    _gate: Ltf
    _layout_bits: int
    _repetitions: int

    def __init__(self, gate: Ltf, delta: Fraction | str, parties: int = 2):
        delta = parse_rational(delta)
        if not 0 < delta < 1:
            raise ValidationError(f"Protocol error should be within (0, 1), got {delta}")
        widths = ltf_widths(gate.n, parties)
        layout = LtfLayout(gate, widths)
        bits = layout.bits
        steps = search_steps(bits)
        k = fingerprint_repetitions(steps, delta)
        header = announcement_bits(layout)
        super().__init__(
            gate.n, widths, steps * k * bits, Fraction(steps, 1 << k), header + steps * (k + 1) + 1
        )
        self._gate = gate
        self._layout_bits = bits
        self._repetitions = k
        logger.log(
            INFO3,
            f"Fingerprint protocol: {parties} parties, m={bits}, {steps} steps, k={k}, "
            f"announced={header}, r={self._random_bits}, cost={self._cost}",
        )

    @property
    def gate(self) -> Ltf:
        return self._gate

    @property
    def repetitions(self) -> int:
        return self._repetitions

    def sample(self, random_string: int) -> ProtocolTree:
        return FingerprintLtf(self._gate, self._repetitions, random_string, self.parties)

    def reduce_error(self, eps: Fraction | str) -> RandomizedProtocol:
        eps = parse_rational(eps)
        if self._error_bound <= eps:
            return self
        return FingerprintLtfFamily(self._gate, eps, self.parties)


def ltf_randomized_protocol(
    gate: Ltf, delta: Fraction | str, parties: int = 2
) -> RandomizedProtocol:
    """Randomized protocol for a threshold gate; constant gates need no communication."""
    if gate.kind != "ltf":
        raise ValidationError(f"Threshold protocol needs a threshold gate, got {gate!r}")
    widths = ltf_widths(gate.n, parties)
    layout = LtfLayout(gate, widths)
    if layout.constant is not None:
        return DeterministicFamily(ConstantProtocol(gate.n, layout.constant, widths))
    return FingerprintLtfFamily(gate, delta, parties)

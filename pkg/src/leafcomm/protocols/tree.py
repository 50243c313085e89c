"""Deterministic communication protocols as intensional trees.

A node of the tree is identified by its transcript, a string of "0"/"1" characters.
Inputs are n-bit integers with x1 as the low bit; party i sees the contiguous block
of `widths[i]` bits starting at `offsets[i]`. In the two-party case Alice holds the
low ceil(n/2) bits and Bob the rest.
"""

from __future__ import annotations

from abc import ABCMeta, abstractmethod
from typing import TYPE_CHECKING

from numpy import arange, array, empty, int64, uint8, unique

from ..core.exception import CalculationError, CapacityError, ValidationError
from ..core.formula import as_bitmask

if TYPE_CHECKING:
    from collections.abc import Sequence

    from numpy.typing import NDArray

    from ..core.gates import LeafGate

SIDE_MAX_BITS = 24


def two_party_widths(n: int) -> tuple[int, int]:
    return ((n + 1) // 2, n // 2)


def nih_widths(n: int, k: int) -> tuple[int, ...]:
    if k < 1 or n % k:
        raise ValidationError(f"{k} parties need n={n} to be divisible by k")
    return (n // k,) * k


class ProtocolTree(metaclass=ABCMeta):
    """Deterministic protocol: owners and messages of inner nodes, outputs of leaves."""

    __slots__ = ("_n", "_widths", "_offsets", "_cost")
    _n: int
    _widths: tuple[int, ...]
    _offsets: tuple[int, ...]
    _cost: int

    def __init__(self, n: int, cost: int, widths: Sequence[int] | None = None):
        if widths is None:
            widths = two_party_widths(n)
        if sum(widths) != n:
            raise ValidationError(f"Party widths {tuple(widths)} do not add up to n={n}")
        self._n = n
        self._widths = tuple(widths)
        offsets, total = [], 0
        for width in self._widths:
            offsets.append(total)
            total += width
        self._offsets = tuple(offsets)
        self._cost = cost

    @property
    def n(self) -> int:
        return self._n

    @property
    def widths(self) -> tuple[int, ...]:
        return self._widths

    @property
    def parties(self) -> int:
        return len(self._widths)

    @property
    def cost(self) -> int:
        """Declared communication cost: the depth of the tree is at most this."""
        return self._cost

    def part(self, x: int, party: int) -> int:
        return (x >> self._offsets[party]) & ((1 << self._widths[party]) - 1)

    def parts(self, x: int) -> tuple[int, ...]:
        return tuple(self.part(x, party) for party in range(self.parties))

    def join(self, parts: Sequence[int]) -> int:
        return sum(part << offset for part, offset in zip(parts, self._offsets))

    def part_array(self, xs: NDArray[int64], party: int) -> NDArray[int64]:
        return (xs >> self._offsets[party]) & ((1 << self._widths[party]) - 1)

    @abstractmethod
    def is_leaf(self, transcript: str) -> bool:
        pass

    @abstractmethod
    def owner(self, transcript: str) -> int:
        """Party speaking at an inner node."""

    @abstractmethod
    def message(self, part: int, transcript: str) -> int:
        """Bit sent by the owner holding `part` at an inner node."""

    @abstractmethod
    def output(self, transcript: str) -> int:
        pass

    def messages(self, parts: NDArray[int64], transcript: str) -> NDArray[uint8]:
        """Vectorized `message` over many owner inputs."""
        return array([self.message(int(part), transcript) for part in parts], dtype=uint8)

    def run(self, x) -> tuple[str, int]:
        """(transcript, output) on the input x."""
        x = as_bitmask(x, self._n)
        transcript = ""
        while not self.is_leaf(transcript):
            if len(transcript) >= self._cost:
                raise CalculationError(f"Protocol exceeds its cost {self._cost} on input {x}")
            owner = self.owner(transcript)
            transcript += "1" if self.message(self.part(x, owner), transcript) else "0"
        return transcript, self.output(transcript)

    def __call__(self, x) -> int:
        return self.run(x)[1]

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self._n}, widths={self._widths}, cost={self._cost})"


class Rectangle:
    """Inputs generating one transcript: a product of per-party sets of block values."""

    __slots__ = ("transcript", "side_sets", "output")
    transcript: str
    side_sets: tuple[NDArray[int64], ...]
    output: int

    def __init__(self, transcript: str, side_sets: Sequence[NDArray[int64]], output: int):
        self.transcript = transcript
        self.side_sets = tuple(side_sets)
        self.output = output

    @property
    def size(self) -> int:
        total = 1
        for side in self.side_sets:
            total *= len(side)
        return total

    def contains(self, parts: Sequence[int]) -> bool:
        for side, part in zip(self.side_sets, parts):
            index = int(side.searchsorted(part))
            if index == len(side) or side[index] != part:
                return False
        return True

    def __repr__(self) -> str:
        sizes = "x".join(str(len(side)) for side in self.side_sets)
        return f"Rectangle({self.transcript!r}, {sizes}, output={self.output})"


def _full_domains(p: ProtocolTree) -> list[NDArray[int64]]:
    for width in p.widths:
        if width > SIDE_MAX_BITS:
            raise CapacityError(
                f"Side sets support blocks of up to {SIDE_MAX_BITS} bits", size=width
            )
    return [arange(1 << width, dtype=int64) for width in p.widths]


def enumerate_leaves(
    p: ProtocolTree, domains: Sequence[NDArray[int64]] | None = None
) -> list[Rectangle]:
    """Rectangles of all reachable full transcripts, left to right.

    Each party's candidate block values are simulated against the transcript; branches
    with an empty side are pruned. `domains` restricts the block values of every party.
    """
    if domains is None:
        sides = _full_domains(p)
    else:
        sides = [unique(array(domain, dtype=int64)) for domain in domains]
    if len(sides) != p.parties:
        raise ValidationError(f"{len(sides)} domains given for {p.parties} parties")
    rectangles: list[Rectangle] = []
    stack: list[tuple[str, list[NDArray[int64]]]] = [("", sides)]
    while stack:
        transcript, current = stack.pop()
        if p.is_leaf(transcript):
            if all(len(side) for side in current):
                rectangles.append(Rectangle(transcript, current, p.output(transcript)))
            continue
        if len(transcript) >= p.cost:
            raise CalculationError(f"Protocol tree is deeper than its cost {p.cost}")
        owner = p.owner(transcript)
        bits = p.messages(current[owner], transcript)
        for bit in (1, 0):
            subset = current[owner][bits == bit]
            if len(subset):
                branch = list(current)
                branch[owner] = subset
                stack.append((transcript + str(bit), branch))
    return rectangles


def _check_transcript(transcript: str):
    if any(char not in "01" for char in transcript):
        raise ValidationError(f"Transcript {transcript!r} should consist of 0 and 1")


def rectangle_membership(p: ProtocolTree, side: int, half_input: int, transcript: str) -> int:
    """1 iff the party's block value is consistent with every message it sends in the transcript."""
    _check_transcript(transcript)
    if not 0 <= side < p.parties:
        raise ValidationError(f"Unknown party {side}")
    half_input = int(half_input)
    for i, char in enumerate(transcript):
        prefix = transcript[:i]
        if p.is_leaf(prefix):
            raise ValidationError(f"Transcript {transcript!r} runs past the leaf {prefix!r}")
        if p.owner(prefix) == side and p.message(half_input, prefix) != int(char):
            return 0
    return 1


def evaluate_protocol(p: ProtocolTree, xs: NDArray[int64]) -> NDArray[uint8]:
    """Outputs on many inputs at once by splitting index sets along the tree."""
    result = empty(len(xs), dtype=uint8)
    stack: list[tuple[str, NDArray[int64]]] = [("", arange(len(xs), dtype=int64))]
    parts = [p.part_array(xs, party) for party in range(p.parties)]
    while stack:
        transcript, index = stack.pop()
        if p.is_leaf(transcript):
            result[index] = p.output(transcript)
            continue
        if len(transcript) >= p.cost:
            raise CalculationError(f"Protocol tree is deeper than its cost {p.cost}")
        owner = p.owner(transcript)
        bits = p.messages(parts[owner][index], transcript)
        for bit in (0, 1):
            subset = index[bits == bit]
            if len(subset):
                stack.append((transcript + str(bit), subset))
    return result


def depth(p: ProtocolTree) -> int:
    """Largest reachable transcript length."""
    return max((len(rect.transcript) for rect in enumerate_leaves(p)), default=0)


class ConstantProtocol(ProtocolTree):
    __slots__ = ("_value",)
    _value: int

    def __init__(self, n: int, value: int, widths: Sequence[int] | None = None):
        super().__init__(n, 0, widths)
        self._value = int(bool(value))

    def is_leaf(self, transcript: str) -> bool:
        return transcript == ""

    def owner(self, transcript: str) -> int:
        raise ValidationError("Constant protocol has no inner nodes")

    def message(self, part: int, transcript: str) -> int:
        raise ValidationError("Constant protocol has no inner nodes")

    def output(self, transcript: str) -> int:
        return self._value


class TrivialProtocol(ProtocolTree):
    """All parties but the last send their blocks in full; the last one announces the value."""

    __slots__ = ("_gate", "_sent")
    _gate: LeafGate
    _sent: int

    def __init__(self, gate: LeafGate, widths: Sequence[int] | None = None):
        widths = two_party_widths(gate.n) if widths is None else tuple(widths)
        sent = sum(widths[:-1])
        super().__init__(gate.n, sent + 1, widths)
        self._gate = gate
        self._sent = sent

    @property
    def gate(self) -> LeafGate:
        return self._gate

    def is_leaf(self, transcript: str) -> bool:
        return len(transcript) == self._sent + 1

    def _position(self, index: int) -> tuple[int, int]:
        for party, (offset, width) in enumerate(zip(self._offsets, self._widths)):
            if index < offset + width:
                return party, index - offset
        return self.parties - 1, 0

    def owner(self, transcript: str) -> int:
        if len(transcript) == self._sent:
            return self.parties - 1
        return self._position(len(transcript))[0]

    def message(self, part: int, transcript: str) -> int:
        if len(transcript) < self._sent:
            return part >> self._position(len(transcript))[1] & 1
        prefix = sum(int(char) << i for i, char in enumerate(transcript))
        return self._gate(prefix | part << self._offsets[-1])

    def messages(self, parts: NDArray[int64], transcript: str) -> NDArray[uint8]:
        if len(transcript) < self._sent:
            return ((parts >> self._position(len(transcript))[1]) & 1).astype(uint8)
        prefix = sum(int(char) << i for i, char in enumerate(transcript))
        return self._gate.evaluate(prefix | (parts << self._offsets[-1]))

    def output(self, transcript: str) -> int:
        return int(transcript[-1])


class TwoPartyView(ProtocolTree):
    """A k-party number-in-hand protocol with k even seen as a two-party one.

    Alice plays parties 0..k/2-1 and holds the low n/2 bits, Bob plays the rest.
    """

    __slots__ = ("_inner", "_half")
    _inner: ProtocolTree
    _half: int

    def __init__(self, inner: ProtocolTree):
        k = inner.parties
        if k % 2:
            raise ValidationError(f"Two-party view needs an even number of parties, got {k}")
        half = k // 2
        alice = sum(inner.widths[:half])
        super().__init__(inner.n, inner.cost, (alice, inner.n - alice))
        self._inner = inner
        self._half = half

    @property
    def inner(self) -> ProtocolTree:
        return self._inner

    def is_leaf(self, transcript: str) -> bool:
        return self._inner.is_leaf(transcript)

    def owner(self, transcript: str) -> int:
        return 0 if self._inner.owner(transcript) < self._half else 1

    def _sub(self, part, transcript: str):
        party = self._inner.owner(transcript)
        base = self._offsets[0 if party < self._half else 1]
        shift = self._inner._offsets[party] - base
        return (part >> shift) & ((1 << self._inner.widths[party]) - 1)

    def message(self, part: int, transcript: str) -> int:
        return self._inner.message(self._sub(part, transcript), transcript)

    def messages(self, parts: NDArray[int64], transcript: str) -> NDArray[uint8]:
        return self._inner.messages(self._sub(parts, transcript), transcript)

    def output(self, transcript: str) -> int:
        return self._inner.output(transcript)


def as_two_party(p: ProtocolTree) -> ProtocolTree:
    if p.parties == 2:
        return p
    return TwoPartyView(p)

from __future__ import annotations

from abc import ABCMeta, abstractmethod
from fractions import Fraction
from math import ceil, log, sqrt
from typing import TYPE_CHECKING

from numpy import zeros

from ..core.exception import CapacityError, ValidationError
from ..tools.bits import all_inputs
from ..tools.logger import INFO2, logger
from ..tools.rational import parse_rational
from ..tools.seeding import make_rng, random_bits
from .tree import ProtocolTree, evaluate_protocol

if TYPE_CHECKING:
    from collections.abc import Sequence

    from numpy import int64, uint8
    from numpy.random import Generator
    from numpy.typing import NDArray

    from ..core.gates import LeafGate

EXACT_RANDOM_BITS = 12
ERROR_INPUT_BITS = 16
SAMPLED_STRINGS = 2000
CONFIDENCE_ALPHA = 0.01
MAJORITY_FACTOR = 18


class RandomizedProtocol(metaclass=ABCMeta):
    """A family of deterministic protocols indexed by a shared random string of r bits."""

    __slots__ = ("_n", "_widths", "_random_bits", "_error_bound", "_cost")
    _n: int
    _widths: tuple[int, ...]
    _random_bits: int
    _error_bound: Fraction
    _cost: int

    def __init__(self, n: int, widths: Sequence[int], random_bits: int, error_bound, cost: int):
        self._n = n
        self._widths = tuple(widths)
        self._random_bits = random_bits
        self._error_bound = Fraction(error_bound)
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
    def random_bits(self) -> int:
        return self._random_bits

    @property
    def error_bound(self) -> Fraction:
        """Guaranteed per-input error probability over the random string."""
        return self._error_bound

    @property
    def cost(self) -> int:
        return self._cost

    @abstractmethod
    def sample(self, random_string: int) -> ProtocolTree:
        pass

    def reduce_error(self, eps: Fraction | str) -> RandomizedProtocol:
        return reduce_error(self, eps)

    def __repr__(self) -> str:
        return (
            f"{type(self).__name__}(n={self._n}, r={self._random_bits}, "
            f"error<={self._error_bound}, cost={self._cost})"
        )


class DeterministicFamily(RandomizedProtocol):
    """A deterministic protocol seen as a randomized one with no random bits."""

    __slots__ = ("_protocol",)
    _protocol: ProtocolTree

    def __init__(self, protocol: ProtocolTree):
        super().__init__(protocol.n, protocol.widths, 0, 0, protocol.cost)
        self._protocol = protocol

    @property
    def protocol(self) -> ProtocolTree:
        return self._protocol

    def sample(self, random_string: int) -> ProtocolTree:
        return self._protocol

    def reduce_error(self, eps: Fraction | str) -> RandomizedProtocol:
        return self


def sample_deterministic(rp: RandomizedProtocol, random_string: int | str) -> ProtocolTree:
    """The member of the family fixed by the random string (an int or a bit string, MSB first)."""
    r = rp.random_bits
    if isinstance(random_string, str):
        if len(random_string) != r or any(char not in "01" for char in random_string):
            raise ValidationError(
                f"Random string should consist of {r} bits, got {random_string!r}"
            )
        random_string = int(random_string, 2) if r else 0
    if not 0 <= random_string < 1 << r:
        raise ValidationError(f"Random string {random_string} does not fit into {r} bits")
    return rp.sample(int(random_string))


class MajorityProtocol(ProtocolTree):
    """Runs the protocols one after another and outputs the majority of their outputs."""

    __slots__ = ("_protocols",)
    _protocols: tuple[ProtocolTree, ...]

    def __init__(self, protocols: Sequence[ProtocolTree]):
        if not protocols or len(protocols) % 2 == 0:
            raise ValidationError(
                f"Majority needs an odd number of protocols, got {len(protocols)}"
            )
        first = protocols[0]
        if any(p.n != first.n or p.widths != first.widths for p in protocols):
            raise ValidationError("Majority composition needs protocols over the same split")
        super().__init__(first.n, sum(p.cost for p in protocols), first.widths)
        self._protocols = tuple(protocols)

    @property
    def protocols(self) -> tuple[ProtocolTree, ...]:
        return self._protocols

    def _locate(self, transcript: str) -> tuple[int | None, str, list[int]]:
        """(running protocol, its local transcript, outputs of the finished ones)."""
        position, outputs = 0, []
        for index, protocol in enumerate(self._protocols):
            local_end = position
            while not protocol.is_leaf(transcript[position:local_end]):
                if local_end >= len(transcript):
                    return index, transcript[position:], outputs
                local_end += 1
            outputs.append(protocol.output(transcript[position:local_end]))
            position = local_end
        return None, transcript[position:], outputs

    def is_leaf(self, transcript: str) -> bool:
        return self._locate(transcript)[0] is None

    def owner(self, transcript: str) -> int:
        index, local, _ = self._locate(transcript)
        return self._protocols[index].owner(local)

    def message(self, part: int, transcript: str) -> int:
        index, local, _ = self._locate(transcript)
        return self._protocols[index].message(part, local)

    def messages(self, parts: NDArray[int64], transcript: str) -> NDArray[uint8]:
        index, local, _ = self._locate(transcript)
        return self._protocols[index].messages(parts, local)

    def output(self, transcript: str) -> int:
        outputs = self._locate(transcript)[2]
        return int(2 * sum(outputs) > len(outputs))


def majority_repetitions(eps: Fraction) -> int:
    """18 ceil(ln(1/eps)) made odd: enough for a source error of at most 1/3."""
    repetitions = MAJORITY_FACTOR * max(1, ceil(log(1 / eps)))
    return repetitions + 1 - repetitions % 2


class MajorityComposition(RandomizedProtocol):
    """Independent repetitions of a randomized protocol with a majority vote."""

    __slots__ = ("_inner", "_repetitions")
    _inner: RandomizedProtocol
    _repetitions: int

    def __init__(self, inner: RandomizedProtocol, repetitions: int, error_bound):
        if repetitions < 1 or repetitions % 2 == 0:
            raise ValidationError(f"Repetitions should be odd, got {repetitions}")
        super().__init__(
            inner.n,
            inner.widths,
            inner.random_bits * repetitions,
            error_bound,
            inner.cost * repetitions,
        )
        self._inner = inner
        self._repetitions = repetitions

    @property
    def repetitions(self) -> int:
        return self._repetitions

    def sample(self, random_string: int) -> ProtocolTree:
        r = self._inner.random_bits
        chunk = (1 << r) - 1
        return MajorityProtocol(
            [self._inner.sample(random_string >> (i * r) & chunk) for i in range(self._repetitions)]
        )


def reduce_error(rp: RandomizedProtocol, eps: Fraction | str) -> RandomizedProtocol:
    """A protocol for the same function with error at most eps.

    Protocols already within eps are returned as they are; otherwise the majority of
    18 ceil(ln(1/eps)) repetitions is taken, which needs a source error of at most 1/3.
    """
    eps = parse_rational(eps)
    if not 0 < eps < 1:
        raise ValidationError(f"Target error should be within (0, 1), got {eps}")
    if rp.error_bound <= eps:
        return rp
    if rp.error_bound > Fraction(1, 3):
        raise ValidationError(f"Majority amplification needs error <= 1/3, got {rp.error_bound}")
    repetitions = majority_repetitions(eps)
    logger.log(INFO2, f"Majority of {repetitions} repetitions to reach error {eps}")
    return MajorityComposition(rp, repetitions, eps)


class ProtocolError:
    """Worst per-input error of a randomized protocol against its gate."""

    __slots__ = ("worst", "exact", "half_width", "samples")
    worst: Fraction | float
    exact: bool
    half_width: float
    samples: int

    def __init__(self, worst, exact: bool, half_width: float, samples: int):
        self.worst = worst
        self.exact = exact
        self.half_width = half_width
        self.samples = samples

    def __repr__(self) -> str:
        kind = "exact" if self.exact else f"+-{self.half_width:.3g} over {self.samples} strings"
        return f"ProtocolError({float(self.worst):.4g}, {kind})"


def protocol_error(
    rp: RandomizedProtocol,
    gate: LeafGate,
    *,
    samples: int = SAMPLED_STRINGS,
    rng: Generator | None = None,
) -> ProtocolError:
    """Exact over all random strings when r <= 12, otherwise sampled with a Hoeffding half-width."""
    if gate.n != rp.n:
        raise ValidationError(f"Gate over {gate.n} variables, protocol over {rp.n}")
    if rp.n > ERROR_INPUT_BITS:
        raise CapacityError(f"Error evaluation supports up to {ERROR_INPUT_BITS} inputs", size=rp.n)
    xs = all_inputs(rp.n)
    target = gate.evaluate(xs)
    wrong = zeros(len(xs), dtype="i8")
    r = rp.random_bits
    if r <= EXACT_RANDOM_BITS:
        for random_string in range(1 << r):
            wrong += evaluate_protocol(rp.sample(random_string), xs) != target
        return ProtocolError(Fraction(int(wrong.max()), 1 << r), True, 0.0, 1 << r)
    if rng is None:
        rng = make_rng(None, "protocol_error")
    for _ in range(samples):
        wrong += evaluate_protocol(rp.sample(random_bits(rng, r)), xs) != target
    half_width = sqrt(log(2 / CONFIDENCE_ALPHA) / (2 * samples))
    return ProtocolError(int(wrong.max()) / samples, False, half_width, samples)

from __future__ import annotations

from fractions import Fraction
from typing import TYPE_CHECKING, Literal

from ..core.exception import MonochromaticityError, ValidationError
from ..protocols.factory import deterministic_protocol, randomized_protocol
from ..protocols.randomized import RandomizedProtocol, protocol_error
from ..protocols.tree import ProtocolTree, as_two_party, evaluate_protocol, two_party_widths
from ..tools.bits import all_inputs
from ..tools.logger import INFO2, logger
from ..tools.seeding import random_bits

if TYPE_CHECKING:
    from collections.abc import Sequence

    from numpy.random import Generator

    from ..core.formula import Formula

DeviceKind = Literal["deterministic", "randomized"]
CHECK_MAX_VARS = 16

LeafProtocol = ProtocolTree | RandomizedProtocol


class LeafDevice:
    """A formula whose leaf gates carry communication protocols, one per gate."""

    __slots__ = ("_formula", "_protocols")
    _formula: Formula
    _protocols: tuple[LeafProtocol, ...]

    def __init__(self, formula: Formula, protocols: Sequence[LeafProtocol]):
        if len(protocols) != len(formula.gates):
            raise ValidationError(
                f"{len(protocols)} protocols given for {len(formula.gates)} gates"
            )
        for gate_id, protocol in enumerate(protocols):
            if protocol.n != formula.num_vars:
                raise ValidationError(
                    f"Protocol of gate {gate_id} is over {protocol.n}!={formula.num_vars} inputs"
                )
        self._formula = formula
        self._protocols = tuple(protocols)

    @classmethod
    def from_formula(
        cls,
        f: Formula,
        k: int = 2,
        kind: DeviceKind = "deterministic",
        delta: Fraction | str = Fraction(1, 3),
    ) -> LeafDevice:
        match kind:
            case "deterministic":
                protocols = [deterministic_protocol(gate, k) for gate in f.gates]
            case "randomized":
                protocols = [randomized_protocol(gate, delta, k) for gate in f.gates]
            case _:
                raise ValidationError(f"Unknown device kind {kind}")
        return cls(f, protocols)

    @property
    def formula(self) -> Formula:
        return self._formula

    @property
    def n(self) -> int:
        return self._formula.num_vars

    @property
    def size(self) -> int:
        return self._formula.size

    @property
    def protocols(self) -> tuple[LeafProtocol, ...]:
        return self._protocols

    @property
    def deterministic(self) -> bool:
        return all(isinstance(p, ProtocolTree) or p.random_bits == 0 for p in self._protocols)

    @property
    def cost(self) -> int:
        """Largest communication cost over the leaves."""
        return max((p.cost for p in self._protocols), default=0)

    @property
    def error_bound(self) -> Fraction:
        return max(
            (p.error_bound for p in self._protocols if isinstance(p, RandomizedProtocol)),
            default=Fraction(0),
        )

    def two_party_protocols(self) -> tuple[ProtocolTree, ...]:
        """Deterministic two-party view of every leaf protocol with Alice on the low bits."""
        if not self.deterministic:
            raise ValidationError("Device carries randomized protocols, sample it first")
        widths = two_party_widths(self.n)
        result = []
        for gate_id, protocol in enumerate(self._protocols):
            if isinstance(protocol, RandomizedProtocol):
                protocol = protocol.sample(0)
            protocol = as_two_party(protocol)
            if protocol.widths != widths:
                raise ValidationError(
                    f"Protocol of gate {gate_id} splits the input as {protocol.widths}, "
                    f"expect {widths}"
                )
            result.append(protocol)
        return tuple(result)

    def reduce_error(self, eps: Fraction | str) -> LeafDevice:
        protocols = [
            p.reduce_error(eps) if isinstance(p, RandomizedProtocol) else p for p in self._protocols
        ]
        return LeafDevice(self._formula, protocols)

    def sample(self, rng: Generator) -> LeafDevice:
        """Fixes the shared randomness of every randomized leaf independently."""
        protocols = [
            p.sample(random_bits(rng, p.random_bits)) if isinstance(p, RandomizedProtocol) else p
            for p in self._protocols
        ]
        return LeafDevice(self._formula, protocols)

    def check(self) -> None:
        """Exhaustive check of the leaf protocols against their gates (n <= 16).

        Deterministic protocols must agree everywhere; randomized ones must stay within
        their error bound when their randomness is small enough to enumerate.
        """
        if self.n > CHECK_MAX_VARS:
            logger.log(INFO2, f"Skipping the protocol check for n={self.n} > {CHECK_MAX_VARS}")
            return
        xs = all_inputs(self.n)
        for gate_id, (gate, protocol) in enumerate(zip(self._formula.gates, self._protocols)):
            if isinstance(protocol, ProtocolTree):
                wrong = evaluate_protocol(protocol, xs) != gate.evaluate(xs)
                if wrong.any():
                    raise MonochromaticityError(
                        f"Protocol of gate {gate_id} is wrong on {int(wrong.sum())} inputs",
                        details={"gate": gate.unparse()},
                    )
            else:
                error = protocol_error(protocol, gate)
                if error.exact and error.worst > protocol.error_bound:
                    raise MonochromaticityError(
                        f"Randomized protocol of gate {gate_id} errs with probability "
                        f"{error.worst}",
                        details={"bound": protocol.error_bound},
                    )

    def __repr__(self) -> str:
        return f"LeafDevice(n={self.n}, size={self.size}, cost={self.cost})"

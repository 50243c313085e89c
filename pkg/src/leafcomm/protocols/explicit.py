"""Extensional protocols: every reachable node stores its message table."""

from __future__ import annotations

from json import dumps, loads
from typing import TYPE_CHECKING

from numpy import arange, int64

from ..core.exception import CapacityError, ValidationError
from ..tools.bits import pack_bits, unpack_bits
from ..tools.seeding import random_bits
from .tree import ProtocolTree, two_party_widths

if TYPE_CHECKING:
    from collections.abc import Mapping, Sequence

    from numpy import uint8
    from numpy.random import Generator
    from numpy.typing import NDArray

EXPLICIT_MAX_BITS = 12
RANDOM_MAX_COST = 16


class ExplicitProtocol(ProtocolTree):
    """Protocol given by tables: nodes[transcript] = (owner, table), leaves[transcript] = output.

    Bit b of a table is the message of the owner holding block value b.
    """

    __slots__ = ("_nodes", "_leaves", "_arrays")
    _nodes: dict[str, tuple[int, int]]
    _leaves: dict[str, int]
    _arrays: dict[str, NDArray[uint8]]

    def __init__(
        self,
        n: int,
        nodes: Mapping[str, tuple[int, int]],
        leaves: Mapping[str, int],
        widths: Sequence[int] | None = None,
    ):
        cost = max((len(transcript) for transcript in leaves), default=0)
        super().__init__(n, cost, widths)
        if any(width > EXPLICIT_MAX_BITS for width in self._widths):
            raise CapacityError(
                f"Explicit protocols support blocks of up to {EXPLICIT_MAX_BITS} bits",
                size=max(self._widths),
            )
        if "" not in nodes and "" not in leaves:
            raise ValidationError("Explicit protocol has no root")
        self._nodes = {}
        for transcript, (owner, table) in nodes.items():
            if not 0 <= owner < self.parties:
                raise ValidationError(f"Node {transcript!r} is owned by unknown party {owner}")
            if table < 0 or table >> (1 << self._widths[owner]):
                raise ValidationError(f"Message table of node {transcript!r} is too long")
            self._nodes[transcript] = (int(owner), int(table))
        self._leaves = {transcript: int(bool(bit)) for transcript, bit in leaves.items()}
        self._arrays = {}

    @property
    def nodes(self) -> dict[str, tuple[int, int]]:
        return dict(self._nodes)

    @property
    def leaves(self) -> dict[str, int]:
        return dict(self._leaves)

    def _node(self, transcript: str) -> tuple[int, int]:
        try:
            return self._nodes[transcript]
        except KeyError as exc:
            raise ValidationError(f"Transcript {transcript!r} is not an inner node") from exc

    def is_leaf(self, transcript: str) -> bool:
        if transcript in self._leaves:
            return True
        if transcript in self._nodes:
            return False
        raise ValidationError(f"Transcript {transcript!r} is not a node of the protocol")

    def owner(self, transcript: str) -> int:
        return self._node(transcript)[0]

    def message(self, part: int, transcript: str) -> int:
        return self._node(transcript)[1] >> part & 1

    def messages(self, parts: NDArray[int64], transcript: str) -> NDArray[uint8]:
        if transcript not in self._arrays:
            owner, table = self._node(transcript)
            self._arrays[transcript] = unpack_bits(table, 1 << self._widths[owner])
        return self._arrays[transcript][parts]

    def output(self, transcript: str) -> int:
        return self._leaves[transcript]

    def to_dict(self) -> dict:
        hexwidth = {owner: max(1, (1 << width) // 4) for owner, width in enumerate(self._widths)}
        return {
            "n": self._n,
            "widths": list(self._widths),
            "cost": self._cost,
            "nodes": [
                {
                    "transcript": transcript,
                    "owner": owner,
                    "table": f"{table:0{hexwidth[owner]}x}",
                }
                for transcript, (owner, table) in sorted(self._nodes.items())
            ],
            "leaves": [
                {"transcript": transcript, "output": output}
                for transcript, output in sorted(self._leaves.items())
            ],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> ExplicitProtocol:
        try:
            nodes = {
                node["transcript"]: (int(node["owner"]), int(node["table"], 16))
                for node in data["nodes"]
            }
            leaves = {leaf["transcript"]: int(leaf["output"]) for leaf in data["leaves"]}
            return cls(int(data["n"]), nodes, leaves, data.get("widths"))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"Malformed protocol dump: {exc}") from exc

    def to_json(self) -> str:
        return dumps(self.to_dict(), sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, text: str) -> ExplicitProtocol:
        return cls.from_dict(loads(text))


def to_explicit(p: ProtocolTree) -> ExplicitProtocol:
    """Materializes the reachable nodes of a protocol."""
    if isinstance(p, ExplicitProtocol):
        return p
    if any(width > EXPLICIT_MAX_BITS for width in p.widths):
        raise CapacityError(
            f"Explicit protocols support blocks of up to {EXPLICIT_MAX_BITS} bits",
            size=max(p.widths),
        )
    domains = [arange(1 << width, dtype=int64) for width in p.widths]
    nodes: dict[str, tuple[int, int]] = {}
    leaves: dict[str, int] = {}
    stack: list[tuple[str, list[NDArray[int64]]]] = [("", domains)]
    while stack:
        transcript, current = stack.pop()
        if p.is_leaf(transcript):
            leaves[transcript] = p.output(transcript)
            continue
        owner = p.owner(transcript)
        nodes[transcript] = (owner, pack_bits(p.messages(domains[owner], transcript)))
        bits = p.messages(current[owner], transcript)
        for bit in (0, 1):
            subset = current[owner][bits == bit]
            if len(subset):
                branch = list(current)
                branch[owner] = subset
                stack.append((transcript + str(bit), branch))
    return ExplicitProtocol(p.n, nodes, leaves, p.widths)


def random_protocol(n: int, cost: int, rng: Generator) -> ExplicitProtocol:
    """Complete two-party protocol tree of the given depth with random messages and outputs."""
    if not 0 <= cost <= RANDOM_MAX_COST:
        raise ValidationError(f"Random protocol cost should be within [0, {RANDOM_MAX_COST}]")
    widths = two_party_widths(n)
    nodes: dict[str, tuple[int, int]] = {}
    leaves: dict[str, int] = {}
    level = [""]
    for _ in range(cost):
        following = []
        for transcript in level:
            owner = int(rng.integers(0, 2))
            nodes[transcript] = (owner, random_bits(rng, 1 << widths[owner]))
            following.extend((transcript + "0", transcript + "1"))
        level = following
    for transcript in level:
        leaves[transcript] = int(rng.integers(0, 2))
    return ExplicitProtocol(n, nodes, leaves, widths)

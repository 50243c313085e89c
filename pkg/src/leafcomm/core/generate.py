from __future__ import annotations

from typing import TYPE_CHECKING, Literal

from ..tools.seeding import make_rng
from .exception import ValidationError
from .formula import And, Formula, FormulaNode, Leaf, Not, Or
from .gates import Ltf, Sym, Table, XorMask

if TYPE_CHECKING:
    from numpy.random import Generator

    from .gates import LeafGate

GateClass = Literal["xor", "ltf", "sym", "var", "table", "mixed"]
GateClasses = ("xor", "ltf", "sym", "var", "table", "mixed")

NEGATION_PROBABILITY = 0.25
LTF_WEIGHT_RANGE = 4
INT64_MAX = (1 << 63) - 1


def _shape_counts(leaves: int) -> list[int]:
    """counts[c]: number of binary tree shapes with c leaves, the Catalan number C(c-1)."""
    counts = [0, 1]
    for c in range(2, leaves + 1):
        # C(j) = C(j-1) 2 (2j - 1) / (j + 1) with j = c - 1
        counts.append(counts[-1] * 2 * (2 * c - 3) // c)
    return counts


def _uniform_below(total: int, rng: Generator) -> int:
    if total <= INT64_MAX:
        return int(rng.integers(0, total))
    bits = total.bit_length()
    while True:
        value = int.from_bytes(rng.bytes((bits + 7) // 8), "little") >> (-bits % 8)
        if value < total:
            return value


def _left_size(leaves: int, counts: list[int], rng: Generator) -> int:
    # proportional to the number of shapes on each side: uniform over shapes
    weights = [counts[k] * counts[leaves - k] for k in range(1, leaves)]
    pick = _uniform_below(sum(weights), rng)
    left = 1
    for weight in weights:
        if pick < weight:
            break
        pick -= weight
        left += 1
    return left


class _Frame:
    __slots__ = ("leaves", "left", "op", "children")

    def __init__(self, leaves: int):
        self.leaves = leaves
        self.left = 0
        self.op = None
        self.children = []


def _random_shape(leaves: int, rng: Generator, make_leaf) -> FormulaNode:
    """Post-order construction on an explicit stack, children before the parent's negation."""
    counts = _shape_counts(leaves)
    stack = [_Frame(leaves)]
    while True:
        frame = stack[-1]
        if frame.leaves > 1:
            if frame.op is None:
                frame.left = _left_size(frame.leaves, counts, rng)
                frame.op = And if rng.random() < 0.5 else Or
            if len(frame.children) < 2:
                size = frame.leaves - frame.left if frame.children else frame.left
                stack.append(_Frame(size))
                continue
            node = frame.op(*frame.children)
        else:
            node = make_leaf()
        if rng.random() < NEGATION_PROBABILITY:
            node = Not(node)
        stack.pop()
        if not stack:
            return node
        stack[-1].children.append(node)


def random_gate(n: int, gate_class: GateClass, rng: Generator) -> LeafGate:
    if gate_class == "mixed":
        gate_class = ("xor", "ltf", "sym")[int(rng.integers(0, 3))]
    match gate_class:
        case "xor":
            mask = int(rng.integers(1, 1 << n)) if n else 0
            return XorMask(mask, bool(rng.integers(0, 2)), n=n)
        case "var":
            return XorMask(1 << int(rng.integers(0, n)), n=n)
        case "ltf":
            drawn = rng.integers(-LTF_WEIGHT_RANGE, LTF_WEIGHT_RANGE + 1, size=n)
            weights = [int(w) for w in drawn]
            span = sum(abs(w) for w in weights)
            threshold = int(rng.integers(-span // 2, span // 2 + 2))
            return Ltf(weights, threshold, n=n)
        case "sym":
            return Sym([int(b) for b in rng.integers(0, 2, size=n + 1)], n=n)
        case "table":
            return Table.from_values(rng.integers(0, 2, size=1 << n), n)
    raise ValidationError(f"Unknown gate class {gate_class}, expect one of {GateClasses}")


def random_formula(
    n: int, s: int, gate_class: GateClass = "xor", rng_seed: int | None = None, *, rng=None
) -> Formula:
    """Random tree with s leaves, uniform over shapes, gates drawn from the class.

    Deterministic given `rng_seed`; an explicit generator may be passed instead.
    """
    if s < 1:
        raise ValidationError(f"Formula size should be positive, got {s}")
    if n < 1 and gate_class in ("var", "table"):
        raise ValidationError(f"Gate class {gate_class} needs at least one variable")
    if rng is None:
        rng = make_rng(rng_seed, "formula")
    gates: list[LeafGate] = []

    def make_leaf() -> Leaf:
        gates.append(random_gate(n, gate_class, rng))
        return Leaf(len(gates) - 1)

    root = _random_shape(s, rng, make_leaf)
    return Formula(root, n, gates)

from __future__ import annotations

from numbers import Integral
from typing import TYPE_CHECKING

from numpy import arange, empty, int64, uint8

from ..tools.bits import all_inputs
from .exception import CapacityError, ValidationError
from .gates import TABLE_MAX_VARS, XorMask

if TYPE_CHECKING:
    from collections.abc import Callable, Iterator, Mapping, Sequence

    from numpy.typing import NDArray

    from .gates import LeafGate

CHUNK_BITS = 20


class FormulaNode:
    """Immutable node of a de Morgan formula tree."""

    __slots__ = ("_children", "_hash")
    _children: tuple[FormulaNode, ...]
    _hash: int
    label: str = ""

    def __init__(self, *children: FormulaNode):
        self._children = children
        self._hash = hash((self.label, self._payload(), children))

    @property
    def children(self) -> tuple[FormulaNode, ...]:
        return self._children

    def _payload(self) -> int | None:
        return None

    def with_children(self, *children: FormulaNode) -> FormulaNode:
        return type(self)(*children)

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        return (
            type(self) is type(other)
            and self._hash == other._hash
            and self._payload() == other._payload()
            and self._children == other._children
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        inner = " ".join(map(repr, self._children))
        return f"({self.label} {inner})"


class And(FormulaNode):
    __slots__ = ()
    label = "and"

    def __init__(self, left: FormulaNode, right: FormulaNode):
        super().__init__(left, right)


class Or(FormulaNode):
    __slots__ = ()
    label = "or"

    def __init__(self, left: FormulaNode, right: FormulaNode):
        super().__init__(left, right)


class Not(FormulaNode):
    __slots__ = ()
    label = "not"

    def __init__(self, child: FormulaNode):
        super().__init__(child)


class Leaf(FormulaNode):
    """Reference to a leaf gate by its index in the owning formula."""

    __slots__ = ("_gate_id",)
    _gate_id: int
    label = "leaf"

    def __init__(self, gate_id: int):
        self._gate_id = gate_id
        super().__init__()

    @property
    def gate_id(self) -> int:
        return self._gate_id

    def _payload(self) -> int:
        return self._gate_id

    def with_children(self) -> Leaf:
        return self

    def __repr__(self) -> str:
        return f"g{self._gate_id}"


class Placeholder(FormulaNode):
    """A cut-out sub-formula, resolved through a composition tree."""

    __slots__ = ("_index",)
    _index: int
    label = "placeholder"

    def __init__(self, index: int):
        self._index = index
        super().__init__()

    @property
    def index(self) -> int:
        return self._index

    def _payload(self) -> int:
        return self._index

    def with_children(self) -> Placeholder:
        return self

    def __repr__(self) -> str:
        return f"P{self._index}"


def iter_leaf_nodes(node: FormulaNode) -> Iterator[Leaf | Placeholder]:
    """Leaves and placeholders, left to right."""
    stack = [node]
    while stack:
        current = stack.pop()
        if isinstance(current, (Leaf, Placeholder)):
            yield current
        else:
            stack.extend(reversed(current.children))


class Formula:
    """A de Morgan formula over n variables with gates at its leaves."""

    __slots__ = ("_root", "_num_vars", "_gates", "_size", "_leaf_nodes")
    _root: FormulaNode
    _num_vars: int
    _gates: tuple[LeafGate, ...]
    _size: int
    _leaf_nodes: tuple[Leaf | Placeholder, ...]

    def __init__(self, root: FormulaNode, num_vars: int, gates: Sequence[LeafGate]):
        self._root = root
        self._num_vars = num_vars
        self._gates = tuple(gates)
        self._leaf_nodes = tuple(iter_leaf_nodes(root))
        self._size = sum(1 for node in self._leaf_nodes if isinstance(node, Leaf))
        for gate in self._gates:
            if gate.n != num_vars:
                raise ValidationError(
                    f"Gate {gate!r} is defined over {gate.n}!={num_vars} variables"
                )
        for node in self._leaf_nodes:
            if isinstance(node, Leaf) and not 0 <= node.gate_id < len(self._gates):
                raise ValidationError(f"Leaf references unknown gate {node.gate_id}")

    @property
    def root(self) -> FormulaNode:
        return self._root

    @property
    def num_vars(self) -> int:
        return self._num_vars

    n = num_vars

    @property
    def gates(self) -> tuple[LeafGate, ...]:
        return self._gates

    @property
    def size(self) -> int:
        """Number of leaves that reference gates."""
        return self._size

    @property
    def leaf_nodes(self) -> tuple[Leaf | Placeholder, ...]:
        return self._leaf_nodes

    @property
    def leaf_count(self) -> int:
        """Leaves plus placeholders."""
        return len(self._leaf_nodes)

    @property
    def leaf_gates(self) -> tuple[LeafGate, ...]:
        """Gate of every leaf occurrence, left to right."""
        return tuple(
            self._gates[node.gate_id] for node in self._leaf_nodes if isinstance(node, Leaf)
        )

    @property
    def placeholders(self) -> tuple[int, ...]:
        return tuple(node.index for node in self._leaf_nodes if isinstance(node, Placeholder))

    def depth(self) -> int:
        def _depth(node: FormulaNode) -> int:
            return 1 + max((_depth(child) for child in node.children), default=-1)

        return _depth(self._root)

    def __call__(self, x, placeholders: Mapping[int, int] | None = None) -> int:
        return evaluate(self, x, placeholders)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Formula)
            and self._num_vars == other._num_vars
            and self._root == other._root
            and self._gates == other._gates
        )

    def __hash__(self) -> int:
        return hash((self._num_vars, self._root, self._gates))

    def __repr__(self) -> str:
        from .parser import unparse

        return f"Formula({unparse(self)}, n={self._num_vars})"


def evaluate(f: Formula, x, placeholders: Mapping[int, int] | None = None) -> int:
    """Boolean value of the formula on x (bitmask with x1 as the low bit, or a bit sequence)."""
    x = as_bitmask(x, f.num_vars)
    gates = f.gates

    def _eval(node: FormulaNode) -> int:
        match node:
            case Leaf():
                return gates[node.gate_id](x)
            case Placeholder():
                if placeholders is None or node.index not in placeholders:
                    raise ValidationError(f"No value provided for placeholder {node.index}")
                return int(placeholders[node.index])
            case Not():
                return 1 - _eval(node.children[0])
            case And():
                return _eval(node.children[0]) & _eval(node.children[1])
            case Or():
                return _eval(node.children[0]) | _eval(node.children[1])
        raise ValidationError(f"Unknown formula node {node!r}")

    return _eval(f.root)


eval_formula = evaluate


def combine_tables(
    node: FormulaNode,
    leaf_value: Callable[[Leaf | Placeholder], NDArray[uint8]],
) -> NDArray[uint8]:
    """Bottom-up vectorized evaluation given value arrays of the leaf nodes."""
    match node:
        case Leaf() | Placeholder():
            return leaf_value(node)
        case Not():
            return 1 - combine_tables(node.children[0], leaf_value)
        case And():
            return combine_tables(node.children[0], leaf_value) & combine_tables(
                node.children[1], leaf_value
            )
        case Or():
            return combine_tables(node.children[0], leaf_value) | combine_tables(
                node.children[1], leaf_value
            )
    raise ValidationError(f"Unknown formula node {node!r}")


def evaluate_many(
    f: Formula,
    xs: NDArray[int64],
    placeholders: Mapping[int, NDArray[uint8]] | None = None,
) -> NDArray[uint8]:
    """Vectorized evaluation over integer-encoded inputs."""
    cache: dict[int, NDArray[uint8]] = {}

    def leaf_value(node: Leaf | Placeholder) -> NDArray[uint8]:
        if isinstance(node, Placeholder):
            if placeholders is None or node.index not in placeholders:
                raise ValidationError(f"No values provided for placeholder {node.index}")
            return placeholders[node.index].astype(uint8)
        if (values := cache.get(node.gate_id)) is None:
            values = cache[node.gate_id] = f.gates[node.gate_id].evaluate(xs)
        return values

    return combine_tables(f.root, leaf_value).astype(uint8)


def truth_table(f: Formula) -> NDArray[uint8]:
    """Bit i of the result is the value on the input encoded by i."""
    if f.num_vars > TABLE_MAX_VARS:
        raise CapacityError(
            f"Exhaustive expansion supports up to {TABLE_MAX_VARS} variables", size=f.num_vars
        )
    result = empty(1 << f.num_vars, dtype=uint8)
    for start, xs in _input_chunks(f.num_vars):
        result[start : start + len(xs)] = evaluate_many(f, xs)
    return result


def _input_chunks(n: int) -> Iterator[tuple[int, NDArray[int64]]]:
    size = 1 << n
    chunk = 1 << CHUNK_BITS
    for start in range(0, size, chunk):
        yield start, arange(start, min(start + chunk, size), dtype=int64)


def leaf_tables(f: Formula) -> NDArray[uint8]:
    """Row i is the truth table of the i-th leaf occurrence."""
    xs = all_inputs(f.num_vars)
    gates = f.leaf_gates
    tables = empty((len(gates), len(xs)), dtype=uint8)
    for i, gate in enumerate(gates):
        tables[i] = gate.evaluate(xs)
    return tables


def leaf_values(f: Formula, x) -> int:
    """Outputs of the leaf occurrences on x, occurrence i as bit i: the skeleton's input."""
    x = as_bitmask(x, f.num_vars)
    return sum(gate(x) << i for i, gate in enumerate(f.leaf_gates))


def skeleton(f: Formula) -> Formula:
    """The read-once view: leaf occurrence i becomes the variable x_{i+1} over size(f) variables."""
    size = f.size
    counter = iter(range(size))

    def _rebuild(node: FormulaNode) -> FormulaNode:
        if isinstance(node, Leaf):
            return Leaf(next(counter))
        if isinstance(node, Placeholder):
            return node
        return node.with_children(*map(_rebuild, node.children))

    root = _rebuild(f.root)
    return Formula(root, size, [XorMask(1 << i, n=size) for i in range(size)])


def slot_formula(f: Formula) -> Formula:
    """Like `skeleton`, but placeholders also become variables, in leaf order."""
    count = f.leaf_count
    counter = iter(range(count))

    def _rebuild(node: FormulaNode) -> FormulaNode:
        if isinstance(node, (Leaf, Placeholder)):
            return Leaf(next(counter))
        return node.with_children(*map(_rebuild, node.children))

    root = _rebuild(f.root)
    return Formula(root, count, [XorMask(1 << i, n=count) for i in range(count)])


def count_satisfying(f: Formula) -> int:
    """Number of satisfying assignments, enumerated in chunks."""
    return sum(int(evaluate_many(f, xs).sum()) for _, xs in _input_chunks(f.num_vars))


def as_bitmask(x, n: int) -> int:
    """Accepts an int bitmask or a sequence of bits (x1 first) and returns the bitmask."""
    if isinstance(x, Integral):
        value = int(x)
    else:
        bits = list(x)
        if len(bits) != n:
            raise ValidationError(f"Expect {n} bits, got {len(bits)}")
        value = sum(int(bit) << i for i, bit in enumerate(bits))
    if value < 0 or value >> n:
        raise ValidationError(f"Input {value} does not fit into {n} bits")
    return value

from __future__ import annotations

from math import isqrt
from typing import TYPE_CHECKING

from ..tools.logger import INFO2, logger
from .exception import ValidationError
from .formula import Formula, FormulaNode, Leaf, Placeholder, iter_leaf_nodes

if TYPE_CHECKING:
    from collections.abc import Sequence


class Piece:
    """Sub-formula cut out of the original and replaced by a placeholder."""

    __slots__ = ("placeholder_id", "formula")
    placeholder_id: int
    formula: Formula

    def __init__(self, placeholder_id: int, formula: Formula):
        self.placeholder_id = placeholder_id
        self.formula = formula

    def __iter__(self):
        yield self.placeholder_id
        yield self.formula

    def __repr__(self) -> str:
        return f"Piece(P{self.placeholder_id}, {self.formula!r})"


class CompositionTree:
    """Top formula over placeholders plus the pieces they stand for.

    Piece j defines placeholder j and may reference placeholders of earlier pieces.
    """

    __slots__ = ("top", "pieces", "threshold")
    top: Formula
    pieces: tuple[Piece, ...]
    threshold: int

    def __init__(self, top: Formula, pieces: Sequence[Piece], threshold: int):
        self.top = top
        self.pieces = tuple(pieces)
        self.threshold = threshold

    def piece_sizes(self) -> list[int]:
        return [piece.formula.leaf_count for piece in self.pieces]

    def recompose(self) -> Formula:
        return recompose(self)


def ceil_sqrt(value: int) -> int:
    root = isqrt(value)
    return root if root * root == value else root + 1


def max_pieces(size: int, t: int) -> int:
    """ceil(size/t) + 1: the number of pieces a decomposition may produce."""
    return -(-size // t) + 1


def peeling_pieces(size: int, t: int) -> int:
    """Most pieces peeling can produce.

    Every piece has at least t leaf nodes, the top keeps at least one, and each piece adds
    one placeholder: t p <= size + p - 1. With t = 1 every original leaf is its own piece.
    """
    if t == 1:
        return size
    return (size - 1) // (t - 1)


def _weights(node: FormulaNode, memo: dict[int, tuple[int, bool]]) -> tuple[int, bool]:
    """(leaf nodes below, contains an original leaf) with results memoized by node id."""
    if (cached := memo.get(id(node))) is not None:
        return cached
    if isinstance(node, Leaf):
        result = (1, True)
    elif isinstance(node, Placeholder):
        result = (1, False)
    else:
        parts = [_weights(child, memo) for child in node.children]
        result = (sum(w for w, _ in parts), any(o for _, o in parts))
    memo[id(node)] = result
    return result


def _find_cut(root: FormulaNode, t: int) -> tuple[int, ...] | None:
    """Path to the leftmost-deepest node qualifying for a cut."""
    memo: dict[int, tuple[int, bool]] = {}
    best: tuple[int, tuple[int, ...]] | None = None
    stack: list[tuple[FormulaNode, tuple[int, ...]]] = [(root, ())]
    while stack:
        node, path = stack.pop()
        if isinstance(node, Placeholder):
            continue
        weight, original = _weights(node, memo)
        if weight < t or (t == 1 and not original):
            continue
        # preorder traversal: the first node found at a given depth is the leftmost
        if best is None or len(path) > best[0]:
            best = (len(path), path)
        for index in reversed(range(len(node.children))):
            stack.append((node.children[index], path + (index,)))
    return None if best is None else best[1]


def _replace(node: FormulaNode, path: tuple[int, ...], new: FormulaNode) -> FormulaNode:
    if not path:
        return new
    children = list(node.children)
    children[path[0]] = _replace(children[path[0]], path[1:], new)
    return node.with_children(*children)


def _subtree(node: FormulaNode, path: tuple[int, ...]) -> FormulaNode:
    for index in path:
        node = node.children[index]
    return node


def decompose(f: Formula, t: int) -> CompositionTree:
    """Bottom-up peeling of subtrees with at least t leaf nodes into pieces.

    Every piece has at most 2t leaf nodes and there are at most ceil(size/t) + 1 pieces.
    Thresholds for which peeling cannot guarantee the piece count are rejected; t >=
    ceil(sqrt(size)) is always accepted.
    """
    if not 1 <= t <= max(f.size, 1):
        raise ValidationError(f"Threshold t={t} should be within [1, {f.size}]")
    if peeling_pieces(f.size, t) > max_pieces(f.size, t):
        raise ValidationError(
            f"Threshold t={t} is too small for a size-{f.size} formula: peeling may produce "
            f"{peeling_pieces(f.size, t)} pieces, more than ceil(s/t) + 1 = "
            f"{max_pieces(f.size, t)}; t >= {ceil_sqrt(f.size)} is always accepted"
        )

    root = f.root
    pieces: list[Piece] = []
    while not isinstance(root, Placeholder):
        if not any(isinstance(node, Leaf) for node in iter_leaf_nodes(root)):
            break
        if (path := _find_cut(root, t)) is None:
            break
        index = len(pieces)
        pieces.append(Piece(index, Formula(_subtree(root, path), f.num_vars, f.gates)))
        root = _replace(root, path, Placeholder(index))

    top = Formula(root, f.num_vars, f.gates)
    logger.log(
        INFO2,
        f"Decomposed a size-{f.size} formula with t={t}: {len(pieces)} pieces, "
        f"top with {top.leaf_count} leaf nodes",
    )
    return CompositionTree(top, pieces, t)


def recompose(tree: CompositionTree) -> Formula:
    """Substitutes the pieces back, bottom-up."""
    resolved: dict[int, FormulaNode] = {}

    def _substitute(node: FormulaNode) -> FormulaNode:
        if isinstance(node, Placeholder):
            return resolved[node.index]
        if isinstance(node, Leaf):
            return node
        return node.with_children(*map(_substitute, node.children))

    for piece in tree.pieces:
        resolved[piece.placeholder_id] = _substitute(piece.formula.root)
    top = tree.top
    return Formula(_substitute(top.root), top.num_vars, top.gates)

"""S-expression reader and writer for formulas.

Grammar (ASCII, variables 1-based)::

    expr := (and expr expr) | (or expr expr) | (not expr) | (var K)
          | (xor K ...) | (nxor K ...) | (ltf (w1 ... wn) theta)
          | (sym b0 b1 ... bn) | (table HEX)

Text after `;` up to the end of the line is ignored. Error offsets are 1-based.
"""

from __future__ import annotations

from pathlib import Path
from typing import TYPE_CHECKING

from .exception import FormulaSyntaxError, ValidationError
from .formula import And, Formula, FormulaNode, Leaf, Not, Or, Placeholder
from .gates import Ltf, Sym, Table, XorMask

if TYPE_CHECKING:
    from .gates import LeafGate

_GATE_KINDS = ("var", "xor", "nxor", "ltf", "sym", "table")
_NODE_KINDS = ("and", "or", "not")


class _Token:
    __slots__ = ("text", "offset")

    def __init__(self, text: str, offset: int):
        self.text = text
        self.offset = offset


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    i, size = 0, len(text)
    while i < size:
        char = text[i]
        if char == ";":
            while i < size and text[i] != "\n":
                i += 1
        elif char.isspace():
            i += 1
        elif char in "()":
            tokens.append(_Token(char, i + 1))
            i += 1
        else:
            start = i
            while i < size and not text[i].isspace() and text[i] not in "();":
                i += 1
            tokens.append(_Token(text[start:i], start + 1))
    return tokens


class _Reader:
    __slots__ = ("_tokens", "_pos", "_end", "_nvars", "_gates", "_max_index")

    def __init__(self, text: str, nvars: int | None):
        self._tokens = _tokenize(text)
        self._pos = 0
        self._end = len(text) + 1
        self._nvars = nvars
        self._gates: list[LeafGate | tuple] = []
        self._max_index = 0

    def _peek(self) -> _Token | None:
        return self._tokens[self._pos] if self._pos < len(self._tokens) else None

    def _next(self, what: str) -> _Token:
        if (token := self._peek()) is None:
            raise FormulaSyntaxError(f"Unexpected end of input, expect {what}", self._end)
        self._pos += 1
        return token

    def _expect(self, text: str) -> _Token:
        token = self._next(f'"{text}"')
        if token.text != text:
            raise FormulaSyntaxError(f'Expect "{text}", got "{token.text}"', token.offset)
        return token

    def _integer(self, what: str) -> int:
        token = self._next(what)
        try:
            return int(token.text)
        except ValueError:
            raise FormulaSyntaxError(f'Expect {what}, got "{token.text}"', token.offset) from None

    def _index(self) -> int:
        token = self._peek()
        index = self._integer("variable index")
        if index < 1 or (self._nvars is not None and index > self._nvars):
            raise FormulaSyntaxError(f"Variable index {index} is out of range", token.offset)
        self._max_index = max(self._max_index, index)
        return index - 1

    def _indices_until_close(self) -> list[int]:
        indices = []
        while (token := self._peek()) is not None and token.text != ")":
            indices.append(self._index())
        return indices

    def expression(self) -> FormulaNode:
        self._expect("(")
        head = self._next("operator")
        kind = head.text
        if kind in _NODE_KINDS:
            operands = [self.expression() for _ in range(1 if kind == "not" else 2)]
            self._expect(")")
            return {"and": And, "or": Or, "not": Not}[kind](*operands)
        if kind not in _GATE_KINDS:
            raise FormulaSyntaxError(f'Unknown gate kind "{kind}"', head.offset)

        match kind:
            case "var":
                spec = ("xor", [self._index()], False)
            case "xor" | "nxor":
                spec = ("xor", self._indices_until_close(), kind == "nxor")
            case "ltf":
                self._expect("(")
                weights = []
                while (token := self._peek()) is not None and token.text != ")":
                    weights.append(self._integer("weight"))
                self._expect(")")
                self._max_index = max(self._max_index, len(weights))
                spec = ("ltf", weights, self._integer("threshold"))
            case "sym":
                bits = []
                while (token := self._peek()) is not None and token.text != ")":
                    bits.append(self._integer("spectrum bit"))
                self._max_index = max(self._max_index, len(bits) - 1)
                spec = ("sym", bits, head.offset)
            case _:
                token = self._next("hexadecimal table")
                try:
                    bits = int(token.text, 16)
                except ValueError:
                    raise FormulaSyntaxError(
                        f'Expect hexadecimal table, got "{token.text}"', token.offset
                    ) from None
                spec = ("table", bits, token.offset)
        self._expect(")")
        self._gates.append(spec)
        return Leaf(len(self._gates) - 1)

    def formula(self) -> Formula:
        root = self.expression()
        if (token := self._peek()) is not None:
            raise FormulaSyntaxError(f'Unexpected trailing "{token.text}"', token.offset)
        n = self._nvars
        if n is None:
            if any(spec[0] == "table" for spec in self._gates):
                raise ValidationError(
                    "Formulas with table gates need an explicit number of variables"
                )
            n = self._max_index
        return Formula(root, n, [self._make_gate(spec, n) for spec in self._gates])

    @staticmethod
    def _make_gate(spec: tuple, n: int) -> LeafGate:
        match spec:
            case ("xor", indices, negated):
                mask = 0
                for i in indices:
                    mask ^= 1 << i
                return XorMask(mask, negated, n=n)
            case ("ltf", weights, threshold):
                return Ltf(weights, threshold, n=n)
            case ("sym", bits, offset):
                try:
                    return Sym(bits, n=n)
                except ValidationError as exc:
                    raise FormulaSyntaxError(str(exc), offset) from exc
            case ("table", bits, offset):
                try:
                    return Table(bits, n=n)
                except ValidationError as exc:
                    raise FormulaSyntaxError(str(exc), offset) from exc
        raise ValidationError(f"Unknown gate {spec!r}")


def parse_formula(text: str, nvars: int | None = None) -> Formula:
    """Parses an s-expression; without `nvars` the largest referenced index defines n."""
    return _Reader(text, nvars).formula()


def load_formula(path: str | Path, nvars: int | None = None) -> Formula:
    return parse_formula(Path(path).read_text(), nvars)


def unparse(f: Formula) -> str:
    gates = f.gates

    def _write(node: FormulaNode) -> str:
        match node:
            case Leaf():
                return gates[node.gate_id].unparse()
            case Placeholder():
                return f"(placeholder {node.index})"
        inner = " ".join(_write(child) for child in node.children)
        return f"({node.label} {inner})"

    return _write(f.root)

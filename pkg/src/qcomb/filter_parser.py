"""Text format for filter definitions.

Grammar (LL(1), parsed by recursive descent with one-token lookahead):

    file     := filter+
    filter   := "filter" IDENT "{" "qubits:" INT ";"
                "prefactor:" INT "/" INT ";" block+ "}"
    block    := "block" "[" slot ("," slot)* "]"
    slot     := "id" | "x" | "y" | "z" | LABEL | "^" LABEL
    LABEL    := lowercase identifier; "^" marks the raised leg of a pair
    comments run from "#" to end of line

Serialization is canonical: blocks one per line (single-block filters stay
on one line) and labels renamed in first-appearance order m, n, l, t, r1, ...
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .filter_ir import (
    Block,
    FilterDef,
    FilterError,
    Fixed,
    Lower,
    SlotCountMismatchError,
    Slot,
    Upper,
    validate,
)

_FIXED_NAMES = {"id": 0, "x": 1, "y": 2, "z": 3}
_FIXED_BY_CODE = {code: name for name, code in _FIXED_NAMES.items()}
_PUNCT = set("{}[],;:/^")


class FilterSyntaxError(FilterError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


class BadPrefactorError(FilterSyntaxError):
    pass


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "int", a punctuation character, or "eof"
    value: str
    line: int
    col: int


def _tokenize(text: str) -> list[Token]:
    tokens = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
        elif ch in " \t\r":
            i += 1
            col += 1
        elif ch == "#":
            while i < n and text[i] != "\n":
                i += 1
        elif ch in _PUNCT:
            tokens.append(Token(ch, ch, line, col))
            i += 1
            col += 1
        elif ch.isdigit():
            start = i
            while i < n and text[i].isdigit():
                i += 1
            tokens.append(Token("int", text[start:i], line, col))
            col += i - start
        elif ch.isalpha() or ch == "_":
            start = i
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
            tokens.append(Token("ident", text[start:i], line, col))
            col += i - start
        else:
            raise FilterSyntaxError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str | None = None) -> Token:
        tok = self.current
        if tok.kind != kind:
            want = what or kind
            raise FilterSyntaxError(f"expected {want}, found {tok.value or 'end of input'!r}", tok.line, tok.col)
        return self.advance()

    def expect_keyword(self, word: str) -> Token:
        tok = self.current
        if tok.kind != "ident" or tok.value != word:
            raise FilterSyntaxError(
                f"expected {word!r}, found {tok.value or 'end of input'!r}", tok.line, tok.col
            )
        return self.advance()

    def parse_file(self) -> list[FilterDef]:
        filters = [self.parse_filter()]
        while self.current.kind != "eof":
            filters.append(self.parse_filter())
        return filters

    def parse_filter(self) -> FilterDef:
        keyword = self.expect_keyword("filter")
        name = self.expect("ident", "a filter name").value
        self.expect("{")
        self.expect_keyword("qubits")
        self.expect(":")
        qubits = int(self.expect("int", "a qubit count").value)
        self.expect(";")
        self.expect_keyword("prefactor")
        self.expect(":")
        num_tok = self.expect("int", "a prefactor numerator")
        self.expect("/")
        den_tok = self.expect("int", "a prefactor denominator")
        if int(den_tok.value) == 0:
            raise BadPrefactorError("prefactor denominator is zero", den_tok.line, den_tok.col)
        prefactor = Fraction(int(num_tok.value), int(den_tok.value))
        self.expect(";")
        blocks = [self.parse_block(qubits)]
        while self.current.kind == "ident" and self.current.value == "block":
            blocks.append(self.parse_block(qubits))
        self.expect("}")
        f = FilterDef(name, qubits, tuple(blocks), prefactor)
        try:
            return validate(f)
        except FilterError as exc:
            raise type(exc)(f"{keyword.line}:{keyword.col}: {exc}") from None

    def parse_block(self, qubits: int) -> Block:
        keyword = self.expect_keyword("block")
        self.expect("[")
        slots = [self.parse_slot()]
        while self.current.kind == ",":
            self.advance()
            slots.append(self.parse_slot())
        self.expect("]")
        if len(slots) != qubits:
            raise SlotCountMismatchError(
                f"{keyword.line}:{keyword.col}: block has {len(slots)} slots, expected {qubits}"
            )
        return Block(tuple(slots))

    def parse_slot(self) -> Slot:
        tok = self.current
        if tok.kind == "^":
            self.advance()
            label = self.expect("ident", "a label after '^'")
            self._check_label(label)
            return Upper(label.value)
        if tok.kind == "ident":
            self.advance()
            if tok.value in _FIXED_NAMES:
                return Fixed(_FIXED_NAMES[tok.value])
            self._check_label(tok)
            return Lower(tok.value)
        raise FilterSyntaxError(f"expected a slot, found {tok.value or 'end of input'!r}", tok.line, tok.col)

    @staticmethod
    def _check_label(tok: Token) -> None:
        if not tok.value[0].islower() or tok.value != tok.value.lower():
            raise FilterSyntaxError(f"label {tok.value!r} must be lowercase", tok.line, tok.col)


def parse(text: str) -> list[FilterDef]:
    """Parse a filter file; every error carries a line:column location."""
    return _Parser(text).parse_file()


def _canonical_names(f: FilterDef) -> dict[str, str]:
    fixed_order = ["m", "n", "l", "t"]
    rename: dict[str, str] = {}
    for label in f.labels:
        k = len(rename)
        rename[label] = fixed_order[k] if k < len(fixed_order) else f"r{k - len(fixed_order) + 1}"
    return rename


def _slot_text(slot: Slot, rename: dict[str, str]) -> str:
    if isinstance(slot, Fixed):
        return _FIXED_BY_CODE[slot.code]
    if isinstance(slot, Lower):
        return rename[slot.label]
    return "^" + rename[slot.label]


def serialize(f: FilterDef) -> str:
    """Canonical text form; parse(serialize(f)) is structurally equal to f."""
    validate(f)
    rename = _canonical_names(f)
    blocks = ["block [" + ", ".join(_slot_text(s, rename) for s in b.slots) + "]" for b in f.blocks]
    head = f"filter {f.name} {{ qubits: {f.num_qubits}; prefactor: {f.prefactor.numerator}/{f.prefactor.denominator};"
    if len(blocks) == 1:
        return f"{head} {blocks[0]} }}"
    body = "\n".join("  " + b for b in blocks)
    return f"{head}\n{body}\n}}"

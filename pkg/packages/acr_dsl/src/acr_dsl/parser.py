"""Tokenizer and recursive-descent parser for function and set descriptions.

Grammar (constructor names fix the kind of every argument)::

    expr     := name | name "(" args ")"
    args     := arg ("," arg)*
    arg      := [key "="] value
    rational := ["-"] integer ["/" integer]
    seq      := rational
              | rational "/" "n" ["^" integer]
              | [rational ["*"]] "n" ["^" integer] [("+" | "-") rational]
    set      := "{" interval* "}" ["++" tail]
    interval := ("[" | "(") endpoint "," endpoint ("]" | ")")
    endpoint := rational | "-inf" | "inf"
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

from .syntax import Arg, Call, IntervalLit, NTerm, Node, Num, SetLit, SourceText

Kind = Literal["rational", "integer", "seq", "expr"]

# constructor -> (positional kinds) or keyed (name, kind) pairs in canonical order
POSITIONAL: dict[str, tuple[Kind, ...]] = {
    "affine": ("rational", "rational"),
    "pow_abs": ("rational",),
    "pow_sign": ("rational",),
    "reciprocal": (),
    "sqrt_periodic": (),
    "sqrt_periodic_deriv": (),
    "deriv": ("expr",),
    "scale": ("rational", "expr"),
    "sum": ("expr", "expr"),
}
KEYED: dict[str, tuple[tuple[str, Kind], ...]] = {
    "step_series": (("coef", "seq"), ("left", "seq"), ("width", "seq"), ("from", "integer")),
    "tail": (("left", "seq"), ("width", "seq"), ("from", "integer")),
}
FUNCTIONS = tuple(sorted((set(POSITIONAL) | set(KEYED)) - {"tail"}))

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r\n]+)|(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>\+\+|[-+*/^=,(){}\[\]])"
)


class ParseError(ValueError):
    def __init__(self, line: int, column: int, expected: tuple[str, ...], found: str) -> None:
        self.line = line
        self.column = column
        self.expected = tuple(sorted(expected))
        self.found = found
        super().__init__(
            f"line {line}, column {column}: expected {' or '.join(self.expected)}, found {found}"
        )


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int

    def describe(self) -> str:
        return "end of input" if self.kind == "eof" else repr(self.text)


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        column = pos - line_start + 1
        if m is None:
            raise ParseError(line, column, ("token",), repr(text[pos]))
        kind = m.lastgroup
        if kind == "ws":
            for offset, ch in enumerate(m.group(), start=pos):
                if ch == "\n":
                    line, line_start = line + 1, offset + 1
        else:
            tokens.append(Token(kind, m.group(), line, column))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class Parser:
    def __init__(self, source: SourceText | str) -> None:
        if isinstance(source, str):
            if not source.strip():
                raise ParseError(1, 1, ("expression",), "end of input")
            source = SourceText(source)
        self.source = source
        self.tokens = tokenize(self.source.raw)
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def _peek(self, ahead: int = 1) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def _fail(self, *expected: str) -> ParseError:
        tok = self.current
        return ParseError(tok.line, tok.column, expected, tok.describe())

    def _at(self, text: str) -> bool:
        return self.current.kind in ("op", "name") and self.current.text == text

    def _advance(self) -> Token:
        tok = self.current
        self.pos += 1
        return tok

    def _expect(self, text: str) -> Token:
        if not self._at(text):
            raise self._fail(f"'{text}'")
        return self._advance()

    def expect_end(self) -> None:
        if self.current.kind != "eof":
            raise self._fail("end of input")

    # literals

    def _integer(self) -> int:
        if self.current.kind != "int":
            raise self._fail("integer")
        return int(self._advance().text)

    def rational(self) -> Fraction:
        negative = False
        if self._at("-"):
            self._advance()
            negative = True
        if self.current.kind != "int":
            raise self._fail("rational")
        value = Fraction(int(self._advance().text))
        if self._at("/") and self._peek().kind == "int":
            self._advance()
            denominator = int(self._advance().text)
            if denominator == 0:
                raise self._fail("nonzero denominator")
            value /= denominator
        return -value if negative else value

    def signed_integer(self) -> int:
        start = self.current
        value = self.rational()
        if value.denominator != 1:
            raise ParseError(start.line, start.column, ("integer",), format(value))
        return int(value)

    def _power(self) -> int:
        self._expect("n")
        if self._at("^"):
            self._advance()
            return self._integer()
        return 1

    def seq(self) -> NTerm:
        if self._at("n"):
            return self._polynomial(Fraction(1))
        if not (self._at("-") or self.current.kind == "int"):
            raise self._fail("sequence in n")
        coef = self.rational()
        if self._at("*"):
            self._advance()
            return self._polynomial(coef)
        if self._at("n"):
            return self._polynomial(coef)
        if self._at("/") and self._peek().text == "n":
            self._advance()
            return NTerm(coef, -self._power())
        return NTerm(coef)

    def _polynomial(self, coef: Fraction) -> NTerm:
        power = self._power()
        if self._at("+") or self._at("-"):
            sign = 1 if self._advance().text == "+" else -1
            offset = self.rational()
            if offset < 0:
                raise self._fail("unsigned rational")
            return NTerm(coef, power, sign * offset)
        return NTerm(coef, power)

    # expressions

    def expr(self) -> Call:
        if self.current.kind != "name" or self.current.text not in FUNCTIONS:
            raise self._fail(*FUNCTIONS)
        return self._call(self._advance().text)

    def _value(self, kind: Kind) -> Node:
        if kind == "rational":
            return Num(self.rational())
        if kind == "integer":
            return Num(Fraction(self.signed_integer()))
        if kind == "seq":
            return self.seq()
        return self.expr()

    def _call(self, name: str) -> Call:
        if name in KEYED:
            return Call(name, self._keyed_args(KEYED[name]))
        kinds = POSITIONAL[name]
        if not kinds:
            if self._at("("):
                self._advance()
                self._expect(")")
            return Call(name)
        self._expect("(")
        args = []
        for i, kind in enumerate(kinds):
            if i:
                self._expect(",")
            args.append(Arg(None, self._value(kind)))
        self._expect(")")
        return Call(name, tuple(args))

    def _keyed_args(self, schema: tuple[tuple[str, Kind], ...]) -> tuple[Arg, ...]:
        self._expect("(")
        kinds = dict(schema)
        seen: dict[str, Node] = {}
        while True:
            remaining = [k for k in kinds if k not in seen]
            if self.current.kind != "name" or self.current.text not in remaining:
                raise self._fail(*(f"'{k}'" for k in remaining))
            key = self._advance().text
            self._expect("=")
            seen[key] = self._value(kinds[key])
            if len(seen) == len(kinds):
                break
            self._expect(",")
        self._expect(")")
        return tuple(Arg(key, seen[key]) for key, _ in schema)

    # sets

    def _endpoint(self, infinite: str) -> Fraction | None:
        if infinite == "-inf" and self._at("-") and self._peek().text == "inf":
            self._advance()
            self._advance()
            return None
        if infinite == "inf" and self._at("inf"):
            self._advance()
            return None
        if self._at("-") or self.current.kind == "int":
            return self.rational()
        raise self._fail("rational", f"'{infinite}'")

    def interval(self) -> IntervalLit:
        if not (self._at("[") or self._at("(")):
            raise self._fail("'['", "'('")
        left_closed = self._advance().text == "["
        left = self._endpoint("-inf")
        self._expect(",")
        right = self._endpoint("inf")
        if not (self._at("]") or self._at(")")):
            raise self._fail("']'", "')'")
        right_closed = self._advance().text == "]"
        return IntervalLit(left, right, left_closed, right_closed)

    def set_literal(self) -> SetLit:
        self._expect("{")
        intervals = []
        while not self._at("}"):
            if not (self._at("[") or self._at("(")):
                raise self._fail("'['", "'('", "'}'")
            intervals.append(self.interval())
        self._advance()
        tail = None
        if self._at("++"):
            self._advance()
            self._expect("tail")
            tail = Call("tail", self._keyed_args(KEYED["tail"]))
        return SetLit(tuple(intervals), tail)


def parse_function(text: SourceText | str) -> Call:
    parser = Parser(text)
    tree = parser.expr()
    parser.expect_end()
    return tree


def parse_set(text: SourceText | str) -> SetLit:
    parser = Parser(text)
    tree = parser.set_literal()
    parser.expect_end()
    return tree


def parse_rational(text: SourceText | str) -> Fraction:
    parser = Parser(text)
    value = parser.rational()
    parser.expect_end()
    return value


def split_top_level(text: str) -> list[str]:
    """Split on commas that sit outside every bracket pair."""
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return [p.strip() for p in parts if p.strip()]

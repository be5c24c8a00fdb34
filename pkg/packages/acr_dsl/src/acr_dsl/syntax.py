"""Syntax tree of the description language and its canonical printer.

``to_text`` emits the same canonical form the catalog uses for ``canonical()``, so a
printed tree parses back to an equal tree and a lowered function prints the way the
user would have typed it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import singledispatch

from acr_spaces.numerics import format_rational


@dataclass(frozen=True)
class SourceText:
    raw: str
    origin: str = "<argument>"

    def __post_init__(self) -> None:
        if not self.raw.strip():
            raise ValueError(f"empty source text from {self.origin}")


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class NTerm:
    """coef * n^power + offset; a negative power is written c/n^p."""

    coef: Fraction
    power: int = 0
    offset: Fraction = Fraction(0)


@dataclass(frozen=True)
class Arg:
    key: str | None
    value: Node


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple[Arg, ...] = ()


@dataclass(frozen=True)
class IntervalLit:
    left: Fraction | None
    right: Fraction | None
    left_closed: bool = True
    right_closed: bool = False


@dataclass(frozen=True)
class SetLit:
    intervals: tuple[IntervalLit, ...] = ()
    tail: Call | None = None


Node = Num | NTerm | Call | SetLit


def _signed(value: Fraction) -> str:
    return f"+{format_rational(value)}" if value > 0 else f"-{format_rational(-value)}"


@singledispatch
def to_text(node: object) -> str:
    raise TypeError(f"not a syntax node: {node!r}")


@to_text.register
def _(node: Num) -> str:
    return format_rational(node.value)


@to_text.register
def _(node: NTerm) -> str:
    c = node.coef
    if node.power == 0:
        return format_rational(c)
    if node.power < 0:
        base = "n" if node.power == -1 else f"n^{-node.power}"
        return f"{format_rational(c)}/{base}"
    base = "n" if node.power == 1 else f"n^{node.power}"
    if c == 1:
        text = base
    elif c.denominator == 1:
        text = f"{c.numerator}{base}"
    else:
        text = f"{format_rational(c)}*{base}"
    return text + (_signed(node.offset) if node.offset else "")


@to_text.register
def _(node: Call) -> str:
    if not node.args:
        return node.name
    parts = [
        to_text(a.value) if a.key is None else f"{a.key}={to_text(a.value)}" for a in node.args
    ]
    return f"{node.name}({', '.join(parts)})"


@to_text.register
def _(node: IntervalLit) -> str:
    left = "-inf" if node.left is None else format_rational(node.left)
    right = "inf" if node.right is None else format_rational(node.right)
    return f"{'[' if node.left_closed else '('}{left},{right}{']' if node.right_closed else ')'}"


@to_text.register
def _(node: SetLit) -> str:
    text = "{" + " ".join(to_text(iv) for iv in node.intervals) + "}"
    if node.tail is not None:
        text += f" ++ {to_text(node.tail)}"
    return text

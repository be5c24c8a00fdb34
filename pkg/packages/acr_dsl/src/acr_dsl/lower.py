from __future__ import annotations

from fractions import Fraction

from acr_spaces.catalog import (
    Affine,
    FunctionSpec,
    Reciprocal,
    SqrtPeriodic,
    SqrtPeriodicDeriv,
    StepCoefficient,
    StepSeries,
    add,
    power,
    scale,
)
from acr_spaces.errors import InvalidParameterError
from acr_spaces.numerics import SeqTerm
from acr_spaces.sets import Interval, IntervalFamily, LeftMap, TailDescriptor

from .parser import parse_function, parse_set
from .syntax import Call, NTerm, Num, SetLit, SourceText, to_text

PRESETS: dict[str, str] = {
    "f1": "affine(1, 0)",
    "f2": "step_series(coef=n, left=n, width=1/n^2, from=1)",
    "f3": "reciprocal",
    "sqrt_periodic": "sqrt_periodic",
    "sqrt_periodic_deriv": "deriv(sqrt_periodic)",
    "sqrt_abs": "pow_abs(1/2)",
}


def _args(node: Call) -> list[object]:
    return [a.value for a in node.args]


def _num(node: object) -> Fraction:
    assert isinstance(node, Num)
    return node.value


def _coefficient(term: NTerm) -> StepCoefficient:
    if term.offset:
        raise InvalidParameterError(f"step heights take no offset: {to_text(term)}")
    return StepCoefficient(term.coef, term.power)


def _left_map(term: NTerm) -> LeftMap:
    if term.power not in (1, 2) or term.coef.denominator != 1:
        raise InvalidParameterError(
            f"left endpoints must be a*n + b or a*n^2 + b with integer a > 0: {to_text(term)}"
        )
    return LeftMap(int(term.coef), term.offset, quadratic=term.power == 2)


def _width(term: NTerm) -> SeqTerm:
    if term.power > 0 or term.offset:
        raise InvalidParameterError(f"widths must be c or c/n^p: {to_text(term)}")
    return SeqTerm(term.coef, -term.power)


def _tail(node: Call) -> TailDescriptor:
    *rest, start = _args(node)
    left, width = rest[-2], rest[-1]
    return TailDescriptor(int(_num(start)), _left_map(left), _width(width))


def lower_function(node: Call) -> FunctionSpec:
    args = _args(node)
    match node.name:
        case "affine":
            return Affine(_num(args[0]), _num(args[1]))
        case "pow_abs":
            return power(_num(args[0]))
        case "pow_sign":
            return power(_num(args[0]), odd=True)
        case "reciprocal":
            return Reciprocal()
        case "sqrt_periodic":
            return SqrtPeriodic()
        case "sqrt_periodic_deriv":
            return SqrtPeriodicDeriv()
        case "deriv":
            return lower_function(args[0]).derivative()
        case "scale":
            return scale(_num(args[0]), lower_function(args[1]))
        case "sum":
            return add(lower_function(args[0]), lower_function(args[1]))
        case "step_series":
            return StepSeries(_coefficient(args[0]), _tail(node))
    raise InvalidParameterError(f"unknown constructor {node.name}")


def lower_set(node: SetLit) -> IntervalFamily:
    head = tuple(
        Interval(iv.left, iv.right, iv.left_closed, iv.right_closed) for iv in node.intervals
    )
    tail = None if node.tail is None else _tail(node.tail)
    return IntervalFamily(head, tail)


def function_from_text(text: SourceText | str) -> FunctionSpec:
    """Parse and lower; bare preset names (f1, f2, ...) are expanded first."""
    raw = text.raw if isinstance(text, SourceText) else text
    preset = PRESETS.get(raw.strip())
    if preset is not None:
        return lower_function(parse_function(preset))
    return lower_function(parse_function(text))


def set_from_text(text: SourceText | str) -> IntervalFamily:
    return lower_set(parse_set(text))

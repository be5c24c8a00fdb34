"""JSON report trees.

Every value is converted to plain JSON types before dumping: rationals become
``{"exact": "p/q", "approx": float}``, enclosures keep both rational endpoints, set and
sequence objects use their canonical text, and function specs their ``canonical()``
form. Keys are sorted so identical runs give byte-identical output.
"""

from __future__ import annotations

import dataclasses
import json
from enum import Enum
from fractions import Fraction
from functools import singledispatch
from pathlib import Path
from typing import Any

import structlog

from acr_spaces.catalog import StepCoefficient
from acr_spaces.numerics import Enclosure, Finite, ProvenInfinite, SeqTerm, UnknownValue, format_rational
from acr_spaces.sets import Interval, IntervalFamily, LeftMap, TailDescriptor
from acr_spaces.settings import AnalysisSettings
from acr_spaces.verify import VerificationReport

from . import __version__

log = structlog.get_logger("acr.report")

TOOL = "acr"
FORMAT_VERSION = 1


@singledispatch
def encode(value: object) -> Any:
    canonical = getattr(value, "canonical", None)
    if callable(canonical):
        return canonical()
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        tree = {f.name: encode(getattr(value, f.name)) for f in dataclasses.fields(value)}
        tree["kind"] = type(value).__name__
        return tree
    raise TypeError(f"cannot encode {type(value).__name__}")


@encode.register(type(None))
@encode.register(bool)
def _(value: object) -> Any:
    return value


@encode.register
def _(value: str) -> Any:
    return str(value)


@encode.register
def _(value: int) -> Any:
    return value


@encode.register
def _(value: Fraction) -> Any:
    return {"exact": format_rational(value), "approx": float(value)}


@encode.register
def _(value: Enum) -> Any:
    return value.value


@encode.register(tuple)
@encode.register(list)
def _(value: tuple | list) -> Any:
    return [encode(v) for v in value]


@encode.register
def _(value: dict) -> Any:
    return {str(k): encode(v) for k, v in value.items()}


@encode.register
def _(value: Enclosure) -> Any:
    return {"lo": encode(value.lo), "hi": encode(value.hi), "exact": value.exact}


@encode.register(Interval)
@encode.register(IntervalFamily)
@encode.register(TailDescriptor)
@encode.register(LeftMap)
@encode.register(SeqTerm)
@encode.register(StepCoefficient)
def _(value: object) -> Any:
    return str(value)


@encode.register
def _(value: Finite) -> Any:
    return {"kind": "Finite", "enclosure": encode(value.enclosure)}


@encode.register
def _(value: ProvenInfinite) -> Any:
    return {"kind": "ProvenInfinite", "certificate": encode(value.certificate)}


@encode.register
def _(value: UnknownValue) -> Any:
    return {"kind": "Unknown", "reason": value.reason}


@encode.register
def _(value: VerificationReport) -> Any:
    return {
        "subject": value.subject,
        "passed": value.passed,
        "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in value.checks],
    }


def build_report(command: str, settings: AnalysisSettings, results: object, **parameters: object) -> dict:
    return {
        "tool": {"name": TOOL, "version": __version__, "format": FORMAT_VERSION},
        "command": command,
        "settings": encode(settings),
        "parameters": encode(parameters),
        "results": encode(results),
    }


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_report(report: dict, out_path: str | Path) -> Path:
    out = Path(out_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(dumps(report), encoding="utf-8", newline="\n")
    log.info("report.written", path=str(out), command=report["command"])
    return out

from __future__ import annotations

import json
from fractions import Fraction

import pytest

from acr_dsl import __version__
from acr_dsl.report import build_report, dumps, encode, write_report
from acr_spaces.catalog import Reciprocal
from acr_spaces.classifier import classify
from acr_spaces.numerics import Enclosure, UnknownValue
from acr_spaces.settings import AnalysisSettings
from acr_spaces.witnesses import ac_failure_intervals

QUICK = AnalysisSettings(depth=30, series_truncation=50, k_max=16)


def test_scalars():
    assert encode(Fraction(3, 4)) == {"exact": "3/4", "approx": 0.75}
    assert encode(Enclosure.point(2)) == {
        "lo": {"exact": "2", "approx": 2.0},
        "hi": {"exact": "2", "approx": 2.0},
        "exact": True,
    }
    assert encode(UnknownValue("no bound")) == {"kind": "Unknown", "reason": "no bound"}
    with pytest.raises(TypeError):
        encode(object())


def test_classify_report():
    report = build_report("classify", QUICK, [classify(Reciprocal(), settings=QUICK)])
    assert report["tool"] == {"name": "acr", "version": __version__, "format": 1}
    assert report["settings"]["depth"] == 30
    (placement,) = report["results"]
    assert placement["function"] == "reciprocal"
    l1h = next(v for v in placement["verdicts"] if v["space"] == "L1H")
    assert l1h["status"] == "In"
    assert l1h["certificate"]["kind"] == "ThresholdCert"
    assert l1h["certificate"]["level"]["exact"] == "1"
    assert json.loads(dumps(report)) == report


def test_reports_are_byte_identical():
    first = dumps(build_report("classify", QUICK, [classify(Reciprocal(), settings=QUICK)]))
    second = dumps(build_report("classify", QUICK, [classify(Reciprocal(), settings=QUICK)]))
    assert first == second


def test_witness_report(tmp_path):
    witness = ac_failure_intervals(Fraction(1, 4), 2)
    report = build_report("witness ac-failure", QUICK, witness, delta=Fraction(1, 4), count=2)
    assert report["parameters"]["delta"]["exact"] == "1/4"
    assert report["results"]["pairs"][0] == [
        {"exact": "2", "approx": 2.0},
        {"exact": "9/4", "approx": 2.25},
    ]
    out = write_report(report, tmp_path / "nested" / "witness.json")
    assert out.read_text(encoding="utf-8") == dumps(report)

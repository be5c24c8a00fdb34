from __future__ import annotations

from fractions import Fraction

import pandas as pd
import pytest

from acr_dsl.lower import set_from_text
from acr_dsl.plot import COLUMNS, emit_plot, write_csv, write_membership_svg, write_svg
from acr_spaces.catalog import Affine, Reciprocal, SqrtPeriodic
from acr_spaces.classifier import AttributeCert, SpaceId, Status, VennPlacement, Verdict
from acr_spaces.errors import InvalidParameterError


def test_identity_endpoints():
    table = emit_plot(Affine(1, 0), 0, 1, 2)
    assert list(table.columns) == COLUMNS
    assert table["x"].tolist() == [0.0, 1.0]
    assert table["y"].tolist() == [0.0, 1.0]


def test_undefined_points_are_skipped():
    table = emit_plot(Reciprocal(), -1, 1, 5)
    assert table["x_exact"].tolist() == ["-1", "-1/2", "1/2", "1"]
    assert table["y_exact"].tolist() == ["-1", "-2", "2", "1"]


def test_figure_with_marks():
    f = SqrtPeriodic()
    marks = set_from_text("{[0,1] [2,9/4] [4,37/9]}")
    table = emit_plot(f, -1, 6, 701, marks)
    curve = table[table["band"] == "curve"]
    band = table[table["band"] == "mark"]
    assert len(curve) == 701
    assert band["x_end"].tolist() == pytest.approx([1.0, 2.25, 37 / 9])
    assert (band["y"] == 0).all()
    for x, y in zip(curve["x_exact"][::25], curve["y_exact"][::25], strict=True):
        assert f.evaluate(Fraction(x)).contains(Fraction(y))


def test_tail_marks_stop_at_the_range():
    marks = set_from_text("{} ++ tail(left=2n, width=1/n^2, from=1)")
    table = emit_plot(SqrtPeriodic(), 0, 7, 8, marks)
    assert table[table["band"] == "mark"]["x_exact"].tolist() == ["2", "4", "6"]


@pytest.mark.parametrize(("lo", "hi", "samples"), [(1, 1, 5), (2, 1, 5), (0, 1, 1)])
def test_rejects_bad_ranges(lo, hi, samples):
    with pytest.raises(InvalidParameterError):
        emit_plot(Affine(1, 0), lo, hi, samples)


def test_csv_and_svg(tmp_path):
    table = emit_plot(SqrtPeriodic(), -1, 3, 41, set_from_text("{[0,1]}"))
    out = write_csv(table, tmp_path / "plot.csv")
    back = pd.read_csv(out)
    assert list(back.columns) == COLUMNS
    assert len(back) == 42

    first = write_svg(table, tmp_path / "a.svg", title="sqrt_periodic").read_bytes()
    second = write_svg(table, tmp_path / "b.svg", title="sqrt_periodic").read_bytes()
    assert first == second
    assert b"<svg" in first


def test_membership_chart(tmp_path):
    verdicts = tuple(Verdict(space, Status.IN, AttributeCert("given")) for space in SpaceId)
    out = write_membership_svg([VennPlacement("affine(0, 1)", verdicts)], tmp_path / "venn.svg")
    assert b"affine(0, 1)" in out.read_bytes()

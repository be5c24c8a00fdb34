from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from acr_dsl.parser import (
    FUNCTIONS,
    ParseError,
    parse_function,
    parse_rational,
    parse_set,
    split_top_level,
    tokenize,
)
from acr_dsl.syntax import Arg, Call, IntervalLit, NTerm, Num, SetLit, SourceText, to_text


def test_affine():
    assert parse_function("affine(1, 0)") == Call(
        "affine", (Arg(None, Num(Fraction(1))), Arg(None, Num(Fraction(0))))
    )


def test_step_series_keys_in_any_order():
    canonical = parse_function("step_series(coef=n, left=n, width=1/n^2, from=1)")
    shuffled = parse_function("step_series(from=1, width=1/n^2, coef=n, left=n)")
    assert canonical == shuffled
    assert [a.key for a in canonical.args] == ["coef", "left", "width", "from"]
    assert canonical.args[2].value == NTerm(Fraction(1), -2)


def test_nested_and_bare_names():
    tree = parse_function("deriv(sqrt_periodic)")
    assert tree == Call("deriv", (Arg(None, Call("sqrt_periodic")),))
    assert parse_function("reciprocal()") == Call("reciprocal")


@pytest.mark.parametrize(
    ("text", "term"),
    [
        ("2n+1/4", NTerm(Fraction(2), 1, Fraction(1, 4))),
        ("2n-1/4", NTerm(Fraction(2), 1, Fraction(-1, 4))),
        ("n^2", NTerm(Fraction(1), 2)),
        ("1/2*n^2", NTerm(Fraction(1, 2), 2)),
        ("3/n", NTerm(Fraction(3), -1)),
        ("1/4", NTerm(Fraction(1, 4))),
    ],
)
def test_sequence_terms(text, term):
    tree = parse_function(f"step_series(coef=1, left={text}, width=1, from=1)")
    assert tree.args[1].value == term
    assert to_text(term) == text


def test_missing_argument_points_at_end():
    with pytest.raises(ParseError) as info:
        parse_function("affine(1,")
    assert (info.value.line, info.value.column) == (1, 10)
    assert info.value.expected == ("rational",)
    assert info.value.found == "end of input"


def test_unknown_constructor_lists_names():
    with pytest.raises(ParseError) as info:
        parse_function("cosine(1)")
    assert info.value.expected == tuple(sorted(FUNCTIONS))
    assert info.value.column == 1


def test_errors_track_lines():
    with pytest.raises(ParseError) as info:
        parse_function("sum(\n  affine(1, 0),\n  affine(1 0))")
    assert (info.value.line, info.value.column) == (3, 12)
    assert info.value.expected == ("','",)


def test_bad_key_lists_remaining():
    with pytest.raises(ParseError) as info:
        parse_function("step_series(coef=n, slope=n)")
    assert info.value.expected == ("'from'", "'left'", "'width'")


@pytest.mark.parametrize("text", ["", "   ", "affine(1/0, 1)", "affine(1, 0) x", "affine(1, 0]", "pow_abs(#)"])
def test_rejects(text):
    with pytest.raises(ParseError):
        parse_function(text)


def test_source_text_must_be_nonempty():
    with pytest.raises(ValueError):
        SourceText("  \n")
    assert parse_function(SourceText("reciprocal", origin="funcs.txt")) == Call("reciprocal")


def test_tokenize_positions():
    tokens = tokenize("{[0,1)} ++ tail")
    assert [t.text for t in tokens] == ["{", "[", "0", ",", "1", ")", "}", "++", "tail", ""]
    assert tokens[-1].kind == "eof"
    assert tokens[-1].column == 16


def test_set_literal():
    tree = parse_set("{(-inf,-3] [0,1)} ++ tail(left=2n, width=1/n^2, from=1)")
    assert tree.intervals == (
        IntervalLit(None, Fraction(-3), False, True),
        IntervalLit(Fraction(0), Fraction(1), True, False),
    )
    assert tree.tail.name == "tail"
    assert to_text(tree) == "{(-inf,-3] [0,1)} ++ tail(left=2n, width=1/n^2, from=1)"
    assert parse_set("{}") == SetLit()


def test_rational_and_lists():
    assert parse_rational("-3/4") == Fraction(-3, 4)
    with pytest.raises(ParseError):
        parse_rational("3/")
    assert split_top_level("f1, sum(affine(1, 0), reciprocal),f3") == [
        "f1",
        "sum(affine(1, 0), reciprocal)",
        "f3",
    ]


rationals = st.fractions(min_value=-50, max_value=50, max_denominator=12)
positive = st.fractions(min_value=Fraction(1, 12), max_value=50, max_denominator=12)
nums = rationals.map(lambda r: Arg(None, Num(r)))


def _call(name, *args):
    return Call(name, tuple(args))


leaves = st.one_of(
    st.builds(lambda a, b: _call("affine", a, b), nums, nums),
    st.builds(lambda e: _call("pow_abs", e), nums),
    st.builds(lambda e: _call("pow_sign", e), nums),
    st.sampled_from([Call("reciprocal"), Call("sqrt_periodic"), Call("sqrt_periodic_deriv")]),
    st.builds(
        lambda c, k, a, b, p, n: Call(
            "step_series",
            (
                Arg("coef", NTerm(c, k)),
                Arg("left", NTerm(Fraction(a), 1, b)),
                Arg("width", NTerm(Fraction(1), -p)),
                Arg("from", Num(Fraction(n))),
            ),
        ),
        positive,
        st.integers(-3, 3),
        st.integers(1, 4),
        rationals,
        st.integers(0, 3),
        st.integers(1, 9),
    ),
)
expressions = st.recursive(
    leaves,
    lambda inner: st.one_of(
        st.builds(lambda e: _call("deriv", Arg(None, e)), inner),
        st.builds(lambda r, e: _call("scale", r, Arg(None, e)), nums, inner),
        st.builds(lambda a, b: _call("sum", Arg(None, a), Arg(None, b)), inner, inner),
    ),
    max_leaves=6,
)


@given(expressions)
def test_printed_trees_parse_back(tree):
    assert parse_function(to_text(tree)) == tree

"""Canonical JSON encoding of exact values."""

from __future__ import annotations

import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from symsos.hypercube import MultiPoly, SymProfile
from symsos.polycore import UniPoly
from symsos.serialize import emit_report, jsonable, load, multi, rat, uni, unmulti, unrat, ununi


def test_rational_and_polynomial_forms():
    assert rat(Fraction(1, 2)) == {"num": "1", "den": "2"}
    assert uni(UniPoly((-1, 0, 1))) == [
        {"num": "-1", "den": "1"},
        {"num": "0", "den": "1"},
        {"num": "1", "den": "1"},
    ]
    assert emit_report({"x": Fraction(1, 2)}) == b'{"x":{"den":"2","num":"1"}}\n'


@given(st.fractions())
def test_rational_round_trip(x):
    assert unrat(load(emit_report(rat(x)))) == x


@given(st.lists(st.fractions(max_denominator=10**6), max_size=8))
def test_unipoly_round_trip(cs):
    p = UniPoly(cs)
    assert ununi(load(emit_report(uni(p)))) == p


@given(st.integers(1, 4), st.dictionaries(st.tuples(*[st.integers(0, 2)] * 4), st.fractions(max_denominator=50)))
def test_multipoly_round_trip(n, terms):
    p = MultiPoly(n, {e[:n]: c for e, c in terms.items()})
    assert unmulti(load(emit_report(multi(p)))) == p


def test_floats_only_in_display_fields():
    with pytest.raises(TypeError):
        jsonable({"ratio": 0.5})
    assert jsonable({"display_ratio": 0.5}) == {"display_ratio": 0.5}
    assert jsonable({"display": {"x": 0.25}}) == {"display": {"x": 0.25}}


def test_output_is_canonical():
    a = emit_report({"b": 1, "a": [Fraction(2, 3), SymProfile(1, (0, 1))], "c": frozenset({3, 1})})
    b = emit_report({"c": frozenset({1, 3}), "a": [Fraction(2, 3), SymProfile(1, (0, 1))], "b": 1})
    assert a == b
    assert json.loads(a)["c"] == [1, 3]


def test_bad_rational_rejected():
    with pytest.raises(ValueError):
        unrat({"num": "1", "den": "0"})
    with pytest.raises(ValueError):
        unrat("1/2")

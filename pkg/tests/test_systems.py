import json
from fractions import Fraction

import pytest
from conftest import FIXTURES

from coalgebraic_hm.quantale import INTERVAL
from coalgebraic_hm.systems import (
    Dist,
    Fuzzy,
    Lts,
    SchemaError,
    Subset,
    dumps_system,
    format_element,
    load_system,
    parse_element,
    parse_system,
    serialize_system,
    unit_element,
)

F = Fraction


def doc(**kw):
    return json.dumps(kw)


def test_lts_parse_and_round_trip():
    text = doc(
        type="lts",
        states=["0", "1", "2"],
        alphabet=["a", "b"],
        transitions=[
            {"from": "0", "label": "a", "to": "1"},
            {"from": "0", "label": "a", "to": "2"},
            {"from": "0", "label": "a", "to": "2"},
            {"from": "1", "label": "b", "to": "1"},
        ],
    )
    lts = parse_system(text)
    assert isinstance(lts, Lts)
    assert lts.succ[0][0] == frozenset({1, 2})
    assert lts.succ[1][1] == frozenset({1})
    assert parse_system(dumps_system(lts)) == lts


@pytest.mark.parametrize("path", sorted(FIXTURES.glob("*.json")), ids=lambda p: p.name)
def test_fixture_round_trip(path):
    system = load_system(path)
    again = parse_system(dumps_system(system))
    assert again == system
    assert serialize_system(again) == serialize_system(system)


def test_unnormalized_distribution_rejected():
    text = doc(
        type="prob-automaton",
        states=["s"],
        alphabet=["a"],
        transitions=[{"from": "s", "label": "a", "dist": {"s": "99/100"}}],
    )
    with pytest.raises(SchemaError, match="transitions\\[0\\]"):
        parse_system(text)


def test_decimal_literals_are_exact():
    text = '{"type": "prob-automaton", "states": ["s", "t"], "alphabet": ["a"], "transitions": [' \
        '{"from": "s", "label": "a", "dist": {"s": 0.1, "t": "0.9"}},' \
        '{"from": "t", "label": "a", "dist": {"t": "1"}}], "payoffs": {"s": 0.3}}'
    pa = parse_system(text)
    assert pa.trans[0][0] == Dist.of({0: F(1, 10), 1: F(9, 10)})
    assert pa.payoff[0] == F(3, 10)


@pytest.mark.parametrize(
    "bad, message",
    [
        ({"type": "lts", "states": ["s"], "alphabet": ["a"], "transitions": [{"from": "s", "label": "b", "to": "s"}]}, "label"),
        ({"type": "lts", "states": ["s"], "alphabet": [], "transitions": [{"from": "s", "label": "a", "to": "x"}]}, "label"),
        ({"type": "unlabelled", "states": ["s"], "transitions": [{"from": "s", "to": "x"}]}, "state"),
        ({"type": "prob-automaton", "states": ["s"], "alphabet": ["a"], "transitions": [
            {"from": "s", "label": "a", "dist": {"s": "1"}}], "payoffs": {"s": "3/2"}}, "payoff"),
        ({"type": "prob-automaton", "states": ["s"], "alphabet": ["a"], "transitions": []}, "missing"),
        ({"type": "prob-automaton", "states": ["s"], "alphabet": ["a"], "transitions": [
            {"from": "s", "label": "a", "dist": {"s": "1"}},
            {"from": "s", "label": "a", "dist": {"s": "1"}}]}, "duplicate"),
        ({"type": "markov-term", "states": ["s"], "transitions": []}, "neither"),
        ({"type": "fuzzy-lts", "states": ["s"], "alphabet": ["a"], "transitions": [
            {"from": "s", "label": "a", "to": "s", "weight": "2"}]}, "transitions\\[0\\]"),
        ({"type": "nope", "states": []}, "unknown system type"),
        ({"type": "lts", "states": ["s", "s"]}, "duplicate"),
    ],
)
def test_schema_errors_have_locations(bad, message):
    with pytest.raises(SchemaError, match=message):
        parse_system(bad)


def test_degenerate_system():
    lts = parse_system({"type": "lts", "states": ["only"], "alphabet": [], "transitions": []})
    assert lts.n == 1 and lts.alphabet == ()


def test_unit_elements(load):
    lts, pa, fz = load("lts.json"), load("pa.json"), load("fuzzy.json")
    assert unit_element(lts, 0) == Subset(frozenset({0}))
    assert unit_element(pa, 1) == Dist.of({1: F(1)})
    assert unit_element(fz, 0) == Fuzzy((INTERVAL.unit,) + (INTERVAL.bottom,) * 3)
    with pytest.raises(SchemaError):
        unit_element(lts, 9)


def test_element_syntax(load):
    lts, pa, fz = load("lts.json"), load("pa.json"), load("fuzzy.json")
    assert parse_element(lts, "{q0,q2}") == Subset(frozenset({0, 2}))
    assert parse_element(lts, "{}") == Subset(frozenset())
    assert parse_element(pa, "{s0:1/2,s1:1/2}") == Dist.of({0: F(1, 2), 1: F(1, 2)})
    assert parse_element(pa, "s1") == unit_element(pa, 1)
    assert parse_element(fz, "{x1:3/4}").values == (F(1), F(3, 4), F(1), F(1))
    for system, text in [(lts, "{q0,q2}"), (pa, "{s0:1/4,s1:3/4}"), (fz, "{x0:1/3,x2:0}")]:
        t = parse_element(system, text)
        assert parse_element(system, format_element(system, t)) == t
    with pytest.raises(SchemaError):
        parse_element(pa, "{s0:1/2}")
    with pytest.raises(SchemaError):
        parse_element(lts, "{nowhere}")

"""Finite coalgebras for the five supported system types, plus monad elements.

States are dense indices ``0..n-1``; the ``states`` tuple is the name table.
Transition data is stored per state and per label index so lookups are
plain tuple indexing.
"""

from __future__ import annotations

import json
import re
from decimal import Decimal
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .quantale import BOOL, INTERVAL, QUANTALES, Quantale, QuantaleError, parse_rational


class SchemaError(ValueError):
    """Schema or invariant violation in a system document."""


# -- monad elements ---------------------------------------------------------


@dataclass(frozen=True)
class Subset:
    members: frozenset

    def __repr__(self):
        return "{" + ",".join(map(str, sorted(self.members))) + "}"


@dataclass(frozen=True)
class Dist:
    """Finitely supported distribution; ``weights`` is sorted with no zeros."""

    weights: tuple

    @classmethod
    def of(cls, mapping) -> "Dist":
        items = []
        for x, w in mapping.items() if hasattr(mapping, "items") else mapping:
            w = Fraction(w)
            if w < 0:
                raise SchemaError(f"negative weight {w} on state {x}")
            if w:
                items.append((x, w))
        items.sort()
        for (a, _), (b, _) in zip(items, items[1:]):
            if a == b:
                raise SchemaError(f"duplicate support point {a}")
        d = cls(tuple(items))
        if d.mass() != 1:
            raise SchemaError(f"distribution weights sum to {d.mass()}, not 1")
        return d

    def mass(self) -> Fraction:
        return sum((w for _, w in self.weights), Fraction(0))

    def as_dict(self) -> dict:
        return dict(self.weights)

    def __repr__(self):
        return "{" + ",".join(f"{x}:{w}" for x, w in self.weights) + "}"


@dataclass(frozen=True)
class Fuzzy:
    """A fuzzy subset: one quantale value per state."""

    values: tuple

    def __repr__(self):
        return "{" + ",".join(str(v) for v in self.values) + "}"


MonadElement = Union[Subset, Dist, Fuzzy]


# -- systems ------------------------------------------------------------------


@dataclass(frozen=True)
class UnlabelledTs:
    states: tuple
    succ: tuple  # succ[x] -> frozenset

    monad = "none"

    @property
    def n(self):
        return len(self.states)


@dataclass(frozen=True)
class Lts:
    states: tuple
    alphabet: tuple
    succ: tuple  # succ[x][a] -> frozenset

    monad = "powerset"

    @property
    def n(self):
        return len(self.states)


@dataclass(frozen=True)
class ProbAutomaton:
    states: tuple
    alphabet: tuple
    trans: tuple  # trans[x][a] -> Dist
    payoff: tuple  # payoff[x] -> Fraction in [0, 1]

    monad = "distribution"

    @property
    def n(self):
        return len(self.states)


@dataclass(frozen=True)
class FuzzyLts:
    states: tuple
    alphabet: tuple
    weight: tuple  # weight[x][a] -> tuple of quantale values over targets
    quantale: Quantale = INTERVAL

    monad = "fuzzy"

    @property
    def n(self):
        return len(self.states)


@dataclass(frozen=True)
class MarkovTerm:
    states: tuple
    step: tuple  # step[x] -> Dist, or None for the terminal mark

    monad = "none"

    @property
    def n(self):
        return len(self.states)


System = Union[UnlabelledTs, Lts, ProbAutomaton, FuzzyLts, MarkovTerm]

TYPE_NAMES = {
    UnlabelledTs: "unlabelled",
    Lts: "lts",
    ProbAutomaton: "prob-automaton",
    FuzzyLts: "fuzzy-lts",
    MarkovTerm: "markov-term",
}


def unit_element(system, x: int) -> MonadElement:
    """The monad unit at state ``x`` for the system's monad."""
    if not 0 <= x < system.n:
        raise SchemaError(f"state {x} out of range")
    if isinstance(system, Lts):
        return Subset(frozenset((x,)))
    if isinstance(system, ProbAutomaton):
        return Dist(((x, Fraction(1)),))
    if isinstance(system, FuzzyLts):
        q = system.quantale
        return Fuzzy(tuple(q.unit if y == x else q.bottom for y in range(system.n)))
    raise SchemaError(f"{TYPE_NAMES[type(system)]} systems have no determinization monad")


def check_element(system, t) -> MonadElement:
    """Raise unless ``t`` is a valid element of the system's monad on its states."""
    n = system.n
    if isinstance(system, Lts):
        if not isinstance(t, Subset) or any(not 0 <= x < n for x in t.members):
            raise SchemaError(f"{t!r} is not a subset of the states")
    elif isinstance(system, ProbAutomaton):
        if not isinstance(t, Dist) or any(not 0 <= x < n for x, _ in t.weights):
            raise SchemaError(f"{t!r} is not a distribution over the states")
        if t.mass() != 1:
            raise SchemaError(f"{t!r} is not normalized")
    elif isinstance(system, FuzzyLts):
        if not isinstance(t, Fuzzy) or len(t.values) != n:
            raise SchemaError(f"{t!r} is not a fuzzy subset of the states")
        for v in t.values:
            system.quantale.check(v)
    else:
        raise SchemaError(f"{TYPE_NAMES[type(system)]} systems have no determinization monad")
    return t


# -- parsing ------------------------------------------------------------------


def _index(names, kind):
    table = {}
    for i, s in enumerate(names):
        if not isinstance(s, str):
            raise SchemaError(f"{kind} names must be strings, got {s!r}")
        if s in table:
            raise SchemaError(f"duplicate {kind} {s!r}")
        table[s] = i
    return table


def _lookup(table, name, kind, where):
    try:
        return table[name]
    except (KeyError, TypeError):
        raise SchemaError(f"{where}: unknown {kind} {name!r}") from None


def _rational(text, where) -> Fraction:
    try:
        return parse_rational(text)
    except QuantaleError as exc:
        raise SchemaError(f"{where}: {exc}") from None


def _dist(doc, st, where) -> Dist:
    if not isinstance(doc, dict):
        raise SchemaError(f"{where}: 'dist' must be an object")
    weights = {}
    for name, w in doc.items():
        weights[_lookup(st, name, "state", where)] = _rational(w, where)
    try:
        return Dist.of(weights)
    except SchemaError as exc:
        raise SchemaError(f"{where}: {exc}") from None


def parse_system(document) -> System:
    """Build a validated system from a JSON string or an already-decoded dict."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document, parse_float=Decimal)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from None
    if not isinstance(document, dict):
        raise SchemaError("system document must be a JSON object")
    kind = document.get("type")
    states = document.get("states")
    if not isinstance(states, list):
        raise SchemaError("'states' must be a list of names")
    st = _index(states, "state")
    states = tuple(states)
    n = len(states)
    transitions = document.get("transitions", [])
    if not isinstance(transitions, list):
        raise SchemaError("'transitions' must be a list")
    for k, tr in enumerate(transitions):
        if not isinstance(tr, dict):
            raise SchemaError(f"transitions[{k}]: must be an object")

    def label_table():
        alphabet = document.get("alphabet", [])
        if not isinstance(alphabet, list):
            raise SchemaError("'alphabet' must be a list")
        return tuple(alphabet), _index(alphabet, "label")

    if kind == "unlabelled":
        succ = [set() for _ in range(n)]
        for k, tr in enumerate(transitions):
            where = f"transitions[{k}]"
            succ[_lookup(st, tr.get("from"), "state", where)].add(
                _lookup(st, tr.get("to"), "state", where)
            )
        return UnlabelledTs(states, tuple(frozenset(s) for s in succ))

    if kind == "lts":
        alphabet, lt = label_table()
        succ = [[set() for _ in alphabet] for _ in range(n)]
        for k, tr in enumerate(transitions):
            where = f"transitions[{k}]"
            x = _lookup(st, tr.get("from"), "state", where)
            a = _lookup(lt, tr.get("label"), "label", where)
            succ[x][a].add(_lookup(st, tr.get("to"), "state", where))
        return Lts(
            states, alphabet, tuple(tuple(frozenset(s) for s in row) for row in succ)
        )

    if kind == "prob-automaton":
        alphabet, lt = label_table()
        trans = [[None] * len(alphabet) for _ in range(n)]
        for k, tr in enumerate(transitions):
            where = f"transitions[{k}]"
            x = _lookup(st, tr.get("from"), "state", where)
            a = _lookup(lt, tr.get("label"), "label", where)
            if trans[x][a] is not None:
                raise SchemaError(f"{where}: duplicate distribution for ({states[x]}, {alphabet[a]})")
            trans[x][a] = _dist(tr.get("dist"), st, where)
        for x in range(n):
            for a in range(len(alphabet)):
                if trans[x][a] is None:
                    raise SchemaError(f"missing distribution for ({states[x]}, {alphabet[a]})")
        payoffs = document.get("payoffs", {})
        if not isinstance(payoffs, dict):
            raise SchemaError("'payoffs' must be an object")
        payoff = [Fraction(0)] * n
        for name, v in payoffs.items():
            x = _lookup(st, name, "state", "payoffs")
            p = _rational(v, f"payoffs[{name}]")
            if not 0 <= p <= 1:
                raise SchemaError(f"payoffs[{name}]: payoff {p} outside [0, 1]")
            payoff[x] = p
        return ProbAutomaton(states, alphabet, tuple(tuple(r) for r in trans), tuple(payoff))

    if kind == "fuzzy-lts":
        alphabet, lt = label_table()
        qname = document.get("quantale", "interval")
        if qname not in QUANTALES:
            raise SchemaError(f"unknown quantale {qname!r}")
        q = QUANTALES[qname]
        w = [[[q.bottom] * n for _ in alphabet] for _ in range(n)]
        for k, tr in enumerate(transitions):
            where = f"transitions[{k}]"
            x = _lookup(st, tr.get("from"), "state", where)
            a = _lookup(lt, tr.get("label"), "label", where)
            y = _lookup(st, tr.get("to"), "state", where)
            raw = tr.get("weight")
            try:
                v = q.unit if raw is None else q.parse(raw)
            except QuantaleError as exc:
                raise SchemaError(f"{where}: {exc}") from None
            w[x][a][y] = q.join(w[x][a][y], v)
        return FuzzyLts(
            states, alphabet, tuple(tuple(tuple(r) for r in row) for row in w), q
        )

    if kind == "markov-term":
        terminal = document.get("terminal", [])
        if not isinstance(terminal, list):
            raise SchemaError("'terminal' must be a list of state names")
        step = [None] * n
        done = {_lookup(st, s, "state", "terminal") for s in terminal}
        for k, tr in enumerate(transitions):
            where = f"transitions[{k}]"
            x = _lookup(st, tr.get("from"), "state", where)
            if x in done:
                raise SchemaError(f"{where}: terminal state {states[x]} cannot step")
            if step[x] is not None:
                raise SchemaError(f"{where}: duplicate distribution for {states[x]}")
            step[x] = _dist(tr.get("dist"), st, where)
        for x in range(n):
            if x not in done and step[x] is None:
                raise SchemaError(f"state {states[x]} neither terminates nor steps")
        return MarkovTerm(states, tuple(step))

    raise SchemaError(f"unknown system type {kind!r}")


def load_system(path) -> System:
    with open(path) as fh:
        return parse_system(fh.read())


def _dist_doc(d: Dist, states) -> dict:
    return {states[x]: str(w) for x, w in d.weights}


def serialize_system(system) -> dict:
    """Inverse of :func:`parse_system` (as a decoded JSON object)."""
    s = system.states
    doc = {"type": TYPE_NAMES[type(system)], "states": list(s)}
    tr = []
    if isinstance(system, UnlabelledTs):
        for x in range(system.n):
            tr += [{"from": s[x], "to": s[y]} for y in sorted(system.succ[x])]
    elif isinstance(system, Lts):
        doc["alphabet"] = list(system.alphabet)
        for x in range(system.n):
            for a, lab in enumerate(system.alphabet):
                tr += [{"from": s[x], "label": lab, "to": s[y]} for y in sorted(system.succ[x][a])]
    elif isinstance(system, ProbAutomaton):
        doc["alphabet"] = list(system.alphabet)
        for x in range(system.n):
            for a, lab in enumerate(system.alphabet):
                tr.append({"from": s[x], "label": lab, "dist": _dist_doc(system.trans[x][a], s)})
        doc["payoffs"] = {s[x]: str(p) for x, p in enumerate(system.payoff)}
    elif isinstance(system, FuzzyLts):
        q = system.quantale
        doc["quantale"] = q.name
        doc["alphabet"] = list(system.alphabet)
        for x in range(system.n):
            for a, lab in enumerate(system.alphabet):
                for y, v in enumerate(system.weight[x][a]):
                    if v != q.bottom:
                        tr.append({"from": s[x], "label": lab, "to": s[y], "weight": q.format(v)})
    elif isinstance(system, MarkovTerm):
        doc["terminal"] = [s[x] for x in range(system.n) if system.step[x] is None]
        for x in range(system.n):
            if system.step[x] is not None:
                tr.append({"from": s[x], "dist": _dist_doc(system.step[x], s)})
    doc["transitions"] = tr
    return doc


def dumps_system(system) -> str:
    return json.dumps(serialize_system(system), indent=2)


# -- element syntax: {s1,s2} / {s1:1/2,s2:1/2} / {s1:3/4} ----------------------

_ITEM = re.compile(r"^\s*([^:\s]+)\s*(?::\s*(\S+)\s*)?$")


def parse_element(system, text: str) -> MonadElement:
    """Parse a monad element written in the brace syntax used on the command line.

    A bare state name is shorthand for that state's unit element.
    """
    s = text.strip()
    if s in system.states and not isinstance(system, MarkovTerm | UnlabelledTs):
        return unit_element(system, system.states.index(s))
    if not (s.startswith("{") and s.endswith("}")):
        raise SchemaError(f"element must be written in braces: {text!r}")
    body = s[1:-1].strip()
    st = {name: i for i, name in enumerate(system.states)}
    items = []
    if body:
        for part in body.split(","):
            m = _ITEM.match(part)
            if not m:
                raise SchemaError(f"malformed element item {part!r}")
            items.append((_lookup(st, m.group(1), "state", "element"), m.group(2)))
    if isinstance(system, Lts):
        if any(v is not None for _, v in items):
            raise SchemaError("subsets take bare state names")
        return Subset(frozenset(x for x, _ in items))
    if isinstance(system, ProbAutomaton):
        if len(items) == 1 and items[0][1] is None:
            return unit_element(system, items[0][0])
        if any(v is None for _, v in items):
            raise SchemaError("distribution items need weights, e.g. {s0:1/2,s1:1/2}")
        return Dist.of({x: _rational(v, "element") for x, v in items})
    if isinstance(system, FuzzyLts):
        q = system.quantale
        vals = [q.bottom] * system.n
        for x, v in items:
            try:
                vals[x] = q.unit if v is None else q.parse(v)
            except QuantaleError as exc:
                raise SchemaError(f"element: {exc}") from None
        return Fuzzy(tuple(vals))
    raise SchemaError(f"{TYPE_NAMES[type(system)]} systems have no monad elements")


def format_element(system, t: MonadElement) -> str:
    s = system.states
    if isinstance(t, Subset):
        return "{" + ",".join(s[x] for x in sorted(t.members)) + "}"
    if isinstance(t, Dist):
        return "{" + ",".join(f"{s[x]}:{w}" for x, w in t.weights) + "}"
    q = system.quantale
    return "{" + ",".join(
        f"{s[x]}:{q.format(v)}" for x, v in enumerate(t.values) if v != q.bottom
    ) + "}"


__all__ = [
    "BOOL",
    "Dist",
    "Fuzzy",
    "FuzzyLts",
    "Lts",
    "MarkovTerm",
    "MonadElement",
    "ProbAutomaton",
    "SchemaError",
    "Subset",
    "System",
    "UnlabelledTs",
    "check_element",
    "dumps_system",
    "format_element",
    "load_system",
    "parse_element",
    "parse_system",
    "serialize_system",
    "unit_element",
]

"""Modal formulas: parsing and semantics for the linear-time and branching logics.

Grammar (whitespace-insensitive)::

    phi := CONST | '*' | 'top' | '[' NAME ']' phi
         | 'meet(' phi (',' phi)* ')' | 'tensor(' phi ',' RATIONAL ')'
         | 'hom(' RATIONAL ',' phi ')'

In the linear-time dialect ``[a]`` is an action modality and only constants,
``*`` and modalities are allowed. In the branching dialect the bracket names
an evaluation map of the system (``dia`` for unlabelled systems, labels for
labelled ones, ``E`` and ``*`` for Markov chains with termination).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .conformance import DEFAULT_ENUMERATION_BOUND
from .quantale import BOOL, INTERVAL, Quantale, QuantaleError, parse_rational
from .systems import (
    Dist,
    FuzzyLts,
    Lts,
    MarkovTerm,
    ProbAutomaton,
    Subset,
    UnlabelledTs,
    check_element,
)


class FormulaError(ValueError):
    pass


# -- AST ----------------------------------------------------------------------


@dataclass(frozen=True)
class Const:
    name: str = "1"

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class ObsAtom:
    name: str = "*"

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class ActionModal:
    label: str
    sub: object

    def __str__(self):
        return f"[{self.label}]{self.sub}"


@dataclass(frozen=True)
class Meet:
    subs: tuple = ()

    def __str__(self):
        return "top" if not self.subs else "meet(" + ", ".join(map(str, self.subs)) + ")"


@dataclass(frozen=True)
class TensorConst:
    sub: object
    value: Fraction

    def __str__(self):
        return f"tensor({self.sub}, {self.value})"


@dataclass(frozen=True)
class HomConst:
    value: Fraction
    sub: object

    def __str__(self):
        return f"hom({self.value}, {self.sub})"


@dataclass(frozen=True)
class Modal:
    name: str
    sub: object

    def __str__(self):
        return f"[{self.name}]{self.sub}"


TOP = Meet(())


def modal_depth(phi) -> int:
    if isinstance(phi, (ActionModal, Modal)):
        return 1 + modal_depth(phi.sub)
    if isinstance(phi, Meet):
        return max((modal_depth(s) for s in phi.subs), default=0)
    if isinstance(phi, (TensorConst, HomConst)):
        return modal_depth(phi.sub)
    return 0


# -- parsing ------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+|\.\d+)?)|(?P<word>[A-Za-z_][A-Za-z0-9_]*)|(?P<sym>[\[\](),*]))"
)


def _tokenize(text):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaError(f"unexpected character {text[pos]!r} at position {pos}")
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


def system_signature(system) -> dict:
    """Labels, constants, observation atoms and modality names a system declares."""
    if isinstance(system, Lts):
        return {"labels": system.alphabet, "constants": ("1",), "observations": (), "modalities": system.alphabet}
    if isinstance(system, ProbAutomaton):
        return {"labels": system.alphabet, "constants": (), "observations": ("*",), "modalities": ()}
    if isinstance(system, FuzzyLts):
        return {"labels": system.alphabet, "constants": ("1",), "observations": (), "modalities": system.alphabet}
    if isinstance(system, UnlabelledTs):
        return {"labels": (), "constants": (), "observations": (), "modalities": ("dia",)}
    if isinstance(system, MarkovTerm):
        return {"labels": (), "constants": (), "observations": (), "modalities": ("E", "*")}
    raise FormulaError(f"unknown system type {type(system).__name__}")


def parse_formula(text: str, dialect: str = "em", system=None):
    if dialect not in ("em", "branching"):
        raise FormulaError(f"unknown dialect {dialect!r}")
    toks = _tokenize(text)
    sig = system_signature(system) if system is not None else None
    pos = 0

    def peek():
        return toks[pos]

    def take(kind=None, value=None):
        nonlocal pos
        tok = toks[pos]
        if (kind and tok[0] != kind) or (value is not None and tok[1] != value):
            want = value or kind
            raise FormulaError(f"expected {want!r} at position {tok[2]}, found {tok[1] or 'end of input'!r}")
        pos += 1
        return tok

    def rational():
        tok = take("num")
        try:
            return parse_rational(tok[1])
        except QuantaleError as exc:
            raise FormulaError(f"bad rational at position {tok[2]}: {exc}") from None

    def phi():
        kind, val, at = peek()
        if kind == "sym" and val == "[":
            take()
            k2, name, at2 = peek()
            if k2 == "sym" and name == "*":
                take()
            else:
                name = take("word")[1]
            take("sym", "]")
            sub = phi()
            if dialect == "em":
                if sig is not None and name not in sig["labels"]:
                    raise FormulaError(f"undeclared label {name!r} at position {at2}")
                return ActionModal(name, sub)
            if sig is not None and name not in sig["modalities"]:
                raise FormulaError(f"undeclared modality {name!r} at position {at2}")
            return Modal(name, sub)
        if kind == "sym" and val == "*":
            take()
            if dialect != "em":
                raise FormulaError(f"'*' is an atom only in the linear-time dialect (position {at})")
            if sig is not None and "*" not in sig["observations"]:
                raise FormulaError(f"observation '*' not declared for this system (position {at})")
            return ObsAtom("*")
        if kind == "num" or (kind == "word" and val not in ("top", "meet", "tensor", "hom")):
            take()
            if dialect != "em":
                raise FormulaError(f"constants belong to the linear-time dialect (position {at})")
            if sig is not None and val not in sig["constants"]:
                raise FormulaError(f"undeclared constant {val!r} at position {at}")
            return Const(val)
        if dialect == "em" or kind != "word":
            raise FormulaError(f"unexpected {val or 'end of input'!r} at position {at}")
        take()
        if val == "top":
            return TOP
        take("sym", "(")
        if val == "meet":
            subs = [phi()]
            while peek()[1] == ",":
                take()
                subs.append(phi())
            take("sym", ")")
            return Meet(tuple(subs))
        if val == "tensor":
            sub = phi()
            take("sym", ",")
            v = rational()
            take("sym", ")")
            return TensorConst(sub, v)
        v = rational()
        take("sym", ",")
        sub = phi()
        take("sym", ")")
        return HomConst(v, sub)

    result = phi()
    if peek()[0] != "end":
        raise FormulaError(f"trailing input at position {peek()[2]}")
    return result


# -- linear-time semantics ------------------------------------------------------


def _em_table(system, phi):
    """``[[phi]]`` as a tuple over states."""
    n = system.n
    if isinstance(phi, Const):
        if phi.name != "1" or isinstance(system, ProbAutomaton):
            raise FormulaError(f"constant {phi.name!r} is not declared for this system")
        return (BOOL.unit,) * n if isinstance(system, Lts) else (system.quantale.unit,) * n
    if isinstance(phi, ObsAtom):
        if not isinstance(system, ProbAutomaton):
            raise FormulaError("observation '*' needs a probabilistic automaton")
        return system.payoff
    if isinstance(phi, ActionModal):
        try:
            a = system.alphabet.index(phi.label)
        except ValueError:
            raise FormulaError(f"label {phi.label!r} not in alphabet") from None
        sub = _em_table(system, phi.sub)
        if isinstance(system, Lts):
            return tuple(any(sub[y] for y in system.succ[x][a]) for x in range(n))
        if isinstance(system, ProbAutomaton):
            return tuple(
                sum((w * sub[y] for y, w in system.trans[x][a].weights), Fraction(0))
                for x in range(n)
            )
        q = system.quantale
        return tuple(
            q.join_all(q.tensor(system.weight[x][a][y], sub[y]) for y in range(n))
            for x in range(n)
        )
    raise FormulaError(f"{phi} is not a linear-time formula")


def em_semantics(system, phi) -> tuple:
    if not isinstance(system, (Lts, ProbAutomaton, FuzzyLts)):
        raise FormulaError("linear-time formulas need an LTS, probabilistic or fuzzy system")
    return _em_table(system, phi)


def eval_em(system, phi, x: int):
    return em_semantics(system, phi)[x]


def extend_to_element(system, values, t):
    """Apply the truth-value algebra to ``T[[phi]]`` at element ``t``."""
    check_element(system, t)
    if isinstance(t, Subset):
        return any(values[x] for x in t.members)
    if isinstance(t, Dist):
        return sum((w * values[x] for x, w in t.weights), Fraction(0))
    q = system.quantale
    return q.join_all(q.tensor(tx, values[x]) for x, tx in enumerate(t.values))


def eval_em_on_element(system, phi, t):
    return extend_to_element(system, em_semantics(system, phi), t)


def enumerate_em_formulas(system, depth: int) -> list:
    """Every linear-time formula of modal depth at most ``depth``.

    Ordered by depth, then atoms (constants before observations), then
    labels in alphabet order from the outside in.
    """
    if depth < 0:
        raise FormulaError("depth must be non-negative")
    sig = system_signature(system)
    layer = [Const(c) for c in sig["constants"]] + [ObsAtom(o) for o in sig["observations"]]
    out = list(layer)
    for _ in range(depth):
        layer = [ActionModal(a, phi) for a in sig["labels"] for phi in layer]
        out += layer
    return out


# -- branching semantics --------------------------------------------------------


def branching_quantale(system) -> Quantale:
    if isinstance(system, (UnlabelledTs, Lts)):
        return BOOL
    if isinstance(system, MarkovTerm):
        return INTERVAL
    if isinstance(system, FuzzyLts):
        return system.quantale
    raise FormulaError(f"no branching logic for {type(system).__name__}")


def _coerce(q: Quantale, v: Fraction):
    if q is BOOL:
        if v not in (0, 1):
            raise FormulaError(f"{v} is not a Boolean truth value")
        return bool(v)
    try:
        return q.check(Fraction(v))
    except QuantaleError as exc:
        raise FormulaError(str(exc)) from None


def branching_semantics(system, phi) -> tuple:
    q = branching_quantale(system)
    n = system.n
    if isinstance(phi, Meet):
        subs = [branching_semantics(system, s) for s in phi.subs]
        return tuple(q.meet_all(s[x] for s in subs) for x in range(n))
    if isinstance(phi, TensorConst):
        v = _coerce(q, phi.value)
        return tuple(q.tensor(s, v) for s in branching_semantics(system, phi.sub))
    if isinstance(phi, HomConst):
        v = _coerce(q, phi.value)
        return tuple(q.hom(v, s) for s in branching_semantics(system, phi.sub))
    if not isinstance(phi, Modal):
        raise FormulaError(f"{phi} is not a branching formula")
    sub = branching_semantics(system, phi.sub)
    if isinstance(system, UnlabelledTs):
        if phi.name != "dia":
            raise FormulaError(f"unknown modality {phi.name!r}")
        return tuple(any(sub[y] for y in system.succ[x]) for x in range(n))
    if isinstance(system, MarkovTerm):
        if phi.name == "E":
            return tuple(
                Fraction(0)
                if system.step[x] is None
                else sum((w * sub[y] for y, w in system.step[x].weights), Fraction(0))
                for x in range(n)
            )
        if phi.name == "*":
            return tuple(Fraction(1) if system.step[x] is None else Fraction(0) for x in range(n))
        raise FormulaError(f"unknown modality {phi.name!r}")
    try:
        a = system.alphabet.index(phi.name)
    except ValueError:
        raise FormulaError(f"unknown modality {phi.name!r}") from None
    if isinstance(system, Lts):
        return tuple(any(sub[y] for y in system.succ[x][a]) for x in range(n))
    return tuple(
        q.join_all(q.tensor(system.weight[x][a][y], sub[y]) for y in range(n)) for x in range(n)
    )


def eval_branching(system, phi, x: int):
    return branching_semantics(system, phi)[x]


def random_branching_formula(system, rng, depth: int = 3, values=None):
    """A random branching formula over the system's modalities."""
    sig = system_signature(system)
    q = branching_quantale(system)
    if values is None:
        values = (Fraction(0), Fraction(1)) if q is BOOL else tuple(Fraction(k, 4) for k in range(5))
    if depth == 0:
        return TOP if rng.random() < 0.5 else TensorConst(TOP, rng.choice(values))
    r = rng.random()
    if r < 0.4:
        return Modal(rng.choice(sig["modalities"]), random_branching_formula(system, rng, depth - 1, values))
    if r < 0.6:
        k = rng.randint(0, 3)
        return Meet(tuple(random_branching_formula(system, rng, depth - 1, values) for _ in range(k)))
    if r < 0.8:
        return TensorConst(random_branching_formula(system, rng, depth - 1, values), rng.choice(values))
    return HomConst(rng.choice(values), random_branching_formula(system, rng, depth - 1, values))


# -- Boolean logic function on extensional predicate sets ------------------------


def _check_bound(n, bound):
    if n > bound:
        raise FormulaError(f"refusing to enumerate predicates on {n} > {bound} states")


def boolean_closure(S, n: int, bound: int = DEFAULT_ENUMERATION_BOUND) -> frozenset:
    """All predicates invariant under the partition ``S`` induces.

    For finite state sets these are exactly the Boolean combinations of
    ``S`` (including both constants).
    """
    _check_bound(n, bound)
    S = list(S)
    classes = {}
    cls = [classes.setdefault(tuple(h[x] for h in S), len(classes)) for x in range(n)]
    k = len(classes)
    out = set()
    for bits in range(1 << k):
        out.add(tuple(bool(bits >> cls[x] & 1) for x in range(n)))
    return frozenset(out)


def _diamond_images(ts, g):
    if isinstance(ts, UnlabelledTs):
        return [tuple(any(g[y] for y in ts.succ[x]) for x in range(ts.n))]
    if isinstance(ts, Lts):
        return [
            tuple(any(g[y] for y in ts.succ[x][a]) for x in range(ts.n))
            for a in range(len(ts.alphabet))
        ]
    raise FormulaError("the Boolean logic function needs an unlabelled or labelled system")


def boolean_logic_step(ts, S, theta=(), bound: int = DEFAULT_ENUMERATION_BOUND) -> frozenset:
    """One application of the logic function: close, apply diamonds, add constants."""
    closed = boolean_closure(S, ts.n, bound)
    out = set(theta)
    for g in closed:
        out.update(_diamond_images(ts, g))
    return frozenset(out)


def boolean_logic_fixpoint(ts, theta=(), bound: int = DEFAULT_ENUMERATION_BOUND):
    """Least fixpoint of :func:`boolean_logic_step` from the empty set.

    Returns ``(predicates, iterations)``.
    """
    S = frozenset()
    for k in range(1, 2 ** ts.n + 2):
        nxt = boolean_logic_step(ts, S, theta, bound)
        if nxt == S:
            return S, k
        S = nxt
    raise FormulaError("logic function failed to stabilise")


__all__ = [
    "ActionModal",
    "Const",
    "FormulaError",
    "HomConst",
    "Meet",
    "Modal",
    "ObsAtom",
    "TOP",
    "TensorConst",
    "boolean_closure",
    "boolean_logic_fixpoint",
    "boolean_logic_step",
    "branching_semantics",
    "em_semantics",
    "enumerate_em_formulas",
    "eval_branching",
    "eval_em",
    "eval_em_on_element",
    "extend_to_element",
    "modal_depth",
    "parse_formula",
    "random_branching_formula",
]

"""Hennessy-Milner checks: logic, behaviour and brute force compared end to end."""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from . import conformance as cf
from .fixpoint import behaviour_iterates, bisimilarity, egli_milner_gfp
from .lifting import (
    default_spec,
    homomorphic_coclosure,
    kantorovich_definitional_boolean,
)
from .logic import boolean_logic_fixpoint, em_semantics, enumerate_em_formulas, extend_to_element, modal_depth
from .oracles import oracle_distance
from .quantale import BOOL, INTERVAL, Kind
from .systems import Dist, Fuzzy, FuzzyLts, Lts, MarkovTerm, ProbAutomaton, UnlabelledTs

DEFAULT_SEED = 20240521


@dataclass
class DepthRecord:
    depth: int
    logical: object
    behaviour: object
    oracle: object
    agree: bool
    formula: str | None = None
    word: str | None = None


@dataclass
class HmReport:
    check: str
    records: list = field(default_factory=list)
    verdict: bool = True
    counterexample: dict | None = None
    seed: int | None = None
    skipped: str | None = None

    def to_json(self, fmt=str) -> dict:
        out = {"check": self.check, "verdict": self.verdict}
        if self.seed is not None:
            out["seed"] = self.seed
        if self.skipped:
            out["skipped"] = self.skipped
        if self.counterexample:
            out["counterexample"] = self.counterexample
        out["records"] = [
            {
                **{k: v for k, v in asdict(r).items() if k not in ("logical", "behaviour", "oracle")},
                "logical": fmt(r.logical),
                "behaviour": fmt(r.behaviour),
                "oracle": fmt(r.oracle),
            }
            for r in self.records
        ]
        return out


def _word_text(w):
    if w is None:
        return None
    return "".join(w) if w else "ε"


def hm_check_linear(system, t1, t2, depth: int, constants=None) -> HmReport:
    """Compare formula meet, behaviour iterate and word oracle at every depth.

    At depth ``n`` the formulas have modal depth below ``n``, the behaviour
    function has been applied ``n`` times from top, and the oracle looks at
    words shorter than ``n``. ``constants`` overrides the behaviour
    function's constants (``()`` drops them) without touching the other two
    routes.
    """
    spec = default_spec(system)
    q, kind = spec.quantale, spec.kind
    report = HmReport("linear")
    formulas = enumerate_em_formulas(system, max(depth - 1, 0))
    scored = []
    for phi in formulas:
        values = em_semantics(system, phi)
        v = q.truth_distance(
            kind, extend_to_element(system, values, t1), extend_to_element(system, values, t2)
        )
        scored.append((modal_depth(phi), v, phi))
    behaviour = behaviour_iterates(system, t1, t2, depth, constants)
    for n in range(depth + 1):
        logical, arg = q.top, None
        for k, v, phi in scored:
            if k < n and q.meet(logical, v) != logical:
                logical, arg = q.meet(logical, v), phi
        oracle, word = (q.top, None) if n == 0 else oracle_distance(system, t1, t2, n - 1, kind)
        agree = logical == behaviour[n] == oracle
        report.records.append(
            DepthRecord(n, logical, behaviour[n], oracle, agree, str(arg) if arg else None, _word_text(word))
        )
        if not agree and report.verdict:
            report.verdict = False
            report.counterexample = {
                "depth": n,
                "formula": str(arg) if arg else None,
                "word": _word_text(word),
            }
    return report


def hm_check_boolean_branching(ts) -> HmReport:
    """Logical equivalence from the Boolean logic function versus bisimilarity."""
    report = HmReport("boolean-branching")
    preds, iters = boolean_logic_fixpoint(ts)
    logical = cf.alpha(preds, BOOL, Kind.SYMMETRIC, ts.n)
    behavioural = bisimilarity(ts)
    em = egli_milner_gfp(ts).result
    agree = logical == behavioural == em
    report.records.append(
        DepthRecord(
            iters,
            cf.partition_of(logical),
            cf.partition_of(behavioural),
            cf.partition_of(em),
            agree,
        )
    )
    if not agree:
        report.verdict = False
        for i in range(ts.n):
            for j in range(ts.n):
                if logical(i, j) != behavioural(i, j):
                    h = next((h for h in preds if h[i] != h[j]), None)
                    report.counterexample = {"pair": [i, j], "predicate": h}
                    return report
    return report


def equivalent_liftings_check(d: cf.Conformance, labels: int = 1) -> HmReport:
    """Restricted and unrestricted definitional liftings of ``d`` coincide.

    ``d`` is a Boolean conformance on a powerset carrier ``P(X)`` (bitmask
    indexed). Skipped when ``d`` is not preserved by the co-closure.
    """
    report = HmReport("equivalent-liftings")
    if homomorphic_coclosure(d) != d:
        report.skipped = "d is not preserved by the co-closure over join-preserving predicates"
        return report
    if cf.coclosure_boolean(d) != d:
        report.skipped = "d is not preserved by the co-closure over all predicates"
        return report
    restricted = kantorovich_definitional_boolean(d, "action", True, labels)
    unrestricted = kantorovich_definitional_boolean(d, "action", False, labels)
    agree = restricted == unrestricted
    report.records.append(DepthRecord(0, restricted.n, unrestricted.n, None, agree))
    report.verdict = agree
    return report


# -- random systems --------------------------------------------------------------

_QUARTERS = tuple(Fraction(k, 4) for k in range(5))


def random_unlabelled(rng: random.Random, n: int, p: float = 0.35) -> UnlabelledTs:
    states = tuple(f"s{i}" for i in range(n))
    succ = tuple(frozenset(y for y in range(n) if rng.random() < p) for _ in range(n))
    return UnlabelledTs(states, succ)


def random_lts(rng: random.Random, n: int, k: int = 2, p: float = 0.3) -> Lts:
    states = tuple(f"s{i}" for i in range(n))
    alphabet = tuple("ab"[:k]) if k <= 2 else tuple(f"l{i}" for i in range(k))
    succ = tuple(
        tuple(frozenset(y for y in range(n) if rng.random() < p) for _ in alphabet)
        for _ in range(n)
    )
    return Lts(states, alphabet, succ)


def random_dist(rng: random.Random, n: int, denominators=(1, 2, 3, 4)) -> Dist:
    support = rng.sample(range(n), rng.randint(1, min(n, 3)))
    den = rng.choice(denominators)
    cuts = sorted(rng.randint(0, den) for _ in range(len(support) - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [den])]
    return Dist.of({x: Fraction(w, den) for x, w in zip(support, parts)})


def random_pa(rng: random.Random, n: int, k: int = 2) -> ProbAutomaton:
    states = tuple(f"s{i}" for i in range(n))
    alphabet = tuple("ab"[:k])
    trans = tuple(tuple(random_dist(rng, n) for _ in alphabet) for _ in range(n))
    payoff = tuple(rng.choice(_QUARTERS) for _ in range(n))
    return ProbAutomaton(states, alphabet, trans, payoff)


def random_fuzzy(rng: random.Random, n: int, k: int = 2, p: float = 0.4) -> FuzzyLts:
    states = tuple(f"s{i}" for i in range(n))
    alphabet = tuple("ab"[:k])
    weight = tuple(
        tuple(
            tuple(rng.choice(_QUARTERS[:4]) if rng.random() < p else INTERVAL.bottom for _ in range(n))
            for _ in alphabet
        )
        for _ in range(n)
    )
    return FuzzyLts(states, alphabet, weight, INTERVAL)


def random_fuzzy_element(rng: random.Random, n: int) -> Fuzzy:
    return Fuzzy(tuple(rng.choice(_QUARTERS) for _ in range(n)))


def random_markov_term(rng: random.Random, n: int, acyclic: bool = True) -> MarkovTerm:
    states = tuple(f"s{i}" for i in range(n))
    step = []
    for x in range(n):
        targets = list(range(x + 1, n)) if acyclic else list(range(n))
        if not targets or rng.random() < 0.25:
            step.append(None)
            continue
        d = random_dist(rng, len(targets))
        step.append(Dist.of({targets[i]: w for i, w in d.weights}))
    return MarkovTerm(states, tuple(step))

"""Executable law suites for quantales and the alpha/gamma connection.

Each function returns a list of failure descriptions; empty means the laws
held on every sample.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from . import conformance as cf
from .quantale import BOOL, INTERVAL, Kind, Quantale


def random_interval_value(rng: random.Random, max_den: int = 12) -> Fraction:
    # small denominators hit the truncation boundaries; large ones stress the arithmetic
    den = rng.randint(1, max_den if rng.random() < 0.5 else 10**6)
    return Fraction(rng.randint(0, den), den)


def _triples(q: Quantale, rng, samples):
    if q is BOOL:
        return list(itertools.product(BOOL.values(), repeat=3))
    return [tuple(random_interval_value(rng) for _ in range(3)) for _ in range(samples)]


def quantale_law_failures(q: Quantale, rng: random.Random, samples: int = 10_000) -> list[str]:
    bad = []
    if q.unit != q.top:
        bad.append("unit is not top")
    for x, y, z in _triples(q, rng, samples):
        if q.leq(q.tensor(x, y), z) != q.leq(x, q.hom(y, z)):
            bad.append(f"adjunction fails at {(x, y, z)}")
        if q.tensor(x, y) != q.tensor(y, x):
            bad.append(f"tensor not commutative at {(x, y)}")
        if q.tensor(q.tensor(x, y), z) != q.tensor(x, q.tensor(y, z)):
            bad.append(f"tensor not associative at {(x, y, z)}")
        if q.tensor(x, q.unit) != x:
            bad.append(f"unit law fails at {x}")
        if q.hom(q.unit, z) != z:
            bad.append(f"[1,z] != z at {z}")
        if q.hom(z, q.unit) != q.unit:
            bad.append(f"[z,1] != 1 at {z}")
        S = [y, z]
        if q.tensor(x, q.join_all(S)) != q.join_all(q.tensor(x, s) for s in S):
            bad.append(f"distributivity fails at {(x, S)}")
        if q.tensor(x, q.join_all([])) != q.join_all([]):
            bad.append("tensor does not preserve the empty join")
        if q.join(x, x) != x or q.meet(x, x) != x:
            bad.append(f"idempotence fails at {x}")
        if q.join(x, y) != q.join(y, x) or q.meet(x, y) != q.meet(y, x):
            bad.append(f"join/meet not commutative at {(x, y)}")
    # wider joins for distributivity
    for _ in range(200 if q is INTERVAL else 1):
        x = random_interval_value(rng) if q is INTERVAL else rng.choice(BOOL.values())
        S = (
            [random_interval_value(rng) for _ in range(rng.randint(0, 5))]
            if q is INTERVAL
            else list(BOOL.values())
        )
        if q.tensor(x, q.join_all(S)) != q.join_all(q.tensor(x, s) for s in S):
            bad.append(f"distributivity fails at {(x, S)}")
    return bad


def random_predicate(q: Quantale, n: int, rng: random.Random) -> tuple:
    if q is BOOL:
        return tuple(rng.random() < 0.5 for _ in range(n))
    den = rng.randint(1, 4)
    return tuple(Fraction(rng.randint(0, den), den) for _ in range(n))


def random_conformance(q: Quantale, kind: Kind, n: int, rng: random.Random) -> cf.Conformance:
    """A random conformance, produced as ``alpha`` of a few random predicates."""
    S = [random_predicate(q, n, rng) for _ in range(rng.randint(0, 3))]
    return cf.alpha(S, q, kind, n)


def galois_failures(rng: random.Random, samples: int = 1000) -> list[str]:
    bad = []
    for k in range(samples):
        q = BOOL if k % 2 == 0 else INTERVAL
        kind = Kind.SYMMETRIC if k % 4 < 2 else Kind.DIRECTED
        n = rng.randint(1, 4)
        S = [random_predicate(q, n, rng) for _ in range(rng.randint(0, 4))]
        if rng.random() < 0.5:
            # below alpha(S) by construction, so both sides of the law get exercised
            d = cf.alpha(S + [random_predicate(q, n, rng)], q, kind, n)
        else:
            d = random_conformance(q, kind, n, rng)
        a = cf.alpha(S, q, kind, n)
        if cf.leq(d, a) != all(cf.gamma_contains(d, h) for h in S):
            bad.append(f"Galois law fails for S={S}, d={d.entries}")
        if a.violations():
            bad.append(f"alpha output is not a {kind.value} pseudometric: {a.violations()[:2]}")
        S2 = S + [random_predicate(q, n, rng)]
        if not cf.leq(cf.alpha(S2, q, kind, n), a):
            bad.append("alpha is not antitone")
        y = rng.randrange(n)
        if not cf.gamma_contains(d, cf.distance_row(d, y)):
            bad.append("distance row is not non-expansive")
    return bad


def coclosure_failures(max_n: int = 6) -> list[str]:
    bad = []
    for n in range(1, max_n + 1):
        for d in cf.enumerate_equivalences(n):
            if cf.coclosure_boolean(d) != d:
                bad.append(f"co-closure moves {cf.partition_of(d)}")
    return bad

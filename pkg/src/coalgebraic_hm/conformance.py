"""Finite conformances: equivalences and (directed) pseudometrics as matrices.

A predicate on ``n`` states is a plain tuple of ``n`` quantale values. The
non-expansive predicates of a conformance are never materialised except in
the Boolean case, where :func:`nonexpansive_boolean_predicates` enumerates
them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .quantale import BOOL, QUANTALES, Kind, Quantale, QuantaleError

Predicate = tuple

DEFAULT_ENUMERATION_BOUND = 12


class ConformanceError(ValueError):
    pass


@dataclass(frozen=True)
class Conformance:
    quantale: Quantale
    kind: Kind
    entries: tuple[tuple, ...]

    def __post_init__(self):
        n = len(self.entries)
        for row in self.entries:
            if len(row) != n:
                raise ConformanceError("conformance matrix must be square")
            for v in row:
                self.quantale.check(v)

    @property
    def n(self) -> int:
        return len(self.entries)

    def __call__(self, i: int, j: int):
        return self.entries[i][j]

    def violations(self) -> list[str]:
        """Pseudometric axioms that fail, as human-readable strings."""
        q, e, n = self.quantale, self.entries, self.n
        out = []
        for i in range(n):
            if e[i][i] != q.unit:
                out.append(f"reflexivity fails at {i}")
        for i, j, k in itertools.product(range(n), repeat=3):
            if not q.leq(q.tensor(e[i][j], e[j][k]), e[i][k]):
                out.append(f"triangle fails at ({i},{j},{k})")
        if self.kind is Kind.SYMMETRIC:
            for i in range(n):
                for j in range(i + 1, n):
                    if e[i][j] != e[j][i]:
                        out.append(f"symmetry fails at ({i},{j})")
        return out

    def validate(self) -> "Conformance":
        bad = self.violations()
        if bad:
            raise ConformanceError("; ".join(bad[:5]))
        return self

    def to_json(self) -> dict:
        return {
            "quantale": self.quantale.name,
            "kind": self.kind.value,
            "entries": [[self.quantale.format(v) for v in row] for row in self.entries],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Conformance":
        try:
            q = QUANTALES[doc.get("quantale", "interval")]
            kind = Kind(doc["kind"])
            entries = tuple(tuple(q.parse(v) for v in row) for row in doc["entries"])
        except (KeyError, ValueError, TypeError) as exc:
            raise ConformanceError(f"bad conformance document: {exc}") from exc
        return cls(q, kind, entries).validate()


def top(quantale: Quantale, kind: Kind, n: int) -> Conformance:
    """The all-unit conformance: nothing is distinguished."""
    u = quantale.unit
    return Conformance(quantale, Kind(kind), tuple((u,) * n for _ in range(n)))


def discrete(quantale: Quantale, kind: Kind, n: int) -> Conformance:
    u, b = quantale.unit, quantale.bottom
    return Conformance(
        quantale,
        Kind(kind),
        tuple(tuple(u if i == j else b for j in range(n)) for i in range(n)),
    )


def from_function(quantale: Quantale, kind: Kind, n: int, f: Callable) -> Conformance:
    return Conformance(
        quantale, Kind(kind), tuple(tuple(f(i, j) for j in range(n)) for i in range(n))
    )


def from_partition(blocks: Iterable[Iterable[int]], n: int) -> Conformance:
    """Boolean equivalence relation whose classes are ``blocks``."""
    cls = [-1] * n
    for b, block in enumerate(blocks):
        for x in block:
            cls[x] = b
    if -1 in cls:
        raise ConformanceError("partition does not cover all states")
    return from_function(BOOL, Kind.SYMMETRIC, n, lambda i, j: cls[i] == cls[j])


def partition_of(d: Conformance) -> list[list[int]]:
    """Equivalence classes of a Boolean symmetric conformance, ordered by least member."""
    if d.quantale is not BOOL:
        raise ConformanceError("partition_of needs a Boolean conformance")
    seen = [False] * d.n
    blocks = []
    for i in range(d.n):
        if seen[i]:
            continue
        block = [j for j in range(d.n) if d(i, j)]
        for j in block:
            seen[j] = True
        blocks.append(block)
    return blocks


def _check_predicates(S: Sequence[Predicate], n: int | None, quantale: Quantale) -> int:
    for h in S:
        if n is None:
            n = len(h)
        elif len(h) != n:
            raise ConformanceError("predicates range over different state sets")
        for v in h:
            quantale.check(v)
    if n is None:
        raise ConformanceError("state count unknown for an empty predicate set")
    return n


def alpha(
    S: Iterable[Predicate], quantale: Quantale, kind: Kind, n: int | None = None
) -> Conformance:
    """Finest conformance making every predicate in ``S`` non-expansive."""
    S = list(S)
    n = _check_predicates(S, n, quantale)
    kind = Kind(kind)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            row.append(quantale.meet_all(quantale.truth_distance(kind, h[i], h[j]) for h in S))
        rows.append(tuple(row))
    return Conformance(quantale, kind, tuple(rows))


def gamma_contains(d: Conformance, h: Predicate) -> bool:
    """True iff ``h`` is non-expansive from ``d`` to the truth-value conformance."""
    if len(h) != d.n:
        raise ConformanceError(f"predicate has {len(h)} entries, conformance {d.n}")
    q = d.quantale
    for v in h:
        q.check(v)
    return all(
        q.leq(d(i, j), q.truth_distance(d.kind, h[i], h[j]))
        for i in range(d.n)
        for j in range(d.n)
    )


def distance_row(d: Conformance, y: int) -> Predicate:
    """The predicate ``x -> d(y, x)``; always non-expansive for ``d``."""
    if not 0 <= y < d.n:
        raise ConformanceError(f"state {y} out of range")
    return tuple(d(y, x) for x in range(d.n))


def reindex(f: Sequence[int], d: Conformance) -> Conformance:
    """Pull ``d`` back along ``f``: ``d'(i, j) = d(f(i), f(j))``."""
    for i, fi in enumerate(f):
        if not 0 <= fi < d.n:
            raise ConformanceError(f"f({i}) = {fi} out of range")
    return Conformance(
        d.quantale, d.kind, tuple(tuple(d(fi, fj) for fj in f) for fi in f)
    )


def _same_shape(d1: Conformance, d2: Conformance):
    if d1.n != d2.n or d1.kind is not d2.kind or d1.quantale is not d2.quantale:
        raise ConformanceError("conformances differ in size, kind or quantale")


def meet(d1: Conformance, d2: Conformance) -> Conformance:
    _same_shape(d1, d2)
    q = d1.quantale
    return Conformance(
        q,
        d1.kind,
        tuple(
            tuple(q.meet(a, b) for a, b in zip(r1, r2))
            for r1, r2 in zip(d1.entries, d2.entries)
        ),
    )


def leq(d1: Conformance, d2: Conformance) -> bool:
    _same_shape(d1, d2)
    q = d1.quantale
    return all(
        q.leq(a, b) for r1, r2 in zip(d1.entries, d2.entries) for a, b in zip(r1, r2)
    )


def all_boolean_predicates(n: int):
    return itertools.product((False, True), repeat=n)


def nonexpansive_boolean_predicates(
    d: Conformance, bound: int = DEFAULT_ENUMERATION_BOUND
) -> list[Predicate]:
    if d.quantale is not BOOL:
        raise ConformanceError("predicate enumeration needs the Boolean quantale")
    if d.n > bound:
        raise ConformanceError(
            f"refusing to enumerate 2^{d.n} predicates (bound is {bound} states)"
        )
    return [h for h in all_boolean_predicates(d.n) if gamma_contains(d, h)]


# -- Boolean predicates as bitmasks (bit i set = predicate true at state i) ---


def boolean_up_masks(d: Conformance) -> list[int]:
    return [sum(1 << j for j in range(d.n) if d(i, j)) for i in range(d.n)]


def nonexpansive_masks(d: Conformance, candidates) -> list[int]:
    """Bitmask predicates non-expansive for Boolean ``d``, i.e. closed upward along ``d``."""
    up = boolean_up_masks(d)
    return [h for h in candidates if not any(h >> i & 1 and up[i] & ~h for i in range(d.n))]


def alpha_masks(masks, size: int, kind: Kind) -> Conformance:
    """``alpha`` of Boolean predicates given as bitmasks over ``size`` points."""
    kind = Kind(kind)
    # inter[e]: points where every predicate true at e is also true
    inter = [(1 << size) - 1] * size
    for h in masks:
        for e in range(size):
            if h >> e & 1:
                inter[e] &= h
    if kind is Kind.DIRECTED:
        return from_function(BOOL, kind, size, lambda e, f: bool(inter[e] >> f & 1))
    return from_function(
        BOOL, kind, size, lambda e, f: bool(inter[e] >> f & 1) and bool(inter[f] >> e & 1)
    )


def coclosure_boolean(d: Conformance, bound: int = DEFAULT_ENUMERATION_BOUND) -> Conformance:
    """``alpha`` of every non-expansive Boolean predicate of ``d``."""
    if d.quantale is not BOOL:
        raise ConformanceError("predicate enumeration needs the Boolean quantale")
    if d.n > bound:
        raise ConformanceError(
            f"refusing to enumerate 2^{d.n} predicates (bound is {bound} states)"
        )
    return alpha_masks(nonexpansive_masks(d, range(1 << d.n)), d.n, d.kind)


def enumerate_equivalences(n: int):
    """All equivalence relations on ``n`` states (set partitions, restricted growth)."""

    def grow(prefix, m):
        if len(prefix) == n:
            yield prefix
            return
        for b in range(m + 1):
            yield from grow(prefix + [b], max(m, b + 1))

    for labels in grow([], 0):
        yield from_function(BOOL, Kind.SYMMETRIC, n, lambda i, j, l=labels: l[i] == l[j])


def enumerate_preorders(n: int):
    """All reflexive transitive Boolean relations on ``n`` states, as directed conformances."""
    off = [(i, j) for i in range(n) for j in range(n) if i != j]
    for bits in itertools.product((False, True), repeat=len(off)):
        rel = {p for p, b in zip(off, bits) if b}
        if any(
            (i, j) in rel and (j, k) in rel and i != k and (i, k) not in rel
            for i, j, k in itertools.product(range(n), repeat=3)
        ):
            continue
        yield from_function(BOOL, Kind.DIRECTED, n, lambda i, j: i == j or (i, j) in rel)


__all__ = [
    "Conformance",
    "ConformanceError",
    "Predicate",
    "QuantaleError",
    "alpha",
    "all_boolean_predicates",
    "coclosure_boolean",
    "discrete",
    "distance_row",
    "enumerate_equivalences",
    "enumerate_preorders",
    "from_function",
    "from_partition",
    "gamma_contains",
    "leq",
    "meet",
    "nonexpansive_boolean_predicates",
    "partition_of",
    "reindex",
    "top",
]

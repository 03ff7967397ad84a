"""Conformance liftings and the machine-functor behaviour step."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import conformance as cf
from .conformance import Conformance
from .determinization import det_step
from .quantale import BOOL, INTERVAL, Kind, Quantale
from .systems import Dist, Fuzzy, FuzzyLts, Lts, ProbAutomaton, SchemaError, Subset

TERMINATED = None
"""The termination mark in ``D(X) + 1``; a ``MarkovTerm`` step is ``None`` for it."""


class LiftingError(ValueError):
    pass


# -- Egli-Milner --------------------------------------------------------------


def _members(U, n):
    members = U.members if isinstance(U, Subset) else frozenset(U)
    if any(not 0 <= x < n for x in members):
        raise LiftingError("subset mentions a state outside the conformance")
    return members


def egli_milner(R: Conformance, U, V) -> bool:
    if R.quantale is not BOOL:
        raise LiftingError("Egli-Milner lifting needs a Boolean relation")
    U, V = _members(U, R.n), _members(V, R.n)
    return all(any(R(x, y) for y in V) for x in U) and all(
        any(R(x, y) for x in U) for y in V
    )


# -- Kantorovich via the transportation simplex -------------------------------


def transport(supply, demand, cost):
    """Exact minimum-cost transport plan between two equal-mass vectors.

    North-west corner start, MODI potentials, Bland's rule for both the
    entering and the leaving cell. Returns ``(value, plan)`` where ``plan``
    maps basic cells ``(i, j)`` to their flow.
    """
    m, n = len(supply), len(demand)
    if sum(supply) != sum(demand):
        raise LiftingError("supply and demand have different mass")
    ra, rb = list(supply), list(demand)
    flow = {}
    i = j = 0
    while True:
        f = min(ra[i], rb[j])
        flow[(i, j)] = f
        ra[i] -= f
        rb[j] -= f
        if i == m - 1 and j == n - 1:
            break
        if ra[i] == 0 and i < m - 1:
            i += 1
        else:
            j += 1

    while True:
        adj = {("r", r): [] for r in range(m)}
        adj.update({("c", c): [] for c in range(n)})
        for r, c in flow:
            adj[("r", r)].append(("c", c))
            adj[("c", c)].append(("r", r))
        pot = {("r", 0): 0}
        stack = [("r", 0)]
        while stack:
            node = stack.pop()
            for nb in adj[node]:
                if nb not in pot:
                    cell = (node[1], nb[1]) if node[0] == "r" else (nb[1], node[1])
                    pot[nb] = cost[cell[0]][cell[1]] - pot[node]
                    stack.append(nb)
        entering = None
        for r in range(m):
            for c in range(n):
                if (r, c) not in flow and cost[r][c] - pot[("r", r)] - pot[("c", c)] < 0:
                    entering = (r, c)
                    break
            if entering:
                break
        if entering is None:
            break
        # tree path from the entering column back to the entering row
        r0, c0 = entering
        parent = {("c", c0): None}
        queue = deque([("c", c0)])
        while queue:
            node = queue.popleft()
            if node == ("r", r0):
                break
            for nb in adj[node]:
                if nb not in parent:
                    parent[nb] = node
                    queue.append(nb)
        path = []
        node = ("r", r0)
        while parent[node] is not None:
            prev = parent[node]
            path.append((node[1], prev[1]) if node[0] == "r" else (prev[1], node[1]))
            node = prev
        path.reverse()  # starts at the cell touching column c0
        minus = path[0::2]
        plus = path[1::2]
        theta = min(flow[cell] for cell in minus)
        leaving = min(cell for cell in minus if flow[cell] == theta)
        for cell in minus:
            flow[cell] -= theta
        for cell in plus:
            flow[cell] += theta
        flow[entering] = theta
        del flow[leaving]

    value = sum((f * cost[r][c] for (r, c), f in flow.items()), Fraction(0))
    return value, flow


def kantorovich(d: Conformance, p, q) -> Fraction:
    """Kantorovich lifting of an interval pseudometric to ``D(X) + 1``.

    ``p`` and ``q`` are :class:`Dist` values or :data:`TERMINATED`.
    """
    if d.quantale is not INTERVAL:
        raise LiftingError("Kantorovich lifting needs an interval pseudometric")
    if p is TERMINATED or q is TERMINATED:
        return Fraction(0) if p is q else Fraction(1)
    for t in (p, q):
        if not isinstance(t, Dist) or t.mass() != 1:
            raise LiftingError(f"{t!r} is not a normalized distribution")
        if any(not 0 <= x < d.n for x, _ in t.weights):
            raise LiftingError(f"{t!r} mentions a state outside the metric")
    if p == q:
        return Fraction(0)
    xs = [x for x, _ in p.weights]
    ys = [y for y, _ in q.weights]
    cost = [[d(x, y) for y in ys] for x in xs]
    value, _ = transport([w for _, w in p.weights], [w for _, w in q.weights], cost)
    return value


# -- directed Hausdorff ---------------------------------------------------------


def directed_hausdorff(d: Conformance, U, V):
    """How well ``V`` simulates ``U`` under the directed conformance ``d``.

    Crisp sets give ``meet_{x in U} join_{y in V} d(x, y)``; fuzzy sets give
    ``meet_x [U(x), join_y V(y) (x) d(x, y)]``.
    """
    if d.kind is not Kind.DIRECTED:
        raise LiftingError("directed Hausdorff lifting needs a directed conformance")
    q = d.quantale
    if isinstance(U, Fuzzy) or isinstance(V, Fuzzy):
        if not (isinstance(U, Fuzzy) and isinstance(V, Fuzzy)):
            raise LiftingError("cannot compare a crisp set with a fuzzy one")
        if len(U.values) != d.n or len(V.values) != d.n:
            raise LiftingError("fuzzy set size does not match the conformance")
        return q.meet_all(
            q.hom(U.values[x], q.join_all(q.tensor(V.values[y], d(x, y)) for y in range(d.n)))
            for x in range(d.n)
        )
    U, V = _members(U, d.n), _members(V, d.n)
    return q.meet_all(q.join_all(d(x, y) for y in V) for x in U)


# -- definitional Kantorovich lifting for Boolean conformances ------------------

DEFINITIONAL_BOUND = 8


@lru_cache(maxsize=None)
def join_preserving_masks(m: int) -> tuple:
    """All maps ``P(X) -> 2`` preserving finite joins, for ``|X| = m``.

    ``P(X)`` is indexed by bitmask, so the result lists masks over ``2^m``
    points. Found by filtering every map, not by construction.
    """
    size = 1 << m
    out = []
    for k in range(1 << size):
        if k & 1:
            continue
        if all(
            (k >> (u | v) & 1) == ((k >> u & 1) | (k >> v & 1))
            for u in range(size)
            for v in range(u + 1, size)
        ):
            out.append(k)
    return tuple(out)


def boolean_alpha_masks(masks, size: int, kind: Kind) -> Conformance:
    """``alpha`` of Boolean predicates given as bitmasks over ``size`` points."""
    return cf.alpha_masks(list(masks), size, kind)


def homomorphic_coclosure(d: Conformance) -> Conformance:
    """``alpha`` of the join-preserving non-expansive predicates of ``d``.

    ``d`` must live on a powerset carrier ``P(X)`` indexed by bitmask.
    """
    m = _powerset_exponent(d.n)
    return boolean_alpha_masks(cf.nonexpansive_masks(d, join_preserving_masks(m)), d.n, d.kind)


def _powerset_exponent(size: int) -> int:
    m = size.bit_length() - 1
    if size < 1 or 1 << m != size:
        raise LiftingError(f"carrier of size {size} is not a powerset")
    return m


def kantorovich_definitional_boolean(
    d: Conformance,
    modality: str = "diamond",
    restrict_to_homomorphisms: bool = False,
    labels: int = 1,
) -> Conformance:
    """Lift a Boolean conformance by enumerating its non-expansive predicates.

    ``modality="diamond"`` lifts from ``Y`` to ``P(Y)`` (result indexed by
    bitmask); ``modality="action"`` lifts along ``Y^labels`` with one
    evaluation map per position (result indexed in mixed radix, first
    position most significant). With ``restrict_to_homomorphisms`` the
    carrier must be a powerset ``P(X)`` and only join-preserving
    predicates are used.
    """
    if d.quantale is not BOOL:
        raise LiftingError("definitional lifting is only enumerable for Boolean conformances")
    if d.n > DEFINITIONAL_BOUND:
        raise LiftingError(f"refusing to enumerate predicates on {d.n} > {DEFINITIONAL_BOUND} points")
    if restrict_to_homomorphisms:
        candidates = join_preserving_masks(_powerset_exponent(d.n))
    else:
        candidates = range(1 << d.n)
    preds = cf.nonexpansive_masks(d, candidates)
    if modality == "diamond":
        if d.n > 4:
            raise LiftingError("diamond lifting enumerates P(Y); at most 4 points")
        size = 1 << d.n
        lifted = []
        for h in preds:
            lifted.append(sum(1 << U for U in range(size) if U & h))
        return boolean_alpha_masks(lifted, size, d.kind)
    if modality == "action":
        points = list(itertools.product(range(d.n), repeat=labels))
        lifted = []
        for a in range(labels):
            for h in preds:
                lifted.append(sum(1 << e for e, s in enumerate(points) if h >> s[a] & 1))
        return boolean_alpha_masks(lifted, len(points), d.kind)
    raise LiftingError(f"unknown modality {modality!r}")


# -- behaviour step for determinized machine-functor coalgebras ----------------


@dataclass(frozen=True)
class BehaviourSpec:
    """Which conformance, observations and constants the behaviour step uses.

    ``observations`` name maps ``B -> V`` (only ``"*"``, the identity on
    payoffs); ``constants`` name predicates on the carrier (only ``"1"``,
    which reads emptiness for sets and the total join for fuzzy sets).
    """

    quantale: Quantale
    kind: Kind
    observations: tuple = ()
    constants: tuple = ()


def default_spec(system) -> BehaviourSpec:
    if isinstance(system, Lts):
        return BehaviourSpec(BOOL, Kind.SYMMETRIC, (), ("1",))
    if isinstance(system, ProbAutomaton):
        return BehaviourSpec(INTERVAL, Kind.SYMMETRIC, ("*",), ())
    if isinstance(system, FuzzyLts):
        return BehaviourSpec(system.quantale, Kind.DIRECTED, (), ("1",))
    raise SchemaError(f"no linear-time behaviour for {type(system).__name__}")


def constant_value(system, name: str, t):
    if name != "1":
        raise LiftingError(f"unknown constant {name!r}")
    if isinstance(t, Subset):
        return bool(t.members)
    if isinstance(t, Fuzzy):
        return system.quantale.join_all(t.values)
    raise LiftingError("the constant 1 is only declared for (fuzzy) powerset systems")


def observation_value(name: str, b):
    if name != "*":
        raise LiftingError(f"unknown observation {name!r}")
    if not isinstance(b, Fraction):
        raise LiftingError("the observation * needs a payoff in [0, 1]")
    return b


@dataclass(eq=False)
class PairTable:
    """A conformance on the reachable part of ``TX``, stored pair by pair.

    Elements are interned; missing pairs read as top. For symmetric kinds
    only ordered keys ``(i, j)`` with ``i <= j`` are stored.
    """

    system: object
    spec: BehaviourSpec
    elements: list = field(default_factory=list)
    index: dict = field(default_factory=dict)
    entries: dict = field(default_factory=dict)
    steps: dict = field(default_factory=dict)
    exact: bool = True

    def __eq__(self, other):
        # iterates share their element index, so the entries decide equality
        return isinstance(other, PairTable) and self.entries == other.entries

    def intern(self, t) -> int:
        i = self.index.get(t)
        if i is None:
            i = len(self.elements)
            self.index[t] = i
            self.elements.append(t)
        return i

    def key(self, i, j):
        if self.spec.kind is Kind.SYMMETRIC and j < i:
            return (j, i)
        return (i, j)

    def get(self, i, j):
        if i == j:
            return self.spec.quantale.unit
        return self.entries.get(self.key(i, j), self.spec.quantale.top)

    def value(self, t1, t2):
        return self.get(self.intern(t1), self.intern(t2))

    def add_pair(self, t1, t2) -> tuple:
        k = self.key(self.intern(t1), self.intern(t2))
        self.entries.setdefault(k, self.spec.quantale.top)
        return k

    def det(self, i):
        s = self.steps.get(i)
        if s is None:
            s = det_step(self.system, self.elements[i], validate=False)
            self.steps[i] = s
        return s

    def successor_keys(self, k):
        s1, s2 = self.det(k[0]), self.det(k[1])
        return [
            self.key(self.intern(a), self.intern(b))
            for a, b in zip(s1.successors, s2.successors)
        ]

    def copy_with(self, entries) -> "PairTable":
        return PairTable(
            self.system, self.spec, self.elements, self.index, entries, self.steps, self.exact
        )

    def leq(self, other: "PairTable") -> bool:
        q = self.spec.quantale
        keys = set(self.entries) | set(other.entries)
        return all(q.leq(self.get(*k), other.get(*k)) for k in keys)


def explore_pairs(system, roots, radius: int, spec: BehaviourSpec | None = None) -> PairTable:
    """Pair table holding every pair within ``radius`` steps of ``roots``.

    ``exact`` is cleared when unexplored pairs remain beyond the radius.
    """
    table = PairTable(system, spec or default_spec(system))
    queue = deque()
    seen = set()
    for t1, t2 in roots:
        k = table.add_pair(t1, t2)
        if k not in seen:
            seen.add(k)
            queue.append((k, 0))
    while queue:
        k, depth = queue.popleft()
        if k[0] == k[1]:
            continue
        if depth >= radius:
            table.exact = False
            continue
        for s in table.successor_keys(k):
            if s not in seen:
                seen.add(s)
                table.entries.setdefault(s, table.spec.quantale.top)
                queue.append((s, depth + 1))
    return table


def pair_value(table: PairTable, k, old_get):
    """One application of the behaviour function at pair ``k``."""
    spec, q, system = table.spec, table.spec.quantale, table.system
    i, j = k
    if i == j:
        return q.unit
    s1, s2 = table.det(i), table.det(j)
    acc = q.top
    for a, b in zip(s1.successors, s2.successors):
        acc = q.meet(acc, old_get(table.index[a], table.index[b]))
    for f in spec.observations:
        acc = q.meet(
            acc,
            q.truth_distance(
                spec.kind, observation_value(f, s1.observation), observation_value(f, s2.observation)
            ),
        )
    for theta in spec.constants:
        acc = q.meet(
            acc,
            q.truth_distance(
                spec.kind,
                constant_value(system, theta, table.elements[i]),
                constant_value(system, theta, table.elements[j]),
            ),
        )
    return acc


def machine_behaviour_step(system, table: PairTable, constants=None, grow: bool = True) -> PairTable:
    """Apply the machine-functor behaviour function to every stored pair.

    ``constants`` overrides the table's declared constants (pass ``()`` to
    drop them). Successor pairs missing from the table are added at top
    when ``grow`` is set; otherwise they are read as top without being
    stored. Reads only the previous table.
    """
    if system is not table.system:
        raise LiftingError("pair table belongs to another system")
    if constants is not None and tuple(constants) != table.spec.constants:
        table = PairTable(
            table.system,
            BehaviourSpec(table.spec.quantale, table.spec.kind, table.spec.observations, tuple(constants)),
            table.elements,
            table.index,
            table.entries,
            table.steps,
            table.exact,
        )
    old = dict(table.entries)
    new = {}
    for k in old:
        for s in table.successor_keys(k):
            if s not in old and s not in new and grow:
                new[s] = table.spec.quantale.top
    result = {k: pair_value(table, k, table.get) for k in old}
    result.update(new)
    return table.copy_with(result)


__all__ = [
    "BehaviourSpec",
    "LiftingError",
    "PairTable",
    "TERMINATED",
    "boolean_alpha_masks",
    "default_spec",
    "directed_hausdorff",
    "egli_milner",
    "explore_pairs",
    "homomorphic_coclosure",
    "join_preserving_masks",
    "kantorovich",
    "kantorovich_definitional_boolean",
    "machine_behaviour_step",
    "transport",
]

"""Fixpoint iteration for behavioural conformances.

Greatest fixpoints start at the all-unit conformance and descend;
``bisim_metric`` is the one least fixpoint, read in the real order from the
all-zero matrix. Convergence is always exact equality of successive
iterates.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import conformance as cf
from .conformance import Conformance
from .determinization import DEFAULT_DEPTH_CAP, reachable_closure
from .lifting import (
    directed_hausdorff,
    egli_milner,
    explore_pairs,
    kantorovich,
    default_spec,
    machine_behaviour_step,
)
from .quantale import BOOL, INTERVAL, Kind
from .systems import Fuzzy, FuzzyLts, Lts, MarkovTerm, SchemaError, Subset, UnlabelledTs

DEFAULT_MAX_ITERS = 1000


class FixpointError(RuntimeError):
    pass


@dataclass
class FixpointReport:
    result: object
    iterations: int
    converged: bool
    exact: bool = True
    order: str = "quantale order, greatest fixpoint from top"

    def to_json(self, fmt=None) -> dict:
        out = {
            "converged": self.converged,
            "exact": self.exact,
            "iterations": self.iterations,
            "order": self.order,
        }
        if isinstance(self.result, Conformance):
            out["matrix"] = self.result.to_json()
        else:
            out["value"] = fmt(self.result) if fmt else str(self.result)
        return out


def gfp_iterate(
    step: Callable,
    start,
    max_iters: int = DEFAULT_MAX_ITERS,
    leq: Callable | None = None,
) -> FixpointReport:
    """Iterate ``step`` from ``start`` until two iterates are equal.

    With ``leq`` given, every new iterate is checked to lie below the
    previous one; a violation means ``step`` is not monotone.
    """
    current = start
    for k in range(1, max_iters + 1):
        nxt = step(current)
        if leq is not None and not leq(nxt, current):
            raise FixpointError(f"iterate {k} is not below iterate {k - 1}")
        if nxt == current:
            return FixpointReport(nxt, k, True)
        current = nxt
    return FixpointReport(current, max_iters, False)


# -- branching-time equivalence ----------------------------------------------


def _successor_sets(ts):
    if isinstance(ts, UnlabelledTs):
        return [(s,) for s in ts.succ]
    if isinstance(ts, Lts):
        return [tuple(row) for row in ts.succ]
    raise SchemaError("bisimilarity needs an unlabelled or labelled transition system")


def bisimilarity(ts) -> Conformance:
    """Coarsest bisimulation by signature-based partition refinement."""
    succ = _successor_sets(ts)
    n = len(succ)
    block = [0] * n
    while True:
        sigs = {}
        new = []
        for x in range(n):
            sig = (block[x],) + tuple(frozenset(block[y] for y in s) for s in succ[x])
            new.append(sigs.setdefault(sig, len(sigs)))
        if len(sigs) == len(set(block)):
            break
        block = new
    return cf.from_function(BOOL, Kind.SYMMETRIC, n, lambda i, j: block[i] == block[j])


def egli_milner_step(ts) -> Callable:
    succ = _successor_sets(ts)
    n = len(succ)

    def step(R: Conformance) -> Conformance:
        return cf.from_function(
            BOOL,
            Kind.SYMMETRIC,
            n,
            lambda i, j: all(egli_milner(R, a, b) for a, b in zip(succ[i], succ[j])),
        )

    return step


def egli_milner_gfp(ts, max_iters: int = DEFAULT_MAX_ITERS) -> FixpointReport:
    n = len(_successor_sets(ts))
    return gfp_iterate(egli_milner_step(ts), cf.top(BOOL, Kind.SYMMETRIC, n), max_iters, cf.leq)


# -- directed simulation distance ----------------------------------------------


def simulation_step(system) -> tuple:
    """Return ``(step, quantale, n)`` for the directed simulation function."""
    if isinstance(system, FuzzyLts):
        q = system.quantale
        rows = [[Fuzzy(system.weight[x][a]) for a in range(len(system.alphabet))] for x in range(system.n)]
    else:
        q = BOOL
        rows = [[Subset(s) for s in ss] for ss in _successor_sets(system)]
    n = len(rows)

    def step(d: Conformance) -> Conformance:
        return cf.from_function(
            q,
            Kind.DIRECTED,
            n,
            lambda i, j: q.meet_all(directed_hausdorff(d, u, v) for u, v in zip(rows[i], rows[j])),
        )

    return step, q, n


def simulation_distance(system, max_iters: int = DEFAULT_MAX_ITERS) -> FixpointReport:
    """Greatest fixpoint of the directed Hausdorff behaviour function."""
    step, q, n = simulation_step(system)
    return gfp_iterate(step, cf.top(q, Kind.DIRECTED, n), max_iters, cf.leq)


# -- trace equivalence ---------------------------------------------------------


@dataclass
class TraceVerdict:
    equivalent: bool
    witness: tuple | None
    left_size: int
    right_size: int
    partition_size: int


def trace_equivalence(lts: Lts, U: Subset, V: Subset) -> TraceVerdict:
    """Compare two subsets on the reachable subset automaton.

    Partition refinement starts from the emptiness split; the witness is a
    shortest word after which exactly one side is empty.
    """
    graph = reachable_closure(lts, [U, V], depth_cap=2**lts.n + 1)
    assert graph.exact
    m = len(graph.nodes)
    block = [int(bool(t.members)) for t in graph.nodes]
    while True:
        sigs = {}
        new = [sigs.setdefault((block[i],) + tuple(block[j] for j in graph.edges[i]), len(sigs)) for i in range(m)]
        if len(sigs) == len(set(block)):
            break
        block = new
    u, v = graph.index[U], graph.index[V]
    equivalent = block[u] == block[v]

    witness = None
    if not equivalent:
        parent = {(u, v): None}
        queue = deque([(u, v)])
        while queue:
            pair = queue.popleft()
            i, j = pair
            if bool(graph.nodes[i].members) != bool(graph.nodes[j].members):
                word = []
                while parent[pair] is not None:
                    pair, a = parent[pair]
                    word.append(a)
                witness = tuple(reversed(word))
                break
            for a, (si, sj) in enumerate(zip(graph.edges[i], graph.edges[j])):
                if (si, sj) not in parent:
                    parent[(si, sj)] = (pair, lts.alphabet[a])
                    queue.append((si, sj))
        if witness is None:
            raise FixpointError("partition refinement and witness search disagree")

    left = len(reachable_closure(lts, [U], depth_cap=2**lts.n + 1).nodes)
    right = len(reachable_closure(lts, [V], depth_cap=2**lts.n + 1).nodes)
    return TraceVerdict(equivalent, witness, left, right, len(set(block)))


# -- trace distance ------------------------------------------------------------


def behaviour_iterates(system, t1, t2, depth: int, constants=None) -> list:
    """Values of the first ``depth + 1`` behaviour iterates at ``(t1, t2)``.

    Entry ``n`` is ``be^n(top)(t1, t2)``; pairs beyond ``depth`` steps are
    never needed for these.
    """
    table = explore_pairs(system, [(t1, t2)], depth)
    root = (table.index[t1], table.index[t2])
    values = [table.get(*root)]
    for _ in range(depth):
        table = machine_behaviour_step(system, table, constants, grow=False)
        values.append(table.get(*root))
    return values


def trace_distance(system, t1, t2, depth: int = DEFAULT_DEPTH_CAP, constants=None) -> FixpointReport:
    """Linear-time distance of two monad elements.

    When every pair reachable from ``(t1, t2)`` lies within ``depth`` steps
    the greatest fixpoint is computed exactly on that finite pair graph;
    otherwise the ``depth``-th iterate is returned with ``exact=False``,
    unless it is already the bottom value, which no further step can lower.
    """
    table = explore_pairs(system, [(t1, t2)], depth)
    root = (table.index[t1], table.index[t2])
    if not table.exact:
        values = behaviour_iterates(system, t1, t2, depth, constants)
        floor = values[-1] == default_spec(system).quantale.bottom
        return FixpointReport(values[-1], depth, floor, exact=floor)
    # finite pair graph: the iteration stabilises within its size
    report = gfp_iterate(
        lambda t: machine_behaviour_step(system, t, constants, grow=False),
        table,
        max_iters=len(table.entries) + 2,
    )
    if not report.converged:
        raise FixpointError("saturated pair graph failed to stabilise")
    return FixpointReport(report.result.get(*root), report.iterations, True, exact=True)


# -- bisimulation metric for Markov chains with termination ---------------------


def bisim_metric(mt: MarkovTerm, iters: int = DEFAULT_MAX_ITERS) -> FixpointReport:
    """Least fixpoint (real order) of the Kantorovich behaviour function."""
    if not isinstance(mt, MarkovTerm):
        raise SchemaError("bisim_metric needs a Markov chain with termination")
    n = mt.n
    d = cf.from_function(INTERVAL, Kind.SYMMETRIC, n, lambda i, j: Fraction(0))
    order = "real order, least fixpoint from 0"
    for k in range(1, iters + 1):
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                if j < i:
                    row.append(rows[j][i])
                elif j == i:
                    row.append(Fraction(0))
                else:
                    row.append(kantorovich(d, mt.step[i], mt.step[j]))
            rows.append(tuple(row))
        nxt = Conformance(INTERVAL, Kind.SYMMETRIC, tuple(rows))
        if nxt == d:
            return FixpointReport(nxt, k, True, order=order)
        d = nxt
    return FixpointReport(d, iters, False, order=order)


__all__ = [
    "FixpointError",
    "FixpointReport",
    "TraceVerdict",
    "behaviour_iterates",
    "bisim_metric",
    "bisimilarity",
    "egli_milner_gfp",
    "egli_milner_step",
    "gfp_iterate",
    "simulation_distance",
    "trace_distance",
    "trace_equivalence",
]

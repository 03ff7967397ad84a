"""Generalized powerset construction for machine-functor coalgebras.

``det_step`` sends a monad element ``t`` to its per-label successors and its
observation in ``B``. For the powerset case ``B = 1`` carries no information,
so the observation slot holds the emptiness flag of ``t`` instead (``True``
for a non-empty set); this is what the constant ``1`` reads off.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .systems import (
    Dist,
    Fuzzy,
    FuzzyLts,
    Lts,
    MonadElement,
    ProbAutomaton,
    SchemaError,
    Subset,
    check_element,
)

DEFAULT_DEPTH_CAP = 64


@dataclass(frozen=True)
class DetStep:
    source: MonadElement
    successors: tuple  # indexed like the system alphabet
    observation: object

    def successor(self, system, label: str) -> MonadElement:
        try:
            return self.successors[system.alphabet.index(label)]
        except ValueError:
            raise SchemaError(f"label {label!r} not in alphabet") from None


def _subset_succ(lts: Lts, members, a: int) -> Subset:
    out = set()
    for x in members:
        out |= lts.succ[x][a]
    return Subset(frozenset(out))


def _dist_succ(pa: ProbAutomaton, t: Dist, a: int) -> Dist:
    acc: dict = {}
    for x, w in t.weights:
        for y, v in pa.trans[x][a].weights:
            acc[y] = acc.get(y, 0) + w * v
    return Dist(tuple(sorted((y, Fraction(v)) for y, v in acc.items() if v)))


def _fuzzy_succ(f: FuzzyLts, t: Fuzzy, a: int) -> Fuzzy:
    q = f.quantale
    out = [q.bottom] * f.n
    for x, tx in enumerate(t.values):
        if tx == q.bottom:
            continue
        row = f.weight[x][a]
        for y in range(f.n):
            out[y] = q.join(out[y], q.tensor(tx, row[y]))
    return Fuzzy(tuple(out))


def det_step(system, t: MonadElement, *, validate: bool = True) -> DetStep:
    if validate:
        check_element(system, t)
    labels = range(len(system.alphabet))
    if isinstance(system, Lts):
        succ = tuple(_subset_succ(system, t.members, a) for a in labels)
        return DetStep(t, succ, bool(t.members))
    if isinstance(system, ProbAutomaton):
        succ = tuple(_dist_succ(system, t, a) for a in labels)
        obs = sum((w * system.payoff[x] for x, w in t.weights), Fraction(0))
        return DetStep(t, succ, obs)
    if isinstance(system, FuzzyLts):
        succ = tuple(_fuzzy_succ(system, t, a) for a in labels)
        return DetStep(t, succ, None)
    raise SchemaError(f"no determinization for {type(system).__name__}")


def run_word(system, t: MonadElement, word) -> MonadElement:
    """Successor of ``t`` after reading ``word`` (a sequence of labels)."""
    for label in word:
        t = det_step(system, t).successor(system, label)
    return t


@dataclass
class DetGraph:
    """A finite unfolding of the determinized coalgebra.

    ``nodes`` lists interned elements in discovery (BFS) order; ``edges[i]``
    holds successor node ids in alphabet order, or ``None`` for nodes at the
    depth cap that were not expanded.
    """

    system: object
    nodes: list = field(default_factory=list)
    index: dict = field(default_factory=dict)
    edges: list = field(default_factory=list)
    observations: list = field(default_factory=list)
    exact: bool = True

    def intern(self, t) -> int:
        i = self.index.get(t)
        if i is None:
            i = len(self.nodes)
            self.index[t] = i
            self.nodes.append(t)
            self.edges.append(None)
            self.observations.append(None)
        return i

    def dump(self) -> str:
        """Edge list: ``node label node observation`` per line."""
        lines = []
        for i, succ in enumerate(self.edges):
            if succ is None:
                continue
            for a, j in zip(self.system.alphabet, succ):
                lines.append(f"{i} {a} {j} {self.observations[i]}")
        return "\n".join(lines)


def reachable_closure(system, seeds, depth_cap: int = DEFAULT_DEPTH_CAP) -> DetGraph:
    graph = DetGraph(system)
    queue = deque()
    for t in seeds:
        check_element(system, t)
        if t not in graph.index:
            queue.append((graph.intern(t), 0))
    while queue:
        i, depth = queue.popleft()
        if depth >= depth_cap:
            graph.exact = False
            continue
        step = det_step(system, graph.nodes[i], validate=False)
        graph.observations[i] = step.observation
        succ = []
        for s in step.successors:
            new = s not in graph.index
            j = graph.intern(s)
            if new:
                queue.append((j, depth + 1))
            succ.append(j)
        graph.edges[i] = tuple(succ)
    return graph

"""Brute-force reference semantics for linear-time checks.

This module imports only the system model and the quantales. Nothing here
goes through determinization, liftings, fixpoints or formula evaluation, so
the harness can hold those engines against it.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .quantale import Quantale
from .systems import Dist, Fuzzy, FuzzyLts, Lts, ProbAutomaton, Subset


class OracleError(ValueError):
    pass


def _label_index(system, label):
    try:
        return system.alphabet.index(label)
    except ValueError:
        raise OracleError(f"label {label!r} not in alphabet") from None


def words(alphabet, max_len: int):
    """All words of length ``0..max_len`` in length-then-alphabet order."""
    for k in range(max_len + 1):
        yield from itertools.product(alphabet, repeat=k)


def word_payoff_oracle(pa: ProbAutomaton, t: Dist, word) -> Fraction:
    """Expected payoff after reading ``word`` from the distribution ``t``.

    Dense row-vector times matrix products, one per letter.
    """
    n = pa.n
    vec = [Fraction(0)] * n
    for x, w in t.weights:
        vec[x] += w
    for label in word:
        a = _label_index(pa, label)
        matrix = [[Fraction(0)] * n for _ in range(n)]
        for x in range(n):
            for y, w in pa.trans[x][a].weights:
                matrix[x][y] = w
        vec = [sum((vec[x] * matrix[x][y] for x in range(n)), Fraction(0)) for y in range(n)]
    return sum((vec[x] * pa.payoff[x] for x in range(n)), Fraction(0))


def trace_set_oracle(lts: Lts, U: Subset, max_len: int) -> set:
    """Words of length at most ``max_len`` executable from some state of ``U``.

    The empty word counts as a trace exactly when ``U`` is non-empty.
    """
    out = set()

    def walk(x, prefix):
        out.add(prefix)
        if len(prefix) == max_len:
            return
        for a, label in enumerate(lts.alphabet):
            for y in lts.succ[x][a]:
                walk(y, prefix + (label,))

    for x in U.members:
        walk(x, ())
    return out


def trace_sets_agree(lts: Lts, U: Subset, V: Subset, max_len: int):
    """Whether ``U`` and ``V`` have the same traces of length at most ``max_len``.

    Equivalent to comparing :func:`trace_set_oracle` outputs, but words are
    grouped by the pair of state sets they reach, so long bounds stay cheap.
    Returns ``(agree, word)`` with a shortest word in exactly one trace set.
    """

    def step(states, a):
        return frozenset(y for x in states for y in lts.succ[x][a])

    layer = {(U.members, V.members): ()}
    seen = set(layer)
    for k in range(max_len + 1):
        for (A, B), w in layer.items():
            if bool(A) != bool(B):
                return False, w
        if k == max_len:
            break
        nxt = {}
        for (A, B), w in layer.items():
            for a, label in enumerate(lts.alphabet):
                pair = (step(A, a), step(B, a))
                if pair not in seen:
                    seen.add(pair)
                    nxt[pair] = w + (label,)
        if not nxt:
            break
        layer = nxt
    return True, None


def fuzzy_trace_value_oracle(f: FuzzyLts, t: Fuzzy, word):
    """Best ``tensor``-product of weights over all paths reading ``word``.

    Every path ``x0 x1 ... xn`` is enumerated explicitly; its value is
    ``t(x0)`` tensored with each step's weight, and paths are joined.
    """
    q: Quantale = f.quantale
    idx = [_label_index(f, a) for a in word]
    best = q.bottom
    for path in itertools.product(range(f.n), repeat=len(word) + 1):
        v = t.values[path[0]]
        for i, a in enumerate(idx):
            v = q.tensor(v, f.weight[path[i]][a][path[i + 1]])
        best = q.join(best, v)
    return best


def oracle_distance(system, t1, t2, max_len: int, kind):
    """Distance of ``t1`` and ``t2`` seen through all words shorter than ``max_len + 1``.

    Returns ``(value, word)`` where ``word`` is the first word attaining the
    value (``None`` if no word distinguishes at all).
    """
    if isinstance(system, Lts):
        tr1 = trace_set_oracle(system, t1, max_len)
        tr2 = trace_set_oracle(system, t2, max_len)
        for w in words(system.alphabet, max_len):
            if (w in tr1) != (w in tr2):
                return False, w
        return True, None
    if isinstance(system, ProbAutomaton):
        best, arg = Fraction(0), None
        for w in words(system.alphabet, max_len):
            diff = abs(word_payoff_oracle(system, t1, w) - word_payoff_oracle(system, t2, w))
            if diff > best:
                best, arg = diff, w
        return best, arg
    if isinstance(system, FuzzyLts):
        q = system.quantale
        acc, arg = q.top, None
        for w in words(system.alphabet, max_len):
            v = q.truth_distance(
                kind,
                fuzzy_trace_value_oracle(system, t1, w),
                fuzzy_trace_value_oracle(system, t2, w),
            )
            m = q.meet(acc, v)
            if m != acc:
                acc, arg = m, w
        return acc, arg
    raise OracleError(f"no linear-time oracle for {type(system).__name__}")

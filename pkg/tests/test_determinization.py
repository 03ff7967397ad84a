from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from coalgebraic_hm.determinization import det_step, reachable_closure, run_word
from coalgebraic_hm.harness import random_fuzzy, random_lts, random_pa
from coalgebraic_hm.systems import Dist, Fuzzy, Lts, Subset, parse_element, unit_element

F = Fraction


def test_union_by_hand():
    lts = Lts(("0", "1"), ("a",), ((frozenset({1}),), (frozenset({1}),)))
    step = det_step(lts, Subset(frozenset({0, 1})))
    assert step.successor(lts, "a") == Subset(frozenset({1}))
    assert step.observation is True
    assert det_step(lts, Subset(frozenset())).observation is False


def test_expectation(load):
    pa = load("pa.json")
    t = parse_element(pa, "{s0:1/2,s1:1/2}")
    step = det_step(pa, t)
    assert step.observation == F(1, 2)
    assert step.successor(pa, "a") == Dist.of({0: F(1, 4), 1: F(3, 4)})


def test_fuzzy_step(load):
    fz = load("fuzzy.json")
    step = det_step(fz, unit_element(fz, 0))
    assert step.successor(fz, "a").values == fz.weight[0][0]
    assert step.observation is None


def test_unit_steps_agree_with_coalgebra(load):
    for name in ("lts.json", "pa.json", "fuzzy.json"):
        system = load(name)
        for x in range(system.n):
            step = det_step(system, unit_element(system, x))
            for a, label in enumerate(system.alphabet):
                succ = step.successor(system, label)
                if isinstance(succ, Subset):
                    assert succ.members == system.succ[x][a]
                elif isinstance(succ, Dist):
                    assert succ == system.trans[x][a]
                else:
                    assert succ.values == system.weight[x][a]


def test_run_word(load):
    pa = load("pa.json")
    t = run_word(pa, unit_element(pa, 0), ["a", "a"])
    assert t == Dist.of({0: F(1, 4), 1: F(3, 4)})


def test_closure_exactness(load):
    lts = load("lts.json")
    g = reachable_closure(lts, [unit_element(lts, x) for x in range(lts.n)])
    assert g.exact and len(g.nodes) <= 2**lts.n
    absorbing = load("pa_absorbing.json")
    assert reachable_closure(absorbing, [unit_element(absorbing, 0)]).exact
    mixing = load("pa.json")
    g = reachable_closure(mixing, [unit_element(mixing, 0)], depth_cap=6)
    assert not g.exact
    # every reached distribution is new: 1/2^k on s0
    assert len(g.nodes) == 7


def test_graph_dump_format(load):
    pa = load("pa_absorbing.json")
    g = reachable_closure(pa, [unit_element(pa, 1)])
    lines = g.dump().splitlines()
    assert lines and all(len(line.split()) == 4 for line in lines)


@settings(max_examples=40, deadline=None)
@given(st.randoms(use_true_random=False))
def test_powerset_step_preserves_unions(rng):
    lts = random_lts(rng, 4)
    U = Subset(frozenset(x for x in range(4) if rng.random() < 0.5))
    V = Subset(frozenset(x for x in range(4) if rng.random() < 0.5))
    su, sv, suv = det_step(lts, U), det_step(lts, V), det_step(lts, Subset(U.members | V.members))
    for a in lts.alphabet:
        assert suv.successor(lts, a).members == su.successor(lts, a).members | sv.successor(lts, a).members


@settings(max_examples=40, deadline=None)
@given(st.randoms(use_true_random=False), st.fractions(0, 1, max_denominator=7))
def test_distribution_step_is_affine(rng, lam):
    pa = random_pa(rng, 3)
    p, q = Dist.of({0: F(1)}), Dist.of({1: F(1, 2), 2: F(1, 2)})
    mix = {}
    for x, w in p.weights:
        mix[x] = mix.get(x, 0) + lam * w
    for x, w in q.weights:
        mix[x] = mix.get(x, 0) + (1 - lam) * w
    m = Dist.of({x: w for x, w in mix.items() if w})
    sp, sq, sm = det_step(pa, p), det_step(pa, q), det_step(pa, m)
    assert sm.observation == lam * sp.observation + (1 - lam) * sq.observation
    for a in pa.alphabet:
        lhs = sm.successor(pa, a).as_dict()
        P, Q = sp.successor(pa, a).as_dict(), sq.successor(pa, a).as_dict()
        for y in range(3):
            assert lhs.get(y, 0) == lam * P.get(y, 0) + (1 - lam) * Q.get(y, 0)


@settings(max_examples=40, deadline=None)
@given(st.randoms(use_true_random=False))
def test_fuzzy_step_preserves_joins(rng):
    fz = random_fuzzy(rng, 3)
    q = fz.quantale
    U = Fuzzy(tuple(rng.choice([F(0), F(1, 2), F(1)]) for _ in range(3)))
    V = Fuzzy(tuple(rng.choice([F(0), F(1, 4), F(1)]) for _ in range(3)))
    J = Fuzzy(tuple(q.join(u, v) for u, v in zip(U.values, V.values)))
    for a in fz.alphabet:
        su, sv, sj = (det_step(fz, t).successor(fz, a).values for t in (U, V, J))
        assert sj == tuple(q.join(u, v) for u, v in zip(su, sv))

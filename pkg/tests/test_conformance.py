from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from coalgebraic_hm import conformance as cf
from coalgebraic_hm.conformance import Conformance, ConformanceError
from coalgebraic_hm.quantale import BOOL, INTERVAL, Kind

F = Fraction


def test_alpha_empty_is_top():
    d = cf.alpha([], INTERVAL, Kind.SYMMETRIC, 3)
    assert d == cf.top(INTERVAL, Kind.SYMMETRIC, 3)


def test_alpha_single_boolean_predicate_is_discrete():
    d = cf.alpha([(False, True)], BOOL, Kind.SYMMETRIC)
    assert d == cf.discrete(BOOL, Kind.SYMMETRIC, 2)


def test_alpha_interval_value():
    d = cf.alpha([(F(1, 5), F(7, 10))], INTERVAL, Kind.SYMMETRIC)
    assert d(0, 1) == F(1, 2)


def test_alpha_rejects_mixed_sizes():
    with pytest.raises(ConformanceError):
        cf.alpha([(True,), (True, False)], BOOL, Kind.SYMMETRIC)


def test_gamma_contains_examples():
    d = cf.alpha([(F(0), F(1, 2))], INTERVAL, Kind.SYMMETRIC)
    assert cf.gamma_contains(d, (F(1, 3), F(1, 3)))
    assert cf.gamma_contains(d, (F(0), F(1, 2)))
    assert not cf.gamma_contains(d, (F(0), F(9, 10)))
    with pytest.raises(ConformanceError):
        cf.gamma_contains(d, (F(0),))


def test_distance_row():
    d = cf.discrete(BOOL, Kind.SYMMETRIC, 3)
    assert cf.distance_row(d, 0) == (True, False, False)
    m = cf.alpha([(F(0), F(3, 10))], INTERVAL, Kind.SYMMETRIC)
    h = cf.distance_row(m, 0)
    assert h == (F(0), F(3, 10))
    assert INTERVAL.truth_distance(Kind.SYMMETRIC, h[0], h[1]) == F(3, 10)
    with pytest.raises(ConformanceError):
        cf.distance_row(m, 5)


def test_reindex():
    d = cf.alpha([(F(0), F(2, 5))], INTERVAL, Kind.SYMMETRIC)
    assert cf.reindex([0, 1], d) == d
    assert cf.reindex([1, 1, 1], d) == cf.top(INTERVAL, Kind.SYMMETRIC, 3)
    e = cf.reindex([0, 0, 1], d)
    assert e(0, 2) == F(2, 5) and e(0, 1) == 0
    with pytest.raises(ConformanceError):
        cf.reindex([0, 3], d)


def test_coclosure_examples():
    for n in range(1, 5):
        assert cf.coclosure_boolean(cf.discrete(BOOL, Kind.SYMMETRIC, n)) == cf.discrete(BOOL, Kind.SYMMETRIC, n)
        assert cf.coclosure_boolean(cf.top(BOOL, Kind.SYMMETRIC, n)) == cf.top(BOOL, Kind.SYMMETRIC, n)
    for d in cf.enumerate_equivalences(4):
        assert cf.coclosure_boolean(d) == d


def test_coclosure_refuses_large():
    with pytest.raises(ConformanceError):
        cf.coclosure_boolean(cf.top(BOOL, Kind.SYMMETRIC, 13))


def test_meet_and_leq():
    d1 = cf.from_partition([[0, 1], [2]], 3)
    d2 = cf.from_partition([[0], [1, 2]], 3)
    m = cf.meet(d1, d2)
    assert m == cf.discrete(BOOL, Kind.SYMMETRIC, 3)
    assert cf.leq(m, d1) and cf.leq(m, d2)
    assert cf.meet(d1, cf.top(BOOL, Kind.SYMMETRIC, 3)) == d1
    assert not cf.leq(d1, d2)


def test_validation_catches_broken_matrices():
    with pytest.raises(ConformanceError):
        Conformance.from_json({"quantale": "interval", "kind": "symmetric", "entries": [["0", "1/2"], ["1/3", "0"]]})
    with pytest.raises(ConformanceError):
        Conformance.from_json({"quantale": "interval", "kind": "directed", "entries": [["1/2", "0"], ["0", "0"]]})
    bad_triangle = Conformance(
        INTERVAL,
        Kind.SYMMETRIC,
        ((F(0), F(0), F(1)), (F(0), F(0), F(0)), (F(1), F(0), F(0))),
    )
    assert bad_triangle.violations()


def test_json_round_trip():
    d = cf.alpha([(F(0), F(1, 3), F(1))], INTERVAL, Kind.DIRECTED)
    assert Conformance.from_json(d.to_json()) == d


def test_enumerations_count():
    assert [sum(1 for _ in cf.enumerate_equivalences(n)) for n in range(1, 6)] == [1, 2, 5, 15, 52]
    # number of preorders on n labelled points
    assert [sum(1 for _ in cf.enumerate_preorders(n)) for n in range(1, 4)] == [1, 4, 29]


def test_partition_of_round_trip():
    d = cf.from_partition([[0, 2], [1]], 3)
    assert cf.partition_of(d) == [[0, 2], [1]]


preds = st.integers(1, 4).flatmap(
    lambda n: st.lists(
        st.lists(st.fractions(0, 1, max_denominator=6), min_size=n, max_size=n).map(tuple),
        max_size=4,
    ).map(lambda S: (n, S))
)


@given(preds, st.sampled_from(list(Kind)))
def test_alpha_is_pseudometric_and_antitone(nS, kind):
    n, S = nS
    a = cf.alpha(S, INTERVAL, kind, n)
    assert a.violations() == []
    if S:
        assert cf.leq(a, cf.alpha(S[:-1], INTERVAL, kind, n))
    for h in S:
        assert cf.gamma_contains(a, h)
    for y in range(n):
        assert cf.gamma_contains(a, cf.distance_row(a, y))


def test_mask_coclosure_matches_generic_alpha():
    for n in range(1, 5):
        for d in list(cf.enumerate_equivalences(n)) + list(cf.enumerate_preorders(min(n, 3))):
            generic = cf.alpha(cf.nonexpansive_boolean_predicates(d), BOOL, d.kind, d.n)
            assert cf.coclosure_boolean(d) == generic

from decimal import Decimal
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from coalgebraic_hm.quantale import (
    BOOL,
    INTERVAL,
    Kind,
    QuantaleError,
    format_rational,
    hom,
    leq,
    parse_rational,
    tensor,
    truth_distance,
)

unit_interval = st.fractions(min_value=0, max_value=1, max_denominator=50)


def test_parse_rational_forms():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational("0.1") == Fraction(1, 10)
    assert parse_rational(Decimal("0.125")) == Fraction(1, 8)
    assert parse_rational(2) == 2
    assert format_rational(Fraction(6, 8)) == "3/4"


@pytest.mark.parametrize("bad", [0.5, True, "1/0", "abc", Decimal("NaN"), "1e999999999999"])
def test_parse_rational_rejects(bad):
    with pytest.raises(QuantaleError):
        parse_rational(bad)


def test_interval_range_checked():
    with pytest.raises(QuantaleError):
        INTERVAL.check(Fraction(3, 2))
    with pytest.raises(QuantaleError):
        INTERVAL.parse("-1/2")


def test_order_reversal_is_internal():
    # 0 is the unit/top; larger reals are lower in the quantale order
    assert INTERVAL.top == INTERVAL.unit == 0
    assert INTERVAL.bottom == 1
    assert INTERVAL.leq(Fraction(1, 2), Fraction(1, 4))
    assert INTERVAL.join(Fraction(1, 2), Fraction(1, 4)) == Fraction(1, 4)
    assert INTERVAL.meet(Fraction(1, 2), Fraction(1, 4)) == Fraction(1, 2)
    assert INTERVAL.join_all([]) == 1 and INTERVAL.meet_all([]) == 0


def test_truncated_arithmetic():
    assert INTERVAL.tensor(Fraction(3, 4), Fraction(1, 2)) == 1
    assert INTERVAL.hom(Fraction(3, 4), Fraction(1, 2)) == 0
    assert INTERVAL.hom(Fraction(1, 4), Fraction(1, 2)) == Fraction(1, 4)


def test_truth_distance():
    a, b = Fraction(1, 5), Fraction(7, 10)
    assert INTERVAL.truth_distance(Kind.SYMMETRIC, a, b) == Fraction(1, 2)
    assert INTERVAL.truth_distance(Kind.DIRECTED, a, b) == Fraction(1, 2)
    assert INTERVAL.truth_distance(Kind.DIRECTED, b, a) == 0
    assert BOOL.truth_distance(Kind.DIRECTED, True, False) is False
    assert BOOL.truth_distance(Kind.DIRECTED, False, True) is True
    assert BOOL.truth_distance(Kind.SYMMETRIC, False, True) is False


def test_free_functions_dispatch_and_refuse_mixing():
    assert tensor(True, False) is False
    assert hom(Fraction(0), Fraction(1, 3)) == Fraction(1, 3)
    assert leq(Fraction(1), Fraction(0))
    assert truth_distance(Kind.SYMMETRIC, Fraction(0), Fraction(1)) == 1
    with pytest.raises(QuantaleError):
        tensor(True, Fraction(1, 2))


@given(unit_interval, unit_interval, unit_interval)
def test_adjunction(x, y, z):
    q = INTERVAL
    assert q.leq(q.tensor(x, y), z) == q.leq(x, q.hom(y, z))


@given(unit_interval, st.lists(unit_interval, max_size=5))
def test_tensor_distributes_over_joins(x, ys):
    q = INTERVAL
    assert q.tensor(x, q.join_all(ys)) == q.join_all(q.tensor(x, y) for y in ys)


@given(unit_interval)
def test_hom_identities(z):
    q = INTERVAL
    assert q.hom(q.unit, z) == z
    assert q.hom(z, q.unit) == q.unit


@given(unit_interval, unit_interval, unit_interval)
def test_symmetric_truth_distance_triangle(x, y, z):
    q = INTERVAL
    for kind in Kind:
        lhs = q.truth_distance(kind, x, z)
        assert q.leq(q.tensor(q.truth_distance(kind, x, y), q.truth_distance(kind, y, z)), lhs)

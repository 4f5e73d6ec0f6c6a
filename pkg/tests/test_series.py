import pytest
from hypothesis import given, settings, strategies as st

from dlcurve.ffield import make_field
from dlcurve.series import TruncatedSeries

F9 = make_field(3, 2)
series = st.lists(st.integers(0, 8), min_size=1, max_size=12).map(
    lambda cs: TruncatedSeries(F9, cs, 12))


def test_order_and_zero():
    s = TruncatedSeries(F9, [0, 0, 5], 6)
    assert s.order() == 2
    assert TruncatedSeries(F9, [], 6).order() is None


def test_inverse_needs_unit():
    with pytest.raises(ZeroDivisionError):
        TruncatedSeries.variable(F9, 5).inverse()


def test_geometric_series():
    s = TruncatedSeries(F9, [1, F9(-1).code], 8)  # 1 - t
    assert s.inverse().coeffs == [1] * 8


@settings(max_examples=60, deadline=None)
@given(series, series, series)
def test_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert (a - a).order() is None


@settings(max_examples=60, deadline=None)
@given(series, st.integers(0, 30))
def test_pow_matches_repeated_product(a, n):
    want = TruncatedSeries.constant(F9, 1, a.prec)
    for _ in range(n):
        want = want * a
    assert a ** n == want


@settings(max_examples=40, deadline=None)
@given(series)
def test_frobenius_power(a):
    assert a.frobenius_power(1) == a * a * a
    if a.coeffs[0]:
        assert a * a.inverse() == TruncatedSeries.constant(F9, 1, a.prec)

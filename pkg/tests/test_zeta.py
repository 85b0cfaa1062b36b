import pytest
from hypothesis import given, settings, strategies as st

from core.errors import InvalidInputError, WeilBoundError
from core.weierstrass import Curve, count_points
from core.zeta import (
    ZetaData,
    ZetaNumerator,
    count_extension,
    derive_numerator,
    extension_trace,
    genus_g_order,
    hasse_interval,
    kgroup_order,
    kgroup_order_mod,
    parse_surd,
    surd,
    trace,
)


def test_trace_of_table_rows(anomalous_f3, full_two_torsion_f5):
    z = trace(anomalous_f3)
    assert (z.N, z.a, z.D) == (1, 3, -3)
    assert z.surd == "(3+-sqrt-3)/2"
    z = trace(full_two_torsion_f5)
    assert (z.N, z.a) == (4, 2)
    assert z.surd == "1+-2sqrt-1"


@pytest.mark.parametrize(
    "a, q, text",
    [
        (3, 3, "(3+-sqrt-3)/2"),
        (1, 3, "(1+-sqrt-11)/2"),
        (2, 3, "1+-sqrt-2"),
        (-2, 3, "-1+-sqrt-2"),
        (0, 5, "+-sqrt-5"),
        (-2, 5, "-1+-2sqrt-1"),
        (-1, 7, "(-1+-3sqrt-3)/2"),
        (-2, 13, "-1+-2sqrt-3"),
    ],
)
def test_surd(a, q, text):
    assert surd(a, q) == text
    assert parse_surd(text) == (a, a * a - 4 * q)


@given(st.sampled_from([3, 5, 7, 11, 13, 9973]), st.data())
@settings(max_examples=200, deadline=None)
def test_surd_round_trip(q, data):
    lo, hi = hasse_interval(q)
    a = data.draw(st.integers(min_value=lo, max_value=hi))
    assert parse_surd(surd(a, q)) == (a, a * a - 4 * q)


def test_surd_rejects_real_roots():
    with pytest.raises(WeilBoundError):
        surd(4, 3)
    with pytest.raises(InvalidInputError):
        parse_surd("1+sqrt2")


def test_extension_trace():
    assert extension_trace(2, 5, 2) == -6
    assert extension_trace(3, 3, 3) == 0
    assert extension_trace(3, 3, 0) == 2
    assert extension_trace(3, 3, 1) == 3
    assert extension_trace(2, 5, 2, modulus=7) == 1


@given(st.integers(min_value=-6, max_value=6), st.integers(min_value=0, max_value=40))
@settings(max_examples=200, deadline=None)
def test_extension_trace_matches_recurrence(a, n):
    q = 11
    t = [2, a]
    for _ in range(n):
        t.append(a * t[-1] - q * t[-2])
    assert extension_trace(a, q, n) == t[n]
    assert extension_trace(a, q, n, modulus=1000003) == t[n] % 1000003


def test_count_extension_agrees_with_enumeration(anomalous_f3):
    c = Curve(5, 0, 4, 0)
    for n in (1, 2, 3):
        assert count_extension(c, n) == count_points(c, n)
    assert count_extension(anomalous_f3, 3) == 28


def test_kgroup_orders_of_first_row():
    orders = [kgroup_order(3, 3, 1, m) for m in range(1, 7)]
    assert orders == [19, 217, 2107, 19441, 176419, 1592137]
    assert kgroup_order(2, 5, 1, 1) == 116
    assert kgroup_order(-1, 7, 1, 1) == 351
    # the erratum cell of the second F_3 row
    assert kgroup_order(2, 3, 1, 4) == 19522


@given(st.integers(min_value=-6, max_value=6), st.integers(min_value=1, max_value=9),
       st.integers(min_value=1, max_value=4), st.integers(min_value=2, max_value=10 ** 9))
@settings(max_examples=200, deadline=None)
def test_kgroup_order_mod(a, n, m, modulus):
    assert kgroup_order_mod(a, 11, n, m, modulus) == kgroup_order(a, 11, n, m) % modulus


def test_kgroup_order_rejects_zero_index():
    with pytest.raises(InvalidInputError):
        kgroup_order(3, 3, 1, 0)


def test_zeta_numerator():
    P = ZetaNumerator.from_trace(3, 3)
    assert P.coeffs == (1, -3, 3)
    assert P.genus == 1
    assert str(P) == "1-3T+3T^2"
    assert genus_g_order(P, 3, 1) == 19
    with pytest.raises(InvalidInputError):
        ZetaNumerator(3, (1, -3, 4))


def test_product_of_genus_one_numerators_is_genus_two():
    P = ZetaNumerator.from_trace(2, 5) * ZetaNumerator.from_trace(-2, 5)
    assert P.genus == 2
    assert genus_g_order(P, 5, 1) == kgroup_order(2, 5, 1, 1) * kgroup_order(-2, 5, 1, 1)


def test_derive_numerator():
    # genus 1 from N_1 alone
    assert derive_numerator([4], 5, 1).coeffs == (1, -2, 5)
    # genus 2 product of traces 2 and -2 over F_5
    N1 = 5 + 1 - 0
    N2 = 25 + 1 - (extension_trace(2, 5, 2) + extension_trace(-2, 5, 2))
    P = derive_numerator([N1, N2], 5, 2)
    assert P == ZetaNumerator.from_trace(2, 5) * ZetaNumerator.from_trace(-2, 5)


def test_derive_numerator_weil_bound():
    with pytest.raises(WeilBoundError):
        derive_numerator([100], 5, 1)


def test_zeta_data_validation():
    with pytest.raises(WeilBoundError):
        ZetaData(q=3, N=0, a=4, D=4, surd="")
    with pytest.raises(InvalidInputError):
        ZetaData(q=3, N=2, a=3, D=-3, surd="")

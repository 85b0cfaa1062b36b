import pytest

from config.settings import TORSION_SETTINGS
from core.errors import InvalidInputError, SamplingBudgetExhausted
from core.weierstrass import Curve, enumerate_points, scalar_mul
from kgroups.torsion import discrete_log, l_power_order, span, torsion_subgroup


def test_full_two_torsion_over_base_field(full_two_torsion_f5):
    c = full_two_torsion_f5
    basis = torsion_subgroup(c, 1, 1, 2, 1)
    assert basis.is_full
    assert basis.rank == 2
    assert basis.order == 4
    assert set(span(c, basis)) == set(enumerate_points(c))


def test_level_above_sylow_is_not_full(full_two_torsion_f5):
    basis = torsion_subgroup(full_two_torsion_f5, 1, 1, 2, 2)
    assert (basis.j1, basis.j2) == (1, 1)
    assert not basis.is_full


def test_trivial_sylow(anomalous_f3):
    basis = torsion_subgroup(anomalous_f3, 1, 1, 2, 1)
    assert basis.rank == 0
    assert basis.P1.is_infinity


def test_cubic_splits_two_torsion(anomalous_f3):
    # x^3 - x - 1 is irreducible over F_3, so E[2] appears over F_27
    c = anomalous_f3
    basis = torsion_subgroup(c, 3, 1, 2, 1)
    assert basis.is_full
    for P in (basis.P1, basis.P2):
        assert scalar_mul(c, 2, P).is_infinity
        assert not P.is_infinity


def test_cyclic_sylow_of_order_four():
    # y^2 = x^3 + x + 2 over F_5: E(F_5) = Z/4
    c = Curve(5, 0, 1, 2)
    basis = torsion_subgroup(c, 1, 1, 2, 2)
    assert (basis.j1, basis.j2) == (2, 0)
    assert l_power_order(c, basis.P1, 2, 4) == 2


def test_same_seed_same_basis():
    c = Curve(13, 0, 0, 5)
    assert torsion_subgroup(c, 1, 1, 2, 2, seed=3) == torsion_subgroup(c, 1, 1, 2, 2, seed=3)


def test_discrete_log():
    c = Curve(13, 0, 0, 5)
    basis = torsion_subgroup(c, 1, 1, 2, 2)
    for k in range(4):
        target = scalar_mul(c, k, basis.P1)
        assert discrete_log(c, target, basis.P1, 2, 2) == k
    assert discrete_log(c, basis.P2, basis.P1, 2, 2) is None


def test_sampling_budget_exhausted_without_fallback(monkeypatch):
    monkeypatch.setitem(TORSION_SETTINGS, "exhaustive_bound", 1)
    with pytest.raises(SamplingBudgetExhausted):
        torsion_subgroup(Curve(13, 0, 0, 5), 1, 1, 2, 2, budget_factor=0)


def test_enumeration_fallback_after_budget():
    c = Curve(13, 0, 0, 5)
    basis = torsion_subgroup(c, 1, 1, 2, 2, budget_factor=0)
    assert basis.is_full


def test_rejects_characteristic():
    with pytest.raises(InvalidInputError):
        torsion_subgroup(Curve(5, 0, 1, 0), 1, 1, 5, 1)

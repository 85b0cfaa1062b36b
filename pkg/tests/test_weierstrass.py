import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from core.errors import (
    EnumerationBoundError,
    FieldMismatchError,
    InvalidInputError,
    NonResidueError,
    SingularCurveError,
)
from core.rng import task_rng
from core.weierstrass import (
    INFINITY,
    Curve,
    add,
    count_points,
    enumerate_points,
    frobenius,
    negate,
    point_order,
    quadratic_twist,
    random_point,
    rational_structure,
    scalar_mul,
)
from core.zeta import trace


def test_parse_reduces_signed_coefficients():
    c = Curve.parse("3:0:-1:-1")
    assert (c.a2, c.a4, c.a6) == (0, 2, 2)
    assert c.spec == "3:0:2:2"
    assert c.equation() == "y^2=x^3-x-1"
    assert str(c) == "y^2=x^3-x-1 over F_3"


@pytest.mark.parametrize("spec", ["3:0:0", "3:a:0:0", "4:0:1:1", "2:0:1:1"])
def test_parse_rejects_bad_specs(spec):
    with pytest.raises(InvalidInputError):
        Curve.parse(spec)


def test_singular_curve():
    with pytest.raises(SingularCurveError):
        Curve(3, 0, 0, 0)
    # x^3 + x^2 = x^2 (x + 1) has a node
    with pytest.raises(SingularCurveError):
        Curve(5, 1, 0, 0)


@pytest.mark.parametrize(
    "text, p, expected",
    [
        ("y^2=x^3-x-1", 3, Curve(3, 0, 2, 2)),
        ("y^2=x^3-x^2-1", 3, Curve(3, 2, 0, 2)),
        ("y^2=x^3+8x-1", 11, Curve(11, 0, 8, 10)),
        ("y^2 = x^3 + 2x^2 + 5", 13, Curve(13, 2, 0, 5)),
    ],
)
def test_from_equation(text, p, expected):
    assert Curve.from_equation(text, p) == expected


@pytest.mark.parametrize("text", ["y^2=x^3+4x=8", "y^3=x^3+x", "y^2=x^3+"])
def test_from_equation_malformed(text):
    with pytest.raises(InvalidInputError):
        Curve.from_equation(text, 11)


def test_point_counts(anomalous_f3, full_two_torsion_f5):
    assert count_points(anomalous_f3) == 1
    assert count_points(anomalous_f3, 2) == 7
    assert count_points(full_two_torsion_f5) == 4
    assert enumerate_points(anomalous_f3) == [INFINITY]
    with pytest.raises(EnumerationBoundError):
        count_points(anomalous_f3, 3, bound=10)


def test_rational_structure(anomalous_f3, full_two_torsion_f5):
    assert rational_structure(anomalous_f3).factors == ()
    assert rational_structure(full_two_torsion_f5).factors == (2, 2)
    assert rational_structure(Curve(5, 0, 4, 0)).factors == (2, 4)


def test_group_law_on_f13():
    c = Curve(13, 0, 0, 5)
    points = enumerate_points(c)
    n = len(points)
    assert n == 16
    for P in points:
        assert c.contains(P)
        assert scalar_mul(c, n, P).is_infinity
        assert add(c, P, negate(c, P)).is_infinity
        assert scalar_mul(c, -3, P) == negate(c, scalar_mul(c, 3, P))
    assert max(point_order(c, P, n) for P in points) == 4


@given(st.data())
@settings(max_examples=60, deadline=None)
def test_group_law_associative_over_f9(data):
    c = Curve(3, 2, 0, 2)
    points = enumerate_points(c, 2)
    P, Q, R = (data.draw(st.sampled_from(points)) for _ in range(3))
    assert add(c, add(c, P, Q), R) == add(c, P, add(c, Q, R))
    assert add(c, P, Q) == add(c, Q, P)


def test_points_over_different_fields_do_not_add(full_two_torsion_f5):
    c = full_two_torsion_f5
    P = enumerate_points(c)[1]
    Q = enumerate_points(c, 2)[1]
    with pytest.raises(FieldMismatchError):
        add(c, P, Q)


def test_frobenius_fixes_rational_points_only():
    c = Curve(3, 2, 0, 2)
    fixed = [P for P in enumerate_points(c, 2) if frobenius(P) == P]
    assert len(fixed) == count_points(c)
    for P in fixed[1:]:
        assert P.x.coeffs[1] == 0 and P.y.coeffs[1] == 0


def test_random_point_is_deterministic():
    c = Curve(7, 0, 0, 2)
    first = random_point(c, 2, task_rng(0, "test"))
    again = random_point(c, 2, task_rng(0, "test"))
    assert first == again
    assert c.contains(first)


def test_random_point_without_affine_points(anomalous_f3):
    assert random_point(anomalous_f3, 1, np.random.default_rng(1)).is_infinity


@pytest.mark.parametrize("spec", ["5:0:1:0", "7:0:0:2", "11:0:8:10", "13:0:0:5"])
def test_twist_negates_trace(spec):
    c = Curve.parse(spec)
    d = next(x for x in range(2, c.p) if pow(x, (c.p - 1) // 2, c.p) == c.p - 1)
    assert trace(quadratic_twist(c, d)).a == -trace(c).a


def test_twist_by_square_rejected(full_two_torsion_f5):
    with pytest.raises(NonResidueError):
        quadratic_twist(full_two_torsion_f5, 4)

"""Exact circle arithmetic, parsing, and the single float boundary."""

import cmath
from fractions import Fraction

import pytest

from skewtorus.circle import Angle, BasisDecl, ZERO, angle_to_unit, format_point, parse_point
from skewtorus.errors import ConfigurationError, ParseError

F = Fraction


def test_parse_and_format_round_trip():
    for text in [
        "1/3 + 1/2*b1",
        "-1/2*b1",
        "0",
        "5/6",
        "1/720 + 3*b1 - 2/7*b2",
        "- 1/4 - b1",
    ]:
        a = Angle.parse(text)
        assert Angle.parse(str(a)) == a


def test_parse_frozen_forms():
    a = Angle.parse("1/3 + 1/2*b1")
    assert a.rat == F(1, 3)
    assert a.coeffs == (("b1", F(1, 2)),)
    assert str(a) == "1/3 + 1/2*b1"

    assert Angle.parse("7/3").rat == F(1, 3)
    assert Angle.parse("b2 - b2") == ZERO
    assert str(ZERO) == "0"

    merged = Angle.parse("2*b1 + 1/6 + 1*b1")
    assert merged == Angle(F(1, 6), {"b1": 3})

    # bare symbol means coefficient one
    assert Angle.parse("b2") == Angle(0, {"b2": 1})
    assert str(Angle.parse("-1*b1")) == "-1*b1"


def test_parse_error_offsets():
    cases = [
        ("", "empty angle", 0),
        ("1//2", "expected '+' or '-'", 1),
        ("1 b1", "expected '+' or '-'", 2),
        ("1/0*b1", "zero denominator", 2),
        ("1 + ?", "expected rational or symbol", 4),
    ]
    for text, fragment, offset in cases:
        with pytest.raises(ParseError) as info:
            Angle.parse(text)
        assert fragment in str(info.value)
        assert info.value.offset == offset
        assert f"(at offset {offset})" in str(info.value)


def test_point_parse_offsets_are_global():
    point = parse_point("1/2, 3*b1")
    assert point == (Angle(F(1, 2)), Angle(0, {"b1": 3}))
    assert format_point(point) == "1/2, 3*b1"

    with pytest.raises(ParseError) as info:
        parse_point("0, 1 + ?")
    assert info.value.offset == 7


def test_group_laws_and_normalization():
    a = Angle(F(3, 4), {"b1": F(1, 2)})
    b = Angle(F(1, 2), {"b1": F(-1, 2), "b2": 2})
    assert a + b == Angle(F(1, 4), {"b2": 2})
    assert a - a == ZERO
    assert -(a + b) == (-a) + (-b)
    assert Angle(F(9, 4)) == Angle(F(1, 4))
    assert Angle(F(-1, 4)) == Angle(F(3, 4))
    # coefficients never reduce mod 1, only the rational part does
    assert Angle(0, {"b1": F(5, 4)}).coeff("b1") == F(5, 4)


def test_integer_scaling_only():
    a = Angle(F(1, 6), {"b1": F(2, 3)})
    assert 5 * a == Angle(F(5, 6), {"b1": F(10, 3)})
    assert a * (-2) == Angle(F(2, 3), {"b1": F(-4, 3)})
    assert 0 * a == ZERO
    with pytest.raises(TypeError):
        F(1, 2) * a  # rational scaling is ill-defined on torsion


def test_torsion_predicates():
    assert Angle(F(1, 6)).torsion_order() == 6
    assert ZERO.torsion_order() == 1
    assert Angle(0, {"b1": 1}).torsion_order() is None
    assert Angle(F(1, 2)).is_torsion
    assert not Angle(F(1, 2), {"b2": F(1, 7)}).is_torsion
    assert Angle(F(1, 2), {"b2": F(1, 7)}).denominators() == [2, 7]


def test_angle_is_hashable_value_object():
    a = Angle(F(1, 3), {"b1": 2})
    b = Angle(F(1, 3), [("b1", 1), ("b1", 1)])
    assert a == b and hash(a) == hash(b)
    assert len({a, b}) == 1
    with pytest.raises(AttributeError):
        a.rat = F(0)


@pytest.fixture()
def basis():
    return BasisDecl.from_decimals(
        {
            "b1": "0.4142135623730950488016887242096980785697",
            "b2": "0.7320508075688772935274463415058723669428",
        }
    )


def test_unit_circle_frozen_values(basis):
    assert angle_to_unit(ZERO, basis) == complex(1.0, 0.0)
    assert abs(angle_to_unit(Angle(F(1, 4)), basis) - 1j) < 1e-15
    assert abs(angle_to_unit(Angle(F(1, 2)), basis) + 1.0) < 1e-15
    third = angle_to_unit(Angle(F(1, 3)), basis)
    assert abs(third - cmath.exp(2j * cmath.pi / 3)) < 1e-15


def test_unit_circle_matches_exact_phase(basis):
    # oracle: exact rational phase, folded into [0, 1), exponentiated
    samples = [
        Angle(F(1, 720), {"b1": 3}),
        Angle(F(5, 7), {"b1": F(-2, 3), "b2": F(1, 2)}),
        Angle(0, {"b2": 41}),
        Angle(F(699, 720)),
    ]
    for a in samples:
        theta = a.rat + sum(c * basis.value_of(s) for s, c in a.coeffs)
        theta %= 1
        want = cmath.exp(2j * cmath.pi * (theta.numerator / theta.denominator))
        got = angle_to_unit(a, basis)
        assert abs(got - want) < 1e-15
        assert abs(abs(got) - 1.0) < 1e-15


def test_unit_circle_is_homomorphism(basis):
    a = Angle(F(1, 6), {"b1": F(3, 5)})
    b = Angle(F(3, 4), {"b2": F(-1, 3)})
    lhs = angle_to_unit(a + b, basis)
    rhs = angle_to_unit(a, basis) * angle_to_unit(b, basis)
    assert abs(lhs - rhs) < 1e-12


def test_basis_validation():
    with pytest.raises(ConfigurationError):
        BasisDecl(("b1", "b1"), (F(1, 3), F(1, 4)))
    with pytest.raises(ConfigurationError):
        BasisDecl(("2bad",), (F(1, 3),))
    with pytest.raises(ConfigurationError):
        BasisDecl(("b1",), (F(0),))
    with pytest.raises(ConfigurationError):
        BasisDecl(("b1",), (F(7, 5),))
    with pytest.raises(ConfigurationError):
        BasisDecl.from_decimals({"b1": "not a number"})
    decl = BasisDecl(("b1",), (F(2, 5),))
    assert decl.value_of("b1") == F(2, 5)
    with pytest.raises(ConfigurationError):
        decl.index_of("b9")

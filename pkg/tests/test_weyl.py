"""Oscillatory averages: exact phase streams, periods, predicted limits.

The oracle for periodic polynomials is a direct complex-exponential sum
over one period with cmath; the oracle for phase exactness evaluates the
polynomial symbolically and projects each value separately.
"""

import cmath
from fractions import Fraction

import pytest

from skewtorus.circle import Angle, BasisDecl, ZERO, angle_to_unit
from skewtorus.dynamics import BasicSystem, CharacterIndex, PolyAngle
from skewtorus.errors import ConfigurationError
from skewtorus.weyl import (
    WeylReport,
    equidistribution_report,
    equidistribution_target,
    minimal_period,
    unique_ergodicity_check,
    weyl_average,
)

F = Fraction

BASIS = BasisDecl.from_decimals(
    {
        "b1": "0.4142135623730950488016887242096980785697",
        "b2": "0.7320508075688772935274463415058723669428",
    }
)
B1 = Angle(0, {"b1": 1})


def quad(c: Fraction) -> PolyAngle:
    return PolyAngle([ZERO, ZERO, Angle(c)])


def test_minimal_period_frozen():
    assert minimal_period(quad(F(1, 3))) == 3
    assert minimal_period(quad(F(1, 5))) == 5
    assert minimal_period(PolyAngle([ZERO, Angle(F(1, 2))])) == 2
    assert minimal_period(PolyAngle([Angle(F(2, 7))])) == 1
    assert minimal_period(PolyAngle([ZERO, Angle(F(1, 2)), Angle(F(1, 2))])) == 4
    assert minimal_period(PolyAngle([ZERO, ZERO, B1])) is None
    # irrational constant term does not spoil periodicity
    assert minimal_period(PolyAngle([B1, Angle(F(1, 3))])) == 3


def test_minimal_period_is_a_true_period():
    for p in [quad(F(1, 3)), PolyAngle([Angle(F(1, 7)), Angle(F(1, 2)), Angle(F(2, 3))])]:
        t = minimal_period(p)
        assert p.shift(t) == p
        for s in range(1, t):
            assert p.shift(s) != p


def test_target_frozen_cube_root():
    # period 3 orbit 0, 1/3, 0 of the quadratic with coefficient 1/3:
    # values at n = 1, 2, 3 are 0, 1/3, 0
    want = (2 + cmath.exp(2j * cmath.pi / 3)) / 3
    got = equidistribution_target(quad(F(1, 3)), BASIS)
    assert abs(got - want) < 1e-15


def test_target_cases():
    assert equidistribution_target(PolyAngle([ZERO, ZERO, B1]), BASIS) == 0j
    assert equidistribution_target(PolyAngle([ZERO, Angle(F(1, 2))]), BASIS) == 0j
    const = PolyAngle([Angle(F(1, 4))])
    assert abs(equidistribution_target(const, BASIS) - 1j) < 1e-15

    # irrational constant on a periodic polynomial factors out of the mean
    mixed = PolyAngle([B1, ZERO, Angle(F(1, 3))])
    factored = angle_to_unit(B1, BASIS) * equidistribution_target(
        quad(F(1, 3)), BASIS
    )
    assert abs(equidistribution_target(mixed, BASIS) - factored) < 1e-14


def test_rational_average_is_exact_at_period_multiples():
    p = quad(F(1, 3))
    target = equidistribution_target(p, BASIS)
    for N in (3, 999, 3000):
        assert abs(weyl_average(p, N, 0, BASIS) - target) < 1e-10


def test_phase_stream_matches_pointwise_projection():
    # oracle: evaluate the polynomial exactly, project each term alone
    p = PolyAngle([Angle(F(1, 7)), B1, Angle(F(3, 8), {"b2": F(-2, 5)})])
    for N, shift in [(50, 0), (33, 10**9), (20, -7)]:
        direct = sum(
            angle_to_unit(p.evaluate(n + shift), BASIS) for n in range(1, N + 1)
        )
        got = weyl_average(p, N, shift, BASIS)
        assert abs(got - direct / N) < 1e-13


def test_bit_determinism_and_huge_shifts():
    p = PolyAngle([ZERO, ZERO, B1])
    a = weyl_average(p, 5000, 10**12, BASIS)
    b = weyl_average(p, 5000, 10**12, BASIS)
    assert a == b  # identical floats, not merely close

    # quadratic irrational averages are already small at modest N
    assert abs(weyl_average(p, 2000, 0, BASIS)) < 0.05


def test_shift_consistency_is_bitwise():
    p = PolyAngle([Angle(F(1, 6)), B1, Angle(0, {"b2": F(1, 3)})])
    assert weyl_average(p, 400, 123456789, BASIS) == weyl_average(
        p.shift(123456789), 400, 0, BASIS
    )


def test_report_round_trip_and_csv():
    p = quad(F(1, 3))
    rep = equidistribution_report(p, 999, [0, 1000], 1e-6, BASIS)
    assert isinstance(rep, WeylReport)
    assert rep.passed
    assert rep.max_abs < 1e-10

    d = rep.to_dict()
    assert d["N"] == 999
    assert d["pass"] is True
    assert [r["k"] for r in d["rows"]] == [0, 1000]
    assert all(abs(r["abs"]) < 1e-10 for r in d["rows"])

    csv = rep.to_csv()
    lines = csv.strip().split("\n")
    assert lines[0] == "N,k,re,im,abs"
    assert len(lines) == 3
    assert lines[1].startswith("999,0,")

    with pytest.raises(ConfigurationError):
        equidistribution_report(p, 10, [0], 0.0, BASIS)
    with pytest.raises(ValueError):
        weyl_average(p, 0, 0, BASIS)


def test_failing_tolerance_is_reported_not_raised():
    p = PolyAngle([ZERO, ZERO, B1])
    rep = equidistribution_report(p, 50, [0], 1e-9, BASIS)
    assert not rep.passed
    assert rep.max_abs > 1e-9


def test_orbit_check_irrational_base():
    sys = BasicSystem(2, B1)
    rep = unique_ergodicity_check(
        sys, CharacterIndex.basis(2), (ZERO, ZERO), 4000, [0, 10**6], 0.05, BASIS
    )
    assert rep.target == 0j
    assert rep.passed


def test_orbit_check_torsion_base_frozen():
    # rotation by 1/5 from the origin: coordinate 2 runs through the
    # quadratic with coefficient 1/5, period 5, orbit values
    # 0, 1/5, 3/5, 1/5, 0 at n = 1..5
    sys = BasicSystem(2, Angle(F(1, 5)))
    want = (
        2
        + 2 * cmath.exp(2j * cmath.pi / 5)
        + cmath.exp(2j * cmath.pi * 3 / 5)
    ) / 5
    rep = unique_ergodicity_check(
        sys, CharacterIndex.basis(2), (ZERO, ZERO), 1000, [0], 1e-6, BASIS
    )
    assert abs(rep.target - want) < 1e-15
    assert rep.passed
    assert not sys.minimal_base

"""Weyl-sum equidistribution checks for angle-valued polynomials.

weyl_average computes (1/N) sum_{n=1}^{N} e(p(n + k)) for a polynomial
p in the binomial basis, a sample count N, and a shift k that may be
astronomically large.  Two contracts shape the implementation:

Exact phases.  Substituting the declared basis values turns each
coefficient into an exact rational; over the common denominator D the
phase of p at successive arguments is advanced with an integer
difference table mod D (binomial-basis polynomials step by adding the
next-higher difference), so every phase handed to cos/sin is a single
correctly-rounded double of the true rational phase; huge shifts cost
one exact binomial evaluation up front and no precision.

Deterministic reduction.  Samples are accumulated in fixed chunks of
4096 with pairwise (tree) summation inside each chunk and across chunk
sums.  The tree shape depends only on N, never on scheduling, so
results are bit-identical run to run; a shifted start changes phases,
not the tree.

The limit predicted for N -> infinity: 0 whenever some nonconstant
coefficient has an irrational part, and likewise for degree-1 rational
(non-integer) polynomials; otherwise the orbit of phases is periodic
and the target is the exact average over one minimal period.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, lcm
from typing import Sequence

from .circle import Angle, BasisDecl, angle_to_unit
from .combinatorics import binom
from .dynamics import BasicSystem, CharacterIndex, PolyAngle, orbit_polynomial
from .errors import ConfigurationError

_CHUNK = 4096
_TWO_PI = 2.0 * math.pi


def _coefficient_values(poly: PolyAngle, basis: BasisDecl) -> list[Fraction]:
    """Exact rational value of each coefficient under the declared basis."""
    vals = []
    for c in poly.coeffs:
        v = c.rat
        for sym, q in c.coeffs:
            v += q * basis.value_of(sym)
        vals.append(v)
    return vals


class _PhaseStream:
    """Integer difference table yielding phases of p(start), p(start+1), ...

    Row j holds D * (Delta^j p)(current) mod D; advancing adds row j+1
    into row j, the binomial-basis recurrence.
    """

    __slots__ = ("den", "table")

    def __init__(self, poly: PolyAngle, basis: BasisDecl, start: int) -> None:
        vals = _coefficient_values(poly, basis)
        den = 1
        for v in vals:
            den = lcm(den, v.denominator)
        ints = [int(v * den) for v in vals]
        d = len(ints) - 1
        # (Delta^j p)(start) = sum_{i >= j} C_i * binom(start, i - j)
        self.den = den
        self.table = [
            sum(ints[i] * binom(start, i - j) for i in range(j, d + 1)) % den
            for j in range(d + 1)
        ]

    def next_phase(self) -> float:
        w = self.table
        theta = w[0] / self.den
        for j in range(len(w) - 1):
            w[j] = (w[j] + w[j + 1]) % self.den
        return theta


def _pairwise(vals: Sequence[complex], lo: int, hi: int) -> complex:
    n = hi - lo
    if n <= 8:
        s = 0j
        for i in range(lo, hi):
            s += vals[i]
        return s
    mid = lo + n // 2
    return _pairwise(vals, lo, mid) + _pairwise(vals, mid, hi)


def weyl_average(
    poly: PolyAngle, N: int, shift: int, basis: BasisDecl
) -> complex:
    """(1/N) sum_{n=1}^{N} e(p(n + shift)), bit-deterministic."""
    if N < 1:
        raise ValueError(f"sample count must be >= 1, got {N}")
    stream = _PhaseStream(poly, basis, shift + 1)
    chunk: list[complex] = []
    sums: list[complex] = []
    for _ in range(N):
        t = _TWO_PI * stream.next_phase()
        chunk.append(complex(math.cos(t), math.sin(t)))
        if len(chunk) == _CHUNK:
            sums.append(_pairwise(chunk, 0, _CHUNK))
            chunk.clear()
    if chunk:
        sums.append(_pairwise(chunk, 0, len(chunk)))
    return _pairwise(sums, 0, len(sums)) / N


def _divisors(n: int) -> list[int]:
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i != n // i:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def minimal_period(poly: PolyAngle) -> int | None:
    """Least t >= 1 with p(n + t) == p(n) identically, None if aperiodic.

    Periodic exactly when every nonconstant coefficient is rational;
    the period then divides Q * d! for Q the lcm of those denominators.
    """
    if poly.degree == 0:
        return 1
    if any(c.coeffs for c in poly.coeffs[1:]):
        return None
    Q = 1
    for c in poly.coeffs[1:]:
        Q = lcm(Q, c.rat.denominator)
    bound = Q * factorial(poly.degree)
    for t in _divisors(bound):
        if poly.shift(t) == poly:
            return t
    raise AssertionError("period bound violated")  # unreachable


def equidistribution_target(poly: PolyAngle, basis: BasisDecl) -> complex:
    """Predicted limit of the Weyl averages as N grows."""
    if poly.degree == 0:
        return angle_to_unit(poly.coeffs[0], basis)
    if any(c.coeffs for c in poly.coeffs[1:]):
        return 0j  # some nonconstant coefficient has an irrational part
    if poly.degree == 1:
        return 0j  # nonzero non-integer rational rotation averages out
    t = minimal_period(poly)
    s = 0j
    for n in range(1, t + 1):
        s += angle_to_unit(poly.evaluate(n), basis)
    return s / t


@dataclass(frozen=True)
class WeylReport:
    """Averages at several shifts against the predicted target."""

    N: int
    shifts: tuple[int, ...]
    averages: tuple[complex, ...]
    target: complex
    tol: float

    @property
    def max_abs(self) -> float:
        return max(
            (abs(a - self.target) for a in self.averages), default=0.0
        )

    @property
    def passed(self) -> bool:
        return self.max_abs < self.tol

    def rows(self) -> list[dict]:
        out = []
        for k, a in zip(self.shifts, self.averages):
            out.append(
                {
                    "N": self.N,
                    "k": k,
                    "re": a.real,
                    "im": a.imag,
                    "abs": abs(a - self.target),
                }
            )
        return out

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "tol": self.tol,
            "target": {"re": self.target.real, "im": self.target.imag},
            "max_abs": self.max_abs,
            "pass": self.passed,
            "rows": self.rows(),
        }

    def to_csv(self) -> str:
        lines = ["N,k,re,im,abs"]
        for r in self.rows():
            lines.append(
                f"{r['N']},{r['k']},{r['re']!r},{r['im']!r},{r['abs']!r}"
            )
        return "\n".join(lines) + "\n"


def equidistribution_report(
    poly: PolyAngle,
    N: int,
    shifts: Sequence[int],
    tol: float,
    basis: BasisDecl,
) -> WeylReport:
    if tol <= 0:
        raise ConfigurationError(f"tolerance must be positive, got {tol}")
    target = equidistribution_target(poly, basis)
    averages = tuple(weyl_average(poly, N, k, basis) for k in shifts)
    return WeylReport(N, tuple(shifts), averages, target, tol)


def unique_ergodicity_check(
    sys: BasicSystem,
    v: CharacterIndex,
    x: Sequence[Angle],
    N: int,
    shifts: Sequence[int],
    tol: float,
    basis: BasisDecl,
) -> WeylReport:
    """Weyl report for the character v along the orbit of x.

    For non-torsion x0 and nontrivial v the target is 0 (the headline
    unique-ergodicity regime); torsion x0 gives periodic orbits and an
    exact periodic mean, which the report checks just as strictly.
    """
    poly = orbit_polynomial(sys, v, x)
    return equidistribution_report(poly, N, shifts, tol, basis)

"""Exact circle-group arithmetic over a declared irrational basis.

An :class:`Angle` represents an element of R/Z of the form

    rat + sum_i c_i * b_i   (mod 1)

with ``rat`` and every coefficient ``c_i`` rational, and the b_i drawn
from a finite list of declared irrational basis symbols.  The symbols
together with 1 are assumed rationally independent (a modeling
assumption recorded with the basis declaration, never checked), so the
normal form with rat in [0, 1) is unique and equality is decided
componentwise.  Only the rational part reduces mod 1; the coefficients
live in Q and carry no relations.

Numeric values of the symbols enter through :func:`angle_to_unit`
alone.  No equality, membership, or group decision consults a float.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .errors import ConfigurationError, ParseError

RationalLike = Union[int, Fraction]
CoeffsLike = Union[Mapping[str, RationalLike], Iterable[tuple[str, RationalLike]]]

_SYMBOL_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUMBER_RE = re.compile(r"(\d+)(?:\s*/\s*(\d+))?")


@dataclass(frozen=True)
class BasisDecl:
    """Ordered declaration of irrational basis symbols with numeric values.

    Values are exact rationals read from decimal literals; they are used
    only when projecting to the unit circle.  Together with 1 they are
    assumed rationally independent.
    """

    symbols: tuple[str, ...]
    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.symbols) != len(set(self.symbols)):
            raise ConfigurationError(f"duplicate basis symbols in {self.symbols}")
        for name in self.symbols:
            if not _SYMBOL_RE.fullmatch(name):
                raise ConfigurationError(f"invalid basis symbol name {name!r}")
        if len(self.values) != len(self.symbols):
            raise ConfigurationError("basis symbols and values differ in length")
        for name, value in zip(self.symbols, self.values):
            if not 0 < value < 1:
                raise ConfigurationError(
                    f"basis value for {name} must lie in (0, 1), got {value}"
                )

    @classmethod
    def from_decimals(cls, decls: Mapping[str, str]) -> "BasisDecl":
        values = []
        for name, text in decls.items():
            try:
                values.append(Fraction(text))
            except (ValueError, ZeroDivisionError) as exc:
                raise ConfigurationError(
                    f"basis value for {name} is not a decimal literal: {text!r}"
                ) from exc
        return cls(tuple(decls), tuple(values))

    def index_of(self, symbol: str) -> int:
        try:
            return self.symbols.index(symbol)
        except ValueError:
            raise ConfigurationError(f"unknown basis symbol {symbol!r}") from None

    def value_of(self, symbol: str) -> Fraction:
        return self.values[self.index_of(symbol)]


class Angle:
    """Immutable exact circle element, written additively."""

    __slots__ = ("rat", "coeffs")

    rat: Fraction
    coeffs: tuple[tuple[str, Fraction], ...]

    def __init__(self, rat: RationalLike = 0, coeffs: CoeffsLike = ()) -> None:
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        merged: dict[str, Fraction] = {}
        for sym, c in items:
            c = Fraction(c)
            if c:
                acc = merged.get(sym, Fraction(0)) + c
                if acc:
                    merged[sym] = acc
                elif sym in merged:
                    del merged[sym]
        object.__setattr__(self, "rat", Fraction(rat) % 1)
        object.__setattr__(self, "coeffs", tuple(sorted(merged.items())))

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("Angle is immutable")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Angle):
            return NotImplemented
        return self.rat == other.rat and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.rat, self.coeffs))

    def __bool__(self) -> bool:
        return bool(self.rat) or bool(self.coeffs)

    def __add__(self, other: "Angle") -> "Angle":
        if not isinstance(other, Angle):
            return NotImplemented
        return Angle(self.rat + other.rat, list(self.coeffs) + list(other.coeffs))

    def __neg__(self) -> "Angle":
        return Angle(-self.rat, [(s, -c) for s, c in self.coeffs])

    def __sub__(self, other: "Angle") -> "Angle":
        if not isinstance(other, Angle):
            return NotImplemented
        return self + (-other)

    def __rmul__(self, n: int) -> "Angle":
        # Z-module structure only; rational scaling is ill-defined on torsion
        if not isinstance(n, int):
            return NotImplemented
        return Angle(n * self.rat, [(s, n * c) for s, c in self.coeffs])

    __mul__ = __rmul__

    def coeff(self, symbol: str) -> Fraction:
        for s, c in self.coeffs:
            if s == symbol:
                return c
        return Fraction(0)

    @property
    def is_torsion(self) -> bool:
        return not self.coeffs

    def torsion_order(self) -> int | None:
        """Order in the circle group, or None for non-torsion elements."""
        if self.coeffs:
            return None
        return self.rat.denominator

    def denominators(self) -> list[int]:
        return [self.rat.denominator, *(c.denominator for _, c in self.coeffs)]

    def __str__(self) -> str:
        parts: list[str] = []
        if self.rat or not self.coeffs:
            parts.append(str(self.rat))
        for sym, c in self.coeffs:
            body = f"{abs(c)}*{sym}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Angle({str(self)!r})"

    @classmethod
    def parse(cls, text: str, base_offset: int = 0) -> "Angle":
        return _parse_angle(text, base_offset)


ZERO = Angle()


def _skip_ws(text: str, pos: int) -> int:
    while pos < len(text) and text[pos] in " \t":
        pos += 1
    return pos


def _parse_term(
    text: str, pos: int, base: int
) -> tuple[Fraction, str | None, int]:
    """One term: `p`, `p/q`, `p/q*sym`, or bare `sym`."""
    n = len(text)
    if pos >= n:
        raise ParseError("expected a term", base + pos)
    m = _NUMBER_RE.match(text, pos)
    if m:
        num = int(m.group(1))
        den = 1
        if m.group(2) is not None:
            den = int(m.group(2))
            if den == 0:
                raise ParseError("zero denominator", base + m.start(2))
        pos = m.end()
        after = _skip_ws(text, pos)
        if after < n and text[after] == "*":
            pos = _skip_ws(text, after + 1)
            sm = _SYMBOL_RE.match(text, pos)
            if not sm:
                raise ParseError("expected basis symbol after '*'", base + pos)
            return Fraction(num, den), sm.group(), sm.end()
        return Fraction(num, den), None, pos
    sm = _SYMBOL_RE.match(text, pos)
    if sm:
        return Fraction(1), sm.group(), sm.end()
    raise ParseError(
        f"expected rational or symbol, found {text[pos]!r}", base + pos
    )


def _parse_angle(text: str, base: int = 0) -> Angle:
    rat = Fraction(0)
    coeffs: dict[str, Fraction] = {}
    pos = _skip_ws(text, 0)
    if pos == len(text):
        raise ParseError("empty angle", base + pos)
    sign = 1
    if text[pos] in "+-":
        sign = -1 if text[pos] == "-" else 1
        pos = _skip_ws(text, pos + 1)
    while True:
        value, symbol, pos = _parse_term(text, pos, base)
        if symbol is None:
            rat += sign * value
        else:
            coeffs[symbol] = coeffs.get(symbol, Fraction(0)) + sign * value
        pos = _skip_ws(text, pos)
        if pos == len(text):
            break
        if text[pos] == "+":
            sign = 1
        elif text[pos] == "-":
            sign = -1
        else:
            raise ParseError(
                f"expected '+' or '-', found {text[pos]!r}", base + pos
            )
        pos = _skip_ws(text, pos + 1)
    return Angle(rat, coeffs)


def parse_point(text: str, base_offset: int = 0) -> tuple[Angle, ...]:
    """Comma-separated list of angles; offsets in errors are global."""
    out: list[Angle] = []
    start = 0
    while True:
        idx = text.find(",", start)
        chunk = text[start:] if idx < 0 else text[start:idx]
        out.append(_parse_angle(chunk, base_offset + start))
        if idx < 0:
            return tuple(out)
        start = idx + 1


def format_point(point: Sequence[Angle]) -> str:
    return ", ".join(str(a) for a in point)


def angle_to_unit(a: Angle, basis: BasisDecl) -> complex:
    """Project to the unit circle: e(a) = exp(2 pi i a).

    The phase is accumulated exactly in Q using the declared rational
    basis values and converted to float once, correctly rounded, so the
    result matches the exact phase to the last bit of a double.
    """
    theta = a.rat
    for sym, c in a.coeffs:
        theta += c * basis.value_of(sym)
    theta %= 1
    t = 2.0 * math.pi * (theta.numerator / theta.denominator)
    return complex(math.cos(t), math.sin(t))

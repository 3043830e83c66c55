"""Truncated circle endomorphisms.

Fix a level L >= 2 and put M = L!.  The working subgroup of the circle
is

    A_L = (1/M)Z/Z  +  sum_i Q_i,   Q_i = Z * (b_i / M),

that is, all angles whose denominators divide M.  An endomorphism of
the ambient group restricted to A_L is determined by a residue r mod M
(its action on torsion: p/M -> r p/M) and one image angle per basis
symbol (the image of the generator b_i/M).  Requiring every image to
again have denominators dividing M keeps A_L invariant, so evaluation
and composition are total and exact.

These maps form a commutative ring: pointwise addition of circle-valued
maps is written ``*`` here (the group of maps is the ambient container
for the transformation groups built on top), and ``compose`` is the
ring multiplication.  ``power(n)`` is multiplication by n, the image of
n under the canonical ring map from Z.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, lcm
from typing import Mapping, Sequence, Union

from .circle import Angle, BasisDecl
from .errors import ConfigurationError, TruncationError


@lru_cache(maxsize=None)
def _factorial(n: int) -> int:
    return factorial(n)


@dataclass(frozen=True)
class TruncationContext:
    """Level L with its modulus L! and the declared basis."""

    level: int
    basis: BasisDecl

    def __post_init__(self) -> None:
        if self.level < 2:
            raise ConfigurationError(
                f"truncation level must be >= 2, got {self.level}"
            )

    @property
    def modulus(self) -> int:
        return _factorial(self.level)

    def generator(self, symbol: str) -> Angle:
        """The represented generator b/L! for a declared symbol."""
        self.basis.index_of(symbol)
        return Angle(0, {symbol: Fraction(1, self.modulus)})

    def torsion_generator(self) -> Angle:
        return Angle(Fraction(1, self.modulus))


def minimal_level(a: Angle) -> int:
    """Smallest level L >= 2 whose modulus L! clears all denominators of a."""
    need = 1
    for d in a.denominators():
        need = lcm(need, d)
    level, fact = 2, 2
    while fact % need:
        level += 1
        fact *= level
    return level


def decompose(a: Angle, ctx: TruncationContext) -> tuple[int, dict[str, int]]:
    """Write a = p/L! + sum_s c_s (b_s/L!) with integer p in [0, L!) and c_s.

    Raises TruncationError (carrying the smallest sufficient level) when
    some denominator does not divide L!, and ConfigurationError when the
    angle uses an undeclared symbol.
    """
    M = ctx.modulus
    for d in a.denominators():
        if M % d:
            raise TruncationError(
                f"angle {a} is not representable at level {ctx.level}",
                minimal_level(a),
            )
    coords: dict[str, int] = {}
    for sym, c in a.coeffs:
        ctx.basis.index_of(sym)
        coords[sym] = int(c * M)
    return int(a.rat * M), coords


@dataclass(frozen=True)
class TruncEndo:
    """Endomorphism of the level-L subgroup: residue mod L! plus images.

    ``images[i]`` is the image of the generator b_i/L! for the i-th
    declared symbol.  Constructors used on hot paths trust the closure
    theorem; :meth:`make` validates everything and is what user-facing
    input goes through.
    """

    ctx: TruncationContext
    residue: int
    images: tuple[Angle, ...]

    def __post_init__(self) -> None:
        M = self.ctx.modulus
        if not 0 <= self.residue < M:
            object.__setattr__(self, "residue", self.residue % M)
        if len(self.images) != len(self.ctx.basis.symbols):
            raise ConfigurationError(
                f"expected {len(self.ctx.basis.symbols)} images, "
                f"got {len(self.images)}"
            )

    @classmethod
    def make(
        cls,
        ctx: TruncationContext,
        residue: int,
        images: Union[Mapping[str, Angle], Sequence[Angle]],
    ) -> "TruncEndo":
        if isinstance(images, Mapping):
            for sym in images:
                ctx.basis.index_of(sym)
            imgs = tuple(images.get(s, Angle()) for s in ctx.basis.symbols)
        else:
            imgs = tuple(images)
        endo = cls(ctx, residue, imgs)
        endo.validate()
        return endo

    def validate(self) -> "TruncEndo":
        for img in self.images:
            decompose(img, self.ctx)
        return self

    @classmethod
    def power(cls, ctx: TruncationContext, n: int) -> "TruncEndo":
        """Multiplication by the integer n."""
        M = ctx.modulus
        images = tuple(
            Angle(0, {s: Fraction(n, M)}) for s in ctx.basis.symbols
        )
        return cls(ctx, n % M, images)

    def is_zero_map(self) -> bool:
        return self.residue == 0 and not any(self.images)

    def _require_ctx(self, other: "TruncEndo") -> None:
        if self.ctx != other.ctx:
            raise ConfigurationError("operands live in different contexts")

    def __call__(self, a: Angle) -> Angle:
        p, coords = decompose(a, self.ctx)
        out = Angle(Fraction(p * self.residue, self.ctx.modulus))
        for i, sym in enumerate(self.ctx.basis.symbols):
            c = coords.get(sym)
            if c:
                out = out + c * self.images[i]
        return out

    def __mul__(self, other: "TruncEndo") -> "TruncEndo":
        """Pointwise sum of circle-valued maps (the ambient group law)."""
        if not isinstance(other, TruncEndo):
            return NotImplemented
        self._require_ctx(other)
        return TruncEndo(
            self.ctx,
            (self.residue + other.residue) % self.ctx.modulus,
            tuple(x + y for x, y in zip(self.images, other.images)),
        )

    def conj(self) -> "TruncEndo":
        """Pointwise inverse (negation of the map's values)."""
        return TruncEndo(
            self.ctx,
            -self.residue % self.ctx.modulus,
            tuple(-x for x in self.images),
        )

    def compose(self, other: "TruncEndo") -> "TruncEndo":
        """self after other; exact because images stay inside the subgroup."""
        self._require_ctx(other)
        if self.is_zero_map() or other.is_zero_map():
            return TruncEndo.power(self.ctx, 0)
        return TruncEndo(
            self.ctx,
            (self.residue * other.residue) % self.ctx.modulus,
            tuple(self(img) for img in other.images),
        )

    def to_dict(self) -> dict:
        return {
            "residue": self.residue,
            "images": {
                s: str(img)
                for s, img in zip(self.ctx.basis.symbols, self.images)
            },
        }

    @classmethod
    def from_dict(cls, data: Mapping, ctx: TruncationContext) -> "TruncEndo":
        residue = data.get("residue")
        if not isinstance(residue, int) or isinstance(residue, bool):
            raise ConfigurationError(f"residue must be an integer, got {residue!r}")
        raw = data.get("images", {})
        if not isinstance(raw, Mapping):
            raise ConfigurationError("images must map symbols to angle strings")
        images: dict[str, Angle] = {}
        for sym, text in raw.items():
            ctx.basis.index_of(sym)
            images[sym] = Angle.parse(text) if isinstance(text, str) else text
        return cls.make(ctx, residue, images)

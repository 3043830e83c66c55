"""Run configuration: truncation level, basis literals, defaults for checks.

Configuration is a single JSON object, read from --config or the
SKEWTORUS_CONFIG environment variable.  Basis values must be decimal
literals with at least 30 fractional digits in (0, 1); they are kept
exact and only ever rounded inside the unit-circle projection.  The
default basis uses sqrt(2)-1 and sqrt(3)-1 to 40 places.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, replace
from typing import Mapping

from .circle import Angle, BasisDecl
from .dynamics import BasicSystem
from .endo import TruncationContext
from .errors import ConfigurationError, ParseError
from .factor_lab import FactorConfig

DEFAULT_BASIS: dict[str, str] = {
    "b1": "0.4142135623730950488016887242096980785697",
    "b2": "0.7320508075688772935274463415058723669428",
}

_MIN_FRACTIONAL_DIGITS = 30

_KNOWN_KEYS = {
    "level",
    "basis",
    "seed",
    "shifts",
    "tol",
    "N",
    "system",
    "x_symbol",
    "factor_m",
}


@dataclass(frozen=True)
class Config:
    level: int = 6
    basis_decimals: tuple[tuple[str, str], ...] = tuple(DEFAULT_BASIS.items())
    seed: int | None = None
    shifts: tuple[int, ...] = (0, 1_000, 1_000_000, 1_000_000_000)
    tol: float = 0.02
    N: int = 200_000
    system_m: int = 2
    system_x0: str = "1*b1"
    x_symbol: str = "b1"
    factor_m: int = 3

    def basis(self) -> BasisDecl:
        decl = BasisDecl.from_decimals(dict(self.basis_decimals))
        for name, text in self.basis_decimals:
            frac = text.split(".", 1)[1] if "." in text else ""
            if len(frac) < _MIN_FRACTIONAL_DIGITS:
                raise ConfigurationError(
                    f"basis value for {name} has {len(frac)} fractional digits, "
                    f"need at least {_MIN_FRACTIONAL_DIGITS}"
                )
        return decl

    def context(self) -> TruncationContext:
        return TruncationContext(self.level, self.basis())

    def system(self) -> BasicSystem:
        try:
            x0 = Angle.parse(self.system_x0)
        except ParseError as exc:
            raise ConfigurationError(f"bad system x0: {exc}") from exc
        return BasicSystem(self.system_m, x0)

    def factor(self) -> FactorConfig:
        return FactorConfig(self.context(), self.x_symbol, self.factor_m)


def config_from_dict(data: Mapping) -> Config:
    unknown = set(data) - _KNOWN_KEYS
    if unknown:
        raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
    cfg = Config()
    if "level" in data:
        level = data["level"]
        if not isinstance(level, int) or isinstance(level, bool) or level < 2:
            raise ConfigurationError(f"level must be an integer >= 2, got {level!r}")
        cfg = replace(cfg, level=level)
    if "basis" in data:
        basis = data["basis"]
        if not isinstance(basis, Mapping) or not basis:
            raise ConfigurationError("basis must be a nonempty object of decimals")
        for name, text in basis.items():
            if not isinstance(text, str):
                raise ConfigurationError(
                    f"basis value for {name} must be a decimal string"
                )
        cfg = replace(cfg, basis_decimals=tuple(basis.items()))
    if "seed" in data:
        seed = data["seed"]
        if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool)):
            raise ConfigurationError(f"seed must be an integer, got {seed!r}")
        cfg = replace(cfg, seed=seed)
    if "shifts" in data:
        shifts = data["shifts"]
        if not isinstance(shifts, list) or not all(
            isinstance(s, int) and not isinstance(s, bool) and s >= 0
            for s in shifts
        ):
            raise ConfigurationError("shifts must be a list of nonnegative integers")
        cfg = replace(cfg, shifts=tuple(shifts))
    if "tol" in data:
        tol = data["tol"]
        if not isinstance(tol, (int, float)) or isinstance(tol, bool) or tol <= 0:
            raise ConfigurationError(f"tol must be a positive number, got {tol!r}")
        cfg = replace(cfg, tol=float(tol))
    if "N" in data:
        N = data["N"]
        if not isinstance(N, int) or isinstance(N, bool) or N < 1:
            raise ConfigurationError(f"N must be a positive integer, got {N!r}")
        cfg = replace(cfg, N=N)
    if "system" in data:
        sysd = data["system"]
        if not isinstance(sysd, Mapping):
            raise ConfigurationError("system must be an object with m and x0")
        m = sysd.get("m", cfg.system_m)
        x0 = sysd.get("x0", cfg.system_x0)
        if not isinstance(m, int) or isinstance(m, bool) or m < 1:
            raise ConfigurationError(f"system m must be a positive integer, got {m!r}")
        if not isinstance(x0, str):
            raise ConfigurationError("system x0 must be an angle string")
        cfg = replace(cfg, system_m=m, system_x0=x0)
    if "x_symbol" in data:
        xs = data["x_symbol"]
        if not isinstance(xs, str):
            raise ConfigurationError("x_symbol must be a string")
        cfg = replace(cfg, x_symbol=xs)
    if "factor_m" in data:
        fm = data["factor_m"]
        if not isinstance(fm, int) or isinstance(fm, bool) or fm < 2:
            raise ConfigurationError(
                f"factor_m must be an integer >= 2, got {fm!r}"
            )
        cfg = replace(cfg, factor_m=fm)
    cfg.basis()  # validate digits and ranges eagerly
    cfg.system()
    return cfg


def load_config(path: str | None = None) -> Config:
    """Read configuration from path, else $SKEWTORUS_CONFIG, else defaults."""
    if path is None:
        path = os.environ.get("SKEWTORUS_CONFIG")
    if not path:
        return Config()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigurationError(f"config {path} must hold a JSON object")
    return config_from_dict(data)

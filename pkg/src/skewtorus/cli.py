"""Command-line interface.

One JSON object per line on stdout; diagnostics on stderr.  Exit codes:
0 all requested properties hold, 2 a checked property fails, 3 the
input or configuration is unusable (parse errors, truncation errors,
bad flags).  Configuration comes from --config or $SKEWTORUS_CONFIG.

Reproducibility: every random draw is seeded, and --reproducible drops
the timestamp and wall-clock fields so two runs with the same seed emit
byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone

from .checks import rand_element, rand_kernel_member, run_suites
from .circle import Angle, ZERO, format_point, parse_point
from .config import Config, load_config
from .dynamics import BasicSystem, CharacterIndex, PolyAngle, orbit_polynomial
from .ellis import HmElement, commutator, predicted_commutator
from .errors import ConfigurationError, SkewtorusError
from .factor_lab import (
    FactorConfig,
    default_kernel_specs,
    kernel_member,
    nonseparation_witness,
)
from .weyl import equidistribution_report

import random


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; that code is reserved for
    property failures here, so usage problems exit 3 instead."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(3, f"{self.prog}: error: {message}\n")


def _emit(obj: dict) -> None:
    sys.stdout.write(json.dumps(obj) + "\n")


def _note(text: str) -> None:
    sys.stderr.write(f"# {text}\n")


def _load_json_arg(text: str) -> dict:
    if text.startswith("@"):
        path = text[1:]
        try:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigurationError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"invalid JSON argument: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigurationError("JSON argument must be an object")
    return data


def _parse_shifts(text: str) -> tuple[int, ...]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part.lstrip("-").isdigit():
            raise ConfigurationError(f"bad shift value {part!r}")
        k = int(part)
        if k < 0:
            raise ConfigurationError(f"shifts must be nonnegative, got {k}")
        out.append(k)
    if not out:
        raise ConfigurationError("at least one shift is required")
    return tuple(out)


def _need_seed(args: argparse.Namespace, cfg: Config) -> int:
    seed = args.seed if args.seed is not None else cfg.seed
    if seed is None:
        raise ConfigurationError(
            "a seed is required: pass --seed or set one in the config"
        )
    return seed


# ---------------------------------------------------------------- commands


def _cmd_iterate(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    m = args.m if args.m is not None else cfg.system_m
    x0 = Angle.parse(args.x0) if args.x0 is not None else cfg.system().x0
    sys_ = BasicSystem(m, x0)
    point = parse_point(args.point) if args.point else (ZERO,) * m
    result = sys_.iterate(point, args.n)
    if sys_.minimal_base:
        _note("base rotation is minimal: x0 is not torsion")
    else:
        _note(
            "base rotation is not minimal: "
            f"x0 is torsion of order {x0.torsion_order()}"
        )
    out: dict = {"point": [str(a) for a in result]}
    if args.oracle:
        y = tuple(point)
        for _ in range(abs(args.n)):
            y = sys_.step(y) if args.n > 0 else sys_.inverse_step(y)
        out["agrees"] = result == y
    _emit(out)
    if args.oracle and not out["agrees"]:
        return 2
    return 0


def _cmd_weyl(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    basis = cfg.basis()
    if (args.poly is None) == (args.char is None):
        raise ConfigurationError("exactly one of --poly or --char is required")
    if args.poly is not None:
        poly = PolyAngle.parse(args.poly)
    else:
        sys_ = cfg.system()
        point = parse_point(args.point) if args.point else (ZERO,) * sys_.m
        poly = orbit_polynomial(sys_, CharacterIndex.basis(args.char), point)
    N = args.N if args.N is not None else cfg.N
    shifts = _parse_shifts(args.shifts) if args.shifts else cfg.shifts
    tol = args.tol if args.tol is not None else cfg.tol
    report = equidistribution_report(poly, N, shifts, tol, basis)
    if args.format == "csv":
        sys.stdout.write(report.to_csv())
    else:
        _emit(report.to_dict())
    return 0 if report.passed else 2


def _element(args_text: str, ctx) -> HmElement:
    return HmElement.from_dict(_load_json_arg(args_text), ctx)


def _cmd_ellis(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    ctx = cfg.context()
    if args.op in ("star", "comm") and args.b is None:
        raise ConfigurationError(f"--b is required for {args.op}")
    if args.op == "act" and args.point is None:
        raise ConfigurationError("--point is required for act")
    if args.op == "star":
        a = _element(args.a, ctx)
        b = _element(args.b, ctx)
        _emit((a * b).to_dict())
        return 0
    if args.op == "inv":
        a = _element(args.a, ctx)
        _emit(a.inverse().to_dict())
        return 0
    if args.op == "comm":
        a = _element(args.a, ctx)
        b = _element(args.b, ctx)
        com = commutator(a, b)
        prefix = a.central_level()
        predicted = predicted_commutator(a, b, prefix)
        agrees = com.truncate(predicted.m) == predicted
        _emit(
            {
                "element": com.to_dict(),
                "left_prefix": prefix,
                "central_level": com.central_level(),
                "predicted_agrees": agrees,
            }
        )
        return 0 if agrees else 2
    if args.op == "act":
        a = _element(args.a, ctx)
        point = parse_point(args.point)
        _emit({"point": [str(x) for x in a.act(point)]})
        return 0
    if args.op == "is-iterate":
        a = _element(args.a, ctx)
        _emit({"n": a.is_iterate()})
        return 0
    raise ConfigurationError(f"unknown ellis operation {args.op!r}")


def _cmd_factor_demo(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    witness, report = nonseparation_witness(cfg.factor())
    _emit({"witness": witness.to_dict(), "report": report.to_dict()})
    return 0 if report.passed else 2


def _cmd_factor_kernel(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    seed = _need_seed(args, cfg)
    fac = cfg.factor()
    ctx = fac.ctx
    ok = True
    for spec in default_kernel_specs(fac):
        rng = random.Random(f"{seed}:kernel:{spec.m}")
        member_bad = 0
        normal_bad = 0
        for _ in range(args.samples):
            g = rand_kernel_member(rng, ctx, spec, fac.m)
            if not kernel_member(g, spec):
                member_bad += 1
            h = rand_element(rng, ctx, fac.m)
            if not kernel_member(h.inverse() * g * h, spec):
                normal_bad += 1
        passed = member_bad == 0 and normal_bad == 0
        ok = ok and passed
        _emit(
            {
                "spec_m": spec.m,
                "gamma": [str(g) for g in spec.gamma],
                "samples": args.samples,
                "member_violations": member_bad,
                "normality_violations": normal_bad,
                "pass": passed,
            }
        )
    _emit({"summary": True, "pass": ok, "seed": seed})
    return 0 if ok else 2


def _cmd_check(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    seed = _need_seed(args, cfg)
    results = run_suites(cfg, seed, args.selector)
    for r in results:
        _emit(r.to_dict(reproducible=args.reproducible))
    summary: dict = {
        "summary": True,
        "suites": len(results),
        "cases": sum(r.cases for r in results),
        "failures": sum(r.failures for r in results),
        "failed": [r.suite for r in results if not r.passed],
        "pass": all(r.passed for r in results),
        "seed": seed,
    }
    if not args.reproducible:
        summary["timestamp"] = datetime.now(timezone.utc).isoformat(
            timespec="seconds"
        )
    _emit(summary)
    return 0 if summary["pass"] else 2


# ------------------------------------------------------------------ parser


def build_parser() -> _Parser:
    parser = _Parser(
        prog="skewtorus",
        description=(
            "Exact truncated transformation groups of skew-product torus "
            "towers, with Weyl-sum equidistribution checks."
        ),
    )
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add_config(p: _Parser) -> None:
        p.add_argument(
            "--config",
            default=None,
            help="config JSON path (default: $SKEWTORUS_CONFIG or built-ins)",
        )

    p = sub.add_parser("iterate", help="closed-form tower iteration")
    add_config(p)
    p.add_argument("--m", type=int, default=None, help="tower dimension")
    p.add_argument("--x0", default=None, help="base rotation angle")
    p.add_argument(
        "--point", default=None, help="comma-separated start coordinates"
    )
    p.add_argument("--n", type=int, required=True, help="iterate count (any sign)")
    p.add_argument(
        "--oracle",
        action="store_true",
        help="recompute by repeated stepping and report agreement",
    )
    p.set_defaults(func=_cmd_iterate)

    p = sub.add_parser("weyl", help="Weyl averages against the predicted target")
    add_config(p)
    p.add_argument("--poly", default=None, help="polynomial, e.g. '1*b1*C(n,2)'")
    p.add_argument(
        "--char",
        type=int,
        default=None,
        help="coordinate character index (orbit polynomial of the config system)",
    )
    p.add_argument("--point", default=None, help="orbit start for --char")
    p.add_argument("--N", type=int, default=None, help="sample count")
    p.add_argument("--shifts", default=None, help="comma-separated start shifts")
    p.add_argument("--tol", type=float, default=None, help="pass tolerance")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=_cmd_weyl)

    p = sub.add_parser("ellis", help="group element operations")
    add_config(p)
    p.add_argument(
        "op", choices=("star", "inv", "comm", "act", "is-iterate"),
        help="operation",
    )
    p.add_argument("--a", required=True, help="element JSON (inline or @file)")
    p.add_argument("--b", default=None, help="second element for star/comm")
    p.add_argument("--point", default=None, help="ambient point for act")
    p.set_defaults(func=_cmd_ellis)

    p = sub.add_parser("factor-lab", help="coset non-separation laboratory")
    lab = p.add_subparsers(dest="lab_op", parser_class=_Parser)
    d = lab.add_parser("demo", help="witness construction with controls")
    add_config(d)
    d.set_defaults(func=_cmd_factor_demo)
    k = lab.add_parser("kernel", help="kernel membership and normality")
    add_config(k)
    k.add_argument("--samples", type=int, default=50)
    k.add_argument("--seed", type=int, default=None)
    k.set_defaults(func=_cmd_factor_kernel)

    p = sub.add_parser("check", help="seeded property suites")
    add_config(p)
    p.add_argument(
        "selector",
        nargs="?",
        default="all",
        help="suite id, module prefix, or 'all'",
    )
    p.add_argument("--seed", type=int, default=None)
    p.add_argument(
        "--reproducible",
        action="store_true",
        help="drop timestamp and timing fields for byte-identical output",
    )
    p.set_defaults(func=_cmd_check)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    func = getattr(args, "func", None)
    if func is None:
        parser.error("a command is required")
    try:
        return func(args)
    except (SkewtorusError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())

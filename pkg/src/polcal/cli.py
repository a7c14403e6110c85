"""Command-line interface: one JSON document per invocation.

Exit codes: 0 success, 1 usage or parse error, 2 evaluation-domain error,
3 identity violation (verify suites).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from .combinatorics import OrderTooLarge
from .derivative import DEFAULT_LEVELS, DEFAULT_S0, NumericalBreakdown, derive
from .expr import ExprError, ExprSyntaxError, ScalarField, UnknownIdentifier, default_names, polynomial_of
from .homogeneity import DEFAULT_SEED, extract_homogeneous_components, is_homogeneous_polynomial
from .numeric import DimensionMismatch, Direction, EvalDomainError, Point, TolerancePolicy, format_scalar, parse_scalar
from .polarization import polarize, polarize_unidirectional
from .taylor import ProfileOptions, TaylorOptions, extract_component, remainder_profile, taylor_polynomial
from .verify import SUITES, run_suite

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_IDENTITY = 0, 1, 2, 3


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


@dataclass
class RunConfig:
    command: str
    fn: str | None = None
    names: list[str] = field(default_factory=list)
    point: Point | None = None
    dirs: list[Direction] = field(default_factory=list)
    order: int | None = None
    mode: str = "auto"
    seed: int = DEFAULT_SEED
    tol: TolerancePolicy = TolerancePolicy()
    pretty: bool = False
    terms: bool = False
    output: str | None = None
    extra: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.names)


def default_seed() -> int:
    env = os.environ.get("POLCAL_SEED")
    if env is None:
        return DEFAULT_SEED
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"POLCAL_SEED must be an integer, got {env!r}") from None


def parse_coords(text: str) -> list:
    parts = [t for t in text.split(",")]
    if not text.strip() or any(not t.strip() for t in parts):
        raise UsageError(f"bad coordinate list {text!r}")
    try:
        return [parse_scalar(t.strip()) for t in parts]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from None


def parse_dirs(text: str) -> list[Direction]:
    if not text.strip():
        return []
    return [Direction(parse_coords(chunk)) for chunk in text.split(";")]


def _common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("global options")
    g.add_argument("--mode", choices=("auto", "exact", "float"), default="auto")
    g.add_argument("--seed", type=int, default=None, help="RNG seed (default: $POLCAL_SEED or a fixed constant)")
    g.add_argument("--tol-abs", type=float, default=1e-9)
    g.add_argument("--tol-rel", type=float, default=1e-9)
    g.add_argument("--pretty", action="store_true", help="indented output")
    g.add_argument("--terms", action="store_true", help="include the polarization term list")
    g.add_argument("-o", "--output", help="write the JSON document here instead of stdout")


def _field_args(p: argparse.ArgumentParser, dirs: bool = False, order: bool = False) -> None:
    p.add_argument("--fn", required=True, help="expression, e.g. 'x^2*y'")
    p.add_argument("--vars", help="comma-separated variable names (default from --dim or the point)")
    p.add_argument("--dim", type=int)
    p.add_argument("--point", required=True, help="coordinates, comma-separated; rationals as p/q")
    if dirs:
        p.add_argument("--dirs", default="", help="directions separated by ';'")
    if order:
        p.add_argument("--order", type=int)


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="polcal", description="Polarizations, derivatives and Taylor polynomials of fields.")
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("polarize", help="n-th polarization")
    _field_args(p, dirs=True, order=True)
    p.add_argument("--unidirectional", action="store_true", help="use the n+1 term form for one repeated direction")
    _common(p)

    p = sub.add_parser("derive", help="multidirectional derivative")
    _field_args(p, dirs=True, order=True)
    p.add_argument("--s0", default=str(DEFAULT_S0))
    p.add_argument("--levels", type=int, default=DEFAULT_LEVELS)
    p.add_argument("--tableau", action="store_true")
    _common(p)

    p = sub.add_parser("taylor", help="Taylor polynomial and remainder profile")
    _field_args(p, order=True)
    p.add_argument("--t0", default="1/8")
    p.add_argument("--shrinks", type=int, default=6)
    p.add_argument("--ratio-tol", type=float, default=1e-2)
    _common(p)

    p = sub.add_parser("classify", help="homogeneity / homogeneous-polynomial verdict")
    _field_args(p, order=True)
    p.add_argument("--samples", type=int, default=32)
    _common(p)

    p = sub.add_parser("extract", help="homogeneous components up to order n")
    _field_args(p, order=True)
    _common(p)

    p = sub.add_parser("rebase", help="re-express a polynomial around a new base point")
    _field_args(p)
    _common(p)

    p = sub.add_parser("verify", help="randomized exact identity suites")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--trials", type=int, default=None, help="0 = exhaustive (euler, euler-theorem)")
    _common(p)
    return top


def make_config(args) -> RunConfig:
    seed = args.seed if args.seed is not None else default_seed()
    try:
        tol = TolerancePolicy(args.tol_abs, args.tol_rel)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    cfg = RunConfig(args.command, mode=args.mode, seed=seed, tol=tol, pretty=args.pretty,
                    terms=args.terms, output=args.output)
    if args.command == "verify":
        return cfg
    cfg.fn = args.fn
    coords = parse_coords(args.point)
    if args.vars:
        cfg.names = [v.strip() for v in args.vars.split(",")]
    else:
        cfg.names = default_names(args.dim or len(coords))
    if len(coords) != cfg.dim:
        raise UsageError(f"point has {len(coords)} coordinates for {cfg.dim} variables")
    if args.mode == "float":
        coords = [float(c) for c in coords]
    cfg.point = Point(coords)
    dirs = parse_dirs(getattr(args, "dirs", "") or "")
    if args.mode == "float":
        dirs = [Direction(float(c) for c in v) for v in dirs]
    for v in dirs:
        if v.dim != cfg.dim:
            raise UsageError(f"direction {v} does not match dimension {cfg.dim}")
    cfg.dirs = dirs
    cfg.order = getattr(args, "order", None)
    if cfg.order is not None and cfg.order < 0:
        raise UsageError("order must be nonnegative")
    return cfg


def load_field(cfg: RunConfig) -> ScalarField:
    f = ScalarField.parse(cfg.fn, cfg.names, lower_polynomials=cfg.mode != "float")
    if cfg.mode == "exact" and f.poly is None:
        if f.is_transcendental:
            raise UsageError("--mode exact rejects transcendental functions")
    return f


def _directions_for_order(cfg: RunConfig) -> list[Direction]:
    n = cfg.order
    if n is None:
        return cfg.dirs
    if len(cfg.dirs) == n:
        return cfg.dirs
    if len(cfg.dirs) == 1:
        return cfg.dirs * n
    if n == 0 and not cfg.dirs:
        return []
    raise UsageError(f"--order {n} needs 1 or {n} directions, got {len(cfg.dirs)}")


def cmd_polarize(cfg: RunConfig, args) -> dict:
    f = load_field(cfg)
    dirs = _directions_for_order(cfg)
    if args.unidirectional:
        if len({v for v in dirs}) > 1:
            raise UsageError("--unidirectional needs a single repeated direction")
        v = dirs[0] if dirs else Direction.zero(cfg.dim)
        value = polarize_unidirectional(f, cfg.point, v, len(dirs))
        return {"value": format_scalar(value), "term_count": len(dirs) + 1, "form": "unidirectional"}
    return polarize(f, cfg.point, dirs, terms=cfg.terms).to_json()


def cmd_derive(cfg: RunConfig, args) -> dict:
    f = load_field(cfg)
    dirs = _directions_for_order(cfg)
    try:
        s0 = parse_scalar(args.s0)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from None
    est = derive(f, cfg.point, dirs, s0=s0, levels=args.levels)
    return est.to_json(tableau=args.tableau)


def cmd_taylor(cfg: RunConfig, args) -> dict:
    f = load_field(cfg)
    if cfg.order is None:
        raise UsageError("taylor needs --order")
    result = taylor_polynomial(f, cfg.point, cfg.order, TaylorOptions())
    popts = ProfileOptions(t0=Fraction(parse_scalar(args.t0)), shrinks=args.shrinks, ratio_tol=args.ratio_tol)
    profile = remainder_profile(result.remainder, cfg.point, cfg.order, popts, tol=cfg.tol)
    out = result.to_json(cfg.names)
    out["remainder"] = profile.to_json()
    return out


def cmd_classify(cfg: RunConfig, args) -> dict:
    f = load_field(cfg)
    if cfg.order is None:
        raise UsageError("classify needs --order")
    verdict = is_homogeneous_polynomial(f, cfg.point, cfg.order, args.samples, seed=cfg.seed, tol=cfg.tol)
    return verdict.to_json()


def cmd_extract(cfg: RunConfig, args) -> dict:
    f = load_field(cfg)
    if cfg.order is None:
        raise UsageError("extract needs --order")
    if polynomial_of(f) is not None:
        comps = extract_homogeneous_components(f, cfg.point, cfg.order)
        method = "exact"
    else:
        comps = [extract_component(f, cfg.point, j, cfg.order) for j in range(cfg.order + 1)]
        method = "derivative"
    return {"method": method, "components": [c.to_json() for c in comps],
            "pretty": [c.pretty(cfg.names) for c in comps]}


def cmd_rebase(cfg: RunConfig, args) -> dict:
    f = load_field(cfg)
    p = polynomial_of(f)
    if p is None:
        raise UsageError("rebase needs a polynomial expression")
    r = p.rebase(cfg.point)
    return {"polynomial": r.to_json(), "pretty": r.pretty(cfg.names)}


def cmd_verify(cfg: RunConfig, args) -> dict:
    return run_suite(args.suite, args.trials, seed=cfg.seed)


COMMANDS = {
    "polarize": cmd_polarize,
    "derive": cmd_derive,
    "taylor": cmd_taylor,
    "classify": cmd_classify,
    "extract": cmd_extract,
    "rebase": cmd_rebase,
    "verify": cmd_verify,
}


def _emit(doc: dict, cfg: RunConfig | None, stream) -> None:
    pretty = cfg.pretty if cfg else False
    text = json.dumps(doc, indent=2 if pretty else None, sort_keys=False)
    if cfg and cfg.output and stream is sys.stdout:
        with open(cfg.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text, file=stream)


def _error(kind: str, exc: BaseException, code: int, cfg=None) -> int:
    doc = {"error": kind, "message": str(exc)}
    offset = getattr(exc, "offset", None)
    if isinstance(exc, (ExprSyntaxError, UnknownIdentifier)) and offset is not None:
        doc["offset"] = offset
    if isinstance(exc, ExprSyntaxError):
        doc["expected"] = sorted(exc.expected)
    if isinstance(exc, EvalDomainError):
        if exc.subset is not None:
            doc["subset"] = list(exc.subset)
        if exc.point is not None:
            doc["point"] = exc.point.to_json()
    _emit(doc, cfg, sys.stderr)
    return code


def main(argv=None) -> int:
    cfg = None
    try:
        args = build_parser().parse_args(argv)
        cfg = make_config(args)
        doc = COMMANDS[args.command](cfg, args)
    except (UsageError, ExprError, OrderTooLarge, DimensionMismatch) as exc:
        return _error(type(exc).__name__, exc, EXIT_USAGE, cfg)
    except (EvalDomainError, NumericalBreakdown, ZeroDivisionError, OverflowError) as exc:
        return _error(type(exc).__name__, exc, EXIT_DOMAIN, cfg)
    except ValueError as exc:
        return _error(type(exc).__name__, exc, EXIT_USAGE, cfg)
    _emit(doc, cfg, sys.stdout)
    if args.command == "verify" and doc["failures"]:
        return EXIT_IDENTITY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry points: check, eval, normalize, verify.

Diagnostics are one per line in ``file:line:col: severity: message`` form.
Exit codes: 0 success, 1 type error or failed property, 2 parse error,
3 I/O error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass

from .elaborate import Program, typecheck_file
from .evaluate import EvalCtx, evaluate_def
from .lexer import LexError
from .parser import ParseError, parse_file
from .pretty import pretty
from .stages import StageError, parse_stage
from .typecheck import Fuel, normalize
from .values import pretty_value
from .verify import VerifyConfig, run_verify


@dataclass
class Config:
    fuel: int = 8
    depth: int = 4
    max_clocks: int = 2
    max_budget: int = 3
    samples: int = 8
    with_k0: bool = False
    plain: bool = False
    json_out: bool = False

    def __post_init__(self):
        for fieldname in ("fuel", "depth", "max_clocks", "samples"):
            if getattr(self, fieldname) <= 0:
                raise ValueError(f"{fieldname} must be positive")
        if self.max_budget < 0:
            raise ValueError("max_budget must be nonnegative")

    def verify_config(self) -> VerifyConfig:
        return VerifyConfig(fuel=self.fuel, depth=self.depth,
                            samples=self.samples, max_clocks=self.max_clocks,
                            max_budget=self.max_budget)


def _severity(kind: str, cfg: Config) -> str:
    if cfg.plain or not sys.stderr.isatty():
        return kind
    color = {"error": "31", "warning": "33"}.get(kind, "0")
    return f"\x1b[{color}m{kind}\x1b[0m"


def _diag(span, kind: str, message: str, cfg: Config):
    where = str(span) if span is not None else "<unknown>"
    print(f"{where}: {_severity(kind, cfg)}: {message}", file=sys.stderr)


def _load(path: str, cfg: Config) -> tuple[int, Program | None]:
    """Read, parse, and check one file; returns (exit code, program)."""
    try:
        src = open(path, encoding="utf-8").read()
    except OSError as err:
        print(f"{path}: error: {err.strerror or err}", file=sys.stderr)
        return 3, None
    try:
        decls = parse_file(src, path)
    except (LexError, ParseError) as err:
        _diag(err.span, "error", err.message, cfg)
        return 2, None
    prog = typecheck_file(decls, fuel=Fuel(cfg.fuel), with_k0=cfg.with_k0)
    code = 0
    for r in prog.reports:
        if not r.ok:
            _diag(r.span, "error", r.message, cfg)
            code = 1
    return code, prog


def cmd_check(args, cfg: Config) -> int:
    worst = 0
    for path in args.files:
        code, prog = _load(path, cfg)
        if code == 0 and prog is not None:
            n = len([r for r in prog.reports if r.kind == "def"])
            print(f"{path}: ok ({n} definitions)")
        worst = max(worst, code)
    return worst


def cmd_eval(args, cfg: Config) -> int:
    code, prog = _load(args.file, cfg)
    if code != 0 or prog is None:
        return code
    if args.defname not in prog.defs.table:
        print(f"error: unknown definition {args.defname}", file=sys.stderr)
        return 1
    try:
        stage = parse_stage(args.stage)
    except StageError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    try:
        value = evaluate_def(prog.defs, args.defname, stage,
                             EvalCtx(prog.defs))
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    print(pretty_value(value, plain=cfg.plain))
    return 0


def cmd_normalize(args, cfg: Config) -> int:
    code, prog = _load(args.file, cfg)
    if code != 0 or prog is None:
        return code
    if args.defname not in prog.defs.table:
        print(f"error: unknown definition {args.defname}", file=sys.stderr)
        return 1
    body = prog.defs.table[args.defname].body
    print(pretty(normalize(prog.defs, body, Fuel(cfg.fuel))))
    return 0


def cmd_verify(args, cfg: Config) -> int:
    progs = []
    for path in args.files:
        code, prog = _load(path, cfg)
        if code != 0 or prog is None:
            return code
        progs.append(prog)
    t0 = time.time()
    results = run_verify(progs, cfg.verify_config())
    elapsed = time.time() - t0
    if cfg.json_out:
        doc = {
            "ok": all(r.ok for r in results),
            "elapsed_seconds": round(elapsed, 3),
            "suites": [
                {
                    "name": r.name,
                    "instances": r.instances,
                    "ok": r.ok,
                    "failures": [f.detail for f in r.failures],
                    **({"covered_equations": r.extra["covered"]}
                       if "covered" in r.extra else {}),
                }
                for r in results
            ],
        }
        print(json.dumps(doc, indent=2))
    else:
        for r in results:
            mark = "ok  " if r.ok else "FAIL"
            print(f"{mark} {r.name:34s} {r.instances:6d} instances"
                  f"  failures={len(r.failures)}")
        print(f"verify: {sum(r.instances for r in results)} instances "
              f"in {elapsed:.1f}s")
    for r in results:
        if r.failures:
            print(f"first counterexample ({r.name}): {r.failures[0].detail}",
                  file=sys.stderr)
            return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="clott",
        description="Type checker and stage evaluator for a clocked "
                    "guarded type theory")
    p.add_argument("--fuel", type=int, default=8,
                   help="fixed-point unfoldings per conversion position")
    p.add_argument("--depth", type=int, default=4,
                   help="numeric sampling depth for value equality")
    p.add_argument("--max-clocks", type=int, default=2,
                   help="largest clock set in property stages")
    p.add_argument("--max-budget", type=int, default=3,
                   help="largest tick budget in property stages")
    p.add_argument("--samples", type=int, default=8,
                   help="enumeration cap per position")
    p.add_argument("--with-k0", action="store_true",
                   help="prepend the clock constant k0 to every file")
    p.add_argument("--plain", action="store_true",
                   help="ASCII output, no color")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="typecheck files")
    c.add_argument("files", nargs="+")

    e = sub.add_parser("eval", help="evaluate a definition at a stage")
    e.add_argument("file")
    e.add_argument("defname")
    e.add_argument("--stage", required=True,
                   help="stage literal, e.g. k0=3,k1=2")

    n = sub.add_parser("normalize", help="print a fuel-bounded normal form")
    n.add_argument("file")
    n.add_argument("defname")

    v = sub.add_parser("verify", help="run the semantic property suites")
    v.add_argument("files", nargs="+")
    v.add_argument("--json", action="store_true", dest="json_out",
                   help="machine-readable report")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = Config(fuel=args.fuel, depth=args.depth,
                 max_clocks=args.max_clocks, max_budget=args.max_budget,
                 samples=args.samples, with_k0=args.with_k0,
                 plain=args.plain,
                 json_out=getattr(args, "json_out", False))
    if args.command == "check":
        return cmd_check(args, cfg)
    if args.command == "eval":
        return cmd_eval(args, cfg)
    if args.command == "normalize":
        return cmd_normalize(args, cfg)
    if args.command == "verify":
        return cmd_verify(args, cfg)
    raise AssertionError(args.command)


if __name__ == "__main__":
    sys.exit(main())

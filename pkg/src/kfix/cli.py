"""Command-line entry points.

Subcommands: parse (diagnostics), dimacs (CNF export), check (model plus
.config satisfiability), fix (conflict resolution), eval (evaluation
harness), serve (HTTP API).  Exit codes: 0 success, 1 domain failure such
as unsat or no fix found, 2 usage or parse errors.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .abstraction import assignment_from_config, build_formula
from .cnf import to_cnf, to_dimacs
from .dotconfig import DotConfigError, load_dotconfig
from .evaluate import recalculate
from .harness import SampleParams, run_evaluation
from .kconfig import KconfigError, load_model
from .kconfig.ast import SymbolType
from .rangefix import Limits, resolve_conflict
from .sat import SatResult, Solver
from .tristate import (
    MOD, NO, YES, SymbolValue, hex_value, int_value, str_value, tri_value,
)


def _model_path(arg: str | None) -> Path:
    raw = arg or os.environ.get("KFIX_MODEL_ROOT")
    if not raw:
        raise UsageError("no model given: pass --model or set KFIX_MODEL_ROOT")
    path = Path(raw)
    if path.is_dir():
        path = path / "Kconfig"
    if not path.exists():
        raise UsageError(f"model file not found: {path}")
    return path


class UsageError(Exception):
    pass


def _load(args) -> "KconfigModel":
    return load_model(str(_model_path(args.model)))


def _load_config(model, path: str | None):
    if not path:
        return recalculate(model, {})
    text = Path(path).read_text()
    cfg, warnings = load_dotconfig(text, model)
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    return cfg


def _parse_set(model, raw: str) -> tuple[str, SymbolValue]:
    if "=" not in raw:
        raise UsageError(f"--set expects SYM=VALUE, got {raw!r}")
    name, _, text = raw.partition("=")
    if name.startswith("CONFIG_"):
        name = name[len("CONFIG_"):]
    sym = model.symbols.get(name)
    if sym is None:
        raise UsageError(f"unknown symbol {name}")
    if sym.is_bool_like():
        levels = {"n": NO, "m": MOD, "y": YES}
        if text not in levels:
            raise UsageError(f"{name} is {sym.type.value}; value must be y, m or n")
        if sym.type is SymbolType.BOOL and text == "m":
            raise UsageError(f"{name} is bool; value must be y or n")
        return name, tri_value(levels[text])
    if sym.type is SymbolType.INT:
        try:
            return name, int_value(int(text, 10))
        except ValueError:
            raise UsageError(f"{name} expects a decimal integer, got {text!r}")
    if sym.type is SymbolType.HEX:
        try:
            return name, hex_value(int(text, 16))
        except ValueError:
            raise UsageError(f"{name} expects a hex value, got {text!r}")
    return name, str_value(text)


def cmd_parse(args) -> int:
    model = _load(args)
    n_choice = len(model.choices)
    prompted = sum(1 for s in model.symbols.values() if s.has_prompt())
    print(
        f"parsed {len(model.symbols)} symbols "
        f"({prompted} prompted, {n_choice} choice groups)"
    )
    return 0


def cmd_dimacs(args) -> int:
    model = _load(args)
    pm = build_formula(model, split_selects=not args.monolithic_selects)
    cnf = to_cnf([f for _, f in pm.constraints], variable_order=pm.variables())
    text = to_dimacs(cnf)
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {cnf.num_vars} vars, {len(cnf.clauses)} clauses to {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_check(args) -> int:
    model = _load(args)
    cfg = _load_config(model, args.config)
    pm = build_formula(model)
    cnf = to_cnf([f for _, f in pm.constraints], variable_order=pm.variables())
    solver = Solver(cnf.num_vars)
    for clause in cnf.clauses:
        solver.add_clause(clause)
    assignment = assignment_from_config(pm, cfg)
    assumptions = [
        vid if truth else -vid
        for var, truth in assignment.items()
        for vid in (cnf.ids[var],)
    ]
    res = solver.solve(assumptions)
    if res is SatResult.SAT:
        print("satisfiable")
        return 0
    print("unsatisfiable")
    return 1


def cmd_fix(args) -> int:
    model = _load(args)
    cfg = _load_config(model, args.config)
    if not args.set:
        raise UsageError("fix requires at least one --set SYM=VALUE")
    desired = [_parse_set(model, raw) for raw in args.set]
    limits = Limits(time_budget=args.budget)
    result = resolve_conflict(model, cfg, desired, limits)
    if result.directly_applicable:
        print("directly applicable: the desired values are consistent as-is")
        return 0
    if result.timed_out:
        print("warning: resolution budget exhausted; results may be partial",
              file=sys.stderr)
    if not result.fixes:
        print("no fix found", file=sys.stderr)
        return 1
    for i, fix in enumerate(result.fixes, start=1):
        print(f"fix {i} (changes {len(fix.entries)} symbols): {fix.render()}")
    return 0


def cmd_eval(args) -> int:
    model = _load(args)
    try:
        p_nos = [float(p) for p in args.p_no.split(",") if p]
    except ValueError:
        raise UsageError(f"--p-no expects comma-separated floats, got {args.p_no!r}")
    if not p_nos:
        raise UsageError("--p-no list is empty")
    params = []
    for p in p_nos:
        for i in range(args.samples):
            params.append(
                SampleParams(p_no=p, seed=args.seed + i, model_id=args.model_id)
            )
    report = run_evaluation(model, params)
    print(report.format_table())
    if args.out:
        rows = report.csv_rows()
        Path(args.out).write_text("\n".join(rows) + "\n")
        print(f"wrote {len(rows) - 1} rows to {args.out}")
    return 0


def cmd_serve(args) -> int:
    from .server import create_app

    import uvicorn

    model_path = _model_path(args.model)
    static = args.static
    if static is None and Path("frontend/dist").is_dir():
        static = "frontend/dist"
    app = create_app(str(model_path), multi=args.multi, static_dir=static)
    host, _, port = args.listen.rpartition(":")
    if not host or not port.isdigit():
        raise UsageError(f"--listen expects addr:port, got {args.listen!r}")
    uvicorn.run(app, host=host, port=int(port), log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kfix",
        description="Kconfig model checking and conflict resolution",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_model(p):
        p.add_argument("--model", help="Kconfig file or directory (default: KFIX_MODEL_ROOT)")

    p = sub.add_parser("parse", help="parse and link a model, report diagnostics")
    add_model(p)
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("dimacs", help="export the propositional model as DIMACS CNF")
    add_model(p)
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--monolithic-selects", action="store_true",
                   help="merge select statements per target instead of per statement")
    p.set_defaults(func=cmd_dimacs)

    p = sub.add_parser("check", help="check satisfiability of model plus .config")
    add_model(p)
    p.add_argument("--config", help=".config file (default: model defaults)")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("fix", help="resolve a conflict given desired symbol values")
    add_model(p)
    p.add_argument("--config", help=".config file (default: model defaults)")
    p.add_argument("--set", action="append", default=[], metavar="SYM=VALUE",
                   help="desired value; repeatable")
    p.add_argument("--budget", type=float, default=30.0,
                   help="resolution wall-clock budget in seconds")
    p.set_defaults(func=cmd_fix)

    p = sub.add_parser("eval", help="run the conflict-resolution evaluation harness")
    add_model(p)
    p.add_argument("--samples", type=int, default=1, help="samples per probability")
    p.add_argument("--p-no", default="0.5", help="comma-separated disable probabilities")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", help="write per-fix rows as CSV")
    p.add_argument("--model-id", default="model", help="model label in report rows")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("serve", help="serve the HTTP configurator API")
    add_model(p)
    p.add_argument("--listen", default="127.0.0.1:8439", metavar="ADDR:PORT")
    p.add_argument("--multi", action="store_true",
                   help="allow multiple concurrent sessions")
    p.add_argument("--static", help="directory of UI assets to serve at /")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (KconfigError, DotConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

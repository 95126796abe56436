"""Random Kconfig model generation and exhaustive validity oracles.

The generator emits Kconfig *source text* and parses it through the
regular front end, so generated models exercise the same code paths as
hand-written ones.  All randomness flows from one seeded generator.

The oracles enumerate every total assignment and keep the
self-consistent ones; they are intentionally brute force and meant for
small models, where they serve as ground truth for the propositional
encoding and for diagnosis minimality.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .abstraction import assignment_from_config, build_formula, collect_known_values
from .cnf import to_cnf
from .evaluate import UnstableModelError, recalculate
from .kconfig.ast import KconfigModel
from .kconfig.linker import link
from .kconfig.parser import parse_text
from .prop import VarKind
from .sat import SatResult, Solver
from .tristate import MOD, NO, SymbolValue, YES, tri_value


@dataclass
class GenParams:
    n_symbols: int = 6
    p_tristate: float = 0.4
    p_prompt: float = 0.85
    p_prompt_cond: float = 0.2
    p_depends: float = 0.5
    p_select: float = 0.35
    p_select_cond: float = 0.4
    p_imply: float = 0.15
    p_default: float = 0.5
    p_default_cond: float = 0.5
    p_choice: float = 0.15
    p_tristate_choice: float = 0.3
    n_nonbool: int = 0
    max_expr_depth: int = 2


def _expr_text(rng: random.Random, names: list[str], depth: int) -> str:
    if not names:
        return rng.choice(["y", "m", "n"])
    if depth <= 0 or rng.random() < 0.55:
        return rng.choice(names)
    kind = rng.random()
    if kind < 0.35:
        return f"!{_expr_text(rng, names, 0)}"
    a = _expr_text(rng, names, depth - 1)
    b = _expr_text(rng, names, depth - 1)
    op = "&&" if kind < 0.7 else "||"
    return f"({a} {op} {b})"


def _nonbool_compare(rng: random.Random, nonbools: list[tuple[str, str]]) -> str:
    name, typ = rng.choice(nonbools)
    if typ == "string":
        lit = rng.choice(['"alpha"', '"beta"', '""'])
        op = rng.choice(["=", "!="])
    else:
        lit = str(rng.choice([0, 1, 5, 10])) if typ == "int" else rng.choice(
            ["0x0", "0x8", "0x10"]
        )
        op = rng.choice(["=", "!=", "<", ">="])
    return f"({name} {op} {lit})"


def generate_model_text(rng: random.Random, params: GenParams | None = None) -> str:
    """Random model source: depends/select/imply/default/prompt/choice mix."""
    params = params or GenParams()
    lines: list[str] = []
    names: list[str] = []
    selectable: list[str] = []  # choice members cannot be select/imply targets
    nonbools: list[tuple[str, str]] = []
    n_plain = params.n_symbols
    choice_at = (
        rng.randrange(max(n_plain - 1, 1)) if rng.random() < params.p_choice else None
    )

    def cond_suffix(pool: list[str], prob: float) -> str:
        if pool and rng.random() < prob:
            expr = _expr_text(rng, pool, 1)
            return f" if {expr}"
        return ""

    def emit_symbol(i: int) -> None:
        name = f"S{i}"
        tri = rng.random() < params.p_tristate
        lines.append(f"config {name}")
        typ = "tristate" if tri else "bool"
        pool = list(names)
        if rng.random() < params.p_prompt:
            lines.append(
                f'\t{typ} "knob {i}"{cond_suffix(pool, params.p_prompt_cond)}'
            )
        else:
            lines.append(f"\t{typ}")
        if pool and rng.random() < params.p_depends:
            dep = _expr_text(rng, pool, params.max_expr_depth)
            if nonbools and rng.random() < 0.3:
                dep = f"({dep} && {_nonbool_compare(rng, nonbools)})"
            lines.append(f"\tdepends on {dep}")
        if selectable and rng.random() < params.p_select:
            target = rng.choice(selectable)
            lines.append(
                f"\tselect {target}{cond_suffix(pool, params.p_select_cond)}"
            )
        if selectable and rng.random() < params.p_imply:
            target = rng.choice(selectable)
            lines.append(f"\timply {target}")
        if rng.random() < params.p_default:
            value = rng.choice((["y", "m", "n"] if tri else ["y", "n"]) + pool)
            lines.append(
                f"\tdefault {value}{cond_suffix(pool, params.p_default_cond)}"
            )
        lines.append("")
        names.append(name)
        selectable.append(name)

    def emit_choice(i: int) -> None:
        tri_choice = rng.random() < params.p_tristate_choice
        typ = "tristate" if tri_choice else "bool"
        lines.append("choice")
        lines.append(f'\tprompt "pick {i}"')
        if names and rng.random() < 0.4:
            lines.append(f"\tdepends on {_expr_text(rng, names, 1)}")
        lines.append("")
        members = rng.randrange(2, 4)
        for k in range(members):
            name = f"S{i}C{k}"
            lines.append(f"config {name}")
            lines.append(f'\t{typ} "member {name}"')
            lines.append("")
            names.append(name)
        lines.append("endchoice")
        lines.append("")

    for j, typ in zip(range(params.n_nonbool), itertools.cycle(["int", "hex", "string"])):
        name = f"N{j}"
        lines.append(f"config {name}")
        lines.append(f'\t{typ} "value {j}"')
        if typ == "int" and rng.random() < 0.5:
            lines.append("\trange 0 10")
        if rng.random() < 0.6:
            default = {"int": "5", "hex": "0x8", "string": '"alpha"'}[typ]
            lines.append(f"\tdefault {default}")
        lines.append("")
        nonbools.append((name, typ))

    for i in range(n_plain):
        emit_symbol(i)
        if choice_at == i:
            emit_choice(i)
    return "\n".join(lines)


def random_model(
    seed: int, params: GenParams | None = None
) -> tuple[str, KconfigModel]:
    rng = random.Random(seed)
    text = generate_model_text(rng, params)
    model = parse_text(text)
    link(model)
    return text, model


# --------------------------------------------------------------------------
# exhaustive oracles


def is_valid_total(model: KconfigModel, user: dict[str, SymbolValue]) -> bool:
    """A total user map is valid when it reproduces itself exactly."""
    try:
        cfg = recalculate(model, user)
    except UnstableModelError:
        return False
    return all(cfg.effective[name] == user[name] for name in model.symbols)


def total_assignments(model: KconfigModel, extra_values=None):
    """Every total user map; non-Boolean symbols range over known values."""
    known = collect_known_values(model, extra_values)
    domains: list[list[SymbolValue]] = []
    order: list[str] = []
    for name, sym in model.symbols.items():
        order.append(name)
        if sym.is_bool_like():
            levels = [NO, MOD, YES] if sym.type.value == "tristate" else [NO, YES]
            domains.append([tri_value(t) for t in levels])
        else:
            domains.append(list(known.get(name, [])))
    for combo in itertools.product(*domains):
        yield dict(zip(order, combo))


def enumerate_valid_configs(
    model: KconfigModel, extra_values=None
) -> list[dict[str, SymbolValue]]:
    return [
        user
        for user in total_assignments(model, extra_values)
        if is_valid_total(model, user)
    ]


_PROJECTED = (VarKind.SYM_Y, VarKind.SYM_M, VarKind.NB_EQ)


def enumerate_valid_projections(
    model: KconfigModel, extra_values=None, split_selects: bool = True
) -> set[frozenset]:
    """Valid configurations from the evaluator, projected onto the same
    variable universe as enumerate_formula_configs for exact comparison."""
    pm = build_formula(model, split_selects=split_selects, extra_values=extra_values)
    out: set[frozenset] = set()
    for user in enumerate_valid_configs(model, extra_values):
        cfg = recalculate(model, user)
        assignment = assignment_from_config(pm, cfg)
        out.add(
            frozenset(
                (str(var), truth)
                for var, truth in assignment.items()
                if var.kind in _PROJECTED
            )
        )
    return out


def enumerate_formula_configs(
    model: KconfigModel,
    extra_values=None,
    split_selects: bool = True,
    limit: int = 100000,
) -> set[frozenset]:
    """All satisfying assignments of the propositional encoding,
    projected onto the symbol-value variables, via blocking clauses."""
    pm = build_formula(model, split_selects=split_selects, extra_values=extra_values)
    cnf = to_cnf([f for _, f in pm.constraints], variable_order=pm.variables())
    solver = Solver(cnf.num_vars)
    ok = True
    for clause in cnf.clauses:
        ok = solver.add_clause(clause) and ok
    keep = [i for i, var in cnf.var_meta.items() if var.kind in _PROJECTED]
    out: set[frozenset] = set()
    while ok and len(out) < limit:
        if solver.solve() != SatResult.SAT:
            break
        m = solver.model()
        out.add(frozenset((str(cnf.var_meta[i]), m.get(i, False)) for i in keep))
        blocking = [-i if m.get(i, False) else i for i in keep]
        if not blocking:
            break
        ok = solver.add_clause(blocking)
    return out


# --------------------------------------------------------------------------
# large synthetic model for translation/solve timing


def perf_model_text(n_symbols: int = 15000, seed: int = 7) -> str:
    """Wide layered model: local depends edges, sparse selects, defaults."""
    rng = random.Random(seed)
    lines: list[str] = ["mainmenu \"synthetic performance model\"", ""]
    for i in range(n_symbols):
        name = f"P{i:05d}"
        tri = rng.random() < 0.25
        typ = "tristate" if tri else "bool"
        lines.append(f"config {name}")
        lines.append(f'\t{typ} "option {i}"')
        if i and rng.random() < 0.6:
            a = f"P{rng.randrange(max(i - 8, 0), i):05d}"
            if i > 1 and rng.random() < 0.4:
                b = f"P{rng.randrange(max(i - 8, 0), i):05d}"
                op = "&&" if rng.random() < 0.6 else "||"
                lines.append(f"\tdepends on {a} {op} {b}")
            else:
                lines.append(f"\tdepends on {a}")
        if i and rng.random() < 0.12:
            target = f"P{rng.randrange(max(i - 50, 0), i):05d}"
            lines.append(f"\tselect {target}")
        if rng.random() < 0.3:
            if i and rng.random() < 0.5:
                lines.append(f"\tdefault P{rng.randrange(max(i - 8, 0), i):05d}")
            else:
                lines.append(f"\tdefault {'m' if tri else 'y'}")
        lines.append("")
    return "\n".join(lines)

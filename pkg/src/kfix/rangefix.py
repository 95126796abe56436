"""Conflict resolution: minimal diagnoses, then concrete fixes.

Stage 1 finds all minimal sets of symbols whose current values must
be given up (diagnoses) via a hitting-set tree over unsatisfiable
cores: each tree node re-solves with some pins removed; an
unsatisfiable answer contributes a core to branch on, a satisfiable
one yields a diagnosis, which is then shrunk by deletion probing so
minimality never depends on core quality.  Nodes expand in
breadth-first cardinality order, supersets of known diagnoses are
pruned, and hard budgets bound the search.

Stages 2 and 3 turn one diagnosis into a fix.  Bool and tristate
symbols get concrete values out of a single satisfying model.  Int
and hex symbols are presented as a residual range over their known
values (the witness value still rides along so the fix stays
mechanically applicable).

Two front ends share this machinery: `resolve_conflict` works on a
linked model through the propositional encoding and the SAT
solver, while `resolve_generic` works on bare comparison constraints
over bool/int variables through substitution and bounded search —
useful on its own and as a cross-check of the pipeline.
"""

from __future__ import annotations

import itertools
import time
from collections import deque
from dataclasses import dataclass

from .abstraction import PropModel, build_formula, iter_model_exprs
from .cnf import CnfFormula, to_cnf
from .evaluate import Configuration, empty_value, parse_number
from .kconfig.ast import (
    And,
    Compare,
    ConstString,
    ConstTristate,
    Expr,
    KconfigModel,
    Not,
    Or,
    SymbolRef,
    SymbolType,
    make_and,
)
from .kconfig.pretty import format_expr
from .prop import PropVar, VarKind
from .residual import (
    ResidualUnsatisfiable,
    group_conjuncts,
    simplify_group,
    simplify_residual,
    substitute,
)
from .sat import SatResult, Solver, minimize_core
from .tristate import MOD, NO, SymbolValue, Tristate, ValueKind, YES, tri_value


@dataclass(frozen=True)
class Limits:
    max_fixes: int = 3
    max_nodes: int = 64
    time_budget: float = 30.0
    max_core_resolves: int = 200
    solve_conflict_budget: int = 200000


@dataclass(frozen=True)
class Conflict:
    desired: tuple[tuple[str, SymbolValue], ...]
    base_config: Configuration

    def symbols(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.desired)


@dataclass(frozen=True)
class Diagnosis:
    variables: frozenset[str]

    def sort_key(self):
        return (len(self.variables), tuple(sorted(self.variables)))


@dataclass(frozen=True)
class FixEntry:
    symbols: tuple[str, ...]
    value: object | None = None  # SymbolValue, bool or int
    constraint: Expr | None = None
    witness: object | None = None  # applicable value behind a range entry
    desired: bool = False  # entry restates a conflict target

    def render(self) -> str:
        names = ", ".join(self.symbols)
        if len(self.symbols) > 1:
            names = f"({names})"
        if self.constraint is not None:
            return f"{names}: {format_expr(self.constraint)}"
        return f"{names} := {_render_value(self.value)}"


def _render_value(value) -> str:
    if isinstance(value, bool):
        return "True" if value else "False"
    return str(value)


@dataclass(frozen=True)
class Fix:
    entries: tuple[FixEntry, ...]
    diagnosis: Diagnosis

    def render(self) -> str:
        return "[" + ", ".join(e.render() for e in self.entries) + "]"


@dataclass
class ResolveResult:
    fixes: list[Fix]
    directly_applicable: bool = False
    timed_out: bool = False


class NoFixFound(Exception):
    """Budget ran out before any diagnosis was confirmed."""


# --------------------------------------------------------------------------
# stage 1: hitting-set tree over cores


def diagnose(check, ids: list, limits: Limits) -> tuple[list[Diagnosis], bool]:
    """Minimal relaxation sets for the pins in `ids`.

    `check(enabled)` reports (True, None) when the system with exactly
    those pins enabled is satisfiable, (False, core) with a core drawn
    from the enabled pins otherwise, or (None, None) on budget
    exhaustion.  Returns (diagnoses, timed_out).
    """
    deadline = time.monotonic() + limits.time_budget
    full = frozenset(ids)
    sat, core = check(full)
    if sat is None:
        return [], True
    if sat:
        return [], False
    diagnoses: list[frozenset] = []
    timed_out = False
    visited: set[frozenset] = set()
    queue: deque[tuple[frozenset, list]] = deque([(frozenset(), core or list(full))])
    nodes = 0

    def shrink(removed: frozenset) -> frozenset | None:
        current = set(removed)
        for item in sorted(removed):
            if len(current) == 1:
                break
            trial = current - {item}
            verdict, _ = check(full - frozenset(trial))
            if verdict is None:
                return None
            if verdict:
                current = trial
        return frozenset(current)

    while queue and len(diagnoses) < limits.max_fixes:
        if nodes >= limits.max_nodes or time.monotonic() > deadline:
            timed_out = True
            break
        removed, branch_core = queue.popleft()
        for item in branch_core:
            candidate = removed | {item}
            if candidate in visited:
                continue
            visited.add(candidate)
            if any(d <= candidate for d in diagnoses):
                continue
            nodes += 1
            sat, core = check(full - candidate)
            if sat is None:
                timed_out = True
                queue.clear()
                break
            if sat:
                shrunk = shrink(candidate)
                if shrunk is None:
                    timed_out = True
                    queue.clear()
                    break
                # shrunk is subset-minimal, so it can never be a proper
                # subset of an already-recorded minimal diagnosis
                if not any(d <= shrunk for d in diagnoses):
                    diagnoses.append(shrunk)
                if len(diagnoses) >= limits.max_fixes:
                    break
            else:
                queue.append((candidate, core or sorted(full - candidate)))
    result = sorted((Diagnosis(d) for d in diagnoses), key=Diagnosis.sort_key)
    return result[: limits.max_fixes], timed_out


def generate_diagnoses(check, ids: list, limits: Limits) -> tuple[list[Diagnosis], bool]:
    """`diagnose` that treats an empty timed-out answer as an error."""
    diagnoses, timed_out = diagnose(check, ids, limits)
    if not diagnoses and timed_out:
        raise NoFixFound("no fix found within budget")
    return diagnoses, timed_out


# --------------------------------------------------------------------------
# generic route: comparison constraints over bool/int variables


@dataclass(frozen=True)
class VarSpec:
    name: str
    kind: str  # "bool" | "int"


@dataclass
class GenericProblem:
    variables: list[VarSpec]
    constraints: list[Expr]
    current: dict[str, object]  # name -> bool | int


def _generic_operand(leaf: Expr, env: dict[str, object]):
    if isinstance(leaf, SymbolRef):
        value = env[leaf.name]
        if isinstance(value, bool):
            return ("tri", YES if value else NO)
        return ("num", value)
    if isinstance(leaf, ConstTristate):
        return ("tri", leaf.value)
    assert isinstance(leaf, ConstString)
    try:
        return ("num", parse_number(leaf.text))
    except ValueError:
        return ("str", leaf.text)


def eval_generic(expr: Expr, env: dict[str, object]) -> Tristate:
    if isinstance(expr, SymbolRef):
        value = env[expr.name]
        return YES if value else NO
    if isinstance(expr, ConstTristate):
        return expr.value
    if isinstance(expr, ConstString):
        return NO
    if isinstance(expr, Not):
        return Tristate(2 - eval_generic(expr.operand, env))
    if isinstance(expr, And):
        return min(eval_generic(a, env) for a in expr.args)
    if isinstance(expr, Or):
        return max(eval_generic(a, env) for a in expr.args)
    assert isinstance(expr, Compare)
    lk, lv = _generic_operand(expr.lhs, env)
    rk, rv = _generic_operand(expr.rhs, env)
    ops = {
        "=": lambda a, b: a == b,
        "!=": lambda a, b: a != b,
        "<": lambda a, b: a < b,
        "<=": lambda a, b: a <= b,
        ">": lambda a, b: a > b,
        ">=": lambda a, b: a >= b,
    }
    if lk == rk:
        return YES if ops[expr.op](lv, rv) else NO
    raise TypeError(f"comparison mixes {lk} and {rk}")


def _int_candidates(problem: GenericProblem) -> list[int]:
    constants: set[int] = set()
    for c in problem.constraints:
        stack = [c]
        while stack:
            node = stack.pop()
            if isinstance(node, Compare):
                for leaf in (node.lhs, node.rhs):
                    if isinstance(leaf, ConstString):
                        try:
                            constants.add(parse_number(leaf.text))
                        except ValueError:
                            pass
            elif isinstance(node, Not):
                stack.append(node.operand)
            elif isinstance(node, (And, Or)):
                stack.extend(node.args)
    for spec in problem.variables:
        if spec.kind == "int":
            constants.add(int(problem.current[spec.name]))
    base = constants or {0}
    n = sum(1 for v in problem.variables if v.kind == "int")
    out: set[int] = set()
    for c in base:
        out.update((c - 1, c, c + 1))
    lo, hi = min(base), max(base)
    for i in range(1, n + 1):
        out.add(lo - 1 - i)
        out.add(hi + 1 + i)
    return sorted(out)


def _generic_check(problem: GenericProblem, pinned: frozenset[str]) -> bool | None:
    """Satisfiability with pinned variables at their current values,
    free variables searched over a candidate grid."""
    candidates = _int_candidates(problem)
    free = [v for v in problem.variables if v.name not in pinned]
    domains = []
    for spec in free:
        if spec.kind == "bool":
            domains.append([False, True])
        else:
            domains.append(candidates)
    total = 1
    for d in domains:
        total *= len(d)
        if total > 2_000_000:
            return None
    base_env = {name: problem.current[name] for name in pinned}
    for combo in itertools.product(*domains):
        env = dict(base_env)
        for spec, value in zip(free, combo):
            env[spec.name] = value
        if all(eval_generic(c, env) == YES for c in problem.constraints):
            return True
    return False


def resolve_generic(problem: GenericProblem, limits: Limits | None = None) -> ResolveResult:
    limits = limits or Limits()
    names = [v.name for v in problem.variables]
    index = {name: i for i, name in enumerate(names)}
    kinds = {v.name: v.kind for v in problem.variables}

    def check(enabled: frozenset):
        verdict = _generic_check(problem, enabled)
        if verdict is None:
            return None, None
        return verdict, (sorted(enabled, key=index.get) if not verdict else None)

    sat = _generic_check(problem, frozenset(names))
    if sat:
        return ResolveResult([], directly_applicable=True)
    diagnoses, timed_out = diagnose(check, names, limits)
    if not diagnoses:
        return ResolveResult([], timed_out=timed_out)
    fixes = []
    for diag in diagnoses:
        fix = _build_generic_fix(problem, diag, index, kinds)
        if fix is not None:
            fixes.append(fix)
    return ResolveResult(fixes, timed_out=timed_out)


def _build_generic_fix(
    problem: GenericProblem,
    diag: Diagnosis,
    index: dict[str, int],
    kinds: dict[str, str],
) -> Fix | None:
    env: dict[str, Expr] = {}
    for spec in problem.variables:
        if spec.name in diag.variables:
            continue
        cur = problem.current[spec.name]
        if spec.kind == "bool":
            env[spec.name] = ConstTristate(YES if cur else NO)
        else:
            env[spec.name] = ConstString(str(cur))
    residual = [substitute(c, env) for c in problem.constraints]
    try:
        forced, parts = simplify_residual(residual)
    except ResidualUnsatisfiable:
        return None
    entries: list[tuple[int, FixEntry]] = []
    for name, value in forced.items():
        if name not in diag.variables:
            continue  # redundant: pinned value re-derived
        entries.append((index[name], FixEntry(symbols=(name,), value=value)))
    for names, group_parts in group_conjuncts(parts):
        names, expr = simplify_group(names, group_parts)
        pos = min(index[n] for n in names)
        entries.append((pos, FixEntry(symbols=names, constraint=expr)))
    # diagnosis variables untouched by the residual may keep any value;
    # surface them with their current value so the entry set is complete
    covered = set(forced) | {
        n for _, e in entries for n in e.symbols
    }
    for name in sorted(diag.variables - covered, key=index.get):
        entries.append(
            (index[name], FixEntry(symbols=(name,), value=problem.current[name]))
        )
    entries.sort(key=lambda pair: pair[0])
    return Fix(entries=tuple(e for _, e in entries), diagnosis=diag)


# --------------------------------------------------------------------------
# kconfig route: SAT-backed resolution over the propositional encoding


@dataclass
class _Session:
    model: KconfigModel
    pm: PropModel
    cnf: CnfFormula
    solver: Solver
    soft_vars: dict[str, int]  # symbol -> selector variable id


def _value_literals(session: _Session, name: str, value: SymbolValue) -> list[int]:
    """Unit literals asserting symbol == value in the encoding."""
    sym = session.model.symbols[name]
    cnf = session.cnf
    if sym.is_bool_like():
        y = cnf.ids.get(PropVar(VarKind.SYM_Y, name))
        lits = []
        tri = value.tri
        if y is not None:
            lits.append(y if tri == YES else -y)
        m = cnf.ids.get(PropVar(VarKind.SYM_M, name))
        if m is not None:
            lits.append(m if tri == MOD else -m)
        if tri == MOD and m is None:
            raise ValueError(f"symbol {name} cannot take value m")
        return lits
    var = cnf.ids.get(PropVar(VarKind.NB_EQ, name, str(value)))
    if var is None:
        raise ValueError(f"value {value} of {name} is outside the known set")
    return [var]


def _boundary_neighbors(model: KconfigModel) -> dict[str, list[SymbolValue]]:
    """Values one step either side of every literal an int/hex symbol is
    compared against, so range probing can find tight endpoints."""
    out: dict[str, list[SymbolValue]] = {}
    for expr in iter_model_exprs(model):
        stack = [expr]
        while stack:
            node = stack.pop()
            if isinstance(node, Not):
                stack.append(node.operand)
            elif isinstance(node, (And, Or)):
                stack.extend(node.args)
            elif isinstance(node, Compare):
                for side, other in ((node.lhs, node.rhs), (node.rhs, node.lhs)):
                    if not (isinstance(side, SymbolRef) and isinstance(other, ConstString)):
                        continue
                    sym = model.symbols.get(side.name)
                    if sym is None or sym.type not in (SymbolType.INT, SymbolType.HEX):
                        continue
                    try:
                        num = parse_number(other.text)
                    except ValueError:
                        continue
                    kind = ValueKind.HEX if sym.type == SymbolType.HEX else ValueKind.INT
                    for nb in (num - 1, num + 1):
                        if kind is ValueKind.HEX and nb < 0:
                            continue
                        out.setdefault(side.name, []).append(SymbolValue(kind, num=nb))
    return out


def build_soft_constraints(
    model: KconfigModel,
    cfg: Configuration,
    desired: list[tuple[str, SymbolValue]],
) -> _Session:
    """Encode the model plus desired targets as hard clauses and the
    current configuration as one reified selector assumption per
    non-desired symbol; the returned session carries them all."""
    extra: dict[str, list[SymbolValue]] = _boundary_neighbors(model)
    for name, sym in model.symbols.items():
        if not sym.is_bool_like():
            cur = cfg.effective.get(name, empty_value(sym.type))
            extra.setdefault(name, []).append(cur)
    for name, value in desired:
        sym = model.symbols[name]
        if not sym.is_bool_like():
            extra.setdefault(name, []).append(value)
    pm = build_formula(model, extra_values=extra)
    cnf = to_cnf([f for _, f in pm.constraints], variable_order=pm.variables())
    solver = Solver(cnf.num_vars)
    ok = True
    for clause in cnf.clauses:
        ok = solver.add_clause(clause) and ok
    session = _Session(model, pm, cnf, solver, {})
    if not ok:
        return session
    desired_names = {name for name, _ in desired}
    for name, value in desired:
        for lit in _value_literals(session, name, value):
            solver.add_clause([lit])
    for name, sym in model.symbols.items():
        if name in desired_names:
            continue
        cur = cfg.effective.get(name, empty_value(sym.type))
        try:
            lits = _value_literals(session, name, cur)
        except ValueError:
            continue
        selector = cnf.new_var()
        session.soft_vars[name] = selector
        solver.ensure_vars(selector)
        for lit in lits:
            solver.add_clause([-selector, lit])
    return session


def resolve_conflict(
    model: KconfigModel,
    cfg: Configuration,
    desired: list[tuple[str, SymbolValue]],
    limits: Limits | None = None,
) -> ResolveResult:
    limits = limits or Limits()
    session = build_soft_constraints(model, cfg, desired)
    solver = session.solver
    soft_names = sorted(session.soft_vars, key=_doc_index(model))
    all_lits = [session.soft_vars[n] for n in soft_names]
    lit_to_name = {v: k for k, v in session.soft_vars.items()}

    res = solver.solve(all_lits, time_budget=limits.time_budget)
    if res == SatResult.SAT:
        return ResolveResult([], directly_applicable=True)
    if res == SatResult.UNKNOWN:
        return ResolveResult([], timed_out=True)

    deadline = time.monotonic() + limits.time_budget

    def check(enabled: frozenset):
        budget = max(deadline - time.monotonic(), 0.1)
        lits = [session.soft_vars[n] for n in soft_names if n in enabled]
        verdict = solver.solve(
            lits,
            time_budget=min(budget, limits.time_budget),
            conflict_budget=limits.solve_conflict_budget,
        )
        if verdict == SatResult.UNKNOWN:
            return None, None
        if verdict == SatResult.SAT:
            return True, None
        core = solver.unsat_core()
        core = minimize_core(
            solver, core, max_resolves=limits.max_core_resolves
        )
        return False, [lit_to_name[l] for l in core if l in lit_to_name]

    diagnoses, timed_out = diagnose(check, soft_names, limits)
    fixes = []
    for diag in diagnoses:
        fix = _build_kconfig_fix(session, cfg, desired, diag, limits)
        if fix is not None:
            fixes.append(fix)
    return ResolveResult(fixes, timed_out=timed_out)


def _doc_index(model: KconfigModel):
    order = {name: i for i, name in enumerate(model.symbols)}
    return lambda name: order.get(name, len(order))


def _model_value(session: _Session, assignment: dict[int, bool], name: str) -> SymbolValue:
    sym = session.model.symbols[name]
    cnf = session.cnf
    if sym.is_bool_like():
        y = cnf.ids.get(PropVar(VarKind.SYM_Y, name))
        if y is not None and assignment.get(y):
            return tri_value(YES)
        m = cnf.ids.get(PropVar(VarKind.SYM_M, name))
        if m is not None and assignment.get(m):
            return tri_value(MOD)
        return tri_value(NO)
    for v in session.pm.known_values.get(name, []):
        var = cnf.ids.get(PropVar(VarKind.NB_EQ, name, str(v)))
        if var is not None and assignment.get(var):
            return v
    return empty_value(sym.type)


def _residual_range_entry(
    session: _Session,
    diag_softs: list[int],
    name: str,
    witness: SymbolValue,
) -> FixEntry:
    """Probe which known values stay satisfiable and render the maximal
    contiguous block around the witness as a range; a block of one
    collapses to the concrete witness value."""
    sym = session.model.symbols[name]
    by_num: dict[int, SymbolValue] = {}
    for v in session.pm.known_values.get(name, []):
        if v.kind == witness.kind:
            by_num.setdefault(v.num, v)
    ordered = [by_num[k] for k in sorted(by_num)]
    concrete = FixEntry(symbols=(name,), value=witness, witness=witness)
    if len(ordered) <= 1 or len(ordered) > 32 or witness.num not in by_num:
        return concrete
    allowed: list[bool] = []
    for v in ordered:
        try:
            lits = _value_literals(session, name, v)
        except ValueError:
            allowed.append(False)
            continue
        res = session.solver.solve(diag_softs + lits, conflict_budget=20000)
        allowed.append(res == SatResult.SAT)
    wi = [v.num for v in ordered].index(witness.num)
    if not allowed[wi]:
        return concrete
    lo_i = wi
    while lo_i > 0 and allowed[lo_i - 1]:
        lo_i -= 1
    hi_i = wi
    while hi_i < len(ordered) - 1 and allowed[hi_i + 1]:
        hi_i += 1
    if lo_i == hi_i:
        return concrete
    ref = SymbolRef(name)
    constraint = make_and(
        Compare(">=", ref, ConstString(_num_text(sym, ordered[lo_i].num))),
        Compare("<=", ref, ConstString(_num_text(sym, ordered[hi_i].num))),
    )
    return FixEntry(symbols=(name,), constraint=constraint, witness=witness)


def _num_text(sym, num: int) -> str:
    if sym.type == SymbolType.HEX:
        return "0x%X" % num
    return str(num)


def _build_kconfig_fix(
    session: _Session,
    cfg: Configuration,
    desired: list[tuple[str, SymbolValue]],
    diag: Diagnosis,
    limits: Limits,
) -> Fix | None:
    solver = session.solver
    keep = [
        session.soft_vars[n]
        for n in session.soft_vars
        if n not in diag.variables
    ]
    res = solver.solve(keep, time_budget=limits.time_budget)
    if res != SatResult.SAT:
        return None
    assignment = solver.model()
    entries: list[FixEntry] = []
    doc = _doc_index(session.model)
    for name in sorted(diag.variables, key=doc):
        value = _model_value(session, assignment, name)
        sym = session.model.symbols[name]
        if sym.is_bool_like():
            entries.append(FixEntry(symbols=(name,), value=value, witness=value))
        else:
            entries.append(
                _residual_range_entry(session, keep, name, value)
            )
    for name, value in desired:
        entries.append(
            FixEntry(symbols=(name,), value=value, witness=value, desired=True)
        )
    return Fix(entries=tuple(entries), diagnosis=diag)

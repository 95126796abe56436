"""Residual-constraint simplification for fix construction.

After a diagnosis fixes which variables may change, the remaining
variables are substituted by their current values (stage 2) and the
surviving constraints are simplified (stage 3): constant folding,
unit boolean propagation, normalization of comparisons to put the
variable on the left, merging of same-variable bounds into one
maximal range, and splitting of the conjunction into independent
per-variable-group entries.
"""

from __future__ import annotations

from dataclasses import dataclass

from .evaluate import parse_number
from .kconfig.ast import (
    And,
    Compare,
    ConstString,
    ConstTristate,
    Expr,
    Not,
    Or,
    SymbolRef,
    TRI_N,
    TRI_Y,
    expr_symbols,
    make_and,
    make_or,
)
from .tristate import NO, YES, tri_not


class ResidualUnsatisfiable(Exception):
    """Simplification reduced a residual constraint to false."""


def substitute(expr: Expr, env: dict[str, Expr]) -> Expr:
    """Replace symbol references by constant leaves."""
    if isinstance(expr, SymbolRef):
        return env.get(expr.name, expr)
    if isinstance(expr, Not):
        return Not(substitute(expr.operand, env))
    if isinstance(expr, And):
        return And(tuple(substitute(a, env) for a in expr.args))
    if isinstance(expr, Or):
        return Or(tuple(substitute(a, env) for a in expr.args))
    if isinstance(expr, Compare):
        return Compare(expr.op, substitute(expr.lhs, env), substitute(expr.rhs, env))
    return expr


def _leaf_number(leaf: Expr) -> int | None:
    if isinstance(leaf, ConstString):
        text = leaf.text
        try:
            return parse_number(text)
        except ValueError:
            return None
    return None


_FLIP = {"<": ">", "<=": ">=", ">": "<", ">=": "<=", "=": "=", "!=": "!="}
_OPS = {
    "=": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
}


def fold(expr: Expr) -> Expr:
    """Constant-fold; comparisons between two constants become y/n."""
    if isinstance(expr, Not):
        inner = fold(expr.operand)
        if isinstance(inner, ConstTristate):
            return ConstTristate(tri_not(inner.value))
        if isinstance(inner, Not):
            return inner.operand
        return Not(inner)
    if isinstance(expr, And):
        args = [fold(a) for a in expr.args]
        if any(a == TRI_N for a in args):
            return TRI_N
        return make_and(*args)
    if isinstance(expr, Or):
        args = [fold(a) for a in expr.args]
        if any(a == TRI_Y for a in args):
            return TRI_Y
        return make_or(*args)
    if isinstance(expr, Compare):
        lhs, rhs = expr.lhs, expr.rhs
        if isinstance(lhs, ConstTristate) and isinstance(rhs, ConstTristate):
            return ConstTristate(YES) if _OPS[expr.op](lhs.value, rhs.value) else TRI_N
        ln, rn = _leaf_number(lhs), _leaf_number(rhs)
        if ln is not None and rn is not None:
            return ConstTristate(YES) if _OPS[expr.op](ln, rn) else TRI_N
        if (
            isinstance(lhs, ConstString)
            and isinstance(rhs, ConstString)
            and expr.op in ("=", "!=")
        ):
            same = lhs.text == rhs.text
            hold = same if expr.op == "=" else not same
            return ConstTristate(YES) if hold else TRI_N
        return normalize_comparison(expr)
    return expr


def normalize_comparison(cmp: Compare) -> Compare:
    """Put the symbol on the left when the other side is constant."""
    if isinstance(cmp.rhs, SymbolRef) and not isinstance(cmp.lhs, SymbolRef):
        return Compare(_FLIP[cmp.op], cmp.rhs, cmp.lhs)
    return cmp


def conjuncts(expr: Expr) -> list[Expr]:
    if isinstance(expr, And):
        out: list[Expr] = []
        for a in expr.args:
            out.extend(conjuncts(a))
        return out
    if isinstance(expr, ConstTristate) and expr.value == YES:
        return []
    return [expr]


def simplify_residual(constraints: list[Expr]) -> tuple[dict[str, bool], list[Expr]]:
    """Fold, then repeatedly extract and propagate unit boolean
    literals.  Returns the forced boolean assignments and the
    remaining conjuncts."""
    parts: list[Expr] = []
    for c in constraints:
        parts.extend(conjuncts(fold(c)))
    forced: dict[str, bool] = {}
    changed = True
    while changed:
        changed = False
        kept: list[Expr] = []
        for part in parts:
            if isinstance(part, ConstTristate):
                if part.value != YES:
                    raise ResidualUnsatisfiable("residual constraint is false")
                continue
            if isinstance(part, SymbolRef):
                if forced.get(part.name) is False:
                    raise ResidualUnsatisfiable(f"{part.name} forced both ways")
                forced[part.name] = True
                changed = True
                continue
            if isinstance(part, Not) and isinstance(part.operand, SymbolRef):
                name = part.operand.name
                if forced.get(name) is True:
                    raise ResidualUnsatisfiable(f"{name} forced both ways")
                forced[name] = False
                changed = True
                continue
            kept.append(part)
        if changed:
            env = {
                name: ConstTristate(YES if value else NO)
                for name, value in forced.items()
            }
            parts = []
            for part in kept:
                folded = fold(substitute(part, env))
                parts.extend(conjuncts(folded))
        else:
            parts = kept
    return forced, parts


@dataclass(frozen=True)
class Interval:
    """Closed-open-agnostic integer interval with strictness flags."""

    low: int | None = None
    low_strict: bool = False
    high: int | None = None
    high_strict: bool = False

    def empty(self) -> bool:
        if self.low is None or self.high is None:
            return False
        lo = self.low + 1 if self.low_strict else self.low
        hi = self.high - 1 if self.high_strict else self.high
        return lo > hi


def merge_bounds(comparisons: list[Compare]) -> tuple[Interval, list[Compare]]:
    """Intersect var-vs-constant bounds into one maximal interval.
    Equality and inequality atoms pass through unchanged."""
    interval = Interval()
    rest: list[Compare] = []
    for cmp in comparisons:
        num = _leaf_number(cmp.rhs)
        if num is None or cmp.op in ("=", "!="):
            rest.append(cmp)
            continue
        low, low_s = interval.low, interval.low_strict
        high, high_s = interval.high, interval.high_strict
        if cmp.op in (">", ">="):
            strict = cmp.op == ">"
            better = low is None or num > low or (num == low and strict and not low_s)
            if better:
                low, low_s = num, strict
        else:
            strict = cmp.op == "<"
            better = (
                high is None or num < high or (num == high and strict and not high_s)
            )
            if better:
                high, high_s = num, strict
        interval = Interval(low, low_s, high, high_s)
    if interval.empty():
        raise ResidualUnsatisfiable("bounds exclude every value")
    return interval, rest


def interval_exprs(var: str, interval: Interval) -> list[Compare]:
    out = []
    ref = SymbolRef(var)
    if interval.low is not None:
        op = ">" if interval.low_strict else ">="
        out.append(Compare(op, ref, ConstString(str(interval.low))))
    if interval.high is not None:
        op = "<" if interval.high_strict else "<="
        out.append(Compare(op, ref, ConstString(str(interval.high))))
    return out


def group_conjuncts(parts: list[Expr]) -> list[tuple[tuple[str, ...], list[Expr]]]:
    """Union-find grouping of conjuncts by shared variables; groups
    ordered by first appearance of their variables."""
    parent: dict[str, str] = {}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a: str, b: str) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    order: list[str] = []
    part_vars: list[list[str]] = []
    for part in parts:
        vs = sorted(expr_symbols(part))
        part_vars.append(vs)
        for v in vs:
            if v not in parent:
                parent[v] = v
                order.append(v)
        for a, b in zip(vs, vs[1:]):
            union(a, b)
    groups: dict[str, tuple[list[str], list[Expr]]] = {}
    root_order: list[str] = []
    for v in order:
        r = find(v)
        if r not in groups:
            groups[r] = ([], [])
            root_order.append(r)
        groups[r][0].append(v)
    for part, vs in zip(parts, part_vars):
        if not vs:
            continue
        groups[find(vs[0])][1].append(part)
    out = []
    for r in root_order:
        names, members = groups[r]
        out.append((tuple(names), members))
    return out


def simplify_group(
    names: tuple[str, ...], parts: list[Expr]
) -> tuple[tuple[str, ...], Expr]:
    """Single-variable groups collapse bounds to the maximal range."""
    if len(names) == 1 and all(
        isinstance(p, Compare) and isinstance(p.lhs, SymbolRef) for p in parts
    ):
        interval, rest = merge_bounds([p for p in parts if isinstance(p, Compare)])
        merged = interval_exprs(names[0], interval) + rest
        return names, make_and(*merged)
    return names, make_and(*parts)

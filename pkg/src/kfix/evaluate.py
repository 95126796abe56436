"""Configuration semantics over linked models.

A configuration holds the user's stated values and the effective
values derived from them.  For bool and tristate symbols the
effective value is

    max( min(user value, visibility),
         select lower bound,
         default contribution )

where visibility is the disjunction of the symbol's linked prompt
conditions (n without a prompt), the select lower bound is the
disjunction over incoming selects of min(selector value, select
condition), and the default contribution comes from the first default
whose condition holds, clamped by the declaration's dependency
context.  The default contribution only participates when the symbol
is invisible or the user stated no value; implied values join it at
the same priority.  Bool symbols round m up to y.  Non-boolean
symbols take the user's value when visible, otherwise the first
applicable default, otherwise the type's empty value; int and hex
values are clamped into the first active range.

`recalculate` iterates this rule over all symbols in document order
until a fixpoint; choice groups are enforced as units.  A model that
fails to stabilize within 4 rounds per symbol raises UnstableModelError.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .kconfig.ast import (
    And,
    Choice,
    Compare,
    ConstString,
    ConstTristate,
    Expr,
    KconfigModel,
    Not,
    Or,
    Symbol,
    SymbolRef,
    SymbolType,
)
from .tristate import (
    MOD,
    NO,
    SymbolValue,
    Tristate,
    ValueKind,
    YES,
    hex_value,
    int_value,
    str_value,
    tri_and,
    tri_any,
    tri_not,
    tri_or,
    tri_value,
)


class EvalError(Exception):
    pass


class UnstableModelError(EvalError):
    """The fixpoint iteration did not converge within the round cap."""


@dataclass
class Configuration:
    """User-stated values plus the effective values derived from them."""

    user_values: dict[str, SymbolValue] = field(default_factory=dict)
    effective: dict[str, SymbolValue] = field(default_factory=dict)

    def value(self, name: str) -> SymbolValue:
        return self.effective[name]

    def tri(self, name: str) -> Tristate:
        v = self.effective.get(name)
        if v is None or v.kind is not ValueKind.TRI:
            return NO
        return v.tri


def empty_value(sym_type: SymbolType) -> SymbolValue:
    if sym_type == SymbolType.STRING:
        return str_value("")
    if sym_type == SymbolType.INT:
        return int_value(0)
    if sym_type == SymbolType.HEX:
        return hex_value(0)
    return tri_value(NO)


def parse_number(text: str) -> int:
    if text.startswith("0x") or text.startswith("0X"):
        return int(text, 16)
    return int(text, 10)


def _is_numeric_text(text: str) -> bool:
    if text.startswith("0x") or text.startswith("0X"):
        rest = text[2:]
        return bool(rest) and all(c in "0123456789abcdefABCDEF" for c in rest)
    body = text[1:] if text.startswith("-") else text
    return bool(body) and body.isdigit()


def canonical_text(value: SymbolValue) -> str:
    return str(value)


def _operand(model: KconfigModel, cfg: Configuration, leaf: Expr) -> tuple[str, object]:
    """Kind and payload of a comparison operand: tri, string or number."""
    if isinstance(leaf, ConstTristate):
        return "tri", leaf.value
    if isinstance(leaf, ConstString):
        if _is_numeric_text(leaf.text):
            return "number", parse_number(leaf.text)
        return "string", leaf.text
    assert isinstance(leaf, SymbolRef)
    sym = model.symbols.get(leaf.name)
    if sym is None:
        return "tri", NO
    val = cfg.effective.get(leaf.name)
    if val is None:
        val = empty_value(sym.type)
    if val.kind is ValueKind.TRI:
        return "tri", val.tri
    if val.kind is ValueKind.STR:
        return "string", val.text
    return "number", val.num


def _canon(kind: str, payload) -> str:
    if kind == "tri":
        return str(payload)
    if kind == "number":
        return str(payload)
    return payload  # string


def compare_values(model: KconfigModel, cfg: Configuration, cmp: Compare) -> Tristate:
    lk, lv = _operand(model, cfg, cmp.lhs)
    rk, rv = _operand(model, cfg, cmp.rhs)
    if cmp.op in ("=", "!="):
        if lk == rk == "number":
            eq = lv == rv
        else:
            eq = _canon(lk, lv) == _canon(rk, rv)
        if cmp.op == "!=":
            eq = not eq
        return YES if eq else NO
    # ordering
    if lk == rk == "number":
        a, b = lv, rv
    elif lk == rk == "string":
        a, b = lv, rv
    else:
        raise EvalError(
            f"type error: ordering comparison mixes {lk} and {rk} operands"
        )
    result = {
        "<": a < b,
        "<=": a <= b,
        ">": a > b,
        ">=": a >= b,
    }[cmp.op]
    return YES if result else NO


def eval_expr(model: KconfigModel, cfg: Configuration, expr: Expr) -> Tristate:
    """Three-valued evaluation under the configuration's effective values."""
    if isinstance(expr, SymbolRef):
        sym = model.symbols.get(expr.name)
        if sym is None or not sym.is_bool_like():
            return NO
        return cfg.tri(expr.name)
    if isinstance(expr, ConstTristate):
        return expr.value
    if isinstance(expr, ConstString):
        return NO
    if isinstance(expr, Not):
        return tri_not(eval_expr(model, cfg, expr.operand))
    if isinstance(expr, And):
        out = YES
        for arg in expr.args:
            v = eval_expr(model, cfg, arg)
            if v < out:
                out = v
                if out == NO:
                    break
        return out
    if isinstance(expr, Or):
        out = NO
        for arg in expr.args:
            v = eval_expr(model, cfg, arg)
            if v > out:
                out = v
                if out == YES:
                    break
        return out
    assert isinstance(expr, Compare)
    return compare_values(model, cfg, expr)


def visibility(model: KconfigModel, cfg: Configuration, sym: Symbol) -> Tristate:
    """Prompt-derived visibility: n when the symbol has no prompt."""
    return tri_any(eval_expr(model, cfg, p.condition) for p in sym.prompts)


def select_bound(model: KconfigModel, cfg: Configuration, sym: Symbol) -> Tristate:
    return tri_any(
        tri_and(cfg.tri(selector), eval_expr(model, cfg, cond))
        for selector, cond in sym.selected_by
    )


def _imply_bound(model: KconfigModel, cfg: Configuration, sym: Symbol) -> Tristate:
    raw = tri_any(
        tri_and(cfg.tri(implier), eval_expr(model, cfg, cond))
        for implier, cond in sym.implied_by
    )
    if raw == NO:
        return NO
    return tri_and(raw, eval_expr(model, cfg, sym.depends))


def default_contribution(model: KconfigModel, cfg: Configuration, sym: Symbol) -> Tristate:
    """First default whose condition holds, clamped by its declaration deps."""
    for d in sym.defaults:
        cond = eval_expr(model, cfg, d.condition)
        if cond >= MOD:
            value = eval_expr(model, cfg, d.value)
            return tri_and(tri_and(value, cond), eval_expr(model, cfg, d.dep))
    return NO


def _first_active_range(model: KconfigModel, cfg: Configuration, sym: Symbol):
    for r in sym.ranges:
        active = tri_and(
            eval_expr(model, cfg, r.condition), eval_expr(model, cfg, r.dep)
        )
        if active >= MOD:
            assert isinstance(r.low, ConstString) and isinstance(r.high, ConstString)
            return parse_number(r.low.text), parse_number(r.high.text)
    return None


def compute_value(model: KconfigModel, cfg: Configuration, sym: Symbol) -> SymbolValue:
    """Value rule for one non-choice symbol under the current effectives."""
    if sym.is_bool_like():
        vis = visibility(model, cfg, sym)
        user = cfg.user_values.get(sym.name)
        base = NO
        if user is not None and vis > NO:
            base = tri_and(user.tri, vis)
        val = tri_or(base, select_bound(model, cfg, sym))
        if user is None or vis == NO:
            d = tri_or(
                default_contribution(model, cfg, sym),
                _imply_bound(model, cfg, sym),
            )
            val = tri_or(val, d)
        if sym.type == SymbolType.BOOL and val == MOD:
            val = YES
        return tri_value(val)

    # string/int/hex
    vis = visibility(model, cfg, sym)
    user = cfg.user_values.get(sym.name)
    cand: SymbolValue | None = None
    if vis > NO and user is not None:
        cand = user
    else:
        for d in sym.defaults:
            active = tri_and(
                eval_expr(model, cfg, d.condition), eval_expr(model, cfg, d.dep)
            )
            if active >= MOD:
                assert isinstance(d.value, ConstString)
                cand = literal_value(sym.type, d.value.text)
                break
        if cand is None:
            cand = empty_value(sym.type)
    if sym.type in (SymbolType.INT, SymbolType.HEX):
        bounds = _first_active_range(model, cfg, sym)
        if bounds is not None:
            lo, hi = bounds
            num = cand.num
            if num < lo:
                num = lo
            elif num > hi:
                num = hi
            if num != cand.num:
                cand = int_value(num) if sym.type == SymbolType.INT else hex_value(num)
    return cand


def literal_value(sym_type: SymbolType, text: str) -> SymbolValue:
    if sym_type == SymbolType.STRING:
        return str_value(text)
    if sym_type == SymbolType.INT:
        return int_value(parse_number(text))
    if sym_type == SymbolType.HEX:
        return hex_value(parse_number(text))
    raise EvalError(f"literal {text!r} for non-literal symbol type {sym_type}")


def choice_visibility(model: KconfigModel, cfg: Configuration, choice: Choice) -> Tristate:
    return tri_any(eval_expr(model, cfg, p.condition) for p in choice.prompts)


def member_visibility(model: KconfigModel, cfg: Configuration, name: str) -> Tristate:
    return visibility(model, cfg, model.symbols[name])


def choice_values(
    model: KconfigModel, cfg: Configuration, choice: Choice
) -> dict[str, Tristate]:
    """Values of all members of one choice group under current effectives."""
    vis = choice_visibility(model, cfg, choice)
    members = choice.members
    out = {m: NO for m in members}
    if vis == NO:
        return out

    def user_tri(name: str) -> Tristate | None:
        v = cfg.user_values.get(name)
        return v.tri if v is not None and v.kind is ValueKind.TRI else None

    def pick() -> str | None:
        # the user-chosen member, else the first member a choice default
        # names under a holding condition, else the first visible member
        for m in members:
            if user_tri(m) == YES and member_visibility(model, cfg, m) >= MOD:
                return m
        for d in choice.defaults:
            if eval_expr(model, cfg, d.condition) >= MOD:
                assert isinstance(d.value, SymbolRef)
                m = d.value.name
                if member_visibility(model, cfg, m) >= MOD:
                    return m
        for m in members:
            if member_visibility(model, cfg, m) >= MOD:
                return m
        return None

    if choice.type == SymbolType.BOOL:
        chosen = pick()
        if chosen is not None:
            out[chosen] = YES
        return out

    # tristate choice: positive user values set the group level
    positives = [t for t in (user_tri(m) for m in members) if t is not None and t >= MOD]
    level = tri_and(vis, max(positives) if positives else YES)
    if level == NO:
        return out
    if level == MOD:
        for m in members:
            t = user_tri(m)
            if t is not None and t >= MOD and member_visibility(model, cfg, m) >= MOD:
                out[m] = MOD
        return out
    chosen = pick()
    if chosen is not None:
        out[chosen] = YES
    return out


def initial_effective(model: KconfigModel, user_values: dict[str, SymbolValue]) -> dict:
    effective: dict[str, SymbolValue] = {}
    for name, sym in model.symbols.items():
        user = user_values.get(name)
        effective[name] = user if user is not None else empty_value(sym.type)
    return effective


def recalculate(
    model: KconfigModel, user_values: dict[str, SymbolValue]
) -> Configuration:
    """Iterate the value rule to a fixpoint, document order each round."""
    for name, val in user_values.items():
        sym = model.symbols.get(name)
        if sym is None:
            continue
        expected = ValueKind.TRI if sym.is_bool_like() else {
            SymbolType.STRING: ValueKind.STR,
            SymbolType.INT: ValueKind.INT,
            SymbolType.HEX: ValueKind.HEX,
        }[sym.type]
        if val.kind is not expected:
            raise EvalError(
                f"user value for {name} has kind {val.kind.value}, "
                f"expected {expected.value}"
            )
    cfg = Configuration(dict(user_values), initial_effective(model, user_values))
    max_rounds = 4 * max(len(model.symbols), 1) + 4
    for _ in range(max_rounds):
        changed = False
        seen_choices: set[int] = set()
        for name, sym in model.symbols.items():
            if sym.choice is not None:
                if sym.choice.ident in seen_choices:
                    continue
                seen_choices.add(sym.choice.ident)
                for m, tri in choice_values(model, cfg, sym.choice).items():
                    new = tri_value(tri)
                    if cfg.effective[m] != new:
                        cfg.effective[m] = new
                        changed = True
            else:
                new = compute_value(model, cfg, sym)
                if cfg.effective[name] != new:
                    cfg.effective[name] = new
                    changed = True
        if not changed:
            return cfg
    raise UnstableModelError(
        f"model did not stabilize within {max_rounds} recalculation rounds"
    )


@dataclass(frozen=True)
class Violation:
    symbol: str
    prop: str  # DependsOn | Select | Default | Range | Choice | Recalc
    message: str

    def __str__(self) -> str:
        return f"{self.symbol}: {self.prop}: {self.message}"


def _explain_mismatch(
    model: KconfigModel, cfg: Configuration, sym: Symbol, want: SymbolValue
) -> Violation:
    have = cfg.effective[sym.name]
    if sym.choice is not None:
        return Violation(sym.name, "Choice", f"choice member should be {want}, is {have}")
    if sym.is_bool_like():
        sel = select_bound(model, cfg, sym)
        if have.tri < sel:
            source = ", ".join(s for s, _ in sym.selected_by)
            return Violation(
                sym.name, "Select", f"selected to at least {sel} (by {source}), is {have}"
            )
        vis = visibility(model, cfg, sym)
        if have.tri > tri_or(vis, sel):
            return Violation(
                sym.name,
                "DependsOn",
                f"visibility is {vis}, value {have} unreachable",
            )
        return Violation(sym.name, "Default", f"value should be {want}, is {have}")
    bounds = _first_active_range(model, cfg, sym)
    if bounds is not None and have.kind in (ValueKind.INT, ValueKind.HEX):
        lo, hi = bounds
        if not (lo <= have.num <= hi):
            return Violation(
                sym.name, "Range", f"value {have} outside active range [{lo}, {hi}]"
            )
    return Violation(sym.name, "Default", f"value should be {want}, is {have}")


def validate(model: KconfigModel, cfg: Configuration) -> list[Violation]:
    """Empty iff the configuration reproduces under its own user values."""
    try:
        recalc = recalculate(model, cfg.user_values)
    except UnstableModelError as exc:
        return [Violation("", "Recalc", str(exc))]
    violations: list[Violation] = []
    seen_choices: set[int] = set()
    for name, sym in model.symbols.items():
        want = recalc.effective[name]
        have = cfg.effective.get(name)
        if have == want:
            continue
        if have is None:
            violations.append(Violation(name, "Recalc", "missing effective value"))
            continue
        if sym.choice is not None:
            if sym.choice.ident in seen_choices:
                continue
            seen_choices.add(sym.choice.ident)
        violations.append(_explain_mismatch(model, cfg, sym, want))
    return violations

"""Propositional encoding of a linked model.

Each tristate symbol becomes two variables S.y and S.m (at most one
true); bool symbols get S.y only.  A tristate expression e is encoded
as the pair of propositions [e = y] and [e >= m]:

    not:  [!e = y] = ![e >= m]      [!e >= m] = ![e = y]
    and:  conjunction of the halves     or: disjunction of the halves

Comparisons reduce to equations over the finite value sets collected
for non-boolean symbols.  The constraints say exactly when a total
assignment reproduces itself under the value rule: visible symbols
range freely below their visibility ceiling, selects force lower
bounds, defaults pin invisible symbols, choice groups hold at most
one y member, and int/hex symbols stay inside their first active
range.  Satisfying assignments correspond one to one with valid
configurations over the collected value sets.

Incoming selects aggregate into two reified pull variables per target
(S.sel_y, S.sel_m) by default; `split_selects=False` inlines the
defining disjunctions instead, which drops the auxiliary variables at
the cost of duplicated terms.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .evaluate import (
    Configuration,
    _is_numeric_text,
    empty_value,
    eval_expr,
    literal_value,
    parse_number,
)
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
from .prop import (
    FALSE,
    PNot,
    PTrue,
    PropNode,
    PropVar,
    PVar,
    TRUE,
    VarKind,
    p_and,
    p_iff,
    p_implies,
    p_not,
    p_or,
    p_var,
)
from .tristate import MOD, NO, SymbolValue, ValueKind, YES, tri_and


class AbstractionGapError(Exception):
    """The construct evaluates fine but has no propositional image."""


Pair = tuple[PropNode, PropNode]  # ([e = y], [e >= m])

_PAIR_Y: Pair = (TRUE, TRUE)
_PAIR_M: Pair = (FALSE, TRUE)
_PAIR_N: Pair = (FALSE, FALSE)


def iter_model_exprs(model: KconfigModel):
    """Every linked expression in the model, in document order."""
    for sym in model.symbols.values():
        for p in sym.prompts:
            yield p.condition
        for d in sym.defaults:
            yield d.value
            yield d.condition
            yield d.dep
        for sel in sym.selects:
            yield sel.condition
        for imp in sym.implies:
            yield imp.condition
        for r in sym.ranges:
            yield r.condition
            yield r.dep
        yield sym.depends
    for choice in model.choices:
        for p in choice.prompts:
            yield p.condition
        for d in choice.defaults:
            yield d.condition


def _iter_compares(model: KconfigModel):
    for expr in iter_model_exprs(model):
        stack = [expr]
        while stack:
            node = stack.pop()
            if isinstance(node, Compare):
                yield node
            elif isinstance(node, Not):
                stack.append(node.operand)
            elif isinstance(node, (And, Or)):
                stack.extend(node.args)


def _value_key(value: SymbolValue):
    if value.kind in (ValueKind.INT, ValueKind.HEX):
        return ("num", value.num)
    return ("str", value.text)


def collect_known_values(
    model: KconfigModel,
    extra_values: dict[str, list[SymbolValue]] | None = None,
) -> dict[str, list[SymbolValue]]:
    """Finite domain per non-boolean symbol: empty value, defaults,
    range bounds, literals it is compared against, extra seeds."""
    domains: dict[str, list[SymbolValue]] = {}
    seen: dict[str, set] = {}

    def add(sym: Symbol, value: SymbolValue) -> None:
        key = _value_key(value)
        if key not in seen[sym.name]:
            seen[sym.name].add(key)
            domains[sym.name].append(value)

    nonbool = [
        s for s in model.symbols.values() if not s.is_bool_like()
    ]
    for sym in nonbool:
        domains[sym.name] = []
        seen[sym.name] = set()
        add(sym, empty_value(sym.type))
    for sym in nonbool:
        for d in sym.defaults:
            assert isinstance(d.value, ConstString)
            add(sym, literal_value(sym.type, d.value.text))
        for r in sym.ranges:
            assert isinstance(r.low, ConstString) and isinstance(r.high, ConstString)
            add(sym, literal_value(sym.type, r.low.text))
            add(sym, literal_value(sym.type, r.high.text))
    for cmp in _iter_compares(model):
        for ref, other in ((cmp.lhs, cmp.rhs), (cmp.rhs, cmp.lhs)):
            if not (isinstance(ref, SymbolRef) and isinstance(other, ConstString)):
                continue
            sym = model.symbols.get(ref.name)
            if sym is None or sym.is_bool_like():
                continue
            text = other.text
            if sym.type == SymbolType.STRING:
                # numeric literals compare by canonical decimal text
                if _is_numeric_text(text):
                    add(sym, literal_value(sym.type, str(parse_number(text))))
                else:
                    add(sym, literal_value(sym.type, text))
            elif _is_numeric_text(text):
                add(sym, literal_value(sym.type, text))
            # non-numeric text can never equal an int/hex value
    if extra_values:
        for name, values in extra_values.items():
            sym = model.symbols.get(name)
            if sym is None or sym.is_bool_like():
                continue
            for v in values:
                add(sym, v)
    return domains


@dataclass
class PropModel:
    """Constraint groups plus the variable/value bookkeeping."""

    model: KconfigModel
    constraints: list[tuple[str, PropNode]]
    known_values: dict[str, list[SymbolValue]]
    split_selects: bool = True
    _vars: list[PropVar] = field(default_factory=list)

    def formula(self) -> PropNode:
        return p_and(*[f for _, f in self.constraints])

    def variables(self) -> list[PropVar]:
        return list(self._vars)


class Encoder:
    def __init__(
        self,
        model: KconfigModel,
        known_values: dict[str, list[SymbolValue]],
        split_selects: bool,
    ):
        self.model = model
        self.known_values = known_values
        self.split = split_selects
        self._pairs: dict[Expr, Pair] = {}
        self.constraints: list[tuple[str, PropNode]] = []
        self.order: list[PropVar] = []

    # --- variables ----------------------------------------------------

    def sym_y(self, name: str) -> PropNode:
        return p_var(VarKind.SYM_Y, name)

    def sym_m(self, name: str) -> PropNode:
        return p_var(VarKind.SYM_M, name)

    def nb_var(self, name: str, value: SymbolValue) -> PropNode:
        return p_var(VarKind.NB_EQ, name, str(value))

    # --- expression pairs ----------------------------------------------

    def pair(self, expr: Expr) -> Pair:
        cached = self._pairs.get(expr)
        if cached is not None:
            return cached
        result = self._pair(expr)
        self._pairs[expr] = result
        return result

    def _pair(self, expr: Expr) -> Pair:
        if isinstance(expr, SymbolRef):
            sym = self.model.symbols.get(expr.name)
            if sym is None or not sym.is_bool_like():
                return _PAIR_N
            y = self.sym_y(expr.name)
            if sym.type == SymbolType.BOOL:
                return (y, y)
            return (y, p_or(y, self.sym_m(expr.name)))
        if isinstance(expr, ConstTristate):
            return {YES: _PAIR_Y, MOD: _PAIR_M, NO: _PAIR_N}[expr.value]
        if isinstance(expr, ConstString):
            return _PAIR_N
        if isinstance(expr, Not):
            eq_y, ge_m = self.pair(expr.operand)
            return (p_not(ge_m), p_not(eq_y))
        if isinstance(expr, And):
            pairs = [self.pair(a) for a in expr.args]
            return (p_and(*[p[0] for p in pairs]), p_and(*[p[1] for p in pairs]))
        if isinstance(expr, Or):
            pairs = [self.pair(a) for a in expr.args]
            return (p_or(*[p[0] for p in pairs]), p_or(*[p[1] for p in pairs]))
        assert isinstance(expr, Compare)
        b = self.encode_compare(expr)
        return (b, b)

    # --- comparisons ----------------------------------------------------

    def _classify(self, leaf: Expr):
        """('tri', pair) | ('str', text) | ('num', value) | ('sym', Symbol)"""
        if isinstance(leaf, ConstTristate):
            return ("tri", self.pair(leaf))
        if isinstance(leaf, ConstString):
            if _is_numeric_text(leaf.text):
                return ("num", parse_number(leaf.text))
            return ("str", leaf.text)
        assert isinstance(leaf, SymbolRef)
        sym = self.model.symbols.get(leaf.name)
        if sym is None:
            return ("tri", _PAIR_N)
        if sym.is_bool_like():
            return ("tri", self.pair(leaf))
        return ("sym", sym)

    def _tri_level_eq(self, pair: Pair, text: str) -> PropNode:
        eq_y, ge_m = pair
        if text == "y":
            return eq_y
        if text == "m":
            return p_and(ge_m, p_not(eq_y))
        if text == "n":
            return p_not(ge_m)
        return FALSE

    def _domain(self, sym: Symbol) -> list[SymbolValue]:
        return self.known_values.get(sym.name, [])

    def _eq_literal(self, sym: Symbol, kind: str, payload) -> PropNode:
        terms = []
        for v in self._domain(sym):
            if kind == "num":
                if v.kind in (ValueKind.INT, ValueKind.HEX):
                    match = v.num == payload
                else:
                    match = v.text == str(payload)
            else:
                match = str(v) == payload
            if match:
                terms.append(self.nb_var(sym.name, v))
        return p_or(*terms)

    def encode_compare(self, cmp: Compare) -> PropNode:
        lk = self._classify(cmp.lhs)
        rk = self._classify(cmp.rhs)
        if cmp.op in ("=", "!="):
            eq = self._encode_eq(cmp, lk, rk)
            return p_not(eq) if cmp.op == "!=" else eq
        return self._encode_ord(cmp, lk, rk)

    def _encode_eq(self, cmp: Compare, lk, rk) -> PropNode:
        kinds = (lk[0], rk[0])
        if kinds == ("tri", "tri"):
            (ay, am), (by, bm) = lk[1], rk[1]
            return p_or(
                p_and(ay, by),
                p_and(am, p_not(ay), bm, p_not(by)),
                p_and(p_not(am), p_not(bm)),
            )
        if "tri" in kinds:
            pair, other = (lk[1], rk) if lk[0] == "tri" else (rk[1], lk)
            if other[0] == "str":
                return self._tri_level_eq(pair, other[1])
            if other[0] == "num":
                return FALSE  # decimal text never reads n, m or y
            raise AbstractionGapError(
                f"equality between tristate and {other[0]} operands: {cmp}"
            )
        if kinds == ("sym", "sym"):
            a, b = lk[1], rk[1]
            terms = []
            for va in self._domain(a):
                for vb in self._domain(b):
                    if _values_equal(va, vb):
                        terms.append(
                            p_and(self.nb_var(a.name, va), self.nb_var(b.name, vb))
                        )
            return p_or(*terms)
        if "sym" in kinds:
            sym, lit = (lk[1], rk) if lk[0] == "sym" else (rk[1], lk)
            return self._eq_literal(sym, lit[0], lit[1])
        # two literals
        (ak, av), (bk, bv) = lk, rk
        if ak == bk == "num":
            return TRUE if av == bv else FALSE
        return TRUE if str(av) == str(bv) else FALSE

    def _encode_ord(self, cmp: Compare, lk, rk) -> PropNode:
        import operator

        ops = {"<": operator.lt, "<=": operator.le, ">": operator.gt, ">=": operator.ge}
        op = ops[cmp.op]
        if lk[0] == "tri" or rk[0] == "tri":
            raise AbstractionGapError(f"ordering with a tristate operand: {cmp}")
        if lk[0] == "sym" and rk[0] == "sym":
            raise AbstractionGapError(
                f"ordering between two symbols ({lk[1].name}, {rk[1].name}) "
                "needs value enumeration on both sides"
            )
        if lk[0] != "sym" and rk[0] != "sym":
            if lk[0] == rk[0]:
                return TRUE if op(lk[1], rk[1]) else FALSE
            raise AbstractionGapError(f"ordering mixes {lk[0]} and {rk[0]}: {cmp}")
        if lk[0] == "sym":
            sym, lit, flipped = lk[1], rk, False
        else:
            sym, lit, flipped = rk[1], lk, True
        terms = []
        for v in self._domain(sym):
            if lit[0] == "num":
                if v.kind not in (ValueKind.INT, ValueKind.HEX):
                    raise AbstractionGapError(
                        f"ordering mixes string symbol {sym.name} and number: {cmp}"
                    )
                a, b = v.num, lit[1]
            else:
                if v.kind is not ValueKind.STR:
                    raise AbstractionGapError(
                        f"ordering mixes {sym.type.value} symbol {sym.name} "
                        f"and string: {cmp}"
                    )
                a, b = v.text, lit[1]
            holds = op(b, a) if flipped else op(a, b)
            if holds:
                terms.append(self.nb_var(sym.name, v))
        return p_or(*terms)

    # --- symbol machinery ------------------------------------------------

    def vis_pair(self, sym: Symbol) -> Pair:
        pairs = [self.pair(p.condition) for p in sym.prompts]
        return (p_or(*[p[0] for p in pairs]), p_or(*[p[1] for p in pairs]))

    def choice_vis_pair(self, choice: Choice) -> Pair:
        pairs = [self.pair(p.condition) for p in choice.prompts]
        return (p_or(*[p[0] for p in pairs]), p_or(*[p[1] for p in pairs]))

    def select_pair(self, sym: Symbol) -> Pair:
        """Aggregated select pull, reified per target when splitting."""
        if not sym.selected_by:
            return _PAIR_N
        eq_terms = []
        ge_terms = []
        for selector, cond in sym.selected_by:
            s_eq, s_ge = self.pair(SymbolRef(selector))
            c_eq, c_ge = self.pair(cond)
            eq_terms.append(p_and(s_eq, c_eq))
            ge_terms.append(p_and(s_ge, c_ge))
        eq_expr, ge_expr = p_or(*eq_terms), p_or(*ge_terms)
        if not self.split:
            return (eq_expr, ge_expr)
        sel_y = p_var(VarKind.SEL_Y, sym.name)
        sel_m = p_var(VarKind.SEL_M, sym.name)
        self.order.append(sel_y.var)
        self.order.append(sel_m.var)
        self.constraints.append(
            (f"select:{sym.name}", p_and(p_iff(sel_y, eq_expr), p_iff(sel_m, ge_expr)))
        )
        return (sel_y, sel_m)

    def default_pair(self, sym: Symbol) -> Pair:
        """First-match default chain joined with imply contributions."""
        eq_terms = []
        ge_terms = []
        blockers: list[PropNode] = []
        for d in sym.defaults:
            c_eq, c_ge = self.pair(d.condition)
            v_eq, v_ge = self.pair(d.value)
            dep_eq, dep_ge = self.pair(d.dep)
            fired = p_and(*blockers, c_ge)
            ge_terms.append(p_and(fired, v_ge, dep_ge))
            eq_terms.append(p_and(fired, c_eq, v_eq, dep_eq))
            blockers.append(p_not(c_ge))
        if sym.implied_by:
            dep_eq, dep_ge = self.pair(sym.depends)
            raw_eq = []
            raw_ge = []
            for implier, cond in sym.implied_by:
                i_eq, i_ge = self.pair(SymbolRef(implier))
                c_eq, c_ge = self.pair(cond)
                raw_eq.append(p_and(i_eq, c_eq))
                raw_ge.append(p_and(i_ge, c_ge))
            eq_terms.append(p_and(p_or(*raw_eq), dep_eq))
            ge_terms.append(p_and(p_or(*raw_ge), dep_ge))
        return (p_or(*eq_terms), p_or(*ge_terms))

    # --- constraint groups -----------------------------------------------

    def encode_bool_like(self, sym: Symbol) -> None:
        y = self.sym_y(sym.name)
        self.order.append(y.var)
        tri = sym.type == SymbolType.TRISTATE
        m = self.sym_m(sym.name) if tri else FALSE
        if tri:
            self.order.append(m.var)
        vis_eq, vis_ge = self.vis_pair(sym)
        sel_y, sel_m = self.select_pair(sym)
        def_eq, def_ge = self.default_pair(sym)
        clauses = []
        if tri:
            clauses.append(p_not(p_and(y, m)))
            clauses.append(p_implies(sel_y, y))
            clauses.append(p_implies(sel_m, p_or(y, m)))
            clauses.append(
                p_implies(y, p_or(vis_eq, sel_y, p_and(p_not(vis_ge), def_eq)))
            )
            clauses.append(p_implies(p_or(y, m), p_or(vis_ge, sel_m, def_ge)))
            clauses.append(
                p_implies(
                    p_not(vis_ge),
                    p_and(
                        p_implies(def_ge, p_or(y, m)),
                        p_implies(def_eq, y),
                    ),
                )
            )
        else:
            clauses.append(p_implies(sel_m, y))
            clauses.append(p_implies(y, p_or(vis_ge, sel_m, def_ge)))
            clauses.append(p_implies(p_and(p_not(vis_ge), def_ge), y))
        group = p_and(*clauses)
        if not isinstance(group, PTrue):
            self.constraints.append((f"core:{sym.name}", group))

    def encode_choice(self, choice: Choice) -> None:
        members = choice.members
        vis_eq, vis_ge = self.choice_vis_pair(choice)
        y_vars = {}
        m_vars = {}
        mvis = {}
        for name in members:
            sym = self.model.symbols[name]
            y_vars[name] = self.sym_y(name)
            self.order.append(y_vars[name].var)
            if choice.type == SymbolType.TRISTATE:
                m_vars[name] = self.sym_m(name)
                self.order.append(m_vars[name].var)
            mvis[name] = self.vis_pair(sym)
        clauses = []
        any_visible = p_or(*[mvis[n][1] for n in members])
        if choice.type == SymbolType.BOOL:
            for i, a in enumerate(members):
                for b in members[i + 1:]:
                    clauses.append(p_not(p_and(y_vars[a], y_vars[b])))
            for name in members:
                clauses.append(
                    p_implies(y_vars[name], p_and(vis_ge, mvis[name][1]))
                )
            clauses.append(
                p_implies(
                    p_and(vis_ge, any_visible), p_or(*[y_vars[n] for n in members])
                )
            )
        else:
            for name in members:
                others = [
                    p_and(p_not(y_vars[o]), p_not(m_vars[o]))
                    for o in members
                    if o != name
                ]
                clauses.append(p_not(p_and(y_vars[name], m_vars[name])))
                clauses.append(
                    p_implies(
                        y_vars[name],
                        p_and(vis_eq, mvis[name][1], *others),
                    )
                )
                clauses.append(
                    p_implies(m_vars[name], p_and(vis_ge, mvis[name][1]))
                )
            no_mod = p_and(*[p_not(m_vars[n]) for n in members])
            clauses.append(
                p_implies(
                    p_and(vis_eq, no_mod, any_visible),
                    p_or(*[y_vars[n] for n in members]),
                )
            )
        group = p_and(*clauses)
        if not isinstance(group, PTrue):
            self.constraints.append((f"choice:{choice.ident}", group))

    def encode_nonbool(self, sym: Symbol) -> None:
        domain = self._domain(sym)
        var_of = {_value_key(v): self.nb_var(sym.name, v) for v in domain}
        for v in domain:
            self.order.append(var_of[_value_key(v)].var)
        clauses = [p_or(*var_of.values())]
        values = list(var_of.values())
        for i in range(len(values)):
            for j in range(i + 1, len(values)):
                clauses.append(p_not(p_and(values[i], values[j])))
        _, vis_ge = self.vis_pair(sym)

        numeric = sym.type in (SymbolType.INT, SymbolType.HEX)
        # first-active-range selectors
        range_cases: list[tuple[PropNode, tuple[int, int] | None]] = []
        if numeric and sym.ranges:
            blockers: list[PropNode] = []
            for r in sym.ranges:
                _, c_ge = self.pair(r.condition)
                _, dep_ge = self.pair(r.dep)
                act = p_and(c_ge, dep_ge)
                assert isinstance(r.low, ConstString) and isinstance(r.high, ConstString)
                bounds = (parse_number(r.low.text), parse_number(r.high.text))
                range_cases.append((p_and(*blockers, act), bounds))
                blockers.append(p_not(act))
            range_cases.append((p_and(*blockers), None))
        else:
            range_cases.append((TRUE, None))

        def value_var(value: SymbolValue) -> PropNode:
            return var_of[_value_key(value)]

        def clamped(value: SymbolValue, bounds: tuple[int, int] | None) -> SymbolValue:
            if bounds is None or not numeric:
                return value
            lo, hi = bounds
            num = value.num
            if num < lo:
                num = lo
            elif num > hi:
                num = hi
            if num == value.num:
                return value
            return literal_value(sym.type, str(num) if sym.type == SymbolType.INT else hex(num))

        # visible: user choice constrained into the active range
        if numeric:
            for selector, bounds in range_cases:
                if bounds is None:
                    continue
                lo, hi = bounds
                inside = [value_var(v) for v in domain if lo <= v.num <= hi]
                clauses.append(p_implies(p_and(vis_ge, selector), p_or(*inside)))

        # invisible: the default chain decides, then the clamp
        default_cases: list[tuple[PropNode, SymbolValue]] = []
        blockers = []
        for d in sym.defaults:
            _, c_ge = self.pair(d.condition)
            _, dep_ge = self.pair(d.dep)
            fired = p_and(*blockers, c_ge, dep_ge)
            assert isinstance(d.value, ConstString)
            default_cases.append((fired, literal_value(sym.type, d.value.text)))
            blockers.append(p_not(p_and(c_ge, dep_ge)))
        default_cases.append((p_and(*blockers), empty_value(sym.type)))
        for fired, base in default_cases:
            for selector, bounds in range_cases:
                final = clamped(base, bounds)
                clauses.append(
                    p_implies(
                        p_and(p_not(vis_ge), fired, selector), value_var(final)
                    )
                )
        self.constraints.append((f"nonbool:{sym.name}", p_and(*clauses)))

    def build(self) -> PropModel:
        seen_choices: set[int] = set()
        for sym in self.model.symbols.values():
            if sym.choice is not None:
                if sym.choice.ident not in seen_choices:
                    seen_choices.add(sym.choice.ident)
                    self.encode_choice(sym.choice)
            elif sym.is_bool_like():
                self.encode_bool_like(sym)
            else:
                self.encode_nonbool(sym)
        return PropModel(
            model=self.model,
            constraints=self.constraints,
            known_values=self.known_values,
            split_selects=self.split,
            _vars=self.order,
        )


def build_formula(
    model: KconfigModel,
    *,
    split_selects: bool = True,
    extra_values: dict[str, list[SymbolValue]] | None = None,
) -> PropModel:
    if not model.linked:
        raise ValueError("model must be linked before encoding")
    known = collect_known_values(model, extra_values)
    return Encoder(model, known, split_selects).build()


def _values_equal(a: SymbolValue, b: SymbolValue) -> bool:
    a_num = a.kind in (ValueKind.INT, ValueKind.HEX)
    b_num = b.kind in (ValueKind.INT, ValueKind.HEX)
    if a_num and b_num:
        return a.num == b.num
    return str(a) == str(b)


def assignment_from_config(pm: PropModel, cfg: Configuration) -> dict[PropVar, bool]:
    """Variable assignment a (total, effective-valued) configuration induces."""
    model = pm.model
    out: dict[PropVar, bool] = {}
    for name, sym in model.symbols.items():
        if sym.is_bool_like():
            tri = cfg.tri(name)
            out[PropVar(VarKind.SYM_Y, name)] = tri == YES
            if sym.type == SymbolType.TRISTATE:
                out[PropVar(VarKind.SYM_M, name)] = tri == MOD
            if pm.split_selects and sym.selected_by:
                pulls = [
                    tri_and(cfg.tri(selector), eval_expr(model, cfg, cond))
                    for selector, cond in sym.selected_by
                ]
                out[PropVar(VarKind.SEL_Y, name)] = any(p == YES for p in pulls)
                out[PropVar(VarKind.SEL_M, name)] = any(p >= MOD for p in pulls)
        else:
            val = cfg.effective.get(name, empty_value(sym.type))
            for v in pm.known_values.get(name, []):
                out[PropVar(VarKind.NB_EQ, name, str(v))] = _values_equal(v, val)
    return out


def config_from_assignment(
    pm: PropModel, assignment: dict[PropVar, bool]
) -> dict[str, SymbolValue]:
    """Total user-value map named by a satisfying assignment."""
    from .tristate import tri_value

    out: dict[str, SymbolValue] = {}
    for name, sym in pm.model.symbols.items():
        if sym.is_bool_like():
            if assignment.get(PropVar(VarKind.SYM_Y, name), False):
                out[name] = tri_value(YES)
            elif sym.type == SymbolType.TRISTATE and assignment.get(
                PropVar(VarKind.SYM_M, name), False
            ):
                out[name] = tri_value(MOD)
            else:
                out[name] = tri_value(NO)
        else:
            chosen = None
            for v in pm.known_values.get(name, []):
                if assignment.get(PropVar(VarKind.NB_EQ, name, str(v)), False):
                    chosen = v
                    break
            out[name] = chosen if chosen is not None else empty_value(sym.type)
    return out

"""Resolve a parsed model into evaluation-ready form.

Walks the document tree folding enclosing `depends on` and if-block
conditions into each declaration's dependency context, and menu
`visible if` conditions into prompt conditions.  Prompt conditions on
symbols end up fully self-contained: visibility is simply the
disjunction of the linked prompt conditions.  Defaults and ranges
keep their declaration's dependency context alongside, since their
applicability is clamped by it.  Select and imply conditions stay as
written; a select fires from the selector's computed value.

Reverse select/imply edges are collected here, and the construct
checks live here too: unknown types, ranges on non-numeric symbols,
selects targeting non-boolean symbols or choice members, comparisons
that mix value kinds no rule covers.  References to undeclared
symbols are recorded, not rejected; they evaluate as constant n.
"""

from __future__ import annotations

from ..tristate import Tristate
from .ast import (
    Choice,
    Compare,
    ConstString,
    ConstTristate,
    Default,
    DependsOn,
    Expr,
    Imply,
    KconfigModel,
    LinkedDefault,
    LinkedRange,
    MenuNode,
    Prompt,
    Range,
    Select,
    Symbol,
    SymbolRef,
    SymbolType,
    TRI_Y,
    expr_symbols,
    make_and,
    make_or,
)
from .errors import LinkError

_NUMERIC_TYPES = (SymbolType.INT, SymbolType.HEX)
_NONBOOL_TYPES = (SymbolType.STRING, SymbolType.INT, SymbolType.HEX)


def _is_number(text: str) -> bool:
    if text.startswith(("0x", "0X")):
        rest = text[2:]
        return bool(rest) and all(c in "0123456789abcdefABCDEF" for c in rest)
    body = text[1:] if text.startswith("-") else text
    return bool(body) and body.isdigit()


def link(model: KconfigModel) -> KconfigModel:
    """Fold contexts and resolve references, in place.  Idempotent."""
    if model.linked:
        return model
    _fold_tree(model)
    _collect_reverse_edges(model)
    _check_constructs(model)
    model.linked = True
    return model


def _fold_tree(model: KconfigModel) -> None:
    decl_deps: dict[str, list[Expr]] = {name: [] for name in model.symbols}

    def walk(node: MenuNode, dep_ctx: Expr, vis_ctx: Expr) -> None:
        for child in node.children:
            if child.kind in ("config", "menuconfig"):
                sym = model.symbols[child.symbol]
                own = [p.expr for p in child.props if isinstance(p, DependsOn)]
                dep = make_and(dep_ctx, *own)
                decl_deps[sym.name].append(dep)
                _fold_symbol_props(sym, child.props, dep, vis_ctx)
                if child.kind == "menuconfig":
                    walk(child, dep_ctx, vis_ctx)
            elif child.kind == "choice":
                choice = child.choice
                own = [p.expr for p in choice.properties if isinstance(p, DependsOn)]
                dep = make_and(dep_ctx, *own)
                choice.depends = dep
                for p in choice.properties:
                    if isinstance(p, Prompt):
                        choice.prompts.append(
                            Prompt(p.text, make_and(p.condition, vis_ctx, dep))
                        )
                    elif isinstance(p, Default):
                        choice.defaults.append(p)
                walk(child, dep, vis_ctx)
            elif child.kind == "menu":
                walk(
                    child,
                    make_and(dep_ctx, child.condition),
                    make_and(vis_ctx, child.visible_if),
                )
            elif child.kind == "if":
                walk(child, make_and(dep_ctx, child.condition), vis_ctx)
            else:
                walk(child, dep_ctx, vis_ctx)

    walk(model.root, TRI_Y, TRI_Y)
    for name, deps in decl_deps.items():
        sym = model.symbols[name]
        sym.depends = make_or(*deps) if deps else TRI_Y


def _fold_symbol_props(sym: Symbol, props: list, dep: Expr, vis_ctx: Expr) -> None:
    for p in props:
        if isinstance(p, Prompt):
            sym.prompts.append(Prompt(p.text, make_and(p.condition, vis_ctx, dep)))
        elif isinstance(p, Default):
            sym.defaults.append(LinkedDefault(p.value, p.condition, dep))
        elif isinstance(p, Select):
            sym.selects.append(p)
        elif isinstance(p, Imply):
            sym.implies.append(p)
        elif isinstance(p, Range):
            sym.ranges.append(LinkedRange(p.low, p.high, p.condition, dep))


def _collect_reverse_edges(model: KconfigModel) -> None:
    for sym in model.symbols.values():
        for sel in sym.selects:
            target = model.symbols.get(sel.target)
            if target is not None:
                target.selected_by.append((sym.name, sel.condition))
        for imp in sym.implies:
            target = model.symbols.get(imp.target)
            if target is not None:
                target.implied_by.append((sym.name, imp.condition))


def _leaf_kind(model: KconfigModel, leaf: Expr) -> str:
    """Value kind of a comparison operand: tri, string, number."""
    if isinstance(leaf, ConstTristate):
        return "tri"
    if isinstance(leaf, ConstString):
        text = leaf.text
        if text.lstrip("-").isdigit() or text.startswith("0x"):
            return "number"
        return "string"
    assert isinstance(leaf, SymbolRef)
    sym = model.symbols.get(leaf.name)
    if sym is None:
        return "tri"  # undeclared: evaluates as constant n
    if sym.type in _NUMERIC_TYPES:
        return "number"
    if sym.type == SymbolType.STRING:
        return "string"
    return "tri"


def _check_comparison(model: KconfigModel, cmp: Compare, where: str) -> None:
    lk = _leaf_kind(model, cmp.lhs)
    rk = _leaf_kind(model, cmp.rhs)
    if cmp.op in ("=", "!="):
        if "tri" in (lk, rk) and lk != rk:
            raise LinkError(
                f"equality between {lk} and {rk} operands has no defined rule ({where})"
            )
    else:
        if "tri" in (lk, rk):
            raise LinkError(
                f"ordering comparison with a {lk if lk == 'tri' else rk} operand ({where})"
            )


def _walk_comparisons(model: KconfigModel, expr: Expr, where: str) -> None:
    from .ast import And, Not, Or

    stack = [expr]
    while stack:
        node = stack.pop()
        if isinstance(node, Compare):
            _check_comparison(model, node, where)
        elif isinstance(node, Not):
            stack.append(node.operand)
        elif isinstance(node, (And, Or)):
            stack.extend(node.args)


def _check_constructs(model: KconfigModel) -> None:
    # choice types first, so members may inherit theirs
    for choice in model.choices:
        if choice.type == SymbolType.UNKNOWN:
            member_types = {
                model.symbols[m].type
                for m in choice.members
                if model.symbols[m].type != SymbolType.UNKNOWN
            }
            if len(member_types) == 1:
                choice.type = member_types.pop()
        if choice.type not in (SymbolType.BOOL, SymbolType.TRISTATE):
            raise LinkError(
                f"choice #{choice.ident} must be bool or tristate, "
                f"got {choice.type.value}"
            )
        for m in choice.members:
            member = model.symbols[m]
            if member.type == SymbolType.UNKNOWN:
                member.type = choice.type
            elif member.type != choice.type:
                raise LinkError(
                    f"choice member {m} has type {member.type.value}, "
                    f"choice is {choice.type.value}"
                )

    for sym in model.symbols.values():
        if sym.type == SymbolType.UNKNOWN:
            raise LinkError(f"symbol {sym.name} has no type")
        if sym.ranges and sym.type not in _NUMERIC_TYPES:
            raise LinkError(
                f"type mismatch: range on {sym.type.value} symbol {sym.name}"
            )
        for rng in sym.ranges:
            for bound in (rng.low, rng.high):
                if not isinstance(bound, ConstString) or not _is_number(bound.text):
                    raise LinkError(
                        f"range bounds of {sym.name} must be numeric constants"
                    )
        if (sym.selects or sym.implies) and not sym.is_bool_like():
            raise LinkError(
                f"{sym.type.value} symbol {sym.name} cannot select or imply"
            )
        for sel in sym.selects:
            target = model.symbols.get(sel.target)
            if target is None:
                continue
            if not target.is_bool_like():
                raise LinkError(
                    f"select targeting a {target.type.value} symbol: "
                    f"{sym.name} selects {sel.target}"
                )
            if target.choice is not None:
                raise LinkError(
                    f"select targeting choice member {sel.target} (from {sym.name})"
                )
        for imp in sym.implies:
            target = model.symbols.get(imp.target)
            if target is not None and not target.is_bool_like():
                raise LinkError(
                    f"imply targeting a {target.type.value} symbol: "
                    f"{sym.name} implies {imp.target}"
                )
        if sym.type in _NONBOOL_TYPES:
            for d in sym.defaults:
                if not isinstance(d.value, ConstString):
                    raise LinkError(
                        f"default of {sym.type.value} symbol {sym.name} "
                        "must be a literal constant"
                    )
                if sym.type in _NUMERIC_TYPES and not _is_number(d.value.text):
                    raise LinkError(
                        f"default {d.value.text!r} of {sym.type.value} symbol "
                        f"{sym.name} is not numeric"
                    )
        where = f"symbol {sym.name}"
        for p in sym.prompts:
            _walk_comparisons(model, p.condition, where)
        for d in sym.defaults:
            _walk_comparisons(model, d.value, where)
            _walk_comparisons(model, d.condition, where)
            _walk_comparisons(model, d.dep, where)
        for sel in sym.selects:
            _walk_comparisons(model, sel.condition, where)
        for imp in sym.implies:
            _walk_comparisons(model, imp.condition, where)
        for rng in sym.ranges:
            _walk_comparisons(model, rng.condition, where)
            _walk_comparisons(model, rng.dep, where)
        _walk_comparisons(model, sym.depends, where)

    for choice in model.choices:
        for d in choice.defaults:
            if not isinstance(d.value, SymbolRef) or d.value.name not in choice.members:
                raise LinkError(
                    f"choice #{choice.ident} default must name one of its members"
                )
        where = f"choice #{choice.ident}"
        for p in choice.prompts:
            _walk_comparisons(model, p.condition, where)
        for d in choice.defaults:
            _walk_comparisons(model, d.condition, where)


def undefined_references(model: KconfigModel) -> set[str]:
    """Names referenced anywhere but never declared."""
    seen: set[str] = set()

    def scan(e: Expr) -> None:
        seen.update(expr_symbols(e))

    for sym in model.symbols.values():
        scan(sym.depends)
        for p in sym.prompts:
            scan(p.condition)
        for d in sym.defaults:
            scan(d.value)
            scan(d.condition)
            scan(d.dep)
        for s in sym.selects:
            seen.add(s.target)
            scan(s.condition)
        for i in sym.implies:
            seen.add(i.target)
            scan(i.condition)
        for r in sym.ranges:
            scan(r.condition)
            scan(r.dep)
    for choice in model.choices:
        for p in choice.prompts:
            scan(p.condition)
        for d in choice.defaults:
            scan(d.condition)
    return {name for name in seen if name not in model.symbols}

"""Canonical text form of a parsed model.

Printing a parsed model and reparsing the output yields a
structurally identical tree.  Comments and help text never survive
parsing, so they do not appear here; expression normalization
(flattened &&/|| chains, dropped neutral constants) happened at
parse time and is stable under reprinting.
"""

from __future__ import annotations

import re

from .ast import (
    And,
    Compare,
    ConstString,
    ConstTristate,
    Default,
    DependsOn,
    Expr,
    Imply,
    KconfigModel,
    MenuNode,
    Not,
    Or,
    Prompt,
    Range,
    Select,
    SymbolRef,
    SymbolType,
    TRI_Y,
)

_BARE_RE = re.compile(r"-?\d+$|0x[0-9A-Fa-f]+$")

_PREC_OR = 1
_PREC_AND = 2
_PREC_NOT = 3
_PREC_LEAF = 4


def format_leaf(e: Expr) -> str:
    if isinstance(e, SymbolRef):
        return e.name
    if isinstance(e, ConstTristate):
        return str(e.value)
    assert isinstance(e, ConstString)
    if _BARE_RE.match(e.text):
        return e.text
    escaped = e.text.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def format_expr(e: Expr, parent_prec: int = 0) -> str:
    if isinstance(e, (SymbolRef, ConstTristate, ConstString)):
        return format_leaf(e)
    if isinstance(e, Compare):
        return f"{format_leaf(e.lhs)} {e.op} {format_leaf(e.rhs)}"
    if isinstance(e, Not):
        inner = format_expr(e.operand, _PREC_NOT)
        return f"!{inner}"
    if isinstance(e, And):
        text = " && ".join(format_expr(a, _PREC_AND) for a in e.args)
        prec = _PREC_AND
    else:
        assert isinstance(e, Or)
        text = " || ".join(format_expr(a, _PREC_OR) for a in e.args)
        prec = _PREC_OR
    if prec < parent_prec:
        return f"({text})"
    return text


def _cond_suffix(cond: Expr) -> str:
    if cond == TRI_Y:
        return ""
    return f" if {format_expr(cond)}"


def _quote(text: str) -> str:
    escaped = text.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def _format_props(props: list, out: list[str], indent: str) -> None:
    for p in props:
        if isinstance(p, Prompt):
            out.append(f"{indent}prompt {_quote(p.text)}{_cond_suffix(p.condition)}")
        elif isinstance(p, Default):
            out.append(
                f"{indent}default {format_expr(p.value)}{_cond_suffix(p.condition)}"
            )
        elif isinstance(p, DependsOn):
            out.append(f"{indent}depends on {format_expr(p.expr)}")
        elif isinstance(p, Select):
            out.append(f"{indent}select {p.target}{_cond_suffix(p.condition)}")
        elif isinstance(p, Imply):
            out.append(f"{indent}imply {p.target}{_cond_suffix(p.condition)}")
        elif isinstance(p, Range):
            out.append(
                f"{indent}range {format_leaf(p.low)} {format_leaf(p.high)}"
                f"{_cond_suffix(p.condition)}"
            )


def pretty(model: KconfigModel) -> str:
    out: list[str] = []
    if model.mainmenu:
        out.append(f"mainmenu {_quote(model.mainmenu)}")
        out.append("")
    printed_option: set[str] = set()

    def emit_config(node: MenuNode) -> None:
        sym = model.symbols[node.symbol]
        head = "menuconfig" if node.kind == "menuconfig" else "config"
        out.append(f"{head} {sym.name}")
        if sym.type != SymbolType.UNKNOWN:
            out.append(f"\t{sym.type.value}")
        if model.modules_symbol == sym.name and sym.name not in printed_option:
            out.append("\toption modules")
            printed_option.add(sym.name)
        _format_props(node.props, out, "\t")
        out.append("")

    def emit(node: MenuNode) -> None:
        for child in node.children:
            if child.kind in ("config", "menuconfig"):
                emit_config(child)
                if child.kind == "menuconfig":
                    emit(child)
            elif child.kind == "menu":
                out.append(f"menu {_quote(child.prompt)}")
                if child.condition != TRI_Y:
                    out.append(f"\tdepends on {format_expr(child.condition)}")
                if child.visible_if != TRI_Y:
                    out.append(f"\tvisible if {format_expr(child.visible_if)}")
                out.append("")
                emit(child)
                out.append("endmenu")
                out.append("")
            elif child.kind == "if":
                out.append(f"if {format_expr(child.condition)}")
                out.append("")
                emit(child)
                out.append("endif")
                out.append("")
            elif child.kind == "choice":
                out.append("choice")
                choice = child.choice
                if choice.type != SymbolType.UNKNOWN:
                    out.append(f"\t{choice.type.value}")
                _format_props(choice.properties, out, "\t")
                out.append("")
                emit(child)
                out.append("endchoice")
                out.append("")

    emit(model.root)
    return "\n".join(out).rstrip("\n") + "\n"

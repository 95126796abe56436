"""Propositional formulas over typed variables.

Variables carry their origin: the y/m halves of a tristate symbol,
the aggregated select pull on a symbol, one equation of a non-boolean
symbol against a concrete value, or a plain auxiliary introduced
during CNF conversion.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class VarKind(Enum):
    SYM_Y = "SYM_Y"
    SYM_M = "SYM_M"
    SEL_Y = "SEL_Y"
    SEL_M = "SEL_M"
    NB_EQ = "NB_EQ"
    AUX = "AUX"


@dataclass(frozen=True, slots=True)
class PropVar:
    kind: VarKind
    symbol: str
    payload: str = ""

    def __str__(self) -> str:
        if self.kind is VarKind.NB_EQ:
            return f"{self.symbol}={self.payload}"
        if self.kind is VarKind.AUX:
            return f"aux:{self.payload}"
        return f"{self.symbol}.{self.kind.value[4:].lower()}"


class PropNode:
    __slots__ = ()


class PTrue(PropNode):
    __slots__ = ()

    def __repr__(self) -> str:
        return "true"

    def __eq__(self, other) -> bool:
        return isinstance(other, PTrue)

    def __hash__(self) -> int:
        return hash(PTrue)


class PFalse(PropNode):
    __slots__ = ()

    def __repr__(self) -> str:
        return "false"

    def __eq__(self, other) -> bool:
        return isinstance(other, PFalse)

    def __hash__(self) -> int:
        return hash(PFalse)


TRUE = PTrue()
FALSE = PFalse()


class PVar(PropNode):
    __slots__ = ("var",)

    def __init__(self, var: PropVar):
        self.var = var

    def __repr__(self) -> str:
        return str(self.var)

    def __eq__(self, other) -> bool:
        return isinstance(other, PVar) and self.var == other.var

    def __hash__(self) -> int:
        return hash(("PVar", self.var))


class PNot(PropNode):
    __slots__ = ("arg",)

    def __init__(self, arg: PropNode):
        self.arg = arg

    def __repr__(self) -> str:
        return f"!{self.arg!r}"

    def __eq__(self, other) -> bool:
        return isinstance(other, PNot) and self.arg == other.arg

    def __hash__(self) -> int:
        return hash(("PNot", self.arg))


class PAnd(PropNode):
    __slots__ = ("args",)

    def __init__(self, args: tuple[PropNode, ...]):
        self.args = args

    def __repr__(self) -> str:
        return "(" + " & ".join(repr(a) for a in self.args) + ")"

    def __eq__(self, other) -> bool:
        return isinstance(other, PAnd) and self.args == other.args

    def __hash__(self) -> int:
        return hash(("PAnd", self.args))


class POr(PropNode):
    __slots__ = ("args",)

    def __init__(self, args: tuple[PropNode, ...]):
        self.args = args

    def __repr__(self) -> str:
        return "(" + " | ".join(repr(a) for a in self.args) + ")"

    def __eq__(self, other) -> bool:
        return isinstance(other, POr) and self.args == other.args

    def __hash__(self) -> int:
        return hash(("POr", self.args))


class PImplies(PropNode):
    __slots__ = ("lhs", "rhs")

    def __init__(self, lhs: PropNode, rhs: PropNode):
        self.lhs = lhs
        self.rhs = rhs

    def __repr__(self) -> str:
        return f"({self.lhs!r} -> {self.rhs!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PImplies) and self.lhs == other.lhs and self.rhs == other.rhs

    def __hash__(self) -> int:
        return hash(("PImplies", self.lhs, self.rhs))


class PIff(PropNode):
    __slots__ = ("lhs", "rhs")

    def __init__(self, lhs: PropNode, rhs: PropNode):
        self.lhs = lhs
        self.rhs = rhs

    def __repr__(self) -> str:
        return f"({self.lhs!r} <-> {self.rhs!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PIff) and self.lhs == other.lhs and self.rhs == other.rhs

    def __hash__(self) -> int:
        return hash(("PIff", self.lhs, self.rhs))


def p_var(kind: VarKind, symbol: str, payload: str = "") -> PVar:
    return PVar(PropVar(kind, symbol, payload))


def p_not(arg: PropNode) -> PropNode:
    if isinstance(arg, PTrue):
        return FALSE
    if isinstance(arg, PFalse):
        return TRUE
    if isinstance(arg, PNot):
        return arg.arg
    return PNot(arg)


def p_and(*args: PropNode) -> PropNode:
    flat: list[PropNode] = []
    for a in args:
        if isinstance(a, PFalse):
            return FALSE
        if isinstance(a, PTrue):
            continue
        if isinstance(a, PAnd):
            flat.extend(a.args)
        else:
            flat.append(a)
    if not flat:
        return TRUE
    if len(flat) == 1:
        return flat[0]
    return PAnd(tuple(flat))


def p_or(*args: PropNode) -> PropNode:
    flat: list[PropNode] = []
    for a in args:
        if isinstance(a, PTrue):
            return TRUE
        if isinstance(a, PFalse):
            continue
        if isinstance(a, POr):
            flat.extend(a.args)
        else:
            flat.append(a)
    if not flat:
        return FALSE
    if len(flat) == 1:
        return flat[0]
    return POr(tuple(flat))


def p_implies(lhs: PropNode, rhs: PropNode) -> PropNode:
    if isinstance(lhs, PFalse) or isinstance(rhs, PTrue):
        return TRUE
    if isinstance(lhs, PTrue):
        return rhs
    if isinstance(rhs, PFalse):
        return p_not(lhs)
    return PImplies(lhs, rhs)


def p_iff(lhs: PropNode, rhs: PropNode) -> PropNode:
    if isinstance(lhs, PTrue):
        return rhs
    if isinstance(rhs, PTrue):
        return lhs
    if isinstance(lhs, PFalse):
        return p_not(rhs)
    if isinstance(rhs, PFalse):
        return p_not(lhs)
    return PIff(lhs, rhs)


def formula_vars(node: PropNode) -> set[PropVar]:
    """All variables appearing in the formula."""
    out: set[PropVar] = set()
    stack = [node]
    while stack:
        n = stack.pop()
        if isinstance(n, PVar):
            out.add(n.var)
        elif isinstance(n, PNot):
            stack.append(n.arg)
        elif isinstance(n, (PAnd, POr)):
            stack.extend(n.args)
        elif isinstance(n, (PImplies, PIff)):
            stack.append(n.lhs)
            stack.append(n.rhs)
    return out


def eval_formula(node: PropNode, assignment: dict[PropVar, bool]) -> bool:
    """Evaluate under a total assignment; missing variables read as False."""
    if isinstance(node, PTrue):
        return True
    if isinstance(node, PFalse):
        return False
    if isinstance(node, PVar):
        return assignment.get(node.var, False)
    if isinstance(node, PNot):
        return not eval_formula(node.arg, assignment)
    if isinstance(node, PAnd):
        return all(eval_formula(a, assignment) for a in node.args)
    if isinstance(node, POr):
        return any(eval_formula(a, assignment) for a in node.args)
    if isinstance(node, PImplies):
        return (not eval_formula(node.lhs, assignment)) or eval_formula(node.rhs, assignment)
    assert isinstance(node, PIff)
    return eval_formula(node.lhs, assignment) == eval_formula(node.rhs, assignment)

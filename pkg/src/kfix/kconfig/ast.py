"""Syntax tree for the supported Kconfig language subset.

Expressions are immutable trees whose leaves are symbol references or
constants.  Comparison nodes only ever hold leaf operands.  Symbols,
choices and menu nodes are mutable: the linker fills in the derived
fields (resolved dependency expression, folded prompt conditions,
reverse select/imply edges) after parsing.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from ..tristate import Tristate


# --------------------------------------------------------------------------
# expressions


class Expr:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class SymbolRef(Expr):
    name: str


@dataclass(frozen=True, slots=True)
class ConstTristate(Expr):
    value: Tristate


@dataclass(frozen=True, slots=True)
class ConstString(Expr):
    """Unquoted numeric constants and quoted strings both land here."""

    text: str


@dataclass(frozen=True, slots=True)
class Not(Expr):
    operand: Expr


@dataclass(frozen=True, slots=True)
class And(Expr):
    args: tuple[Expr, ...]

    def __post_init__(self) -> None:
        if not self.args:
            raise ValueError("And requires at least one argument")


@dataclass(frozen=True, slots=True)
class Or(Expr):
    args: tuple[Expr, ...]

    def __post_init__(self) -> None:
        if not self.args:
            raise ValueError("Or requires at least one argument")


@dataclass(frozen=True, slots=True)
class Compare(Expr):
    """Comparison with leaf operands.  op is one of = != < <= > >=."""

    op: str
    lhs: Expr
    rhs: Expr

    _OPS = ("=", "!=", "<", "<=", ">", ">=")

    def __post_init__(self) -> None:
        if self.op not in self._OPS:
            raise ValueError(f"bad comparison operator {self.op!r}")
        for side in (self.lhs, self.rhs):
            if not isinstance(side, (SymbolRef, ConstTristate, ConstString)):
                raise ValueError("comparison operands must be leaves")


TRI_Y = ConstTristate(Tristate.YES)
TRI_M = ConstTristate(Tristate.MOD)
TRI_N = ConstTristate(Tristate.NO)


def make_and(*parts: Expr) -> Expr:
    """Conjoin, flattening nested conjunctions and dropping plain `y`."""
    args: list[Expr] = []
    for p in parts:
        if isinstance(p, And):
            args.extend(p.args)
        elif p == TRI_Y:
            continue
        else:
            args.append(p)
    if not args:
        return TRI_Y
    if len(args) == 1:
        return args[0]
    return And(tuple(args))


def make_or(*parts: Expr) -> Expr:
    args: list[Expr] = []
    for p in parts:
        if isinstance(p, Or):
            args.extend(p.args)
        elif p == TRI_N:
            continue
        else:
            args.append(p)
    if not args:
        return TRI_N
    if len(args) == 1:
        return args[0]
    return Or(tuple(args))


def expr_symbols(e: Expr) -> set[str]:
    """Names of all symbols referenced anywhere in the expression."""
    out: set[str] = set()
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, SymbolRef):
            out.add(node.name)
        elif isinstance(node, Not):
            stack.append(node.operand)
        elif isinstance(node, (And, Or)):
            stack.extend(node.args)
        elif isinstance(node, Compare):
            stack.append(node.lhs)
            stack.append(node.rhs)
    return out


# --------------------------------------------------------------------------
# properties


@dataclass(frozen=True, slots=True)
class Prompt:
    text: str
    condition: Expr = TRI_Y


@dataclass(frozen=True, slots=True)
class Default:
    value: Expr
    condition: Expr = TRI_Y


@dataclass(frozen=True, slots=True)
class DependsOn:
    expr: Expr


@dataclass(frozen=True, slots=True)
class Select:
    target: str
    condition: Expr = TRI_Y


@dataclass(frozen=True, slots=True)
class Imply:
    target: str
    condition: Expr = TRI_Y


@dataclass(frozen=True, slots=True)
class Range:
    low: Expr
    high: Expr
    condition: Expr = TRI_Y


Property = Prompt | Default | DependsOn | Select | Imply | Range


@dataclass(frozen=True, slots=True)
class LinkedDefault:
    """Default with its declaration's dependency context attached."""

    value: Expr
    condition: Expr
    dep: Expr


@dataclass(frozen=True, slots=True)
class LinkedRange:
    low: Expr
    high: Expr
    condition: Expr
    dep: Expr


class SymbolType(enum.Enum):
    BOOL = "bool"
    TRISTATE = "tristate"
    STRING = "string"
    INT = "int"
    HEX = "hex"
    UNKNOWN = "unknown"


# --------------------------------------------------------------------------
# symbols, choices, menu tree


@dataclass(eq=False)
class Symbol:
    name: str
    type: SymbolType = SymbolType.UNKNOWN
    choice: "Choice | None" = None
    decl_order: int = 0
    # linked views, filled by the linker; prompt conditions carry the
    # declaration's dependency context and any menu `visible if`
    depends: Expr = TRI_Y
    prompts: list[Prompt] = field(default_factory=list)
    defaults: list[LinkedDefault] = field(default_factory=list)
    selects: list[Select] = field(default_factory=list)
    implies: list[Imply] = field(default_factory=list)
    ranges: list[LinkedRange] = field(default_factory=list)
    selected_by: list[tuple[str, Expr]] = field(default_factory=list)
    implied_by: list[tuple[str, Expr]] = field(default_factory=list)

    def is_bool_like(self) -> bool:
        return self.type in (SymbolType.BOOL, SymbolType.TRISTATE)

    def has_prompt(self) -> bool:
        return bool(self.prompts)

    def __repr__(self) -> str:
        return f"<Symbol {self.name} {self.type.value}>"


@dataclass(eq=False)
class Choice:
    ident: int
    type: SymbolType = SymbolType.UNKNOWN
    properties: list[Property] = field(default_factory=list)
    members: list[str] = field(default_factory=list)
    # filled by the linker
    depends: Expr = TRI_Y
    prompts: list[Prompt] = field(default_factory=list)
    defaults: list[Default] = field(default_factory=list)

    def structural_eq(self, other: "Choice") -> bool:
        return (
            self.type == other.type
            and self.properties == other.properties
            and self.members == other.members
        )

    def __repr__(self) -> str:
        return f"<Choice #{self.ident} {self.type.value} {self.members}>"


@dataclass(eq=False)
class MenuNode:
    """Node of the document tree: root, menu, if block, config or choice."""

    kind: str  # "root" | "menu" | "if" | "config" | "menuconfig" | "choice"
    prompt: str = ""
    condition: Expr = TRI_Y  # menu `depends on` or if-block condition
    visible_if: Expr = TRI_Y  # menu `visible if`
    symbol: str = ""  # for config/menuconfig nodes
    choice: Choice | None = None
    props: list[Property] = field(default_factory=list)
    children: list["MenuNode"] = field(default_factory=list)

    def structural_eq(self, other: "MenuNode") -> bool:
        if (
            self.kind != other.kind
            or self.prompt != other.prompt
            or self.condition != other.condition
            or self.visible_if != other.visible_if
            or self.symbol != other.symbol
            or self.props != other.props
            or len(self.children) != len(other.children)
        ):
            return False
        if (self.choice is None) != (other.choice is None):
            return False
        if self.choice is not None and not self.choice.structural_eq(other.choice):
            return False
        return all(
            a.structural_eq(b) for a, b in zip(self.children, other.children)
        )


@dataclass(eq=False)
class KconfigModel:
    symbols: dict[str, Symbol] = field(default_factory=dict)
    choices: list[Choice] = field(default_factory=list)
    root: MenuNode = field(default_factory=lambda: MenuNode("root"))
    modules_symbol: str | None = None
    mainmenu: str = ""
    linked: bool = False

    def symbol(self, name: str) -> Symbol:
        return self.symbols[name]

    def defined(self, name: str) -> bool:
        return name in self.symbols

    def bool_like_symbols(self) -> list[Symbol]:
        return [s for s in self.symbols.values() if s.is_bool_like()]

    def structural_eq(self, other: "KconfigModel") -> bool:
        if self.modules_symbol != other.modules_symbol:
            return False
        if list(self.symbols) != list(other.symbols):
            return False
        for name, sym in self.symbols.items():
            peer = other.symbols[name]
            if sym.type != peer.type or (sym.choice is None) != (peer.choice is None):
                return False
        if len(self.choices) != len(other.choices):
            return False
        for a, b in zip(self.choices, other.choices):
            if not a.structural_eq(b):
                return False
        return self.root.structural_eq(other.root)

"""Recursive-descent parser for the Kconfig subset.

The grammar is line oriented: every entry header and property starts
a new line.  Comparisons bind tighter than `!`, which binds tighter
than `&&`, which binds tighter than `||`.  `source` directives are
resolved through a caller-supplied loader so inclusion stays rooted
at the top file's directory.
"""

from __future__ import annotations

import re
from typing import Callable

from .ast import (
    And,
    Choice,
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
    Symbol,
    SymbolType,
    TRI_Y,
    make_and,
    make_or,
)
from .errors import ParseError
from .lexer import Token, TokKind, tokenize

_NUMERIC_RE = re.compile(r"-?\d+$|0x[0-9A-Fa-f]+$")

_TYPE_KEYWORDS = {
    TokKind.KW_BOOL: SymbolType.BOOL,
    TokKind.KW_TRISTATE: SymbolType.TRISTATE,
    TokKind.KW_STRING: SymbolType.STRING,
    TokKind.KW_INT: SymbolType.INT,
    TokKind.KW_HEX: SymbolType.HEX,
}

_UNSUPPORTED_HINTS = {
    "optional": "choice `optional` is not supported",
    "def_bool": "`def_bool` is not supported; use a type line plus `default`",
    "def_tristate": "`def_tristate` is not supported; use a type line plus `default`",
    "env": "`option env` is not supported",
}

SourceLoader = Callable[[str], tuple[list[Token], str]]

from ..tristate import Tristate


def _classify_leaf(tok: Token) -> Expr:
    from .ast import SymbolRef

    if tok.kind == TokKind.STRING:
        return ConstString(tok.text)
    text = tok.text
    if text == "y":
        return ConstTristate(Tristate.YES)
    if text == "m":
        return ConstTristate(Tristate.MOD)
    if text == "n":
        return ConstTristate(Tristate.NO)
    if _NUMERIC_RE.match(text):
        return ConstString(text)
    return SymbolRef(text)


_COMPARE_OPS = {
    TokKind.OP_EQ: "=",
    TokKind.OP_NEQ: "!=",
    TokKind.OP_LT: "<",
    TokKind.OP_LEQ: "<=",
    TokKind.OP_GT: ">",
    TokKind.OP_GEQ: ">=",
}

_LEAF_KINDS = (TokKind.IDENT, TokKind.STRING)


class _Parser:
    def __init__(self, tokens: list[Token], filename: str, source_loader: SourceLoader | None):
        self.tokens = tokens
        self.filename = filename
        self.loader = source_loader
        self.i = 0
        self.model = KconfigModel()
        self.decl_counter = 0
        self._source_stack: list[str] = [filename]

    # -- token plumbing ----------------------------------------------------

    def peek(self) -> Token | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        if tok is None:
            tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else None
            return ParseError(
                message + " (at end of input)",
                self.filename,
                last.line if last else 0,
                last.col if last else 0,
            )
        return ParseError(message, self.filename, tok.line, tok.col)

    def expect(self, kind: TokKind, what: str) -> Token:
        tok = self.peek()
        if tok is None or tok.kind != kind:
            raise self.error(f"expected {what}", tok)
        return self.advance()

    def same_line(self, line: int) -> bool:
        tok = self.peek()
        return tok is not None and tok.line == line

    def end_line(self, line: int) -> None:
        if self.same_line(line):
            raise self.error("unexpected token at end of line")

    # -- expressions -------------------------------------------------------

    def parse_expr(self, line: int) -> Expr:
        return self._parse_or(line)

    def _parse_or(self, line: int) -> Expr:
        parts = [self._parse_and(line)]
        while self.same_line(line) and self.peek().kind == TokKind.OP_OR:
            self.advance()
            parts.append(self._parse_and(line))
        return parts[0] if len(parts) == 1 else make_or(*parts)

    def _parse_and(self, line: int) -> Expr:
        parts = [self._parse_not(line)]
        while self.same_line(line) and self.peek().kind == TokKind.OP_AND:
            self.advance()
            parts.append(self._parse_not(line))
        return parts[0] if len(parts) == 1 else make_and(*parts)

    def _parse_not(self, line: int) -> Expr:
        if self.same_line(line) and self.peek().kind == TokKind.OP_NOT:
            self.advance()
            return Not(self._parse_not(line))
        return self._parse_primary(line)

    def _parse_primary(self, line: int) -> Expr:
        tok = self.peek()
        if tok is None or tok.line != line:
            raise self.error("expected expression", tok)
        if tok.kind == TokKind.OP_LPAREN:
            self.advance()
            inner = self.parse_expr(line)
            if not (self.same_line(line) and self.peek().kind == TokKind.OP_RPAREN):
                raise self.error("expected `)`")
            self.advance()
            return inner
        if tok.kind not in _LEAF_KINDS:
            raise self.error(f"expected expression, found {tok.text!r}", tok)
        self.advance()
        lhs = _classify_leaf(tok)
        nxt = self.peek()
        if nxt is not None and nxt.line == line and nxt.kind in _COMPARE_OPS:
            op_tok = self.advance()
            rhs_tok = self.peek()
            if rhs_tok is None or rhs_tok.line != line or rhs_tok.kind not in _LEAF_KINDS:
                raise self.error("expected comparison operand", rhs_tok)
            self.advance()
            return Compare(_COMPARE_OPS[op_tok.kind], lhs, _classify_leaf(rhs_tok))
        return lhs

    def _parse_optional_if(self, line: int) -> Expr:
        if self.same_line(line) and self.peek().kind == TokKind.KW_IF:
            self.advance()
            return self.parse_expr(line)
        return TRI_Y

    def _parse_leaf_token(self, line: int, what: str) -> Expr:
        tok = self.peek()
        if tok is None or tok.line != line or tok.kind not in _LEAF_KINDS:
            raise self.error(f"expected {what}", tok)
        self.advance()
        return _classify_leaf(tok)

    # -- entries -----------------------------------------------------------

    def parse_model(self) -> KconfigModel:
        self.parse_block(self.model.root, top_level=True)
        tok = self.peek()
        if tok is not None:
            raise self.error(f"unexpected {tok.text!r} outside any block", tok)
        return self.model

    def parse_block(self, parent: MenuNode, top_level: bool) -> None:
        """Parse entries until an end keyword (or EOF at top level)."""
        enders = (TokKind.KW_ENDMENU, TokKind.KW_ENDIF, TokKind.KW_ENDCHOICE)
        while True:
            tok = self.peek()
            if tok is None:
                return
            if tok.kind in enders:
                return
            kind = tok.kind
            if kind == TokKind.KW_MAINMENU:
                self.advance()
                title = self.expect(TokKind.STRING, "menu title string")
                self.model.mainmenu = title.text
                self.end_line(tok.line)
            elif kind in (TokKind.KW_CONFIG, TokKind.KW_MENUCONFIG):
                self.parse_config(parent, menuconfig=kind == TokKind.KW_MENUCONFIG)
            elif kind == TokKind.KW_MENU:
                self.parse_menu(parent)
            elif kind == TokKind.KW_CHOICE:
                self.parse_choice(parent)
            elif kind == TokKind.KW_IF:
                self.parse_if_block(parent)
            elif kind == TokKind.KW_SOURCE:
                self.parse_source(parent)
            elif kind == TokKind.KW_COMMENT:
                self.parse_comment()
            else:
                hint = _UNSUPPORTED_HINTS.get(tok.text)
                raise self.error(hint or f"unexpected {tok.text!r}; expected an entry", tok)

    def _new_symbol(self, name_tok: Token, choice: Choice | None) -> Symbol:
        name = name_tok.text
        if _NUMERIC_RE.match(name) or name in ("y", "m", "n"):
            raise self.error(f"invalid symbol name {name!r}", name_tok)
        sym = self.model.symbols.get(name)
        if sym is None:
            sym = Symbol(name=name, choice=choice, decl_order=self.decl_counter)
            self.decl_counter += 1
            self.model.symbols[name] = sym
        else:
            if choice is not None or sym.choice is not None:
                raise self.error(
                    f"symbol {name} redeclared in or out of a choice group", name_tok
                )
        return sym

    def parse_config(self, parent: MenuNode, menuconfig: bool, choice: Choice | None = None) -> None:
        head = self.advance()
        name_tok = self.expect(TokKind.IDENT, "symbol name")
        self.end_line(head.line)
        sym = self._new_symbol(name_tok, choice)
        node = MenuNode(
            "menuconfig" if menuconfig else "config",
            symbol=sym.name,
        )
        parent.children.append(node)
        if choice is not None:
            choice.members.append(sym.name)
        self.parse_properties(node.props, owner=sym, allow_visible=False)

    def parse_menu(self, parent: MenuNode) -> None:
        head = self.advance()
        title = self.expect(TokKind.STRING, "menu title string")
        self.end_line(head.line)
        node = MenuNode("menu", prompt=title.text)
        conds: list[Expr] = []
        visibles: list[Expr] = []
        # menu-level properties: depends on / visible if
        while True:
            tok = self.peek()
            if tok is None:
                raise self.error("missing endmenu")
            if tok.kind == TokKind.KW_DEPENDS:
                self.advance()
                self.expect(TokKind.KW_ON, "`on` after `depends`")
                conds.append(self.parse_expr(tok.line))
                self.end_line(tok.line)
            elif tok.kind == TokKind.KW_VISIBLE:
                self.advance()
                self.expect(TokKind.KW_IF, "`if` after `visible`")
                visibles.append(self.parse_expr(tok.line))
                self.end_line(tok.line)
            else:
                break
        node.condition = make_and(*conds) if conds else TRI_Y
        node.visible_if = make_and(*visibles) if visibles else TRI_Y
        parent.children.append(node)
        self.parse_block(node, top_level=False)
        self.expect(TokKind.KW_ENDMENU, "endmenu")

    def parse_if_block(self, parent: MenuNode) -> None:
        head = self.advance()
        cond = self.parse_expr(head.line)
        self.end_line(head.line)
        node = MenuNode("if", condition=cond)
        parent.children.append(node)
        self.parse_block(node, top_level=False)
        self.expect(TokKind.KW_ENDIF, "endif")

    def parse_choice(self, parent: MenuNode) -> None:
        head = self.advance()
        self.end_line(head.line)
        choice = Choice(ident=len(self.model.choices))
        self.model.choices.append(choice)
        node = MenuNode("choice", choice=choice)
        parent.children.append(node)
        self.parse_properties(choice.properties, owner=choice, allow_visible=False)
        # member configs until endchoice
        while True:
            tok = self.peek()
            if tok is None:
                raise self.error("missing endchoice")
            if tok.kind == TokKind.KW_ENDCHOICE:
                self.advance()
                break
            if tok.kind == TokKind.KW_CONFIG:
                self.parse_config(node, menuconfig=False, choice=choice)
            elif tok.kind == TokKind.KW_COMMENT:
                self.parse_comment()
            else:
                raise self.error(
                    f"unexpected {tok.text!r} inside choice; only config entries allowed", tok
                )

    def parse_source(self, parent: MenuNode) -> None:
        head = self.advance()
        path_tok = self.expect(TokKind.STRING, "file path string")
        self.end_line(head.line)
        if self.loader is None:
            raise self.error("`source` requires a file loader", head)
        try:
            sub_tokens, sub_name = self.loader(path_tok.text)
        except OSError as exc:
            raise self.error(f"cannot read sourced file: {exc}", path_tok)
        if sub_name in self._source_stack:
            chain = " -> ".join(self._source_stack + [sub_name])
            raise self.error(f"source cycle: {chain}", path_tok)
        saved_tokens, saved_i, saved_name = self.tokens, self.i, self.filename
        self.tokens, self.i, self.filename = sub_tokens, 0, sub_name
        self._source_stack.append(sub_name)
        try:
            self.parse_block(parent, top_level=True)
            tok = self.peek()
            if tok is not None:
                raise self.error(f"unexpected {tok.text!r} in sourced file", tok)
        finally:
            self._source_stack.pop()
            self.tokens, self.i, self.filename = saved_tokens, saved_i, saved_name

    def parse_comment(self) -> None:
        head = self.advance()
        self.expect(TokKind.STRING, "comment text string")
        self.end_line(head.line)
        # trailing depends lines attach to the comment; parsed and dropped
        while True:
            tok = self.peek()
            if tok is not None and tok.kind == TokKind.KW_DEPENDS:
                self.advance()
                self.expect(TokKind.KW_ON, "`on` after `depends`")
                self.parse_expr(tok.line)
                self.end_line(tok.line)
            else:
                return

    # -- property lists ------------------------------------------------------

    def _set_type(self, owner, new_type: SymbolType, tok: Token) -> None:
        if owner.type == SymbolType.UNKNOWN:
            owner.type = new_type
        elif owner.type != new_type:
            name = getattr(owner, "name", "choice")
            raise self.error(
                f"{name} redeclared with type {new_type.value}, was {owner.type.value}", tok
            )

    def parse_properties(self, props: list, owner, allow_visible: bool) -> None:
        """Parse property lines until something that is not a property."""
        while True:
            tok = self.peek()
            if tok is None:
                return
            kind = tok.kind
            if kind in _TYPE_KEYWORDS:
                self.advance()
                self._set_type(owner, _TYPE_KEYWORDS[kind], tok)
                if self.same_line(tok.line) and self.peek().kind == TokKind.STRING:
                    text = self.advance().text
                    cond = self._parse_optional_if(tok.line)
                    props.append(Prompt(text, cond))
                self.end_line(tok.line)
            elif kind == TokKind.KW_PROMPT:
                self.advance()
                text = self.expect(TokKind.STRING, "prompt text string")
                cond = self._parse_optional_if(tok.line)
                props.append(Prompt(text.text, cond))
                self.end_line(tok.line)
            elif kind == TokKind.KW_DEFAULT:
                self.advance()
                value = self.parse_expr(tok.line)
                cond = self._parse_optional_if(tok.line)
                props.append(Default(value, cond))
                self.end_line(tok.line)
            elif kind == TokKind.KW_DEPENDS:
                self.advance()
                self.expect(TokKind.KW_ON, "`on` after `depends`")
                props.append(DependsOn(self.parse_expr(tok.line)))
                self.end_line(tok.line)
            elif kind == TokKind.KW_SELECT:
                self.advance()
                target = self.expect(TokKind.IDENT, "select target symbol")
                cond = self._parse_optional_if(tok.line)
                props.append(Select(target.text, cond))
                self.end_line(tok.line)
            elif kind == TokKind.KW_IMPLY:
                self.advance()
                target = self.expect(TokKind.IDENT, "imply target symbol")
                cond = self._parse_optional_if(tok.line)
                props.append(Imply(target.text, cond))
                self.end_line(tok.line)
            elif kind == TokKind.KW_RANGE:
                self.advance()
                low = self._parse_leaf_token(tok.line, "range lower bound")
                high = self._parse_leaf_token(tok.line, "range upper bound")
                cond = self._parse_optional_if(tok.line)
                props.append(Range(low, high, cond))
                self.end_line(tok.line)
            elif kind == TokKind.KW_OPTION:
                self.advance()
                opt = self.peek()
                if opt is not None and opt.text == "modules" and opt.line == tok.line:
                    self.advance()
                    if not isinstance(owner, Symbol):
                        raise self.error("`option modules` only applies to a config", tok)
                    self.model.modules_symbol = owner.name
                else:
                    hint = _UNSUPPORTED_HINTS.get(opt.text if opt else "")
                    raise self.error(hint or "unsupported option", opt or tok)
                self.end_line(tok.line)
            elif kind == TokKind.KW_HELP:
                self.advance()
                nxt = self.peek()
                if nxt is not None and nxt.kind == TokKind.HELPTEXT:
                    self.advance()
            elif kind == TokKind.IDENT:
                hint = _UNSUPPORTED_HINTS.get(tok.text)
                if hint:
                    raise self.error(hint, tok)
                raise self.error(f"unexpected {tok.text!r} in property list", tok)
            else:
                return


def parse(
    tokens: list[Token],
    filename: str = "<input>",
    source_loader: SourceLoader | None = None,
) -> KconfigModel:
    """Parse a token stream into an unlinked model."""
    return _Parser(tokens, filename, source_loader).parse_model()


def parse_text(text: str, filename: str = "<input>") -> KconfigModel:
    """Tokenize and parse a model held in a string (no source support)."""
    return parse(tokenize(text, filename), filename)

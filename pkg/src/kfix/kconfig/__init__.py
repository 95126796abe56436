"""Kconfig language front end: lexer, parser, linker, printer."""

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
    LinkedDefault,
    LinkedRange,
    MenuNode,
    Not,
    Or,
    Prompt,
    Range,
    Select,
    Symbol,
    SymbolRef,
    SymbolType,
    TRI_M,
    TRI_N,
    TRI_Y,
    expr_symbols,
    make_and,
    make_or,
)
from .errors import KconfigError, LexError, LinkError, ParseError
from .lexer import TokKind, Token, tokenize
from .linker import link, undefined_references
from .load import load_model
from .parser import parse, parse_text
from .pretty import format_expr, pretty

__all__ = [
    "And", "Choice", "Compare", "ConstString", "ConstTristate", "Default",
    "DependsOn", "Expr", "Imply", "KconfigError", "KconfigModel",
    "LexError", "LinkError", "LinkedDefault", "LinkedRange", "MenuNode",
    "Not", "Or", "ParseError", "Prompt", "Range", "Select", "Symbol",
    "SymbolRef", "SymbolType", "TRI_M", "TRI_N", "TRI_Y", "TokKind",
    "Token", "expr_symbols", "format_expr", "link", "load_model",
    "make_and", "make_or", "parse", "parse_text", "pretty", "tokenize",
    "undefined_references",
]

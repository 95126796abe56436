"""Line-oriented tokenizer for the Kconfig subset.

Produces keyword, identifier, string, and operator tokens carrying
line and column positions.  Help blocks are captured as a single
HELPTEXT token: the first non-blank line after `help` fixes the
block's indentation and the block extends over all following lines
indented at least that far (blank lines included).
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass

from .errors import LexError


class TokKind(enum.Enum):
    KW_CONFIG = "config"
    KW_MENUCONFIG = "menuconfig"
    KW_MENU = "menu"
    KW_ENDMENU = "endmenu"
    KW_CHOICE = "choice"
    KW_ENDCHOICE = "endchoice"
    KW_IF = "if"
    KW_ENDIF = "endif"
    KW_SOURCE = "source"
    KW_COMMENT = "comment"
    KW_MAINMENU = "mainmenu"
    KW_DEPENDS = "depends"
    KW_ON = "on"
    KW_BOOL = "bool"
    KW_TRISTATE = "tristate"
    KW_STRING = "string"
    KW_INT = "int"
    KW_HEX = "hex"
    KW_PROMPT = "prompt"
    KW_DEFAULT = "default"
    KW_SELECT = "select"
    KW_IMPLY = "imply"
    KW_RANGE = "range"
    KW_VISIBLE = "visible"
    KW_OPTION = "option"
    KW_HELP = "help"
    IDENT = "ident"
    STRING = "str"
    HELPTEXT = "helptext"
    OP_AND = "&&"
    OP_OR = "||"
    OP_NOT = "!"
    OP_LPAREN = "("
    OP_RPAREN = ")"
    OP_EQ = "="
    OP_NEQ = "!="
    OP_LT = "<"
    OP_LEQ = "<="
    OP_GT = ">"
    OP_GEQ = ">="


_KEYWORDS = {
    k.value: k for k in TokKind
    if k.name.startswith("KW_")
}

_OPS = {
    "&&": TokKind.OP_AND,
    "||": TokKind.OP_OR,
    "!=": TokKind.OP_NEQ,
    "<=": TokKind.OP_LEQ,
    ">=": TokKind.OP_GEQ,
    "!": TokKind.OP_NOT,
    "(": TokKind.OP_LPAREN,
    ")": TokKind.OP_RPAREN,
    "=": TokKind.OP_EQ,
    "<": TokKind.OP_LT,
    ">": TokKind.OP_GT,
}

_TOKEN_RE = re.compile(
    r"""[ \t\r]+
      | \#[^\n]*
      | (?P<string>"(?:[^"\\\n]|\\.)*"|'(?:[^'\\\n]|\\.)*')
      | (?P<word>-?\d[0-9A-Za-z_x]*|[A-Za-z0-9_]+)
      | (?P<op>&&|\|\||!=|<=|>=|[!()=<>])
    """,
    re.VERBOSE,
)

_ESCAPES = {"\\": "\\", '"': '"', "'": "'", "n": "\n", "t": "\t"}


@dataclass(frozen=True, slots=True)
class Token:
    kind: TokKind
    text: str
    line: int
    col: int

    def __repr__(self) -> str:
        return f"{self.kind.name}({self.text!r})@{self.line}:{self.col}"


def _unescape(raw: str, filename: str, line: int, col: int) -> str:
    body = raw[1:-1]
    if "\\" not in body:
        return body
    out: list[str] = []
    i = 0
    while i < len(body):
        c = body[i]
        if c == "\\":
            if i + 1 >= len(body):
                raise LexError("dangling escape in string", filename, line, col)
            nxt = body[i + 1]
            out.append(_ESCAPES.get(nxt, nxt))
            i += 2
        else:
            out.append(c)
            i += 1
    return "".join(out)


def _indent_width(line: str) -> int:
    width = 0
    for c in line:
        if c == " ":
            width += 1
        elif c == "\t":
            width = (width // 8 + 1) * 8
        else:
            break
    return width


def tokenize(text: str, filename: str = "<input>") -> list[Token]:
    """Tokenize one file's text.  Raises LexError with position info."""
    tokens: list[Token] = []
    lines = text.split("\n")
    lineno = 0
    n_lines = len(lines)
    while lineno < n_lines:
        line = lines[lineno]
        lineno += 1
        pos = 0
        line_tokens_start = len(tokens)
        while pos < len(line):
            m = _TOKEN_RE.match(line, pos)
            if m is None:
                ch = line[pos]
                msg = (
                    "unterminated string"
                    if ch in "\"'"
                    else f"illegal character {ch!r}"
                )
                raise LexError(msg, filename, lineno, pos + 1)
            if m.lastgroup == "string":
                raw = m.group()
                tokens.append(
                    Token(TokKind.STRING, _unescape(raw, filename, lineno, pos + 1), lineno, pos + 1)
                )
            elif m.lastgroup == "word":
                word = m.group()
                kind = _KEYWORDS.get(word, TokKind.IDENT)
                tokens.append(Token(kind, word, lineno, pos + 1))
            elif m.lastgroup == "op":
                tokens.append(Token(_OPS[m.group()], m.group(), lineno, pos + 1))
            pos = m.end()
        # a `help` keyword ending its line starts an indented text block
        if (
            len(tokens) > line_tokens_start
            and tokens[-1].kind == TokKind.KW_HELP
            and len(tokens) - line_tokens_start >= 1
        ):
            block: list[str] = []
            base_indent = None
            while lineno < n_lines:
                raw = lines[lineno]
                if raw.strip() == "":
                    if base_indent is not None:
                        block.append("")
                    lineno += 1
                    continue
                width = _indent_width(raw)
                if base_indent is None:
                    if width == 0:
                        break
                    base_indent = width
                if width < base_indent:
                    break
                block.append(raw.strip())
                lineno += 1
            tokens.append(
                Token(TokKind.HELPTEXT, "\n".join(block).rstrip("\n"), lineno, 1)
            )
    return tokens

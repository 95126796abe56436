"""Reading and writing `.config` files, and applying fixes through them.

Line grammar, exactly: `CONFIG_<NAME>=y`, `=m`, `=<decimal int>`,
`=0x<hex>`, `="<string>"` with backslash escapes, or the marker
`# CONFIG_<NAME> is not set` which records a user value of n.  Other
comment lines and blank lines carry no information.  Saving emits one
line per symbol in model document order; hex is uppercase.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .evaluate import (
    Configuration,
    eval_expr,
    recalculate,
    select_bound,
    visibility,
)
from .kconfig.ast import KconfigModel, SymbolType
from .rangefix import Fix, FixEntry
from .tristate import MOD, NO, SymbolValue, ValueKind, YES, tri_value

_LINE = re.compile(r"CONFIG_([A-Za-z0-9_]+)=(.*)$")
_NOT_SET = re.compile(r"#\s*CONFIG_([A-Za-z0-9_]+) is not set\s*$")
_INT = re.compile(r"-?\d+$")
_HEX = re.compile(r"0[xX][0-9a-fA-F]+$")


class DotConfigError(Exception):
    def __init__(self, message: str, line: int | None = None) -> None:
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


def _unescape(body: str, line: int) -> str:
    out: list[str] = []
    i = 0
    while i < len(body):
        ch = body[i]
        if ch == "\\":
            if i + 1 >= len(body):
                raise DotConfigError("dangling backslash in string", line)
            out.append(body[i + 1])
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def _escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def _parse_value(sym, raw: str, line: int) -> SymbolValue:
    t = sym.type
    if t in (SymbolType.BOOL, SymbolType.TRISTATE):
        if raw == "y":
            return tri_value(YES)
        if raw == "m":
            if t is SymbolType.BOOL:
                raise DotConfigError(f"bool symbol {sym.name} cannot be m", line)
            return tri_value(MOD)
        if raw == "n":  # never written, but tolerated as the not-set marker
            return tri_value(NO)
        raise DotConfigError(f"bad {t.value} value {raw!r} for {sym.name}", line)
    if t is SymbolType.INT:
        if not _INT.match(raw):
            raise DotConfigError(f"bad int value {raw!r} for {sym.name}", line)
        return SymbolValue(ValueKind.INT, num=int(raw, 10))
    if t is SymbolType.HEX:
        if not _HEX.match(raw):
            raise DotConfigError(f"bad hex value {raw!r} for {sym.name}", line)
        return SymbolValue(ValueKind.HEX, num=int(raw, 16))
    if not (len(raw) >= 2 and raw[0] == '"' and raw[-1] == '"'):
        raise DotConfigError(f"string value for {sym.name} must be quoted", line)
    body = raw[1:-1]
    # the closing quote must not itself be escaped
    backslashes = 0
    for ch in reversed(body):
        if ch != "\\":
            break
        backslashes += 1
    if backslashes % 2:
        raise DotConfigError(f"unterminated string for {sym.name}", line)
    return SymbolValue(ValueKind.STR, text=_unescape(body, line))


def load_dotconfig(text: str, model: KconfigModel) -> tuple[Configuration, list[str]]:
    """Parse `.config` text into user values and recalculate.

    Returns the configuration and a list of warnings for lines naming
    symbols the model does not define.  A symbol assigned twice keeps
    the last value.  Malformed lines raise with their line number.
    """
    user: dict[str, SymbolValue] = {}
    warnings: list[str] = []
    for lineno, rawline in enumerate(text.splitlines(), start=1):
        line = rawline.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = _NOT_SET.match(line)
            if m is None:
                continue  # passthrough comment
            name = m.group(1)
            sym = model.symbols.get(name)
            if sym is None:
                warnings.append(f"line {lineno}: unknown symbol {name}")
                continue
            if not sym.is_bool_like():
                raise DotConfigError(
                    f"{sym.type.value} symbol {name} cannot be marked not set", lineno
                )
            user[name] = tri_value(NO)
            continue
        m = _LINE.match(line)
        if m is None:
            raise DotConfigError(f"unrecognized line {rawline!r}", lineno)
        name, raw = m.group(1), m.group(2)
        sym = model.symbols.get(name)
        if sym is None:
            warnings.append(f"line {lineno}: unknown symbol {name}")
            continue
        user[name] = _parse_value(sym, raw, lineno)
    return recalculate(model, user), warnings


def _format_value(sym, value: SymbolValue) -> str:
    if value.kind is ValueKind.TRI:
        return str(value.tri)
    if value.kind is ValueKind.HEX:
        return "0x%X" % value.num
    if value.kind is ValueKind.INT:
        return str(value.num)
    return '"%s"' % _escape(value.text)


def save_dotconfig(cfg: Configuration, model: KconfigModel) -> str:
    """One line per symbol in document order; n becomes a not-set marker."""
    lines: list[str] = []
    for name, sym in model.symbols.items():
        value = cfg.effective[name]
        if sym.is_bool_like() and value.tri == NO:
            lines.append(f"# CONFIG_{name} is not set")
        else:
            lines.append(f"CONFIG_{name}={_format_value(sym, value)}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# fix application


@dataclass(frozen=True)
class EntryReport:
    symbol: str
    stated: str
    applicable: bool
    achieved: bool  # stated value in effect right after this entry


@dataclass
class ApplyReport:
    entries: list[EntryReport] = field(default_factory=list)
    targets: list[tuple[str, str, bool]] = field(default_factory=list)

    @property
    def fully_applicable(self) -> bool:
        return all(e.applicable and e.achieved for e in self.entries)

    @property
    def resolved(self) -> bool:
        return all(hit for _, _, hit in self.targets)


def _entry_value(entry: FixEntry) -> SymbolValue:
    value = entry.value if entry.value is not None else entry.witness
    assert isinstance(value, SymbolValue), "fix entry carries no applicable value"
    return value


def _entry_achieved(model: KconfigModel, cfg: Configuration, entry: FixEntry) -> bool:
    name = entry.symbols[0]
    have = cfg.effective[name]
    if entry.constraint is None:
        return have == _entry_value(entry)
    return eval_expr(model, cfg, entry.constraint) == YES


def apply_fix(
    cfg: Configuration, fix: Fix, model: KconfigModel
) -> tuple[Configuration, ApplyReport]:
    """Apply entries in order as user values, recalculating after each.

    An entry counts applicable when its symbol is visible at
    application time, or when the stated value lands anyway because a
    select forces it.  Inapplicability is reported, never raised.
    """
    report = ApplyReport()
    current = cfg
    for entry in fix.entries:
        name = entry.symbols[0]
        sym = model.symbols[name]
        value = _entry_value(entry)
        vis = visibility(model, current, sym)
        user = dict(current.user_values)
        user[name] = value
        current = recalculate(model, user)
        achieved = _entry_achieved(model, current, entry)
        if vis > NO:
            applicable = True
        elif sym.is_bool_like() and value.tri > NO:
            forced = select_bound(model, current, sym)
            applicable = achieved and forced == value.tri
        else:
            applicable = False
        stated = entry.render()
        report.entries.append(EntryReport(name, stated, applicable, achieved))
    for entry in fix.entries:
        if not entry.desired:
            continue
        name = entry.symbols[0]
        hit = current.effective[name] == _entry_value(entry)
        report.targets.append((name, str(_entry_value(entry)), hit))
    return current, report

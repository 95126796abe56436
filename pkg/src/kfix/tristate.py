"""Three-valued logic and symbol values.

Bool and tristate symbols take values from the lattice n < m < y,
encoded as the numbers 0, 1 and 2.  Conjunction is minimum,
disjunction is maximum, and negation subtracts from 2 (Kleene's
strong three-valued rules).  Non-boolean symbols carry string,
decimal or hexadecimal payloads.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass


class Tristate(enum.IntEnum):
    NO = 0
    MOD = 1
    YES = 2

    def __str__(self) -> str:
        return {0: "n", 1: "m", 2: "y"}[int(self)]


NO = Tristate.NO
MOD = Tristate.MOD
YES = Tristate.YES

_NAMES = {"n": NO, "m": MOD, "y": YES}


def tri_from_name(name: str) -> Tristate:
    try:
        return _NAMES[name]
    except KeyError:
        raise ValueError(f"not a tristate name: {name!r}") from None


def tri_and(a: Tristate, b: Tristate) -> Tristate:
    return a if a <= b else b


def tri_or(a: Tristate, b: Tristate) -> Tristate:
    return a if a >= b else b


def tri_not(a: Tristate) -> Tristate:
    return Tristate(2 - int(a))


def tri_all(values) -> Tristate:
    """Conjunction over an iterable, y when empty."""
    out = YES
    for v in values:
        if v < out:
            out = v
            if out == NO:
                break
    return out


def tri_any(values) -> Tristate:
    """Disjunction over an iterable, n when empty."""
    out = NO
    for v in values:
        if v > out:
            out = v
            if out == YES:
                break
    return out


class ValueKind(enum.Enum):
    TRI = "tri"
    STR = "string"
    INT = "int"
    HEX = "hex"


@dataclass(frozen=True, slots=True)
class SymbolValue:
    """Value of one symbol: a tristate level or a typed payload.

    ``tri`` is meaningful only for kind TRI, ``text`` only for STR,
    and ``num`` only for INT and HEX.
    """

    kind: ValueKind
    tri: Tristate = NO
    text: str = ""
    num: int = 0

    def __str__(self) -> str:
        if self.kind is ValueKind.TRI:
            return str(self.tri)
        if self.kind is ValueKind.STR:
            return self.text
        if self.kind is ValueKind.HEX:
            return "0x%X" % self.num
        return str(self.num)


def tri_value(t: Tristate) -> SymbolValue:
    return SymbolValue(ValueKind.TRI, tri=t)


def str_value(s: str) -> SymbolValue:
    return SymbolValue(ValueKind.STR, text=s)


def int_value(i: int) -> SymbolValue:
    return SymbolValue(ValueKind.INT, num=i)


def hex_value(i: int) -> SymbolValue:
    return SymbolValue(ValueKind.HEX, num=i)


VALUE_N = tri_value(NO)
VALUE_M = tri_value(MOD)
VALUE_Y = tri_value(YES)

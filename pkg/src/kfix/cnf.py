"""CNF conversion and DIMACS serialization.

The converter is polarity aware: a definition clause set for an
auxiliary variable is emitted only for the polarities under which the
subformula is actually observed, which roughly halves the clause
count against the naive bidirectional encoding.  Shared subformula
objects get one auxiliary, so formulas built with shared structure
stay compact.

DIMACS output carries the variable book-keeping as comments ahead of
the problem line, one per variable in numbering order:

    c 3 SYM_Y USB
    c 4 SYM_M USB
    c 7 NB_EQ HZ "250"
    c 9 AUX

`parse_dimacs` accepts exactly what `to_dimacs` emits (plus arbitrary
other comments, which it ignores) and round-trips byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .prop import (
    PAnd,
    PFalse,
    PIff,
    PImplies,
    PNot,
    POr,
    PropNode,
    PropVar,
    PTrue,
    PVar,
    VarKind,
)


@dataclass
class CnfFormula:
    num_vars: int = 0
    clauses: list[list[int]] = field(default_factory=list)
    var_meta: dict[int, PropVar] = field(default_factory=dict)
    ids: dict[PropVar, int] = field(default_factory=dict)

    def new_var(self, meta: PropVar | None = None) -> int:
        self.num_vars += 1
        vid = self.num_vars
        if meta is None:
            meta = PropVar(VarKind.AUX, "", str(vid))
        self.var_meta[vid] = meta
        self.ids[meta] = vid
        return vid

    def var_for(self, var: PropVar) -> int:
        vid = self.ids.get(var)
        if vid is None:
            vid = self.new_var(var)
        return vid

    def add(self, clause: list[int]) -> None:
        self.clauses.append(clause)


class _Converter:
    def __init__(self, cnf: CnfFormula):
        self.cnf = cnf
        # id(node) -> (aux literal, polarities already defined)
        self._defs: dict[int, list] = {}
        self._keep: list[PropNode] = []

    def literal(self, node: PropNode, polarity: int) -> int:
        """Literal equisatisfiably standing for node under the polarity."""
        if isinstance(node, PVar):
            return self.cnf.var_for(node.var)
        if isinstance(node, PNot):
            return -self.literal(node.arg, -polarity)
        entry = self._defs.get(id(node))
        if entry is None:
            aux = self.cnf.new_var()
            entry = [aux, 0]
            self._defs[id(node)] = entry
            self._keep.append(node)
        aux = entry[0]
        need = polarity if polarity != 0 else 3
        have = entry[1]
        want = {1: 1, -1: 2, 3: 3}[need]
        missing = want & ~have
        if missing:
            entry[1] = have | want
            self._define(node, aux, pos=bool(missing & 1), neg=bool(missing & 2))
        return aux

    def _define(self, node: PropNode, aux: int, pos: bool, neg: bool) -> None:
        add = self.cnf.add
        if isinstance(node, PAnd):
            if pos:
                for a in node.args:
                    add([-aux, self.literal(a, 1)])
            if neg:
                add([aux] + [-self.literal(a, -1) for a in node.args])
            return
        if isinstance(node, POr):
            if pos:
                add([-aux] + [self.literal(a, 1) for a in node.args])
            if neg:
                for a in node.args:
                    add([aux, -self.literal(a, -1)])
            return
        if isinstance(node, PImplies):
            if pos:
                add([-aux, -self.literal(node.lhs, -1), self.literal(node.rhs, 1)])
            if neg:
                add([aux, self.literal(node.lhs, 1)])
                add([aux, -self.literal(node.rhs, -1)])
            return
        if isinstance(node, PIff):
            x = self.literal(node.lhs, 0)
            y = self.literal(node.rhs, 0)
            if pos:
                add([-aux, -x, y])
                add([-aux, x, -y])
            if neg:
                add([aux, x, y])
                add([aux, -x, -y])
            return
        raise TypeError(f"cannot define auxiliary for {type(node).__name__}")

    def assert_top(self, node: PropNode) -> None:
        """Emit clauses asserting node, without an auxiliary when avoidable."""
        if isinstance(node, PTrue):
            return
        if isinstance(node, PFalse):
            self.cnf.add([])
            return
        if isinstance(node, PAnd):
            for a in node.args:
                self.assert_top(a)
            return
        if isinstance(node, PNot):
            inner = node.arg
            if isinstance(inner, PVar):
                self.cnf.add([-self.cnf.var_for(inner.var)])
                return
            if isinstance(inner, POr):
                for a in inner.args:
                    self.assert_top(PNot(a) if not isinstance(a, PNot) else a.arg)
                return
            self.cnf.add([-self.literal(inner, -1)])
            return
        if isinstance(node, PVar):
            self.cnf.add([self.cnf.var_for(node.var)])
            return
        if isinstance(node, POr):
            self.cnf.add([self.literal(a, 1) for a in node.args])
            return
        if isinstance(node, PImplies):
            self.cnf.add(
                [-self.literal(node.lhs, -1), self.literal(node.rhs, 1)]
            )
            return
        if isinstance(node, PIff):
            x = self.literal(node.lhs, 0)
            y = self.literal(node.rhs, 0)
            self.cnf.add([-x, y])
            self.cnf.add([x, -y])
            return
        raise TypeError(f"cannot assert {type(node).__name__}")


def to_cnf(
    formulas: PropNode | list[PropNode],
    *,
    variable_order: list[PropVar] | None = None,
) -> CnfFormula:
    """Tseitin-style conversion; equisatisfiable, model-preserving on
    the named variables.  `variable_order` pre-assigns ids 1..n."""
    cnf = CnfFormula()
    if variable_order:
        for var in variable_order:
            cnf.var_for(var)
    conv = _Converter(cnf)
    if isinstance(formulas, PropNode):
        formulas = [formulas]
    for f in formulas:
        conv.assert_top(f)
    return cnf


def _quote(text: str) -> str:
    out = text.replace("\\", "\\\\").replace('"', '\\"')
    out = out.replace("\n", "\\n").replace("\t", "\\t")
    return f'"{out}"'


def _unquote(text: str) -> str:
    assert text.startswith('"') and text.endswith('"')
    body = text[1:-1]
    out = []
    i = 0
    while i < len(body):
        c = body[i]
        if c == "\\" and i + 1 < len(body):
            nxt = body[i + 1]
            out.append({"\\": "\\", '"': '"', "n": "\n", "t": "\t"}.get(nxt, nxt))
            i += 2
        else:
            out.append(c)
            i += 1
    return "".join(out)


def to_dimacs(cnf: CnfFormula) -> str:
    lines = []
    for vid in range(1, cnf.num_vars + 1):
        meta = cnf.var_meta.get(vid)
        if meta is None or meta.kind is VarKind.AUX:
            lines.append(f"c {vid} AUX")
        elif meta.kind is VarKind.NB_EQ:
            lines.append(f"c {vid} NB_EQ {meta.symbol} {_quote(meta.payload)}")
        else:
            lines.append(f"c {vid} {meta.kind.value} {meta.symbol}")
    lines.append(f"p cnf {cnf.num_vars} {len(cnf.clauses)}")
    for clause in cnf.clauses:
        lines.append(" ".join(str(l) for l in clause) + " 0" if clause else "0")
    return "\n".join(lines) + "\n"


class DimacsError(ValueError):
    pass


def parse_dimacs(text: str) -> CnfFormula:
    cnf = CnfFormula()
    meta: dict[int, PropVar] = {}
    num_vars = num_clauses = None
    clauses: list[list[int]] = []
    pending: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            parts = line.split(None, 3)
            if len(parts) >= 3 and parts[1].isdigit():
                vid = int(parts[1])
                kind_name = parts[2]
                try:
                    kind = VarKind(kind_name)
                except ValueError:
                    continue  # unrelated comment
                if kind is VarKind.AUX:
                    meta[vid] = PropVar(kind, "", str(vid))
                elif kind is VarKind.NB_EQ:
                    rest = parts[3] if len(parts) > 3 else ""
                    sym, _, quoted = rest.partition(" ")
                    if not sym or not quoted.startswith('"'):
                        raise DimacsError(
                            f"line {lineno}: malformed NB_EQ comment"
                        )
                    meta[vid] = PropVar(kind, sym, _unquote(quoted))
                else:
                    if len(parts) < 4:
                        raise DimacsError(
                            f"line {lineno}: {kind_name} comment missing symbol"
                        )
                    meta[vid] = PropVar(kind, parts[3])
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"line {lineno}: malformed problem line")
            try:
                num_vars, num_clauses = int(parts[2]), int(parts[3])
            except ValueError as exc:
                raise DimacsError(
                    f"line {lineno}: malformed problem line"
                ) from exc
            continue
        if num_vars is None:
            raise DimacsError(f"line {lineno}: clause before problem line")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError as exc:
                raise DimacsError(f"line {lineno}: bad literal {tok!r}") from exc
            if lit == 0:
                clauses.append(pending)
                pending = []
            else:
                if abs(lit) > num_vars:
                    raise DimacsError(
                        f"line {lineno}: literal {lit} out of range"
                    )
                pending.append(lit)
    if pending:
        raise DimacsError("last clause not terminated with 0")
    if num_vars is None:
        raise DimacsError("missing problem line")
    if num_clauses is not None and len(clauses) != num_clauses:
        raise DimacsError(
            f"problem line declares {num_clauses} clauses, found {len(clauses)}"
        )
    cnf.num_vars = num_vars
    cnf.clauses = clauses
    for vid in range(1, num_vars + 1):
        m = meta.get(vid, PropVar(VarKind.AUX, "", str(vid)))
        cnf.var_meta[vid] = m
        cnf.ids[m] = vid
    return cnf

"""CDCL satisfiability solver with assumption support.

Two-watched-literal propagation, first-UIP conflict analysis with
basic self-subsumption minimization, VSIDS branching, phase saving
with an all-negative initial polarity (configurations tend to be
sparse, so branching toward n first finds models quickly), and Luby
restarts.  Solving under assumptions yields, on failure, the subset
of assumptions the refutation actually used; `minimize_core` shrinks
that further by deletion probing.

The solver is deterministic: no randomization anywhere, ties broken
by variable index.  Budgets cut off long runs and report UNKNOWN
rather than blocking.

`run_external_solver` shells out to any DIMACS-speaking binary named
in KFIX_SAT_BACKEND and adapts its verdict; assumption queries always
run on the built-in solver, which knows how to extract cores.
"""

from __future__ import annotations

import os
import subprocess
import tempfile
import time
from enum import Enum
from heapq import heappop, heappush

from .cnf import CnfFormula, to_dimacs


class SatResult(Enum):
    SAT = "sat"
    UNSAT = "unsat"
    UNKNOWN = "unknown"


def luby(i: int) -> int:
    """i-th element (1-based) of the Luby restart sequence."""
    x = i - 1
    size, seq = 1, 0
    while size < x + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != x:
        size = (size - 1) // 2
        seq -= 1
        x %= size
    return 1 << seq


_VAR_DECAY = 0.95
_RESCALE = 1e100


class Solver:
    def __init__(self, num_vars: int = 0):
        self.num_vars = 0
        self.clauses: list[list[int]] = []
        self.watches: list[list[int]] = [[], []]  # index 2v / 2v+1 (pos/neg)
        self.assigns: list[int] = [0]  # 1 true, -1 false, 0 unassigned
        self.levels: list[int] = [0]
        self.reasons: list[int] = [-1]
        self.activity: list[float] = [0.0]
        self.phase: list[bool] = [False]
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.var_inc = 1.0
        self.heap: list[tuple[float, int]] = []
        self.ok = True
        self._model: dict[int, bool] = {}
        self._core: list[int] = []
        self.conflicts = 0
        self.decisions = 0
        self.propagations = 0
        if num_vars:
            self.ensure_vars(num_vars)

    # --- setup -----------------------------------------------------------

    def ensure_vars(self, n: int) -> None:
        while self.num_vars < n:
            self.num_vars += 1
            self.assigns.append(0)
            self.levels.append(0)
            self.reasons.append(-1)
            self.activity.append(0.0)
            self.phase.append(False)
            self.watches.append([])
            self.watches.append([])
            heappush(self.heap, (0.0, self.num_vars))

    def add_clause(self, lits) -> bool:
        """Add at decision level 0.  False means the instance is already
        unsatisfiable."""
        if self.trail_lim:
            self._cancel_until(0)
        if not self.ok:
            return False
        seen = set()
        clause: list[int] = []
        for lit in lits:
            self.ensure_vars(abs(lit))
            if -lit in seen:
                return True  # tautology
            if lit in seen:
                continue
            v = self._value(lit)
            if v == 1 and self.levels[abs(lit)] == 0:
                return True  # satisfied at root
            if v == -1 and self.levels[abs(lit)] == 0:
                continue  # falsified at root, drop literal
            seen.add(lit)
            clause.append(lit)
        if not clause:
            self.ok = False
            return False
        if len(clause) == 1:
            if not self._enqueue(clause[0], -1):
                self.ok = False
                return False
            self.ok = self._propagate() == -1
            return self.ok
        ci = len(self.clauses)
        self.clauses.append(clause)
        self._watch(clause, ci)
        return True

    def _watch(self, clause: list[int], ci: int) -> None:
        self.watches[self._widx(-clause[0])].append(ci)
        self.watches[self._widx(-clause[1])].append(ci)

    @staticmethod
    def _widx(lit: int) -> int:
        return (lit << 1) if lit > 0 else ((-lit << 1) | 1)

    # --- state -----------------------------------------------------------

    def _value(self, lit: int) -> int:
        v = self.assigns[abs(lit)]
        return v if lit > 0 else -v

    def _enqueue(self, lit: int, reason: int) -> bool:
        v = self._value(lit)
        if v != 0:
            return v == 1
        var = abs(lit)
        self.assigns[var] = 1 if lit > 0 else -1
        self.levels[var] = len(self.trail_lim)
        self.reasons[var] = reason
        self.trail.append(lit)
        return True

    def _cancel_until(self, level: int) -> None:
        if len(self.trail_lim) <= level:
            return
        bound = self.trail_lim[level]
        for i in range(len(self.trail) - 1, bound - 1, -1):
            lit = self.trail[i]
            var = abs(lit)
            self.phase[var] = lit > 0
            self.assigns[var] = 0
            self.reasons[var] = -1
            heappush(self.heap, (-self.activity[var], var))
        del self.trail[bound:]
        del self.trail_lim[level:]
        self.qhead = len(self.trail)

    def _propagate(self) -> int:
        """Exhaust the queue; return conflicting clause index or -1."""
        while self.qhead < len(self.trail):
            p = self.trail[self.qhead]
            self.qhead += 1
            self.propagations += 1
            false_lit = -p
            wl = self.watches[self._widx(p)]
            i = j = 0
            n = len(wl)
            while i < n:
                ci = wl[i]
                clause = self.clauses[ci]
                if clause[0] == false_lit:
                    clause[0], clause[1] = clause[1], clause[0]
                first = clause[0]
                if self._value(first) == 1:
                    wl[j] = ci
                    j += 1
                    i += 1
                    continue
                moved = False
                for k in range(2, len(clause)):
                    if self._value(clause[k]) != -1:
                        clause[1], clause[k] = clause[k], clause[1]
                        self.watches[self._widx(-clause[1])].append(ci)
                        moved = True
                        break
                if moved:
                    i += 1
                    continue
                wl[j] = ci
                j += 1
                i += 1
                if self._value(first) == -1:
                    while i < n:
                        wl[j] = wl[i]
                        j += 1
                        i += 1
                    del wl[j:]
                    self.qhead = len(self.trail)
                    return ci
                self._enqueue(first, ci)
            del wl[j:]
        return -1

    # --- heuristics --------------------------------------------------------

    def _bump(self, var: int) -> None:
        self.activity[var] += self.var_inc
        if self.activity[var] > _RESCALE:
            for v in range(1, self.num_vars + 1):
                self.activity[v] *= 1e-100
            self.var_inc *= 1e-100
        heappush(self.heap, (-self.activity[var], var))

    def _decay(self) -> None:
        self.var_inc /= _VAR_DECAY

    def _pick_branch_var(self) -> int:
        while self.heap:
            act, var = heappop(self.heap)
            if self.assigns[var] == 0 and -act == self.activity[var]:
                return var
        for var in range(1, self.num_vars + 1):
            if self.assigns[var] == 0:
                return var
        return 0

    # --- analysis ------------------------------------------------------------

    def _analyze(self, confl: int) -> tuple[list[int], int]:
        learnt = [0]
        seen = [False] * (self.num_vars + 1)
        counter = 0
        p = 0
        index = len(self.trail) - 1
        cur_level = len(self.trail_lim)
        first = True
        while True:
            clause = self.clauses[confl]
            # reason clauses keep their implied literal at index 0; skip it
            for q in (clause if first else clause[1:]):
                var = abs(q)
                if not seen[var] and self.levels[var] > 0:
                    seen[var] = True
                    self._bump(var)
                    if self.levels[var] >= cur_level:
                        counter += 1
                    else:
                        learnt.append(q)
            first = False
            while not seen[abs(self.trail[index])]:
                index -= 1
            p = self.trail[index]
            confl = self.reasons[abs(p)]
            seen[abs(p)] = False
            index -= 1
            counter -= 1
            if counter == 0:
                break
            # clause for the next resolution step must exist
            assert confl != -1
        learnt[0] = -p

        # drop literals implied by the rest of the clause
        seen[abs(p)] = True
        kept = [learnt[0]]
        for lit in learnt[1:]:
            r = self.reasons[abs(lit)]
            if r == -1:
                kept.append(lit)
                continue
            others = self.clauses[r]
            if all(
                seen[abs(q)] or self.levels[abs(q)] == 0
                for q in others
                if abs(q) != abs(lit)
            ):
                continue
            kept.append(lit)
        learnt = kept

        if len(learnt) == 1:
            back = 0
        else:
            max_i = 1
            for i in range(2, len(learnt)):
                if self.levels[abs(learnt[i])] > self.levels[abs(learnt[max_i])]:
                    max_i = i
            learnt[1], learnt[max_i] = learnt[max_i], learnt[1]
            back = self.levels[abs(learnt[1])]
        return learnt, back

    def _analyze_final(self, lit: int, assumption_set: set[int]) -> list[int]:
        """Assumptions needed to refute lit, including lit itself."""
        core = [lit]
        seen = [False] * (self.num_vars + 1)
        seen[abs(lit)] = True
        for i in range(len(self.trail) - 1, -1, -1):
            p = self.trail[i]
            var = abs(p)
            if not seen[var]:
                continue
            seen[var] = False
            r = self.reasons[var]
            if r == -1:
                if self.levels[var] > 0 and p in assumption_set and p not in core:
                    core.append(p)
            else:
                for q in self.clauses[r]:
                    if self.levels[abs(q)] > 0:
                        seen[abs(q)] = True
        return core

    # --- main loop -------------------------------------------------------------

    def solve(
        self,
        assumptions: list[int] | tuple[int, ...] = (),
        *,
        conflict_budget: int | None = None,
        time_budget: float | None = None,
    ) -> SatResult:
        self._model = {}
        self._core = []
        self._cancel_until(0)
        if not self.ok:
            self._core = []
            return SatResult.UNSAT
        for lit in assumptions:
            self.ensure_vars(abs(lit))
        assumption_set = set(assumptions)
        deadline = time.monotonic() + time_budget if time_budget else None
        start_conflicts = self.conflicts
        restart_n = 0
        limit = 0

        while True:
            confl = self._propagate()
            if confl >= 0:
                self.conflicts += 1
                limit -= 1
                if len(self.trail_lim) <= len(assumptions):
                    # conflict inside (or below) the assumption prefix
                    self._core = self._conflict_core(confl, assumption_set)
                    self._cancel_until(0)
                    return SatResult.UNSAT
                learnt, back = self._analyze(confl)
                self._cancel_until(back)
                if len(learnt) == 1:
                    self._cancel_until(0)
                    if not self._enqueue(learnt[0], -1):
                        self.ok = False
                        return SatResult.UNSAT
                else:
                    ci = len(self.clauses)
                    self.clauses.append(learnt)
                    self._watch(learnt, ci)
                    self._enqueue(learnt[0], ci)
                self._decay()
                continue

            if conflict_budget is not None and self.conflicts - start_conflicts >= conflict_budget:
                self._cancel_until(0)
                return SatResult.UNKNOWN
            if deadline is not None and (self.conflicts + self.decisions) % 64 == 0:
                if time.monotonic() > deadline:
                    self._cancel_until(0)
                    return SatResult.UNKNOWN
            if limit <= 0:
                restart_n += 1
                limit = 128 * luby(restart_n)
                if len(self.trail_lim) > len(assumptions):
                    self._cancel_until(len(assumptions))

            # extend the assumption prefix
            if len(self.trail_lim) < len(assumptions):
                p = assumptions[len(self.trail_lim)]
                v = self._value(p)
                if v == 1:
                    self.trail_lim.append(len(self.trail))
                    continue
                if v == -1:
                    self._core = self._analyze_final(p, assumption_set)
                    self._cancel_until(0)
                    return SatResult.UNSAT
                self.trail_lim.append(len(self.trail))
                self._enqueue(p, -1)
                continue

            var = self._pick_branch_var()
            if var == 0:
                self._model = {
                    v: self.assigns[v] == 1 for v in range(1, self.num_vars + 1)
                }
                self._cancel_until(0)
                return SatResult.SAT
            self.decisions += 1
            self.trail_lim.append(len(self.trail))
            self._enqueue(var if self.phase[var] else -var, -1)

    def _conflict_core(self, confl: int, assumption_set: set[int]) -> list[int]:
        seen = [False] * (self.num_vars + 1)
        core: list[int] = []
        stack = list(self.clauses[confl])
        while stack:
            q = stack.pop()
            var = abs(q)
            if seen[var] or self.levels[var] == 0:
                continue
            seen[var] = True
            r = self.reasons[var]
            if r == -1:
                p = q if self._value(q) == 1 else -q
                if p in assumption_set and p not in core:
                    core.append(p)
            else:
                stack.extend(self.clauses[r])
        return core

    def model(self) -> dict[int, bool]:
        return dict(self._model)

    def unsat_core(self) -> list[int]:
        return list(self._core)


def solve_cnf(
    cnf: CnfFormula,
    assumptions: list[int] | tuple[int, ...] = (),
    *,
    conflict_budget: int | None = None,
    time_budget: float | None = None,
) -> tuple[SatResult, dict[int, bool], list[int]]:
    """One-shot solve; returns (result, model, unsat core)."""
    backend = os.environ.get("KFIX_SAT_BACKEND")
    if backend and not assumptions:
        res, model = run_external_solver(backend, cnf)
        return res, model, []
    solver = Solver(cnf.num_vars)
    for clause in cnf.clauses:
        if not solver.add_clause(clause):
            return SatResult.UNSAT, {}, []
    res = solver.solve(
        assumptions, conflict_budget=conflict_budget, time_budget=time_budget
    )
    return res, solver.model(), solver.unsat_core()


def minimize_core(
    solver: Solver,
    core: list[int],
    *,
    max_resolves: int = 200,
    conflict_budget: int = 20000,
) -> list[int]:
    """Deletion-based shrink: drop assumptions whose removal keeps UNSAT."""
    current = list(core)
    resolves = 0
    i = 0
    while i < len(current) and resolves < max_resolves:
        trial = current[:i] + current[i + 1:]
        resolves += 1
        res = solver.solve(trial, conflict_budget=conflict_budget)
        if res == SatResult.UNSAT:
            new_core = solver.unsat_core()
            # the refutation may have used even fewer assumptions
            keep = set(new_core)
            current = [a for a in trial if a in keep]
            i = 0 if len(current) < len(trial) else i
        else:
            i += 1
    return current


def run_external_solver(
    binary: str, cnf: CnfFormula, timeout: float = 60.0
) -> tuple[SatResult, dict[int, bool]]:
    """Run a DIMACS solver binary; parse a minisat-style verdict."""
    with tempfile.NamedTemporaryFile(
        "w", suffix=".cnf", delete=False
    ) as handle:
        handle.write(to_dimacs(cnf))
        path = handle.name
    try:
        proc = subprocess.run(
            [binary, path],
            capture_output=True,
            text=True,
            timeout=timeout,
            check=False,
        )
    finally:
        os.unlink(path)
    out = proc.stdout
    if "UNSAT" in out:
        return SatResult.UNSAT, {}
    if "SAT" not in out:
        return SatResult.UNKNOWN, {}
    model: dict[int, bool] = {}
    for tok in out.replace("v ", " ").split():
        try:
            lit = int(tok)
        except ValueError:
            continue
        if lit != 0:
            model[abs(lit)] = lit > 0
    return SatResult.SAT, model

"""Evaluation harness: biased configuration sampling, resolvable-conflict
generation, fix-outcome classification, and report tables.

A run samples configurations at several no-probabilities, creates five
conflicts of each size 1 through 10 against every sample (50 per
sample), resolves each conflict, applies every returned fix to a copy
of the sample, and classifies the outcome into the three classes:
applicable and resolves, not fully applicable but resolves, does not
resolve.  All randomness flows from the run seed.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field

from .abstraction import build_formula
from .cnf import to_cnf
from .dotconfig import apply_fix
from .evaluate import (
    Configuration,
    compute_value,
    member_visibility,
    recalculate,
    validate,
    visibility,
)
from .kconfig.ast import KconfigModel, Symbol, SymbolType
from .prop import PropVar, VarKind
from .rangefix import Conflict, Fix, Limits, resolve_conflict
from .sat import SatResult, Solver
from .tristate import MOD, NO, SymbolValue, Tristate, YES, tri_value


@dataclass(frozen=True)
class SampleParams:
    p_no: float = 0.5
    seed: int = 0
    model_id: str = ""

    def __post_init__(self) -> None:
        if not 0.0 < self.p_no < 1.0:
            raise ValueError(f"p_no must lie strictly between 0 and 1, got {self.p_no}")


class FixOutcome(enum.Enum):
    APPLICABLE_RESOLVES = "applicable_resolves"
    NOT_APPLICABLE_BUT_RESOLVES = "not_applicable_but_resolves"
    DOES_NOT_RESOLVE = "does_not_resolve"


def _levels(sym: Symbol) -> list[Tristate]:
    if sym.type is SymbolType.TRISTATE:
        return [NO, MOD, YES]
    return [NO, YES]


def _confirm(model: KconfigModel, cfg: Configuration) -> Configuration:
    """Promote every effective value to a user value; the result is a
    total self-reproducing configuration (what saving and reloading a
    .config file produces)."""
    confirmed = recalculate(model, dict(cfg.effective))
    assert confirmed.effective == cfg.effective, "confirmation changed values"
    return confirmed


def sample_config(model: KconfigModel, params: SampleParams) -> Configuration:
    """Document-order randomized assignment: each visible Bool/Tristate
    draws n with probability p_no, else uniformly among the levels its
    visibility admits; recalculated after every assignment."""
    rng = random.Random(params.seed)
    cfg = recalculate(model, {})
    for name, sym in model.symbols.items():
        if not sym.is_bool_like() or not sym.has_prompt():
            continue
        vis = _symbol_vis(model, cfg, sym)
        if vis == NO:
            continue
        if rng.random() < params.p_no:
            pick = NO
        else:
            settable = [lvl for lvl in _levels(sym) if NO < lvl <= vis]
            if not settable:
                continue
            pick = rng.choice(settable)
        user = dict(cfg.user_values)
        user[name] = tri_value(pick)
        cfg = recalculate(model, user)
    return _confirm(model, cfg)


def _symbol_vis(model: KconfigModel, cfg: Configuration, sym: Symbol) -> Tristate:
    if sym.choice is not None:
        return member_visibility(model, cfg, sym.name)
    return visibility(model, cfg, sym)


def build_base_config(model: KconfigModel) -> Configuration:
    """Maximal configuration: document-order pass setting every visible
    Bool/Tristate to the highest level its visibility admits."""
    cfg = recalculate(model, {})
    for name, sym in model.symbols.items():
        if not sym.is_bool_like() or not sym.has_prompt():
            continue
        vis = _symbol_vis(model, cfg, sym)
        if vis == NO:
            continue
        user = dict(cfg.user_values)
        user[name] = tri_value(YES if vis == YES else MOD)
        cfg = recalculate(model, user)
    return _confirm(model, cfg)


def reachable_values(
    model: KconfigModel, cfg: Configuration, sym: Symbol
) -> set[Tristate]:
    """Effective values the user can reach for `sym` right now by
    choosing a user value, everything else held fixed."""
    out: set[Tristate] = set()
    for lvl in _levels(sym):
        probe = Configuration(
            user_values=dict(cfg.user_values), effective=dict(cfg.effective)
        )
        probe.user_values[sym.name] = tri_value(lvl)
        out.add(compute_value(model, probe, sym).tri)
    return out


class _ResolvabilityOracle:
    """Reusable satisfiability probe: model hard constraints once,
    desired targets as assumptions."""

    def __init__(self, model: KconfigModel) -> None:
        self.model = model
        pm = build_formula(model)
        cnf = to_cnf([f for _, f in pm.constraints], variable_order=pm.variables())
        self.cnf = cnf
        self.solver = Solver(cnf.num_vars)
        self.ok = True
        for clause in cnf.clauses:
            self.ok = self.solver.add_clause(clause) and self.ok

    def _lits(self, desired: list[tuple[str, SymbolValue]]) -> list[int]:
        lits: list[int] = []
        for name, value in desired:
            y = self.cnf.ids.get(PropVar(VarKind.SYM_Y, name))
            m = self.cnf.ids.get(PropVar(VarKind.SYM_M, name))
            tri = value.tri
            if y is not None:
                lits.append(y if tri == YES else -y)
            if m is not None:
                lits.append(m if tri == MOD else -m)
        return lits

    def achievable(self, desired: list[tuple[str, SymbolValue]]) -> bool:
        if not self.ok:
            return False
        return self.solver.solve(self._lits(desired)) == SatResult.SAT


def eligible_symbols(model: KconfigModel, cfg: Configuration) -> list[tuple[str, list[Tristate]]]:
    """Symbols meeting the conflict criteria: prompted, Bool/Tristate,
    not a choice member, with at least one currently blocked value."""
    out: list[tuple[str, list[Tristate]]] = []
    for name, sym in model.symbols.items():
        if not sym.is_bool_like() or not sym.has_prompt() or sym.choice is not None:
            continue
        current = cfg.tri(name)
        blocked = [
            lvl
            for lvl in _levels(sym)
            if lvl != current and lvl not in reachable_values(model, cfg, sym)
        ]
        if blocked:
            out.append((name, blocked))
    return out


class ConflictGenerationError(Exception):
    pass


def generate_conflict(
    model: KconfigModel,
    cfg: Configuration,
    base: Configuration,
    size: int,
    seed: int,
    oracle: _ResolvabilityOracle | None = None,
) -> Conflict:
    """Pick `size` eligible symbols and blocked target values such that
    each target matches the base configuration's value or is n, and the
    whole target set is jointly achievable in some valid configuration."""
    if size < 1:
        raise ConflictGenerationError("conflict size must be at least 1")
    rng = random.Random(seed)
    oracle = oracle or _ResolvabilityOracle(model)
    eligible = eligible_symbols(model, cfg)
    if len(eligible) < size:
        raise ConflictGenerationError(
            f"only {len(eligible)} eligible symbols for a size-{size} conflict"
        )
    for _ in range(200):
        chosen = rng.sample(eligible, size)
        desired: list[tuple[str, SymbolValue]] = []
        witnessed = True
        for name, blocked in chosen:
            targets = [
                lvl for lvl in blocked if lvl == base.tri(name) or lvl == NO
            ]
            if not targets:
                witnessed = False
                break
            desired.append((name, tri_value(rng.choice(targets))))
        if not witnessed:
            continue
        if oracle.achievable(desired):
            return Conflict(desired=tuple(desired), base_config=cfg)
    raise ConflictGenerationError(
        f"no jointly achievable size-{size} conflict found after 200 draws"
    )


def classify_fix(
    model: KconfigModel, cfg: Configuration, conflict: Conflict, fix: Fix
) -> FixOutcome:
    new_cfg, report = apply_fix(cfg, fix, model)
    targets_met = all(
        new_cfg.effective[name] == value for name, value in conflict.desired
    )
    if not targets_met:
        return FixOutcome.DOES_NOT_RESOLVE
    if all(e.applicable and e.achieved for e in report.entries):
        return FixOutcome.APPLICABLE_RESOLVES
    return FixOutcome.NOT_APPLICABLE_BUT_RESOLVES


# --------------------------------------------------------------------------
# full evaluation runs


@dataclass
class ConflictResult:
    model_id: str
    sample_seed: int
    p_no: float
    conflict_id: int
    size: int
    desired: tuple[tuple[str, str], ...]
    fix_sizes: list[int] = field(default_factory=list)
    outcomes: list[FixOutcome] = field(default_factory=list)
    directly_applicable: bool = False
    timed_out: bool = False

    @property
    def generated(self) -> bool:
        return bool(self.desired)

    @property
    def resolved(self) -> bool:
        if self.directly_applicable:
            return True
        return any(
            o in (FixOutcome.APPLICABLE_RESOLVES, FixOutcome.NOT_APPLICABLE_BUT_RESOLVES)
            for o in self.outcomes
        )


@dataclass
class EvalReport:
    results: list[ConflictResult] = field(default_factory=list)

    # rows for failed generation attempts stay in `results` for the CSV but
    # do not count as generated conflicts
    @property
    def conflicts_attempted(self) -> int:
        return len(self.results)

    @property
    def conflicts_generated(self) -> int:
        return sum(1 for r in self.results if r.generated)

    @property
    def conflicts_with_fix(self) -> int:
        return sum(1 for r in self.results if r.fix_sizes or r.directly_applicable)

    @property
    def conflicts_resolved(self) -> int:
        return sum(1 for r in self.results if r.resolved)

    @property
    def conflicts_timed_out(self) -> int:
        return sum(1 for r in self.results if r.timed_out)

    @property
    def total_fixes(self) -> int:
        return sum(len(r.fix_sizes) for r in self.results)

    def outcome_counts(self) -> dict[FixOutcome, int]:
        counts = {o: 0 for o in FixOutcome}
        for r in self.results:
            for o in r.outcomes:
                counts[o] += 1
        return counts

    def outcome_percentages(self) -> dict[FixOutcome, float]:
        total = self.total_fixes
        if total == 0:
            return {o: 0.0 for o in FixOutcome}
        return {o: 100.0 * c / total for o, c in self.outcome_counts().items()}

    def fix_size_histogram(self) -> dict[int, int]:
        hist: dict[int, int] = {}
        for r in self.results:
            for s in r.fix_sizes:
                hist[s] = hist.get(s, 0) + 1
        return dict(sorted(hist.items()))

    def fix_size_by_conflict_size(self) -> dict[int, list[int]]:
        table: dict[int, list[int]] = {}
        for r in self.results:
            table.setdefault(r.size, []).extend(r.fix_sizes)
        return {k: sorted(v) for k, v in sorted(table.items())}

    def csv_rows(self) -> list[str]:
        header = (
            "model_id,sample_seed,p_no,conflict_id,conflict_size,"
            "fix_index,fix_size,outcome,resolved,timed_out"
        )
        rows = [header]
        for r in self.results:
            if not r.fix_sizes:
                rows.append(
                    f"{r.model_id},{r.sample_seed},{r.p_no},{r.conflict_id},"
                    f"{r.size},,,none,{str(r.resolved).lower()},{str(r.timed_out).lower()}"
                )
                continue
            for i, (s, o) in enumerate(zip(r.fix_sizes, r.outcomes)):
                rows.append(
                    f"{r.model_id},{r.sample_seed},{r.p_no},{r.conflict_id},"
                    f"{r.size},{i},{s},{o.value},{str(r.resolved).lower()},"
                    f"{str(r.timed_out).lower()}"
                )
        return rows

    def format_table(self) -> str:
        counts = self.outcome_counts()
        pct = self.outcome_percentages()
        lines = [
            "conflicts generated    %6d" % self.conflicts_generated,
            "conflicts with fix     %6d" % self.conflicts_with_fix,
            "conflicts resolved     %6d" % self.conflicts_resolved,
            "conflicts timed out    %6d" % self.conflicts_timed_out,
            "total fixes            %6d" % self.total_fixes,
        ]
        label = {
            FixOutcome.APPLICABLE_RESOLVES: "applicable + resolves",
            FixOutcome.NOT_APPLICABLE_BUT_RESOLVES: "not applicable, resolves",
            FixOutcome.DOES_NOT_RESOLVE: "does not resolve",
        }
        for o in FixOutcome:
            lines.append("%-24s %5d  %6.1f%%" % (label[o], counts[o], pct[o]))
        hist = self.fix_size_histogram()
        if hist:
            lines.append("fix sizes: " + ", ".join(f"{k}: {v}" for k, v in hist.items()))
        return "\n".join(lines)


DEFAULT_PLAN = tuple((size, k) for size in range(1, 11) for k in range(5))


def run_evaluation(
    model: KconfigModel,
    params_list: list[SampleParams],
    limits: Limits | None = None,
    plan: tuple[tuple[int, int], ...] = DEFAULT_PLAN,
) -> EvalReport:
    """Resolve and classify the full conflict plan for every sample."""
    limits = limits or Limits()
    report = EvalReport()
    base = build_base_config(model)
    oracle = _ResolvabilityOracle(model)
    for params in params_list:
        cfg = sample_config(model, params)
        assert validate(model, cfg) == []
        conflict_id = 0
        for size, k in plan:
            sub_seed = hash((params.seed, size, k)) & 0x7FFFFFFF
            result = ConflictResult(
                model_id=params.model_id,
                sample_seed=params.seed,
                p_no=params.p_no,
                conflict_id=conflict_id,
                size=size,
                desired=(),
            )
            conflict_id += 1
            try:
                conflict = generate_conflict(model, cfg, base, size, sub_seed, oracle)
            except ConflictGenerationError:
                result.size = size
                report.results.append(result)
                continue
            result.desired = tuple((n, str(v)) for n, v in conflict.desired)
            res = resolve_conflict(model, cfg, list(conflict.desired), limits)
            result.directly_applicable = res.directly_applicable
            result.timed_out = res.timed_out
            for fix in res.fixes:
                result.fix_sizes.append(len(fix.entries))
                result.outcomes.append(classify_fix(model, cfg, conflict, fix))
            report.results.append(result)
    return report

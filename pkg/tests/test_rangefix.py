"""Conflict resolution: hitting-set diagnosis, the generic
constraint route, and SAT-backed resolution over linked models."""

from __future__ import annotations

import pytest

from conftest import from_text
from kfix.dotconfig import apply_fix
from kfix.evaluate import recalculate
from kfix.kconfig.ast import (
    And,
    Compare,
    ConstString,
    Not,
    Or,
    SymbolRef,
)
from kfix.rangefix import (
    Diagnosis,
    FixEntry,
    GenericProblem,
    Limits,
    NoFixFound,
    VarSpec,
    diagnose,
    generate_diagnoses,
    resolve_conflict,
    resolve_generic,
)
from kfix.tristate import MOD, YES, tri_value


# ----------------------------------------------------------------------
# stage 1 on a synthetic pin system: unsat iff C is pinned or A and B
# are pinned together, so the minimal relaxations are {A,C} and {B,C}

IDS = ["A", "B", "C", "D"]


def _sat(enabled: frozenset) -> bool:
    return not ("C" in enabled or ("A" in enabled and "B" in enabled))


def _check_good_cores(enabled: frozenset):
    if _sat(enabled):
        return True, None
    core = ["C"] if "C" in enabled else ["A", "B"]
    return False, core


def _check_sloppy_cores(enabled: frozenset):
    if _sat(enabled):
        return True, None
    return False, sorted(enabled)


def _assert_exhaustively_minimal(diagnoses: list[Diagnosis]) -> None:
    full = frozenset(IDS)
    for diag in diagnoses:
        assert _sat(full - diag.variables)
        for item in diag.variables:
            assert not _sat(full - (diag.variables - {item}))


def test_diagnose_finds_all_minimal_sets() -> None:
    diagnoses, timed_out = diagnose(_check_good_cores, IDS, Limits())
    assert not timed_out
    assert [d.variables for d in diagnoses] == [
        frozenset({"A", "C"}),
        frozenset({"B", "C"}),
    ]
    _assert_exhaustively_minimal(diagnoses)


def test_diagnose_minimal_even_with_sloppy_cores() -> None:
    """Deletion probing repairs worst-quality cores (whole enabled set)."""
    diagnoses, timed_out = diagnose(_check_sloppy_cores, IDS, Limits())
    assert not timed_out
    assert {d.variables for d in diagnoses} == {
        frozenset({"A", "C"}),
        frozenset({"B", "C"}),
    }
    _assert_exhaustively_minimal(diagnoses)


def test_diagnose_respects_max_fixes() -> None:
    diagnoses, _ = diagnose(_check_good_cores, IDS, Limits(max_fixes=1))
    assert len(diagnoses) == 1
    _assert_exhaustively_minimal(diagnoses)


def test_diagnose_satisfiable_system_needs_nothing() -> None:
    diagnoses, timed_out = diagnose(lambda e: (True, None), IDS, Limits())
    assert diagnoses == [] and not timed_out


def test_diagnose_node_budget_flags_timeout() -> None:
    diagnoses, timed_out = diagnose(_check_good_cores, IDS, Limits(max_nodes=0))
    assert diagnoses == [] and timed_out


def test_generate_diagnoses_raises_on_empty_timeout() -> None:
    with pytest.raises(NoFixFound):
        generate_diagnoses(_check_good_cores, IDS, Limits(max_nodes=0))
    with pytest.raises(NoFixFound):
        generate_diagnoses(lambda e: (None, None), IDS, Limits())


# ----------------------------------------------------------------------
# generic route golden: variables {m, a, b} with current values
# m=True, a=6, b=5 violating (m -> a>10) && (!m -> b>10) && (a < b)


def _paper_problem() -> GenericProblem:
    m, a, b = SymbolRef("m"), SymbolRef("a"), SymbolRef("b")
    return GenericProblem(
        variables=[VarSpec("m", "bool"), VarSpec("a", "int"), VarSpec("b", "int")],
        constraints=[
            Or((Not(m), Compare(">", a, ConstString("10")))),
            Or((m, Compare(">", b, ConstString("10")))),
            Compare("<", a, b),
        ],
        current={"m": True, "a": 6, "b": 5},
    )


def test_generic_golden_diagnoses_and_fixes() -> None:
    result = resolve_generic(_paper_problem())
    assert not result.directly_applicable and not result.timed_out
    assert [f.diagnosis.variables for f in result.fixes] == [
        frozenset({"a", "b"}),
        frozenset({"m", "b"}),
    ]
    a, b = SymbolRef("a"), SymbolRef("b")
    assert result.fixes[0].entries == (
        FixEntry(
            symbols=("a", "b"),
            constraint=And(
                (Compare(">", a, ConstString("10")), Compare("<", a, b))
            ),
        ),
    )
    assert result.fixes[1].entries == (
        FixEntry(symbols=("m",), value=False),
        FixEntry(symbols=("b",), constraint=Compare(">", b, ConstString("10"))),
    )
    assert result.fixes[0].render() == "[(a, b): a > 10 && a < b]"
    assert result.fixes[1].render() == "[m := False, b: b > 10]"


def test_generic_golden_fixes_restore_satisfiability() -> None:
    from kfix.rangefix import eval_generic

    problem = _paper_problem()
    # witnesses consistent with each fix, untouched variables pinned
    envs = [
        {"m": True, "a": 11, "b": 12},
        {"m": False, "a": 6, "b": 11},
    ]
    for env in envs:
        assert all(eval_generic(c, env) == YES for c in problem.constraints)


def test_generic_directly_applicable() -> None:
    problem = _paper_problem()
    problem.current = {"m": False, "a": 6, "b": 11}
    result = resolve_generic(problem)
    assert result.directly_applicable and result.fixes == []


# ----------------------------------------------------------------------
# kconfig route


RANGE_MODEL = """
config RING
\tint "ring size"
\tdefault 256

config GATE
\tbool "gate"
\tdepends on RING >= 1024 && RING <= 65536

config FLASH_BASE
\thex "flash base"
\tdefault 0x1000

config MAPPED
\tbool "mapped"
\tdepends on FLASH_BASE >= 0x8000
"""


def test_listing_dependency_chain_fix(listing) -> None:
    cfg = recalculate(listing, {})
    result = resolve_conflict(listing, cfg, [("64BIT", tri_value(YES))])
    assert not result.directly_applicable and not result.timed_out
    assert len(result.fixes) == 1
    fix = result.fixes[0]
    assert fix.diagnosis.variables == frozenset({"X86"})
    assert fix.render() == "[X86 := y, 64BIT := y]"
    assert [e.desired for e in fix.entries] == [False, True]
    applied, report = apply_fix(cfg, fix, listing)
    assert report.resolved and report.fully_applicable
    assert applied.tri("X86") == YES and applied.tri("64BIT") == YES


def test_int_residual_range_fix() -> None:
    model = from_text(RANGE_MODEL)
    cfg = recalculate(model, {})
    result = resolve_conflict(model, cfg, [("GATE", tri_value(YES))])
    assert len(result.fixes) == 1
    fix = result.fixes[0]
    assert fix.diagnosis.variables == frozenset({"RING"})
    assert fix.render() == "[RING: RING >= 1024 && RING <= 65536, GATE := y]"
    ring = fix.entries[0]
    assert ring.constraint is not None
    # the witness stays mechanically applicable and satisfies the range
    assert 1024 <= ring.witness.num <= 65536
    applied, report = apply_fix(cfg, fix, model)
    assert report.resolved and report.fully_applicable
    assert applied.tri("GATE") == YES
    assert 1024 <= applied.effective["RING"].num <= 65536


def test_hex_residual_range_rendering() -> None:
    model = from_text(RANGE_MODEL)
    cfg = recalculate(model, {})
    result = resolve_conflict(model, cfg, [("MAPPED", tri_value(YES))])
    assert len(result.fixes) == 1
    fix = result.fixes[0]
    # hex bounds render in hex notation
    assert fix.render() == (
        "[FLASH_BASE: FLASH_BASE >= 0x8000 && FLASH_BASE <= 0x8001, MAPPED := y]"
    )
    applied, report = apply_fix(cfg, fix, model)
    assert report.resolved
    assert applied.tri("MAPPED") == YES


def test_kconfig_directly_applicable(listing) -> None:
    cfg = recalculate(listing, {})
    result = resolve_conflict(listing, cfg, [("X86", tri_value(YES))])
    assert result.directly_applicable and result.fixes == []


def test_kconfig_node_budget_timeout(listing) -> None:
    cfg = recalculate(listing, {})
    result = resolve_conflict(
        listing, cfg, [("64BIT", tri_value(YES))], Limits(max_nodes=0)
    )
    assert result.timed_out and result.fixes == []


def test_kconfig_rejects_module_value_for_plain_bool(listing) -> None:
    cfg = recalculate(listing, {})
    with pytest.raises(ValueError):
        resolve_conflict(listing, cfg, [("64BIT", tri_value(MOD))])


def test_fix_count_never_exceeds_cap(media) -> None:
    cfg = recalculate(media, {})
    result = resolve_conflict(media, cfg, [("MEDIA_TUNER_SIMPLE", tri_value(YES))])
    assert 1 <= len(result.fixes) <= 3
    for fix in result.fixes:
        applied, report = apply_fix(cfg, fix, media)
        assert report.resolved
        assert applied.tri("MEDIA_TUNER_SIMPLE") == YES

"""Evaluation harness: sampling, conflict generation, classification,
and report accounting."""

from __future__ import annotations

import pytest

from conftest import from_text, load
from kfix.evaluate import recalculate, validate
from kfix.harness import (
    ConflictGenerationError,
    EvalReport,
    FixOutcome,
    SampleParams,
    build_base_config,
    classify_fix,
    eligible_symbols,
    generate_conflict,
    run_evaluation,
    sample_config,
)
from kfix.modelgen import GenParams, random_model
from kfix.rangefix import Conflict, Diagnosis, Fix, FixEntry
from kfix.tristate import NO, YES, tri_value


def test_sample_params_validation() -> None:
    SampleParams(p_no=0.5)
    for bad in (0.0, 1.0, -0.2, 1.5):
        with pytest.raises(ValueError):
            SampleParams(p_no=bad)


@pytest.mark.parametrize("name", ["media", "arch", "modules"])
def test_samples_are_valid_and_total(name: str) -> None:
    model = load(name)
    cfg = sample_config(model, SampleParams(p_no=0.5, seed=3))
    assert validate(model, cfg) == []
    # confirmation promotes every effective value to a user value
    assert set(cfg.user_values) == set(model.symbols)
    assert cfg.user_values == cfg.effective


def test_sampling_is_seed_deterministic() -> None:
    model = load("media")
    a = sample_config(model, SampleParams(p_no=0.5, seed=9))
    b = sample_config(model, SampleParams(p_no=0.5, seed=9))
    assert a.effective == b.effective


def test_no_probability_biases_samples() -> None:
    """Higher p_no leaves markedly more prompted symbols at n."""
    _, model = random_model(5, GenParams(n_symbols=100))
    prompted = [
        name
        for name, sym in model.symbols.items()
        if sym.is_bool_like() and sym.has_prompt()
    ]

    def n_count(p_no: float) -> int:
        total = 0
        for seed in range(30):
            cfg = sample_config(model, SampleParams(p_no=p_no, seed=seed))
            total += sum(1 for name in prompted if cfg.tri(name) == NO)
        return total

    low, high = n_count(0.10), n_count(0.90)
    assert high > low * 1.5


def test_base_config_is_maximal(listing) -> None:
    base = build_base_config(listing)
    assert validate(listing, base) == []
    for name, sym in listing.symbols.items():
        if sym.is_bool_like() and sym.has_prompt():
            assert base.tri(name) == YES


def test_eligibility_on_all_n_listing(listing) -> None:
    # with everything off, only the dependency-gated symbol has a
    # blocked value: prompted symbols can reach y themselves
    cfg = recalculate(listing, {})
    assert eligible_symbols(listing, cfg) == [("64BIT", [YES])]


def test_generate_conflict_targets_witnessed() -> None:
    model = load("media")
    cfg = sample_config(model, SampleParams(p_no=0.8, seed=5))
    base = build_base_config(model)
    conflict = generate_conflict(model, cfg, base, size=3, seed=17)
    assert len(conflict.desired) == 3
    names = [n for n, _ in conflict.desired]
    assert len(set(names)) == 3
    for name, value in conflict.desired:
        assert value != cfg.effective[name]
        assert value == base.effective[name] or value.tri == NO


def test_generate_conflict_size_errors(listing) -> None:
    cfg = recalculate(listing, {})
    base = build_base_config(listing)
    with pytest.raises(ConflictGenerationError):
        generate_conflict(listing, cfg, base, size=0, seed=1)
    with pytest.raises(ConflictGenerationError) as err:
        generate_conflict(listing, cfg, base, size=2, seed=1)
    assert "only 1 eligible" in str(err.value)


CHAIN = """
config A
\tbool "a"

config B
\tbool "b"
\tdepends on A
"""


def _conflict(cfg) -> Conflict:
    return Conflict(desired=(("B", tri_value(YES)),), base_config=cfg)


def _fix(*entries: FixEntry) -> Fix:
    return Fix(entries=entries, diagnosis=Diagnosis(frozenset()))


def test_classify_applicable_resolves() -> None:
    model = from_text(CHAIN)
    cfg = recalculate(model, {})
    fix = _fix(
        FixEntry(symbols=("A",), value=tri_value(YES)),
        FixEntry(symbols=("B",), value=tri_value(YES), desired=True),
    )
    assert classify_fix(model, cfg, _conflict(cfg), fix) == FixOutcome.APPLICABLE_RESOLVES


def test_classify_not_applicable_but_resolves() -> None:
    model = from_text(CHAIN)
    cfg = recalculate(model, {})
    # B gets set while invisible, then A opens the gate
    fix = _fix(
        FixEntry(symbols=("B",), value=tri_value(YES)),
        FixEntry(symbols=("A",), value=tri_value(YES), desired=True),
    )
    assert (
        classify_fix(model, cfg, _conflict(cfg), fix)
        == FixOutcome.NOT_APPLICABLE_BUT_RESOLVES
    )


def test_classify_does_not_resolve() -> None:
    model = from_text(CHAIN)
    cfg = recalculate(model, {})
    fix = _fix(FixEntry(symbols=("B",), value=tri_value(YES), desired=True))
    assert classify_fix(model, cfg, _conflict(cfg), fix) == FixOutcome.DOES_NOT_RESOLVE


# ----------------------------------------------------------------------
# full runs


PLAN_SMALL = tuple((size, k) for size in (1, 2) for k in range(2))


def _small_report() -> EvalReport:
    model = load("media")
    params = [SampleParams(p_no=0.5, seed=1, model_id="media")]
    return run_evaluation(model, params, plan=PLAN_SMALL)


def test_run_evaluation_count_invariants() -> None:
    report = _small_report()
    assert report.conflicts_attempted == len(PLAN_SMALL)
    assert report.conflicts_generated <= report.conflicts_attempted
    assert report.conflicts_with_fix <= report.conflicts_generated
    assert report.conflicts_resolved <= report.conflicts_with_fix
    if report.total_fixes:
        assert abs(sum(report.outcome_percentages().values()) - 100.0) < 0.1
    hist = report.fix_size_histogram()
    assert sum(hist.values()) == report.total_fixes


def test_run_evaluation_csv_schema() -> None:
    report = _small_report()
    rows = report.csv_rows()
    assert rows[0] == (
        "model_id,sample_seed,p_no,conflict_id,conflict_size,"
        "fix_index,fix_size,outcome,resolved,timed_out"
    )
    expected = 1 + sum(max(len(r.fix_sizes), 1) for r in report.results)
    assert len(rows) == expected
    for row in rows[1:]:
        fields = row.split(",")
        assert len(fields) == 10
        assert fields[0] == "media"
        assert fields[8] in ("true", "false")
        assert fields[9] in ("true", "false")


def test_run_evaluation_is_reproducible() -> None:
    assert _small_report().csv_rows() == _small_report().csv_rows()


def test_report_table_mentions_every_outcome() -> None:
    table = _small_report().format_table()
    assert "conflicts generated" in table
    assert "applicable + resolves" in table
    assert "does not resolve" in table

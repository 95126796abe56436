"""Residual-constraint simplification: substitution, folding, bound
merging and independent grouping."""

from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from kfix.kconfig.ast import (
    And,
    Compare,
    ConstString,
    ConstTristate,
    Expr,
    Not,
    Or,
    SymbolRef,
    TRI_M,
    TRI_N,
    TRI_Y,
    make_and,
)
from kfix.residual import (
    Interval,
    ResidualUnsatisfiable,
    conjuncts,
    fold,
    group_conjuncts,
    interval_exprs,
    merge_bounds,
    normalize_comparison,
    simplify_group,
    simplify_residual,
    substitute,
)
from kfix.tristate import MOD, NO, YES


def ref(name: str) -> SymbolRef:
    return SymbolRef(name)


def num(n: int) -> ConstString:
    return ConstString(str(n))


def cmp_(op: str, lhs: Expr, rhs: Expr) -> Compare:
    return Compare(op, lhs, rhs)


def test_substitute_replaces_only_mapped_refs() -> None:
    e = And((ref("A"), Or((Not(ref("B")), ref("C")))))
    out = substitute(e, {"A": TRI_Y, "B": TRI_N})
    assert out == And((TRI_Y, Or((Not(TRI_N), ref("C")))))


def test_substitute_reaches_compare_sides() -> None:
    e = cmp_("=", ref("X"), ref("Y"))
    out = substitute(e, {"Y": ConstString("512")})
    assert out == cmp_("=", ref("X"), ConstString("512"))


def test_fold_numeric_comparisons() -> None:
    assert fold(cmp_("<", num(3), num(5))) == TRI_Y
    assert fold(cmp_(">=", num(3), num(5))) == TRI_N
    # hex and decimal literals compare numerically
    assert fold(cmp_("=", ConstString("0x10"), num(16))) == TRI_Y


def test_fold_string_equality() -> None:
    a, b = ConstString("abc"), ConstString("abd")
    assert fold(cmp_("=", a, a)) == TRI_Y
    assert fold(cmp_("!=", a, b)) == TRI_Y
    assert fold(cmp_("=", a, b)) == TRI_N


def test_fold_tristate_comparisons() -> None:
    assert fold(cmp_("=", TRI_M, TRI_M)) == TRI_Y
    assert fold(cmp_("<", TRI_N, TRI_Y)) == TRI_Y
    assert fold(cmp_(">", TRI_N, TRI_M)) == TRI_N


def test_fold_short_circuits() -> None:
    assert fold(And((TRI_N, ref("A")))) == TRI_N
    assert fold(Or((TRI_Y, ref("A")))) == TRI_Y
    # neutral elements drop out entirely
    assert fold(And((TRI_Y, ref("A")))) == ref("A")
    assert fold(Or((TRI_N, ref("A")))) == ref("A")


def test_fold_negation() -> None:
    assert fold(Not(TRI_Y)) == TRI_N
    assert fold(Not(TRI_N)) == TRI_Y
    assert fold(Not(ConstTristate(MOD))) == ConstTristate(MOD)
    assert fold(Not(Not(ref("A")))) == ref("A")


def test_fold_normalizes_constant_on_left() -> None:
    out = fold(cmp_("<", num(5), ref("X")))
    assert out == cmp_(">", ref("X"), num(5))
    out = fold(cmp_(">=", num(8), ref("X")))
    assert out == cmp_("<=", ref("X"), num(8))


def test_normalize_leaves_symbol_vs_symbol_alone() -> None:
    e = cmp_("<", ref("X"), ref("Y"))
    assert normalize_comparison(e) == e


def test_conjuncts_flatten_and_drop_y() -> None:
    e = And((ref("A"), And((ref("B"), TRI_Y, ref("C")))))
    assert conjuncts(e) == [ref("A"), ref("B"), ref("C")]
    assert conjuncts(TRI_Y) == []


def test_simplify_residual_forces_units() -> None:
    forced, rest = simplify_residual([ref("A"), Not(ref("B"))])
    assert forced == {"A": True, "B": False}
    assert rest == []


def test_simplify_residual_cascades() -> None:
    # A together with (!A || B) forces B as well
    forced, rest = simplify_residual([ref("A"), Or((Not(ref("A")), ref("B")))])
    assert forced == {"A": True, "B": True}
    assert rest == []


def test_simplify_residual_contradiction() -> None:
    with pytest.raises(ResidualUnsatisfiable):
        simplify_residual([ref("A"), Not(ref("A"))])
    with pytest.raises(ResidualUnsatisfiable):
        simplify_residual([TRI_N])


def test_simplify_residual_keeps_comparisons() -> None:
    atom = cmp_(">=", ref("X"), num(4))
    forced, rest = simplify_residual([ref("A"), atom])
    assert forced == {"A": True}
    assert rest == [atom]


def test_merge_bounds_takes_tightest() -> None:
    interval, rest = merge_bounds(
        [
            cmp_(">=", ref("X"), num(1)),
            cmp_(">", ref("X"), num(10)),
            cmp_("<=", ref("X"), num(100)),
            cmp_("<", ref("X"), num(50)),
        ]
    )
    assert rest == []
    assert interval == Interval(low=10, low_strict=True, high=50, high_strict=True)


def test_merge_bounds_strictness_tiebreak() -> None:
    # at an equal bound the strict form is the tighter one
    interval, _ = merge_bounds(
        [cmp_(">=", ref("X"), num(5)), cmp_(">", ref("X"), num(5))]
    )
    assert interval.low == 5 and interval.low_strict
    interval, _ = merge_bounds(
        [cmp_(">", ref("X"), num(5)), cmp_(">=", ref("X"), num(5))]
    )
    assert interval.low == 5 and interval.low_strict


def test_merge_bounds_passes_equality_through() -> None:
    eq = cmp_("=", ref("X"), num(7))
    ne = cmp_("!=", ref("X"), num(9))
    interval, rest = merge_bounds([eq, cmp_("<=", ref("X"), num(9)), ne])
    assert rest == [eq, ne]
    assert interval.high == 9 and not interval.high_strict


def test_merge_bounds_empty_range_raises() -> None:
    with pytest.raises(ResidualUnsatisfiable):
        merge_bounds([cmp_(">", ref("X"), num(5)), cmp_("<", ref("X"), num(6))])


def test_interval_exprs_render_both_ends() -> None:
    out = interval_exprs("X", Interval(low=2, high=8, high_strict=True))
    assert out == [cmp_(">=", ref("X"), num(2)), cmp_("<", ref("X"), num(8))]
    assert interval_exprs("X", Interval()) == []


_BOUND_OPS = ("<", "<=", ">", ">=")


@given(
    st.lists(
        st.tuples(st.sampled_from(_BOUND_OPS), st.integers(-20, 20)),
        min_size=1,
        max_size=6,
    )
)
def test_merge_bounds_matches_brute_force(atoms: list[tuple[str, int]]) -> None:
    """The merged interval admits exactly the integers every atom admits."""
    from kfix.residual import _OPS

    cmps = [cmp_(op, ref("X"), num(b)) for op, b in atoms]
    bounds = [b for _, b in atoms]
    lo, hi = min(bounds) - 2, max(bounds) + 2
    allowed = {
        v for v in range(lo, hi + 1) if all(_OPS[op](v, b) for op, b in atoms)
    }
    try:
        interval, rest = merge_bounds(cmps)
    except ResidualUnsatisfiable:
        assert allowed == set()
        return
    assert rest == []

    def inside(v: int) -> bool:
        if interval.low is not None:
            if interval.low_strict and v <= interval.low:
                return False
            if not interval.low_strict and v < interval.low:
                return False
        if interval.high is not None:
            if interval.high_strict and v >= interval.high:
                return False
            if not interval.high_strict and v > interval.high:
                return False
        return True

    assert {v for v in range(lo, hi + 1) if inside(v)} == allowed


def test_group_conjuncts_splits_independent_vars() -> None:
    parts = [
        cmp_(">=", ref("X"), num(1)),
        ref("A"),
        cmp_("<=", ref("X"), num(9)),
    ]
    groups = group_conjuncts(parts)
    assert [names for names, _ in groups] == [("X",), ("A",)]
    assert groups[0][1] == [parts[0], parts[2]]
    assert groups[1][1] == [parts[1]]


def test_group_conjuncts_unions_shared_vars() -> None:
    parts = [
        cmp_("=", ref("X"), ref("Y")),
        cmp_(">=", ref("Y"), num(4)),
        ref("B"),
    ]
    groups = group_conjuncts(parts)
    assert len(groups) == 2
    assert set(groups[0][0]) == {"X", "Y"}
    assert groups[0][1] == parts[:2]


def test_simplify_group_collapses_single_var_bounds() -> None:
    parts = [
        cmp_(">=", ref("X"), num(1024)),
        cmp_("<=", ref("X"), num(4096)),
        cmp_(">", ref("X"), num(2048)),
    ]
    names, merged = simplify_group(("X",), parts)
    assert names == ("X",)
    assert merged == make_and(
        cmp_(">", ref("X"), num(2048)), cmp_("<=", ref("X"), num(4096))
    )


def test_simplify_group_leaves_mixed_groups() -> None:
    parts = [cmp_("=", ref("X"), ref("Y")), cmp_(">=", ref("Y"), num(4))]
    names, merged = simplify_group(("X", "Y"), parts)
    assert names == ("X", "Y")
    assert merged == make_and(*parts)


def test_stage_pipeline_shape() -> None:
    """Substituting untouched symbols, folding and grouping yields one
    per-variable entry with a merged range."""
    constraint = And(
        (
            ref("GATE"),
            cmp_(">=", ref("RING"), num(256)),
            cmp_("<=", ref("RING"), num(65536)),
            cmp_(">=", ref("RING"), num(1024)),
        )
    )
    # GATE stays fixed at y in the current config, RING may change
    residual = substitute(constraint, {"GATE": TRI_Y})
    forced, parts = simplify_residual([residual])
    assert forced == {}
    groups = [simplify_group(n, p) for n, p in group_conjuncts(parts)]
    assert len(groups) == 1
    names, merged = groups[0]
    assert names == ("RING",)
    assert merged == make_and(
        cmp_(">=", ref("RING"), num(1024)), cmp_("<=", ref("RING"), num(65536))
    )

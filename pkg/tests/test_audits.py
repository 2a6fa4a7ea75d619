from __future__ import annotations

from fractions import Fraction

import pytest

from pathcover.audits import (
    BRANCH_SCALE,
    RATIO,
    ClassEntry,
    census_class_label,
    class_bound_violations,
    matching_bound_ok,
    noncritical_ratio_ok,
    output_branch,
    ratio_ok,
    recursion_bound_ok,
)


def test_ratio_constant_is_the_root_of_the_quadratic() -> None:
    r = RATIO.approx

    assert r == pytest.approx(1.8736, abs=1e-4)
    assert 10 * r * r - 15 * r - 7 == pytest.approx(0.0, abs=1e-9)


@pytest.mark.parametrize(
    ("opt", "alg", "expected"),
    [
        (0, 0, True),
        (4, 0, False),
        (15, 8, False),
        (14, 8, True),
        (7, 4, True),
        (17, 9, False),
        (1873, 1000, True),
        (1874, 1000, False),
    ],
)
def test_ratio_ok_uses_exact_arithmetic(opt: int, alg: int, expected: bool) -> None:
    assert ratio_ok(opt, alg) is expected


def test_output_branch_threshold() -> None:
    # (5/7) r ~ 1.3383
    assert output_branch(0, 0)
    assert output_branch(3, 0)
    assert not output_branch(1, 1)
    assert output_branch(2, 1)
    assert not output_branch(4, 3)
    assert output_branch(27, 20)
    assert not output_branch(26, 20)
    assert RATIO.greater_than_scaled(2, 1, Fraction(1))
    assert BRANCH_SCALE == Fraction(5, 7)


def test_analysis_bounds() -> None:
    assert matching_bound_ok(4, 5)
    assert not matching_bound_ok(3, 5)
    assert recursion_bound_ok(20, 6, 2)
    assert not recursion_bound_ok(21, 6, 2)
    assert noncritical_ratio_ok(0, 0)
    assert noncritical_ratio_ok(6, 4)
    assert not noncritical_ratio_ok(7, 4)


def test_census_class_bounds() -> None:
    assert census_class_label(1, True) == "1c"
    assert census_class_label(2, False) == "2"
    assert census_class_label(3, True) == "3"

    ok = [
        ClassEntry(0, 0, False, 4, 5),
        ClassEntry(1, 1, True, 8, 6),
        ClassEntry(2, 2, True, 14, 11),
        ClassEntry(3, 1, False, 6, 6),
    ]
    assert class_bound_violations(ok) == []

    bad = class_bound_violations([ClassEntry(7, 0, False, 8, 6), ClassEntry(8, 1, True, 10, 6)])
    assert len(bad) == 2
    assert bad[0].startswith("component 7 in class 0")
    assert "class 1c" in bad[1]


def test_improved_components_use_the_critical_ratio() -> None:
    rescued = [ClassEntry(0, 2, False, 8, 7, downgraded=True), ClassEntry(1, 2, False, 8, 8, True)]
    assert class_bound_violations(rescued) == []

    worse = class_bound_violations([ClassEntry(4, 2, False, 9, 7, downgraded=True)])
    assert worse == ["component 4 in class 2 (improved) has s/opt = 9/7 >= 14/11"]


def test_two_responsible_anchors_cap_is_a_ratio() -> None:
    assert class_bound_violations([ClassEntry(0, 2, False, 7, 7)]) == []
    assert class_bound_violations([ClassEntry(1, 2, False, 3, 4)]) == []
    assert class_bound_violations([ClassEntry(2, 2, False, 8, 7)]) == [
        "component 2 in class 2 has s/opt = 8/7"
    ]

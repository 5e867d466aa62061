from __future__ import annotations

import random
from decimal import Decimal
from fractions import Fraction

import pytest

from reqdsl import ComparisonOp, Constraint, FindingKind, check_consistency


def c(op, value, source, variable="x", unit="m"):
    return Constraint(
        variable=variable,
        op=op,
        value=Decimal(value),
        unit=unit,
        source_requirement=source,
    )


def grid_feasible(constraints):
    """Brute-force oracle: scan integers and half-integers over [-0.5, 100.5]."""

    def satisfied(point, constraint):
        value = Fraction(constraint.value)
        if constraint.op is ComparisonOp.LESS:
            return point < value
        if constraint.op is ComparisonOp.LESS_OR_EQUAL:
            return point <= value
        if constraint.op is ComparisonOp.GREATER:
            return point > value
        if constraint.op is ComparisonOp.GREATER_OR_EQUAL:
            return point >= value
        return point == value

    points = [Fraction(k, 2) for k in range(-1, 202)]
    return any(all(satisfied(p, con) for con in constraints) for p in points)


class TestExamples:
    def test_disjoint_half_lines_contradict(self):
        findings = check_consistency([c(ComparisonOp.LESS_OR_EQUAL, 300, "R1"), c(ComparisonOp.GREATER_OR_EQUAL, 400, "R2")])
        assert [f.kind for f in findings] == [FindingKind.CONTRADICTION]

    def test_point_inside_half_line_links(self):
        findings = check_consistency([c(ComparisonOp.GREATER_OR_EQUAL, 5, "R1"), c(ComparisonOp.EQUAL, 10, "R2")])
        assert [f.kind for f in findings] == [FindingKind.LINK]

    def test_singleton_group_is_silent(self):
        assert check_consistency([c(ComparisonOp.LESS_OR_EQUAL, 300, "R1")]) == []

    def test_same_requirement_is_silent(self):
        findings = check_consistency([c(ComparisonOp.LESS, 1, "R1"), c(ComparisonOp.GREATER, 2, "R1")])
        assert findings == []

    def test_strict_boundary_contradicts(self):
        findings = check_consistency([c(ComparisonOp.GREATER, 5, "R1"), c(ComparisonOp.LESS_OR_EQUAL, 5, "R2")])
        assert [f.kind for f in findings] == [FindingKind.CONTRADICTION]

    def test_shared_closed_boundary_links(self):
        findings = check_consistency([c(ComparisonOp.GREATER_OR_EQUAL, 5, "R1"), c(ComparisonOp.LESS_OR_EQUAL, 5, "R2")])
        assert [f.kind for f in findings] == [FindingKind.LINK]

    def test_unit_mismatch_is_not_compared(self):
        findings = check_consistency(
            [c(ComparisonOp.LESS, 10, "R1", unit="m"), c(ComparisonOp.GREATER, 99, "R2", unit="km/h")]
        )
        assert [f.kind for f in findings] == [FindingKind.UNIT_MISMATCH]

    def test_distinct_symbols_contradict(self):
        findings = check_consistency(
            [
                Constraint("illuminant", ComparisonOp.EQUAL, "LED", source_requirement="R1"),
                Constraint("illuminant", ComparisonOp.EQUAL, "Halogen", source_requirement="R2"),
            ]
        )
        assert [f.kind for f in findings] == [FindingKind.CONTRADICTION]

    def test_same_symbol_links(self):
        findings = check_consistency(
            [
                Constraint("illuminant", ComparisonOp.EQUAL, "LED", source_requirement="R1"),
                Constraint("illuminant", ComparisonOp.EQUAL, "LED", source_requirement="R2"),
            ]
        )
        assert [f.kind for f in findings] == [FindingKind.LINK]

    def test_variables_group_independently(self):
        findings = check_consistency(
            [
                c(ComparisonOp.LESS, 10, "R1", variable="a"),
                c(ComparisonOp.GREATER, 20, "R2", variable="b"),
            ]
        )
        assert findings == []


@pytest.mark.parametrize("seed", [7, 2024])
def test_randomized_groups_match_grid_oracle(seed):
    """1,000 random groups per seed; verdict must equal the brute-force scan."""
    rng = random.Random(seed)
    ops = list(ComparisonOp)
    for _ in range(1000):
        size = rng.randint(2, 6)
        group = [
            c(rng.choice(ops), rng.randint(0, 100), f"R{i}")
            for i in range(size)
        ]
        findings = check_consistency(group)
        assert len(findings) == 1
        expected = FindingKind.LINK if grid_feasible(group) else FindingKind.CONTRADICTION
        assert findings[0].kind is expected, [
            (con.op, con.value) for con in group
        ]

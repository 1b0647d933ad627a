import pytest

from oracle import oracle_spearman
from fundmatch.analytics import (
    DistributionStats,
    distribution,
    overlap_matrix,
    spearman,
    summary,
)
from fundmatch.errors import ValidationError
from fundmatch.ranking import Assignment


def asg(indicator, researcher, call, pct=97.0):
    return Assignment(researcher_id=researcher, indicator_name=indicator, call_id=call, percentile=pct)


class TestSummary:
    def test_combined_counts_unique_pairs(self):
        # one researcher, 3 calls under each of 2 indicators, overlapping on 1 call
        assignments = [
            asg("A", "R1", "C1"), asg("A", "R1", "C2"), asg("A", "R1", "C3"),
            asg("B", "R1", "C3"), asg("B", "R1", "C4"), asg("B", "R1", "C5"),
        ]
        rows = summary(assignments, ["A", "B"])
        combined = rows[-1]
        assert combined.indicator_name == "combined"
        assert combined.researchers_assigned == 1
        assert combined.avg_calls_per_researcher == pytest.approx(5.0)

    def test_empty_assignments_zero_counts(self):
        rows = summary([], ["A", "B"])
        assert all(r.researchers_assigned == 0 for r in rows)
        assert all(r.avg_calls_per_researcher == 0.0 for r in rows)

    def test_identical_assignment_sets_have_no_exclusives(self):
        pairs = [("R1", "C1"), ("R2", "C1"), ("R1", "C2")]
        assignments = [asg(ind, r, c) for ind in ("A", "B", "C", "D") for r, c in pairs]
        rows = summary(assignments, ["A", "B", "C", "D"])
        assert all(r.unique_researchers == 0 for r in rows[:-1])
        assert rows[-1].unique_researchers is None

    def test_exclusive_researcher_counted(self):
        assignments = [asg("A", "R1", "C1"), asg("A", "R2", "C1"), asg("B", "R2", "C2")]
        rows = {r.indicator_name: r for r in summary(assignments, ["A", "B"])}
        assert rows["A"].unique_researchers == 1  # R1 appears only under A
        assert rows["B"].unique_researchers == 0

    def test_unique_never_exceeds_assigned(self):
        assignments = [asg("A", f"R{i}", "C1") for i in range(5)] + [asg("B", "R0", "C1")]
        for row in summary(assignments, ["A", "B"]):
            if row.unique_researchers is not None:
                assert row.unique_researchers <= row.researchers_assigned


class TestOverlap:
    def test_identical_sets_full_overlap_both_ways(self):
        pairs = [("R1", "C1"), ("R2", "C2")]
        assignments = [asg(i, r, c) for i in ("A", "B") for r, c in pairs]
        cells = {(c.row_indicator, c.col_indicator): c for c in overlap_matrix(assignments, ["A", "B"])}
        assert cells[("A", "B")].overlap_pct == 100.0
        assert cells[("B", "A")].overlap_pct == 100.0

    def test_asymmetric_hand_example(self):
        a_pairs = [("r1", "c1"), ("r1", "c2"), ("r2", "c1"), ("r2", "c2")]
        b_pairs = [("r1", "c1"), ("r2", "c1")]
        assignments = [asg("A", r, c) for r, c in a_pairs] + [asg("B", r, c) for r, c in b_pairs]
        cells = {(c.row_indicator, c.col_indicator): c for c in overlap_matrix(assignments, ["A", "B"])}
        assert cells[("A", "B")].overlap_pct == pytest.approx(50.0)
        assert cells[("B", "A")].overlap_pct == pytest.approx(100.0)

    def test_disjoint_sets_zero_and_undefined_rho(self):
        assignments = [asg("A", "R1", "C1"), asg("B", "R2", "C2")]
        cells = {(c.row_indicator, c.col_indicator): c for c in overlap_matrix(assignments, ["A", "B"])}
        assert cells[("A", "B")].overlap_pct == 0.0
        assert cells[("A", "B")].spearman_rho is None

    def test_diagonal_absent_and_grid_size(self):
        names = ["A", "B", "C", "D"]
        assignments = [asg(i, "R1", "C1") for i in names]
        cells = overlap_matrix(assignments, names)
        assert len(cells) == 12
        assert all(c.row_indicator != c.col_indicator for c in cells)

    def test_cross_identity_on_every_pair(self):
        import random

        rng = random.Random(4)
        names = ["A", "B", "C", "D"]
        assignments = []
        for ind in names:
            for r in range(12):
                for c in range(6):
                    if rng.random() < 0.4:
                        assignments.append(asg(ind, f"R{r}", f"C{c}", pct=95 + rng.random() * 5))
        pair_sets = {}
        for a in assignments:
            pair_sets.setdefault(a.indicator_name, set()).add((a.researcher_id, a.call_id))
        cells = {(c.row_indicator, c.col_indicator): c for c in overlap_matrix(assignments, names)}
        for row in names:
            for col in names:
                if row == col:
                    continue
                lhs = cells[(row, col)].overlap_pct * len(pair_sets.get(row, set()))
                rhs = cells[(col, row)].overlap_pct * len(pair_sets.get(col, set()))
                shared = len(pair_sets.get(row, set()) & pair_sets.get(col, set()))
                assert lhs == pytest.approx(rhs)
                assert lhs == pytest.approx(100.0 * shared)

    def test_rho_over_intersection_percentiles(self):
        assignments = [
            asg("A", "R1", "C1", 99.0), asg("A", "R2", "C1", 98.0), asg("A", "R3", "C1", 97.0),
            asg("B", "R1", "C1", 95.0), asg("B", "R2", "C1", 96.5), asg("B", "R3", "C1", 96.0),
        ]
        cells = {(c.row_indicator, c.col_indicator): c for c in overlap_matrix(assignments, ["A", "B"])}
        want = oracle_spearman([99.0, 98.0, 97.0], [95.0, 96.5, 96.0])
        assert cells[("A", "B")].spearman_rho == pytest.approx(want)


class TestSpearman:
    def test_identity(self):
        assert spearman([1, 2, 3], [1, 2, 3]) == pytest.approx(1.0)

    def test_reversal(self):
        assert spearman([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0)

    def test_hand_value_point_eight(self):
        assert spearman([1, 2, 3, 4], [1, 3, 2, 4]) == pytest.approx(0.8)

    def test_length_mismatch(self):
        with pytest.raises(ValidationError):
            spearman([1, 2], [1, 2, 3])

    def test_zero_variance_undefined(self):
        assert spearman([1, 1, 1], [1, 2, 3]) is None

    def test_tie_handling_average_ranks(self):
        got = spearman([1, 2, 2, 3], [1, 2, 3, 4])
        want = oracle_spearman([1, 2, 2, 3], [1, 2, 3, 4])
        assert got == pytest.approx(want)

    def test_invariant_under_increasing_transform(self):
        x = [0.3, 1.9, 0.7, 2.2, 1.1]
        y = [5.0, 2.0, 4.0, 1.0, 3.0]
        base = spearman(x, y)
        assert spearman([v**3 + 2 for v in x], y) == pytest.approx(base)


class TestDistribution:
    def test_single_count(self):
        stats = distribution([asg("A", "R1", f"C{i}") for i in range(13)], "A")
        assert stats.median == 13.0

    def test_interpolated_quartiles(self):
        assignments = []
        for rid, n in (("R1", 10), ("R2", 13), ("R3", 20)):
            assignments.extend(asg("A", rid, f"C{i}") for i in range(n))
        stats = distribution(assignments, "A")
        assert stats.median == pytest.approx(13.0)
        assert stats.q1 == pytest.approx(11.5)
        assert stats.q3 == pytest.approx(16.5)
        assert stats.q1 <= stats.median <= stats.q3

    def test_empty(self):
        stats = distribution([], "A")
        assert stats == DistributionStats("A", None, None, None, [])

    def test_histogram_unit_buckets(self):
        assignments = [
            asg("A", "R1", "C1"), asg("A", "R2", "C1"), asg("A", "R2", "C2"),
            asg("A", "R3", "C1"), asg("A", "R3", "C2"),
        ]
        stats = distribution(assignments, "A")
        assert stats.histogram == [(1, 1), (2, 2)]


def test_sum_of_unique_below_total_distinct_assigned():
    import random

    rng = random.Random(8)
    names = ["A", "B", "C", "D"]
    assignments = []
    for ind in names:
        for r in range(30):
            if rng.random() < 0.5:
                assignments.append(asg(ind, f"R{r}", "C1"))
    rows = summary(assignments, names)
    total_distinct = rows[-1].researchers_assigned
    unique_sum = sum(r.unique_researchers for r in rows[:-1])
    assert unique_sum <= total_distinct

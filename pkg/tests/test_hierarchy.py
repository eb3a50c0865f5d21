from itertools import pairwise

import pytest

from magicrom.enumerator import ReducedEnumerator
from magicrom.hierarchy import (
    Partition,
    _rank,
    approx_robustness,
    approx_vertices,
    in_affine_span,
    level_robustness,
    level_vertices,
    partitions_bounded,
    special_pair_vertices,
)
from magicrom.l1 import solve_l1
from magicrom.pauli import Graph
from magicrom.polytope import Connected, LabeledVector, Product, ProjectedPolytope


def coords(vectors):
    return {v.coords.coeffs for v in vectors}


class TestPartitions:
    def test_examples(self):
        assert [p.parts for p in partitions_bounded(4, 2)] == [(2, 2), (2, 1, 1), (1, 1, 1, 1)]
        assert [str(p) for p in partitions_bounded(3, 3)] == ["3", "2+1", "1+1+1"]
        assert [p.parts for p in partitions_bounded(5, 1)] == [(1, 1, 1, 1, 1)]

    def test_count_two_parts(self):
        for n in range(2, 15):
            assert len(partitions_bounded(n, 2)) == n // 2 + 1

    def test_bad_bounds(self):
        with pytest.raises(ValueError):
            partitions_bounded(3, 4)
        with pytest.raises(ValueError):
            partitions_bounded(3, 0)

    def test_validation(self):
        with pytest.raises(ValueError):
            Partition((1, 2))
        with pytest.raises(ValueError):
            Partition((2, 0))
        assert Partition((3, 1)).n == 4


class TestPairs:
    def test_H(self):
        assert [v.coeffs for v in special_pair_vertices("H")] == [(1, 0, 2), (1, 0, -2)]

    def test_T(self):
        plus, minus = special_pair_vertices("T")
        assert plus.coeffs == (1, 0, 3)
        assert minus.coeffs == (1, 0, -3)

    def test_pairs_are_connected_vertices(self, levels):
        for mode in "HT":
            V = {v.coords.coeffs for v in levels(mode, 2)[2].connected_vertices()}
            assert {v.coeffs for v in special_pair_vertices(mode)} <= V


class TestBellVertices:
    def test_H2(self):
        assert coords(approx_vertices("H", 2)) == {(1, 2, 1), (1, -2, 1), (1, 0, 2), (1, 0, -2)}

    def test_T2(self):
        assert coords(approx_vertices("T", 2)) == {(1, 2, 1), (1, -2, 1), (1, 0, 3), (1, 0, -3)}

    def test_H3(self):
        expected = {(1, 1, 2, 2), (1, -1, 2, -2), (1, 1, -2, -2), (1, -1, -2, 2), (1, 3, 3, 1), (1, -3, 3, -1)}
        assert coords(approx_vertices("H", 3)) == expected

    def test_count_bound_and_order(self):
        for mode in "HT":
            for n in range(1, 30):
                V = approx_vertices(mode, n)
                m = n // 2
                assert len(V) <= (m + 1) * (m + 2)
                assert [v.coords.coeffs for v in V] == sorted(v.coords.coeffs for v in V)

    def test_inside_level_two(self, levels):
        for mode in "HT":
            L = levels(mode, 2)
            for n in range(2, 7):
                assert coords(approx_vertices(mode, n)) <= coords(level_vertices(mode, n, 2, L))

    def test_bad_n(self):
        with pytest.raises(ValueError):
            approx_vertices("H", 0)


class TestBellRobustness:
    def test_examples(self):
        assert approx_robustness("H", 5).value == pytest.approx(3.68930, abs=1e-4)
        assert approx_robustness("T", 4).value == pytest.approx(4.33316, abs=1e-4)

    def test_method_label(self):
        assert approx_robustness("H", 3).method == "bell"

    def test_still_feasible_past_frontier(self):
        # the reference reports infeasibility from n = 27; exact rank arithmetic says otherwise
        assert approx_robustness("H", 27).feasible
        assert in_affine_span(approx_vertices("H", 27), "H", 27)

    def test_exact_for_small_n(self, levels):
        L = levels("H", 4)
        for n in range(1, 5):
            assert approx_robustness("H", n).value == pytest.approx(solve_l1(L[n]).value, abs=1e-9)

    def test_upper_bound(self, levels):
        for mode in "HT":
            L = levels(mode, 5)
            for n in range(1, 6):
                assert approx_robustness(mode, n).value >= solve_l1(L[n]).value - 1e-9


class TestLevels:
    def test_k_equals_n(self, levels):
        L = levels("T", 4)
        assert level_robustness("T", 4, 4, L).value == pytest.approx(solve_l1(L[4]).value, abs=1e-9)

    def test_H4_k2(self, levels):
        assert level_robustness("H", 4, 2, levels("H", 2)).value == pytest.approx(2.86274, abs=1e-4)

    def test_H6_k3(self, levels):
        L = levels("H", 3)
        r3 = level_robustness("H", 6, 3, L).value
        assert 4.73894 - 1e-4 <= r3 <= level_robustness("H", 6, 2, L).value + 1e-9

    def test_monotone(self, levels):
        for mode in "HT":
            L = levels(mode, 5)
            for n in range(2, 6):
                r = [level_robustness(mode, n, k, L) for k in range(1, n + 1)]
                vals = [d.value for d in r if d.feasible]
                assert all(b <= a + 1e-9 for a, b in pairwise(vals))

    def test_level_one_is_product_states(self, levels):
        L = levels("H", 1)
        assert coords(level_vertices("H", 2, 1, L)) == {(1, 2, 1), (1, 0, -1), (1, -2, 1)}

    def test_infeasible_is_data(self):
        plus = LabeledVector(ReducedEnumerator(1, "H", (1, 1)), Connected(Graph(1, frozenset()), None))
        only_plus = ProjectedPolytope(1, "H", [plus])
        d = level_robustness("H", 2, 1, {1: only_plus})
        assert d.feasible is False and d.terms == [] and d.certificate is not None

    def test_bad_k(self, levels):
        with pytest.raises(ValueError):
            level_vertices("H", 3, 4, levels("H", 3))


class TestAffineSpan:
    def test_rank(self):
        assert _rank([[1, 2], [2, 4]]) == 1
        assert _rank([[1, 0, 0], [0, 1, 0], [1, 1, 0]]) == 2
        assert _rank([[0, 0]]) == 0

    def test_small_cases(self):
        def lv(*c):
            return LabeledVector(ReducedEnumerator(len(c) - 1, "H", c), Product(()))

        # the sqrt(2) part of (1, sqrt2, ...) needs coordinate 1 to vary
        assert not in_affine_span([lv(1, 0)], "H", 1)
        assert in_affine_span([lv(1, 1), lv(1, -1)], "H", 1)
        assert not in_affine_span([lv(1, 2, 0), lv(1, -2, 0)], "H", 2)

    def test_bell_level_spans(self):
        assert in_affine_span(approx_vertices("H", 10), "H", 10)
        assert in_affine_span(approx_vertices("T", 10), "T", 10)

import itertools
import json

import numpy as np
import pytest

from magicrom.enumerator import ReducedEnumerator, project
from magicrom.graphs import CatalogError, enumerate_representatives
from magicrom.pauli import LocalOpAssignment, apply_local_assignment, graph_state_group
from magicrom.polytope import (
    CACHE_VERSION,
    CacheError,
    Connected,
    LabeledVector,
    Product,
    ProjectedPolytope,
    build_levels,
    build_polytope,
    cache_path,
    connected_projections,
    extremal_filter,
    filter_polytope,
    label_from_json,
    load_polytope,
    membership_lp,
    naive_extremal_filter,
    partitions,
    product_projections,
    recompute,
    save_polytope,
    verify_polytope,
    walsh_hadamard,
)


def coords(vectors):
    return {v.coords.coeffs for v in vectors}


class TestConnected:
    def test_one_qubit_H(self):
        assert coords(connected_projections(1, "H")) == {(1, 1), (1, -1), (1, 0)}

    def test_two_qubit_H(self):
        assert coords(connected_projections(2, "H")) == {(1, 0, 2), (1, 0, 1), (1, 0, 0), (1, 0, -1), (1, 0, -2)}

    def test_one_qubit_T(self):
        assert coords(connected_projections(1, "T")) == {(1, 1), (1, -1)}

    @pytest.mark.parametrize("mode", "HT")
    def test_labels_recompute(self, mode):
        for v in connected_projections(4, mode):
            assert recompute(v.label, mode) == v.coords

    def test_bulk_matches_per_state(self):
        """Sign bits via the Walsh-Hadamard transform agree with explicit group enumeration."""
        for G in enumerate_representatives(3):
            seen = set()
            for ops in itertools.product(("I", "H", "HS"), repeat=3):
                for signs in itertools.product((0, 1), repeat=3):
                    S = apply_local_assignment(graph_state_group(G), LocalOpAssignment("H", ops, signs))
                    seen.add(project(S, "H").coeffs)
            bulk = {v.coords.coeffs for v in connected_projections(3, "H", catalog=None) if v.label.graph == G}
            assert bulk <= seen

    def test_walsh_hadamard(self):
        f = np.array([1, 0, 0, 0])
        np.testing.assert_array_equal(walsh_hadamard(f), [1, 1, 1, 1])
        g = np.array([0, 1, 0, 0])
        np.testing.assert_array_equal(walsh_hadamard(g), [1, -1, 1, -1])

    def test_catalog_gap(self, tmp_path):
        path = tmp_path / "c.txt"
        path.write_text("n=3; edges=[(0,1),(1,2)]\n")
        with pytest.raises(CatalogError):
            connected_projections(10, "H", catalog=path)


class TestProducts:
    def test_partitions(self):
        assert partitions(4) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
        assert partitions(4, max_part=3, min_parts=2) == [(3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]

    def test_two_qubit_H(self, levels):
        L = levels("H", 1)
        assert coords(product_projections(2, "H", L)) == {(1, 2, 1), (1, 0, -1), (1, -2, 1)}

    def test_two_qubit_T(self, levels):
        assert len(product_projections(2, "T", levels("T", 1))) == 3

    def test_three_qubit_H(self, levels):
        assert len(product_projections(3, "H", levels("H", 2))) == 8

    def test_labels_recompute(self, levels):
        L = levels("H", 3)
        for v in product_projections(4, "H", L):
            assert recompute(v.label, "H", L) == v.coords

    def test_missing_lower_level(self):
        with pytest.raises(KeyError):
            product_projections(3, "H", {})


class TestMembership:
    def test_midpoint(self):
        m = membership_lp([1, 0], [[1, 1], [1, -1]])
        assert m.inside
        np.testing.assert_allclose(m.weights, [0.5, 0.5], atol=1e-12)

    def test_outside_with_separator(self):
        p, Q = np.array([1.0, 1.0]), np.array([[1.0, 0.0], [1.0, -1.0]])
        m = membership_lp(p, Q)
        assert not m.inside
        h = m.separator
        assert np.all(Q @ h < h @ p)
        assert abs(h[1]) > 0

    def test_quarter_three_quarters(self):
        m = membership_lp([1, 0, -1], [[1, 0, 2], [1, 0, -2]])
        assert m.inside
        np.testing.assert_allclose(m.weights, [0.25, 0.75], atol=1e-12)

    def test_boundary_counts_as_inside(self):
        assert membership_lp([1, 1 - 1e-12], [[1, 1], [1, -1]]).inside

    def test_errors(self):
        with pytest.raises(ValueError):
            membership_lp([1, 0], [[1, 0, 0]])
        with pytest.raises(ValueError):
            membership_lp([2, 0], [[1, 0]])


class TestExtremalFilter:
    def test_one_qubit(self):
        P = np.array([[1, -1], [1, 0], [1, 1]])
        assert P[extremal_filter(P)].tolist() == [[1, -1], [1, 1]]

    def test_two_qubit_H(self, levels):
        assert len(levels("H", 2)[2].vertices) == 4

    def test_three_qubit_T(self, levels):
        P = levels("T", 3)[3]
        assert P.all_points_count == 12 and len(P.vertices) == 6

    def test_square_with_interior(self):
        P = np.array([[1, 0, 0], [1, 0, 1], [1, 1, 0], [1, 1, 1], [1, 0.5, 0.5], [1, 0, 0.5]])
        assert sorted(extremal_filter(P).tolist()) == [0, 1, 2, 3]

    def test_against_naive_random(self):
        rng = np.random.default_rng(4)
        for _ in range(25):
            d, N = int(rng.integers(2, 5)), int(rng.integers(5, 80))
            pts = np.hstack([np.ones((N, 1)), rng.integers(-4, 5, size=(N, d))]).astype(float)
            pts = np.unique(pts, axis=0)
            assert sorted(extremal_filter(pts).tolist()) == sorted(naive_extremal_filter(pts).tolist())

    def test_deterministic(self):
        rng = np.random.default_rng(9)
        pts = np.unique(np.hstack([np.ones((60, 1)), rng.integers(-3, 4, size=(60, 3))]), axis=0)
        assert extremal_filter(pts).tolist() == extremal_filter(pts).tolist()

    def test_connected_label_wins(self):
        v = ReducedEnumerator(2, "H", (1, 0, -1))
        conn = [LabeledVector(v, Connected(enumerate_representatives(2)[0], None))]
        prod = [LabeledVector(v, Product(((1, 0), (1, 1))))]
        P = filter_polytope(2, "H", conn, prod)
        assert P.vertices[0].connected


class TestTableCounts:
    @pytest.mark.parametrize("mode,n,conn,prod,verts", [
        ("H", 1, 3, 0, 2), ("H", 2, 5, 3, 4), ("H", 3, 11, 8, 8), ("H", 4, 48, 18, 13), ("H", 5, 252, 38, 32),
        ("T", 1, 2, 0, 2), ("T", 2, 4, 3, 4), ("T", 3, 4, 8, 6), ("T", 4, 18, 14, 12), ("T", 5, 61, 26, 22),
    ])
    def test_counts(self, levels, mode, n, conn, prod, verts):
        P = levels(mode, n)[n]
        assert (P.connected_count, P.product_count, len(P.vertices)) == (conn, prod, verts)

    @pytest.mark.parametrize("mode", "HT")
    def test_labels_verify(self, levels, mode):
        L = levels(mode, 5)
        for n in range(1, 6):
            assert verify_polytope(L[n], L) == []

    def test_vertices_extreme(self, levels):
        P = levels("H", 4)[4]
        M = P.matrix().astype(float)
        for i in range(len(M)):
            assert not membership_lp(M[i], np.delete(M, i, axis=0), solver="highs").inside


class TestCache:
    def test_roundtrip(self, tmp_path):
        L = build_levels(3, "T", cache_dir=tmp_path)
        line = cache_path(tmp_path, "T", 3).read_text().splitlines()[0]
        rec = json.loads(line)
        assert set(rec) == {"n", "mode", "coeffs", "label"}
        loaded = load_polytope(tmp_path, "T", 3)
        assert [v.coords for v in loaded.vertices] == [v.coords for v in L[3].vertices]
        assert [v.label for v in loaded.vertices] == [v.label for v in L[3].vertices]
        assert loaded.connected_count == L[3].connected_count

    def test_labels_roundtrip_json(self, levels):
        for v in levels("H", 4)[4].vertices:
            assert label_from_json(json.loads(json.dumps(v.label.to_json())), "H") == v.label

    def test_version_mismatch_rebuilds(self, tmp_path):
        build_levels(2, "H", cache_dir=tmp_path)
        meta = cache_path(tmp_path, "H", 2).with_suffix(".meta.json")
        d = json.loads(meta.read_text())
        d["version"] = CACHE_VERSION + 1
        meta.write_text(json.dumps(d))
        with pytest.raises(CacheError):
            load_polytope(tmp_path, "H", 2)
        P = build_polytope(2, "H", cache_dir=tmp_path)
        assert len(P.vertices) == 4
        assert json.loads(meta.read_text())["version"] == CACHE_VERSION

    def test_corrupt_coords_detected(self, tmp_path):
        L = build_levels(2, "H", cache_dir=tmp_path)
        path = cache_path(tmp_path, "H", 2)
        lines = path.read_text().splitlines()
        rec = json.loads(lines[0])
        rec["coeffs"][1] += 1
        lines[0] = json.dumps(rec)
        path.write_text("\n".join(lines) + "\n")
        P = load_polytope(tmp_path, "H", 2)
        problems = verify_polytope(P, L)
        assert problems and problems[0].startswith("H2 vertex 0")

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_polytope(tmp_path, "H", 2)

    def test_save_is_deterministic(self, tmp_path, levels):
        P = levels("H", 3)[3]
        a = save_polytope(P, tmp_path / "a").read_bytes()
        b = save_polytope(ProjectedPolytope(3, "H", list(P.vertices), P.all_points_count, P.connected_count,
                                            P.product_count), tmp_path / "b").read_bytes()
        assert a == b


import json
import math

import numpy as np
import pytest

from magicrom.enumerator import project
from magicrom.l1 import solve_l1
from magicrom.oracle import (
    DenseState,
    all_stabiliser_states,
    check_cache,
    check_intersection,
    dense_project,
    dense_rom,
    enumerator_coefficients,
    group_average,
    magic_state,
    run_verification,
)
from magicrom.pauli import StabiliserGroup
from magicrom.polytope import build_levels, cache_path


@pytest.fixture(scope="module")
def states():
    return {n: all_stabiliser_states(n) for n in (1, 2, 3)}


class TestStates:
    @pytest.mark.parametrize("n,count", [(1, 6), (2, 60), (3, 1080)])
    def test_counts(self, states, n, count):
        assert len(states[n]) == count

    def test_pure(self, states):
        for s in states[2]:
            np.testing.assert_allclose(s.matrix @ s.matrix, s.matrix, atol=1e-12)

    def test_validation(self):
        with pytest.raises(ValueError):
            DenseState(np.eye(2))
        with pytest.raises(ValueError):
            DenseState(np.array([[1, 1], [0, 0]]))
        with pytest.raises(ValueError):
            all_stabiliser_states(4)


class TestProject:
    def test_plus_state(self):
        plus = np.array([[1, 1], [1, 1]]) / 2
        np.testing.assert_allclose(dense_project(plus, "H"), [0.5, 2**-0.5 / 2], atol=1e-12)

    @pytest.mark.parametrize("mode", "HT")
    def test_maximally_mixed(self, mode):
        for n in (1, 2, 3):
            expected = np.zeros(n + 1)
            expected[0] = 1 / 2**n
            np.testing.assert_allclose(dense_project(np.eye(2**n) / 2**n, mode), expected, atol=1e-12)

    def test_magic_state_binomials(self):
        got = dense_project(magic_state("H", 2), "H")
        # the target is unscaled in this basis, unlike stabiliser enumerators
        np.testing.assert_allclose(got, np.array([1, 2, 1]) / 4, atol=1e-12)

    @pytest.mark.parametrize("mode", "HT")
    def test_average_is_idempotent(self, mode, states):
        for s in states[2][:10]:
            avg = group_average(s.matrix, mode)
            np.testing.assert_allclose(group_average(avg, mode), avg, atol=1e-12)

    @pytest.mark.parametrize("mode", "HT")
    def test_matches_enumerator_all_states(self, mode, states):
        for n in (1, 2, 3):
            for s in states[n]:
                coeffs = project(StabiliserGroup.from_labels(list(s.generators)), mode).coeffs
                np.testing.assert_allclose(dense_project(s, mode), enumerator_coefficients(coeffs, mode),
                                           atol=1e-10)


class TestDenseRom:
    def test_stabiliser_state(self, states):
        assert dense_rom(states[2][7]) == pytest.approx(1, abs=1e-9)

    def test_H1(self):
        assert dense_rom(magic_state("H", 1)) == pytest.approx(math.sqrt(2), abs=1e-5)

    def test_T2(self, states):
        assert dense_rom(magic_state("T", 2), states[2]) == pytest.approx(2.23206, abs=1e-5)

    @pytest.mark.parametrize("mode", "HT")
    def test_equals_reduced(self, mode, states):
        L = build_levels(3, mode)
        for n in (1, 2, 3):
            assert dense_rom(magic_state(mode, n), states[n]) == pytest.approx(solve_l1(L[n]).value, abs=1e-6)


class TestChecks:
    def test_intersection(self, states):
        assert check_intersection(2, states[2], "T", samples=100).passed

    def test_cache_corruption_named(self, tmp_path):
        build_levels(3, "H", cache_dir=tmp_path)
        path = cache_path(tmp_path, "H", 3)
        lines = path.read_text().splitlines()
        rec = json.loads(lines[-1])
        rec["coeffs"][-1] += 2
        lines[-1] = json.dumps(rec)
        path.write_text("\n".join(lines) + "\n")
        c = check_cache(tmp_path, "H", 3)
        assert not c.passed and "H3" in c.line()
        assert check_cache(tmp_path, "H", 2).passed

    def test_quick_suite(self):
        checks = run_verification(quick=True, samples=50)
        assert all(c.passed for c in checks)
        assert not any("n=3" in c.name for c in checks)

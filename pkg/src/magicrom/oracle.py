"""
Dense first-principles checks for up to three qubits.

Nothing here touches the symplectic machinery: stabiliser states are built
as explicit projectors from Pauli matrices, symmetry projections are explicit
group averages of matrices, and the robustness is an LP over all stabiliser
states in Pauli coordinates, solved with scipy's HiGHS.  Agreement with the
symmetry-reduced pipeline is the main correctness check of the package.
"""
from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .enumerator import check_mode, project, target_vector
from .pauli import StabiliserGroup

MAX_DENSE = 3
STAB_COUNTS = {1: 6, 2: 60, 3: 1080}

_I = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"I": _I, "X": _X, "Y": _Y, "Z": _Z}
_S = np.diag([1, 1j])
_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)

# single-qubit symmetry generator and rotated basis operator per mode
SYMMETRY = {"H": _S @ _X, "T": _S @ _H}
E1 = {"H": (_X + _Y) / math.sqrt(2), "T": (_X + _Y + _Z) / math.sqrt(3)}


def kron_all(mats) -> np.ndarray:
    out = np.array([[1.0 + 0j]])
    for m in mats:
        out = np.kron(out, m)
    return out


def pauli_matrix(word: str) -> np.ndarray:
    """Matrix of a letter string; the first letter acts on the most significant qubit."""
    return kron_all(PAULI[c] for c in word)


@dataclass
class DenseState:
    matrix: np.ndarray
    generators: tuple[str, ...] = ()

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] & (m.shape[0] - 1):
            raise ValueError("need a square 2^n matrix")
        if np.max(np.abs(m - m.conj().T)) > 1e-12:
            raise ValueError("matrix is not Hermitian")
        if abs(np.trace(m) - 1) > 1e-12:
            raise ValueError(f"trace {np.trace(m).real} != 1")
        self.matrix = m

    @property
    def n(self) -> int:
        return self.matrix.shape[0].bit_length() - 1


def all_stabiliser_states(n: int) -> list[DenseState]:
    """Every ``n``-qubit stabiliser state, found by brute force over generator sets."""
    if not 1 <= n <= MAX_DENSE:
        raise ValueError(f"dense enumeration supports 1 <= n <= {MAX_DENSE}")
    words = ["".join(w) for w in itertools.product("IXYZ", repeat=n)][1:]
    mats = {w: pauli_matrix(w) for w in words}
    d = 2**n
    seen: dict[bytes, DenseState] = {}
    for combo in itertools.combinations(words, n):
        ms = [mats[w] for w in combo]
        if any(not np.allclose(a @ b, b @ a) for a, b in itertools.combinations(ms, 2)):
            continue
        for signs in itertools.product((1, -1), repeat=n):
            rho = np.eye(d, dtype=complex)
            for s, m in zip(signs, ms):
                rho = rho @ (np.eye(d) + s * m) / 2
            if abs(np.trace(rho) - 1) > 1e-9:
                continue  # dependent generators
            key = np.round(rho, 9).tobytes()
            if key not in seen:
                gens = tuple(("-" if s < 0 else "+") + w for s, w in zip(signs, combo))
                seen[key] = DenseState(rho, gens)
    return list(seen.values())


def _qubit_op(u: np.ndarray, q: int, n: int) -> np.ndarray:
    return kron_all(u if k == q else _I for k in range(n))


def _permutation_matrix(perm, n: int) -> np.ndarray:
    d = 2**n
    P = np.zeros((d, d))
    for b in range(d):
        bits = [(b >> (n - 1 - k)) & 1 for k in range(n)]
        new = [bits[perm[k]] for k in range(n)]
        P[sum(v << (n - 1 - k) for k, v in enumerate(new)), b] = 1
    return P


def group_average(rho: np.ndarray, mode: str) -> np.ndarray:
    """Average over the per-qubit symmetry group on every qubit, then over qubit permutations."""
    check_mode(mode)
    n = rho.shape[0].bit_length() - 1
    g = SYMMETRY[mode]
    # cyclic group generated by g, up to global phase
    elems = [np.eye(2, dtype=complex)]
    while True:
        nxt = g @ elems[-1]
        ph = nxt[np.unravel_index(np.argmax(np.abs(nxt)), nxt.shape)]
        if np.allclose(nxt / ph * abs(ph), np.eye(2)):
            break
        elems.append(nxt)
    out = rho
    for q in range(n):
        us = [_qubit_op(u, q, n) for u in elems]
        out = sum(u @ out @ u.conj().T for u in us) / len(us)
    perms = [_permutation_matrix(p, n) for p in itertools.permutations(range(n))]
    return sum(P @ out @ P.T for P in perms) / len(perms)


def dense_project(rho, mode: str) -> np.ndarray:
    """Coefficients of the projected state in the symmetrised ``E1`` basis.

    Coefficient ``i`` multiplies the average over ``i``-subsets of
    ``E1^{(x) i}``; for a stabiliser state it equals ``B_i s^{-i/2} / 2^n``.
    """
    m = rho.matrix if isinstance(rho, DenseState) else np.asarray(rho, dtype=complex)
    n = m.shape[0].bit_length() - 1
    avg = group_average(m, mode)
    e = E1[mode]
    out = np.zeros(n + 1)
    for i in range(n + 1):
        op = kron_all([e] * i + [_I] * (n - i))
        out[i] = math.comb(n, i) * np.trace(avg @ op).real / 2**n
    return out


def enumerator_coefficients(coeffs, mode: str) -> np.ndarray:
    """Same normalisation as :func:`dense_project`, from integer enumerator coefficients."""
    n = len(coeffs) - 1
    s = 2.0 if mode == "H" else 3.0
    return np.asarray(coeffs, dtype=float) * s ** (-np.arange(n + 1) / 2) / 2**n


def magic_state(mode: str, n: int) -> np.ndarray:
    check_mode(mode)
    one = (np.eye(2) + E1[mode]) / 2
    return kron_all([one] * n)


def pauli_vector(rho: np.ndarray) -> np.ndarray:
    n = rho.shape[0].bit_length() - 1
    return np.array([np.trace(pauli_matrix("".join(w)) @ rho).real
                     for w in itertools.product("IXYZ", repeat=n)])


def dense_rom(rho, states: list[DenseState] | None = None) -> float:
    """l1 robustness over all stabiliser states, without symmetry reduction."""
    m = rho.matrix if isinstance(rho, DenseState) else np.asarray(rho, dtype=complex)
    n = m.shape[0].bit_length() - 1
    if states is None:
        states = all_stabiliser_states(n)
    A = np.array([pauli_vector(s.matrix) for s in states]).T
    b = pauli_vector(m)
    N = A.shape[1]
    res = linprog(np.ones(2 * N), A_eq=np.hstack([A, -A]), b_eq=b, bounds=(0, None), method="highs")
    if res.status != 0:
        raise RuntimeError(f"dense LP failed: {res.message}")
    return float(res.fun)


def in_hull(p: np.ndarray, Q: np.ndarray, tol: float = 1e-9) -> bool:
    """``p`` in the convex hull of the rows of ``Q``, by LP feasibility."""
    A = np.vstack([Q.T, np.ones(len(Q))])
    b = np.concatenate([p, [1.0]])
    res = linprog(np.zeros(len(Q)), A_eq=A, b_eq=b, bounds=(0, None), method="highs",
                  options={"primal_feasibility_tolerance": tol})
    return res.status == 0


# --------------------------------------------------------------------------
# verification suite
# --------------------------------------------------------------------------


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}" + (f": {self.detail}" if self.detail else "")


def check_counts(n: int, states) -> Check:
    return Check(f"stabiliser count n={n}", len(states) == STAB_COUNTS[n],
                 f"{len(states)} states, expected {STAB_COUNTS[n]}")


def check_projections(n: int, states, mode: str) -> Check:
    worst = 0.0
    for s in states:
        coeffs = project(StabiliserGroup.from_labels(list(s.generators)), mode).coeffs
        worst = max(worst, float(np.max(np.abs(dense_project(s, mode) - enumerator_coefficients(coeffs, mode)))))
    return Check(f"projection {mode} n={n}", worst <= 1e-10, f"max deviation {worst:.2e}")


def check_rom(n: int, states, mode: str, polytope) -> Check:
    from .l1 import solve_l1

    dense = dense_rom(magic_state(mode, n), states)
    reduced = solve_l1(polytope, target_vector(mode, n)).value
    return Check(f"robustness {mode} n={n}", abs(dense - reduced) <= 1e-6,
                 f"dense {dense:.9f}, reduced {reduced:.9f}")


def check_intersection(n: int, states, mode: str, samples: int = 1000, seed: int = 0) -> Check:
    """Projected hull equals the stabiliser polytope cut by the invariant subspace, on random samples."""
    rng = np.random.default_rng(seed)
    proj = np.array([dense_project(s, mode) for s in states])
    proj_unique = np.unique(np.round(proj, 12), axis=0)
    paulis = np.array([pauli_vector(s.matrix) for s in states])
    e = E1[mode]
    basis = []
    for i in range(n + 1):
        terms = [kron_all([e if k in sub else _I for k in range(n)]) for sub in itertools.combinations(range(n), i)]
        basis.append(sum(terms) / len(terms))
    bad = 0
    half = samples // 2
    for _ in range(half):
        # random point of the stabiliser polytope, projected, lies in the projected hull
        w = rng.dirichlet(np.ones(len(states)) * 0.3)
        rho = sum(wi * s.matrix for wi, s in zip(w, states))
        if not in_hull(dense_project(rho, mode), proj_unique):
            bad += 1
    for _ in range(samples - half):
        # random point of the projected hull is an invariant point of the stabiliser polytope
        w = rng.dirichlet(np.ones(len(proj_unique)) * 0.3)
        c = w @ proj_unique
        rho = sum(ci * b for ci, b in zip(c, basis))
        if not np.allclose(group_average(rho, mode), rho, atol=1e-10) or not in_hull(pauli_vector(rho), paulis):
            bad += 1
    return Check(f"polytope intersection {mode} n={n}", bad == 0, f"{bad} of {samples} samples failed")


def check_cache(cache_dir, mode: str, n: int) -> Check:
    from .polytope import CacheError, build_levels, load_polytope, verify_polytope

    try:
        P = load_polytope(cache_dir, mode, n)
    except FileNotFoundError:
        return Check(f"cache {mode}{n}", True, "not cached")
    except (CacheError, ValueError, KeyError) as exc:
        return Check(f"cache {mode}{n}", False, str(exc))
    # product labels index into the cached lower levels
    lower: dict = {}
    for m in range(1, n):
        try:
            lower[m] = load_polytope(cache_dir, mode, m)
        except (FileNotFoundError, CacheError):
            build_levels(m, mode, levels=lower)
    problems = verify_polytope(P, lower)
    return Check(f"cache {mode}{n}", not problems, "; ".join(problems[:3]) or f"{len(P.vertices)} vertices")


def run_verification(quick: bool = False, cache_dir=None, samples: int = 1000) -> list[Check]:
    """Full oracle suite (n <= 3), or the n <= 2 subset with ``quick``."""
    from .polytope import build_levels

    top = 2 if quick else 3
    checks = []
    t0 = time.perf_counter()
    levels = {mode: build_levels(top, mode) for mode in ("H", "T")}
    for n in range(1, top + 1):
        states = all_stabiliser_states(n)
        checks.append(check_counts(n, states))
        for mode in ("H", "T"):
            checks.append(check_projections(n, states, mode))
            checks.append(check_rom(n, states, mode, levels[mode][n]))
            if n <= 2:
                checks.append(check_intersection(n, states, mode, samples=samples))
    if cache_dir is not None:
        from pathlib import Path

        for path in sorted(Path(cache_dir).glob("vertices_*.jsonl")):
            stem = path.stem.removeprefix("vertices_")
            checks.append(check_cache(cache_dir, stem[0], int(stem[1:])))
    checks.append(Check("elapsed", True, f"{time.perf_counter() - t0:.1f} s"))
    return checks

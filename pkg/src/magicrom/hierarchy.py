"""
Upper bounds on the robustness from sub-polytopes built out of few-qubit pieces.

The Bell level uses products of single-qubit stabiliser states with one
special two-qubit state pair; level ``k`` uses all products of fully
entangled vertices on at most ``k`` qubits.  Both feed the same l1 solver
as the exact computation, so every value is a true upper bound on the
robustness whenever the LP is feasible.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from math import comb, gcd

from .enumerator import ReducedEnumerator, check_mode, convolve, project, target_vector
from .l1 import Decomposition, Infeasible, solve_vertices
from .pauli import StabiliserGroup
from .polytope import LabeledVector, partition_products, partitions

log = logging.getLogger(__name__)

# generators of the two special pair states per mode
PAIR_GROUPS = {
    "H": (("XX", "-ZZ"), ("-XX", "-ZZ")),
    "T": (("XZ", "ZX"), ("-XZ", "-ZY")),
}
PAIR_NAMES = {"H": ("psi+", "psi-"), "T": ("gamma+", "gamma-")}


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        if not self.parts or any(p < 1 for p in self.parts):
            raise ValueError(f"bad partition {self.parts}")
        if list(self.parts) != sorted(self.parts, reverse=True):
            raise ValueError(f"parts must be descending: {self.parts}")

    @property
    def n(self) -> int:
        return sum(self.parts)

    def __str__(self):
        return "+".join(map(str, self.parts))


def partitions_bounded(n: int, k: int) -> list[Partition]:
    """Partitions of ``n`` with parts at most ``k``, lexicographically descending."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
    return [Partition(p) for p in partitions(n, k)]


def special_pair_vertices(mode: str) -> list[ReducedEnumerator]:
    """The two pair projections, ordered (+, -).

    In H-mode these are the extreme points ``(1, 0, +-2)``; in T-mode the
    projections of the states stabilised by ``<XZ, ZX>`` and ``<-XZ, -ZY>``.
    """
    check_mode(mode)
    return [project(StabiliserGroup.from_labels(list(g)), mode) for g in PAIR_GROUPS[mode]]


def single_vertices(mode: str) -> list[ReducedEnumerator]:
    """Projections of ``|+>`` and ``|->``."""
    return [project(StabiliserGroup.from_labels([g]), mode) for g in ("X", "-X")]


def _power(v: ReducedEnumerator | None, k: int, mode: str) -> ReducedEnumerator | None:
    out = None
    for _ in range(k):
        out = v if out is None else convolve(out, v)
    return out


def _product(factors, mode):
    out = None
    for f in factors:
        if f is None:
            continue
        out = f if out is None else convolve(out, f)
    return out


@dataclass(frozen=True)
class BellLabel:
    """``plus`` copies of pair+, ``minus`` of pair-, ``singles`` single-qubit factors of one sign."""

    plus: int
    minus: int
    singles: int
    single_sign: int

    def to_json(self) -> dict:
        return {"kind": "bell", "plus": self.plus, "minus": self.minus, "singles": self.singles,
                "single_sign": self.single_sign}


def approx_vertices(mode: str, n: int) -> list[LabeledVector]:
    """Vertices of the Bell-level polytope, deduplicated on exact coordinates, in lexicographic order."""
    check_mode(mode)
    if n < 1:
        raise ValueError("n must be >= 1")
    m = n // 2
    pp, pm = special_pair_vertices(mode)
    sp, sm = single_vertices(mode)
    found: dict[tuple, LabeledVector] = {}
    for i in range(m + 1):
        for j in range(m + 1 - i):
            k = m - i - j
            r = 2 * k + n - 2 * m
            for sign, s in ((1, sp), (-1, sm)):
                v = _product([_power(pp, i, mode), _power(pm, j, mode), _power(s, r, mode)], mode)
                found.setdefault(v.coeffs, LabeledVector(v, BellLabel(i, j, r, sign)))
    return [found[key] for key in sorted(found)]


def approx_robustness(mode: str, n: int, solver: str = "simplex") -> Decomposition:
    """Bell-level upper bound; an infeasible LP is returned with ``feasible=False``."""
    return _solve_or_flag(approx_vertices(mode, n), target_vector(mode, n), "bell", solver)


def _solve_or_flag(vertices, target, method, solver) -> Decomposition:
    try:
        d = solve_vertices(vertices, target, solver)
    except Infeasible as exc:
        log.info("%s%d %s: infeasible", target.mode, target.n, method)
        return Decomposition(target.n, target.mode, [], float("inf"), float("nan"), feasible=False,
                             certificate=exc.certificate, method=method)
    d.method = method
    return d


def level_vertices(mode: str, n: int, k: int, vertex_sets: dict) -> list[LabeledVector]:
    """All products over partitions of ``n`` with parts ``<= k`` of fully entangled vertices."""
    check_mode(mode)
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
    return partition_products(n, mode, vertex_sets, max_part=k, only_connected=True)


def level_robustness(mode: str, n: int, k: int, vertex_sets: dict, solver: str = "simplex") -> Decomposition:
    """Level-``k`` upper bound; ``vertex_sets[i]`` must hold the vertex set for ``i`` qubits, ``i <= k``."""
    return _solve_or_flag(level_vertices(mode, n, k, vertex_sets), target_vector(mode, n), f"level{k}", solver)


# --------------------------------------------------------------------------
# exact affine-span test
# --------------------------------------------------------------------------


def _rank(rows: list[list[int]]) -> int:
    """Exact rank of an integer matrix by fraction-free elimination."""
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return 0
    rank = 0
    ncol = len(rows[0])
    for c in range(ncol):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        p = rows[rank]
        for i in range(rank + 1, len(rows)):
            f = rows[i][c]
            if f:
                row = [p[c] * a - f * b for a, b in zip(rows[i], p)]
                g = gcd(*row)
                rows[i] = [x // g for x in row] if g > 1 else row
        rank += 1
        if rank == len(rows):
            break
    return rank


def in_affine_span(vertices, mode: str, n: int) -> bool:
    """Exact test whether the magic-state target lies in the affine span of ``vertices``.

    The target's integer-basis coordinates are ``C(n,i) s^{i/2}``; splitting
    them into a rational part and a rational multiple of ``sqrt(s)`` gives two
    rational vectors that must both lie in the rational span.
    """
    check_mode(mode)
    s = 2 if mode == "H" else 3
    rows = [list(v.coords.coeffs) for v in vertices]
    even = [comb(n, i) * s ** (i // 2) if i % 2 == 0 else 0 for i in range(n + 1)]
    odd = [comb(n, i) * s ** (i // 2) if i % 2 == 1 else 0 for i in range(n + 1)]
    r = _rank(rows)
    return _rank(rows + [even]) == r and _rank(rows + [odd]) == r

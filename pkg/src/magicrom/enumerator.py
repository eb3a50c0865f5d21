"""
Signed quantum weight enumerators of stabiliser groups.

The complete enumerator counts group elements by their (X, Y, Z) letter
weights, each element weighted by its sign.  Averaging a stabiliser state
over the symmetry group of ``|H>^n`` keeps only Z-free elements and merges X
with Y (partial enumerator ``B``); averaging over the symmetry group of
``|T>^n`` merges all three letters (total enumerator ``C``).  Everything here
is exact integer arithmetic; the irrational basis scalings are applied only
when the LP is assembled.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from math import comb

import numpy as np

from .pauli import StabiliserGroup, X, Y, Z, group_arrays

MODES = ("H", "T")
MAX_QUBITS = 20

# basis scaling: coefficient i of a reduced enumerator multiplies s^(-i/2)
SCALE = {"H": 2, "T": 3}


def check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ValueError(f"mode must be 'H' or 'T', got {mode!r}")
    return mode


@dataclass(frozen=True)
class CompleteEnumerator:
    """Sparse map ``(i, j, k) -> A_{ijk}`` over X/Y/Z weights."""

    n: int
    entries: dict

    def __getitem__(self, key) -> int:
        return self.entries.get(tuple(key), 0)

    def total_mass(self) -> int:
        return sum(abs(v) for v in self.entries.values())


@dataclass(frozen=True, eq=False)
class ReducedEnumerator:
    """Integer coefficient vector of a projected state (``B`` for H-mode, ``C`` for T-mode)."""

    n: int
    mode: str
    coeffs: tuple[int, ...]

    def __post_init__(self):
        check_mode(self.mode)
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if len(self.coeffs) != self.n + 1:
            raise ValueError(f"need {self.n + 1} coefficients, got {len(self.coeffs)}")

    def __eq__(self, other):
        if not isinstance(other, ReducedEnumerator):
            return NotImplemented
        return (self.mode, self.coeffs) == (other.mode, other.coeffs)

    def __hash__(self):
        return hash((self.mode, self.coeffs))

    def __repr__(self):
        return f"ReducedEnumerator({self.mode}, {self.coeffs})"

    def scaled(self) -> np.ndarray:
        """Coordinates in the normalised invariant basis (common 2^-n factor dropped)."""
        return np.asarray(self.coeffs, dtype=float) * basis_scaling(self.mode, self.n)


def basis_scaling(mode: str, n: int) -> np.ndarray:
    return float(SCALE[check_mode(mode)]) ** (-np.arange(n + 1) / 2.0)


@dataclass(frozen=True)
class TargetVector:
    n: int
    mode: str
    coeffs: tuple[int, ...]


def complete_enumerator(S: StabiliserGroup) -> CompleteEnumerator:
    if S.n > MAX_QUBITS:
        raise ValueError(f"n={S.n} exceeds the {MAX_QUBITS}-qubit limit for 2^n enumeration")
    letters, signs = group_arrays(S)
    wx = (letters == X).sum(axis=1)
    wy = (letters == Y).sum(axis=1)
    wz = (letters == Z).sum(axis=1)
    acc = defaultdict(int)
    for key, s in zip(zip(wx.tolist(), wy.tolist(), wz.tolist()), signs.tolist()):
        acc[key] += s
    return CompleteEnumerator(S.n, {k: v for k, v in acc.items() if v})


def reduce_H(A: CompleteEnumerator) -> ReducedEnumerator:
    """``B_i = sum_j A_{i-j, j, 0}``: Z-free elements by total weight."""
    b = [0] * (A.n + 1)
    for (i, j, k), v in A.entries.items():
        if k == 0:
            b[i + j] += v
    return ReducedEnumerator(A.n, "H", tuple(b))


def reduce_T(A: CompleteEnumerator) -> ReducedEnumerator:
    """``C_i = sum_{j,k} A_{i-j-k, j, k}``: all elements by total weight."""
    c = [0] * (A.n + 1)
    for (i, j, k), v in A.entries.items():
        c[i + j + k] += v
    return ReducedEnumerator(A.n, "T", tuple(c))


def reduce(A: CompleteEnumerator, mode: str) -> ReducedEnumerator:
    return reduce_H(A) if check_mode(mode) == "H" else reduce_T(A)


def project(S: StabiliserGroup, mode: str) -> ReducedEnumerator:
    return reduce(complete_enumerator(S), mode)


def convolve(u: ReducedEnumerator, v: ReducedEnumerator) -> ReducedEnumerator:
    """Reduced enumerator of a product state from those of its factors."""
    if u.mode != v.mode:
        raise ValueError(f"mode mismatch: {u.mode} vs {v.mode}")
    out = np.convolve(np.asarray(u.coeffs, dtype=object), np.asarray(v.coeffs, dtype=object))
    return ReducedEnumerator(u.n + v.n, u.mode, tuple(int(c) for c in out))


def convolve_complete(a: CompleteEnumerator, b: CompleteEnumerator) -> CompleteEnumerator:
    """Three-index convolution of complete enumerators (product of two groups)."""
    acc = defaultdict(int)
    for (i, j, k), va in a.entries.items():
        for (p, q, r), vb in b.entries.items():
            acc[i + p, j + q, k + r] += va * vb
    return CompleteEnumerator(a.n + b.n, {k: v for k, v in acc.items() if v})


def target_vector(mode: str, n: int) -> TargetVector:
    """Coordinates of ``|H><H|^n`` or ``|T><T|^n``: binomial coefficients."""
    check_mode(mode)
    if n < 1:
        raise ValueError("n must be >= 1")
    return TargetVector(n, mode, tuple(comb(n, i) for i in range(n + 1)))

"""
Robustness of magic as a symmetry-reduced l1-minimisation.

Vertices enter the LP scaled by ``s^{-i/2}`` per coordinate (``s`` = 2 for
H-mode, 3 for T-mode); in that basis the magic-state target is the plain
binomial vector.  Writing ``x = u - v`` with ``u, v >= 0`` gives a standard-form LP
with ``n + 1`` rows and twice as many columns as vertices.

Residuals are reported in normalised state coordinates, i.e. the scaled
vectors times ``2^-n``, so that a residual is comparable across ``n``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .enumerator import ReducedEnumerator, basis_scaling, check_mode, target_vector
from .simplex import INFEASIBLE, OPTIMAL, get_solver

DROP_TOL = 1e-10


class Infeasible(RuntimeError):
    """Target outside the affine span of the columns."""

    def __init__(self, message: str, certificate=None):
        super().__init__(message)
        self.certificate = certificate


@dataclass
class L1Problem:
    n: int
    mode: str
    columns: np.ndarray  # (n+1, N), scaled
    rhs: np.ndarray
    labels: list

    @classmethod
    def assemble(cls, vertices, target) -> L1Problem:
        """Build from ``LabeledVector``-like objects (``.coords``, ``.label``) and a target."""
        vertices = list(vertices)
        if not vertices:
            raise ValueError("no vertices")
        n, mode = target.n, target.mode
        for v in vertices:
            if v.coords.n != n or v.coords.mode != mode:
                raise ValueError(f"vertex {v.coords} does not match target {mode}{n}")
        scale = basis_scaling(mode, n)
        cols = np.array([v.coords.coeffs for v in vertices], dtype=float).T * scale[:, None]
        rhs = target_rhs(target)
        if not np.all(cols[0] == 1.0) or rhs[0] != 1.0:
            raise ValueError("affine coordinate must be 1 for every column and the target")
        return cls(n, mode, cols, rhs, [v.label for v in vertices])


@dataclass
class Decomposition:
    n: int
    mode: str
    terms: list  # (coefficient, label, coords)
    value: float
    residual: float
    feasible: bool = True
    certificate: np.ndarray | None = None
    method: str = "exact"

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([t[0] for t in self.terms])

    def negative_mass(self) -> float:
        return float(-sum(c for c, *_ in self.terms if c < 0))


def target_rhs(target) -> np.ndarray:
    """LP right-hand side: a vertex (``ReducedEnumerator``) is scaled, a ``TargetVector`` is not."""
    if isinstance(target, ReducedEnumerator):
        return target.scaled()
    return np.asarray(target.coeffs, dtype=float)


def _residual(n, mode, terms, rhs) -> float:
    scale = basis_scaling(mode, n)
    recon = np.zeros(n + 1)
    for c, _, coords in terms:
        recon += c * np.asarray(coords, dtype=float) * scale
    return float(np.max(np.abs(recon - np.asarray(rhs, dtype=float)))) / 2.0**n


def solve_problem(P: L1Problem, solver: str = "simplex", coords=None) -> Decomposition:
    N = P.columns.shape[1]
    A = np.hstack([P.columns, -P.columns])
    c = np.ones(2 * N)
    res = get_solver(solver)(c, A, P.rhs)
    if res.status == INFEASIBLE:
        raise Infeasible(f"{P.mode}{P.n}: target outside the affine span of {N} columns", res.certificate)
    if res.status != OPTIMAL:
        raise RuntimeError(f"{P.mode}{P.n}: LP ended with status {res.status}")
    x = res.x[:N] - res.x[N:]
    if coords is None:
        coords = [tuple(col / basis_scaling(P.mode, P.n)) for col in P.columns.T]
    terms = [(float(x[j]), P.labels[j], coords[j]) for j in range(N) if abs(x[j]) >= DROP_TOL]
    residual = _residual(P.n, P.mode, terms, P.rhs)
    value = float(sum(abs(t[0]) for t in terms))
    return Decomposition(P.n, P.mode, terms, value, residual)


def solve_l1(polytope, target=None, solver: str = "simplex") -> Decomposition:
    """Minimal l1 decomposition of ``target`` (default: the magic state) over the polytope's vertices."""
    if target is None:
        target = target_vector(polytope.mode, polytope.n)
    if polytope.n != target.n or polytope.mode != target.mode:
        raise ValueError(f"polytope {polytope.mode}{polytope.n} vs target {target.mode}{target.n}")
    return solve_vertices(polytope.vertices, target, solver)


def solve_vertices(vertices, target, solver: str = "simplex") -> Decomposition:
    vertices = list(vertices)
    P = L1Problem.assemble(vertices, target)
    return solve_problem(P, solver, coords=[v.coords.coeffs for v in vertices])


def st_norm(mode: str, n: int) -> float:
    """Closed-form dual lower bound: Pauli l1 mass of the single-qubit state, to the n-th power."""
    check_mode(mode)
    if n < 1:
        raise ValueError("n must be >= 1")
    base = (1 + math.sqrt(2)) / 2 if mode == "H" else (1 + math.sqrt(3)) / 2
    return base**n


def robustness_conversion(value: float) -> float:
    """Standard robustness ``R`` from the l1 value: ``value = 1 + 2R``."""
    if value < 1 - 1e-12:
        raise ValueError(f"l1 value {value} < 1")
    return max(0.0, (value - 1) / 2)


@dataclass
class Split:
    plus: list  # (weight, label, coords), weights sum to 1
    minus: list
    R: float

    def reconstruct(self, mode: str, n: int) -> np.ndarray:
        """``(1+R) sigma+ - R sigma-`` in the scaled basis."""
        scale = basis_scaling(mode, n)
        out = np.zeros(n + 1)
        for w, _, c in self.plus:
            out += (1 + self.R) * w * np.asarray(c, dtype=float) * scale
        for w, _, c in self.minus:
            out -= self.R * w * np.asarray(c, dtype=float) * scale
        return out


def split_decomposition(d: Decomposition) -> Split:
    """Write the optimum as ``(1+R) sigma+ - R sigma-`` with convex ``sigma+-``."""
    value = d.value
    pos = [(c, l, v) for c, l, v in d.terms if c > 0]
    neg = [(c, l, v) for c, l, v in d.terms if c < 0]
    R = robustness_conversion(value)
    plus = [(2 * c / (value + 1), l, v) for c, l, v in pos]
    if not neg or value - 1 <= 1e-12:
        return Split(plus, [], 0.0)
    minus = [(-2 * c / (value - 1), l, v) for c, l, v in neg]
    return Split(plus, minus, R)


# --------------------------------------------------------------------------
# decomposition files
# --------------------------------------------------------------------------


def _label_json(label):
    if hasattr(label, "to_json"):
        return label.to_json()
    return label


def write_decomposition(d: Decomposition, path) -> Path:
    path = Path(path)
    header = {"mode": d.mode, "n": d.n, "value": d.value, "residual": d.residual,
              "feasible": d.feasible, "method": d.method}
    lines = [json.dumps(header, separators=(",", ":"))]
    for c, label, coords in d.terms:
        lines.append(json.dumps({"coefficient": c, "coeffs": list(coords), "label": _label_json(label)},
                                separators=(",", ":")))
    path.write_text("\n".join(lines) + "\n")
    return path


def read_decomposition(path) -> Decomposition:
    rows = [json.loads(line) for line in Path(path).read_text().splitlines() if line.strip()]
    if not rows:
        raise ValueError(f"{path}: empty decomposition file")
    h = rows[0]
    terms = [(float(r["coefficient"]), r["label"], tuple(int(v) for v in r["coeffs"])) for r in rows[1:]]
    return Decomposition(h["n"], h["mode"], terms, h["value"], h["residual"], h.get("feasible", True),
                         method=h.get("method", "exact"))


def recheck_residual(d: Decomposition, target=None) -> float:
    if target is None:
        target = target_vector(d.mode, d.n)
    return _residual(d.n, d.mode, d.terms, target_rhs(target))

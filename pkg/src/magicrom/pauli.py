"""
Binary symplectic arithmetic for signed n-qubit Pauli operators.

A Pauli operator is stored as bit vectors ``x`` and ``z`` plus an integer
``phase`` modulo 4, representing

    i^phase * prod_j X_j^{x_j} Z_j^{z_j}

with X written before Z on every qubit.  In this convention ``X.Z`` is
``(x=1, z=1, phase=0)``, i.e. the operator ``XZ = -iY``, so a Hermitian
operator has ``phase = wt_Y (mod 2)`` and the Hermitian sign is
``i^(phase - wt_Y)``.

Graph states, local complementation and the per-qubit Clifford coset
actions used to enumerate stabiliser states also live here.
"""
from __future__ import annotations

from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field

import numpy as np

# letter codes used throughout the package
I, X, Y, Z = 0, 1, 2, 3
LETTERS = "IXYZ"


def _letter(x: int, z: int) -> int:
    return (X, Y)[z] if x else (I, Z)[z]


@dataclass(frozen=True)
class PauliElement:
    """Signed Pauli operator ``i^phase X^x Z^z`` (factorwise, X first)."""

    x: tuple[int, ...]
    z: tuple[int, ...]
    phase: int = 0

    def __post_init__(self):
        x = tuple(int(b) & 1 for b in self.x)
        z = tuple(int(b) & 1 for b in self.z)
        if len(x) != len(z):
            raise ValueError(f"x and z parts differ in length ({len(x)} != {len(z)})")
        if len(x) < 1:
            raise ValueError("a Pauli element needs at least one qubit")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "phase", int(self.phase) % 4)

    @property
    def n(self) -> int:
        return len(self.x)

    @classmethod
    def identity(cls, n: int) -> PauliElement:
        return cls((0,) * n, (0,) * n, 0)

    @classmethod
    def from_label(cls, label: str) -> PauliElement:
        """Parse a Hermitian label such as ``"-XZY"`` or ``"+IYY"``."""
        sign = 1
        if label[0] in "+-":
            sign = -1 if label[0] == "-" else 1
            label = label[1:]
        x = [int(c in "XY") for c in label]
        z = [int(c in "ZY") for c in label]
        if any(c not in LETTERS for c in label):
            raise ValueError(f"bad Pauli label {label!r}")
        n_y = label.count("Y")
        return cls(tuple(x), tuple(z), n_y + (0 if sign > 0 else 2))

    @property
    def weight_y(self) -> int:
        return sum(a & b for a, b in zip(self.x, self.z))

    @property
    def hermitian_phase(self) -> int:
        """Exponent ``e`` with ``self = i^e * (tensor of I, X, Y, Z)``."""
        return (self.phase - self.weight_y) % 4

    def is_hermitian(self) -> bool:
        return self.hermitian_phase % 2 == 0

    @property
    def sign(self) -> int:
        e = self.hermitian_phase
        if e % 2:
            raise ValueError(f"{self!r} is not Hermitian")
        return 1 if e == 0 else -1

    def letters(self) -> tuple[int, ...]:
        return tuple(_letter(a, b) for a, b in zip(self.x, self.z))

    def weights(self) -> tuple[int, int, int]:
        """Number of X, Y and Z letters."""
        ls = self.letters()
        return ls.count(X), ls.count(Y), ls.count(Z)

    def label(self) -> str:
        e = self.hermitian_phase
        prefix = {0: "+", 1: "+i", 2: "-", 3: "-i"}[e]
        return prefix + "".join(LETTERS[c] for c in self.letters())

    def __str__(self) -> str:
        return self.label()

    def __mul__(self, other: PauliElement) -> PauliElement:
        return multiply(self, other)

    def to_matrix(self) -> np.ndarray:
        """Dense ``2^n x 2^n`` matrix; qubit 0 is the most significant factor."""
        xm = np.array([[0, 1], [1, 0]], dtype=complex)
        zm = np.array([[1, 0], [0, -1]], dtype=complex)
        out = np.array([[1.0 + 0j]])
        for a, b in zip(self.x, self.z):
            f = np.eye(2, dtype=complex)
            if a:
                f = f @ xm
            if b:
                f = f @ zm
            out = np.kron(out, f)
        return (1j**self.phase) * out


def _check_len(a: PauliElement, b: PauliElement) -> None:
    if a.n != b.n:
        raise ValueError(f"qubit count mismatch: {a.n} vs {b.n}")


def multiply(a: PauliElement, b: PauliElement) -> PauliElement:
    """Operator product ``a b`` with exact phase.

    Moving ``Z^{z_a}`` past ``X^{x_b}`` on each qubit costs a factor
    ``(-1)^{z_a x_b}``.
    """
    _check_len(a, b)
    swaps = sum(za & xb for za, xb in zip(a.z, b.x))
    return PauliElement(
        tuple(p ^ q for p, q in zip(a.x, b.x)),
        tuple(p ^ q for p, q in zip(a.z, b.z)),
        a.phase + b.phase + 2 * swaps,
    )


def symplectic_product(a: PauliElement, b: PauliElement) -> int:
    """0 if ``a`` and ``b`` commute, 1 if they anticommute."""
    _check_len(a, b)
    return sum((xa & zb) ^ (za & xb) for xa, za, xb, zb in zip(a.x, a.z, b.x, b.z)) & 1


def gf2_rank(rows: np.ndarray) -> int:
    m = np.array(rows, dtype=np.uint8) & 1
    rank = 0
    n_rows, n_cols = m.shape
    for c in range(n_cols):
        piv = np.nonzero(m[rank:, c])[0]
        if piv.size == 0:
            continue
        p = rank + piv[0]
        m[[rank, p]] = m[[p, rank]]
        hit = np.nonzero(m[:, c])[0]
        hit = hit[hit != rank]
        m[hit] ^= m[rank]
        rank += 1
        if rank == n_rows:
            break
    return rank


@dataclass(frozen=True)
class StabiliserGroup:
    """Stabiliser group given by ``n`` independent commuting Hermitian generators."""

    generators: tuple[PauliElement, ...]
    n: int = field(init=False)

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        if not gens:
            raise ValueError("empty generator list")
        n = gens[0].n
        object.__setattr__(self, "n", n)
        if len(gens) != n:
            raise ValueError(f"need exactly {n} generators, got {len(gens)}")
        for g in gens:
            if g.n != n:
                raise ValueError("generators act on different qubit counts")
            if not g.is_hermitian():
                raise ValueError(f"generator {g} is not Hermitian")
        for i in range(n):
            for j in range(i + 1, n):
                if symplectic_product(gens[i], gens[j]):
                    raise ValueError(f"generators {gens[i]} and {gens[j]} anticommute")
        if gf2_rank(self.check_matrix()) != n:
            raise ValueError("generators are not independent")

    @classmethod
    def from_labels(cls, labels: Sequence[str]) -> StabiliserGroup:
        return cls(tuple(PauliElement.from_label(s) for s in labels))

    def check_matrix(self) -> np.ndarray:
        """``n x 2n`` binary matrix with rows ``(x | z)``."""
        return np.array([g.x + g.z for g in self.generators], dtype=np.uint8)

    def labels(self) -> list[str]:
        return [g.label() for g in self.generators]

    def __iter__(self) -> Iterator[PauliElement]:
        return iter(self.generators)

    def projector(self) -> np.ndarray:
        d = 2**self.n
        rho = np.eye(d, dtype=complex)
        for g in self.generators:
            rho = rho @ (np.eye(d) + g.to_matrix()) / 2
        return rho


def group_elements(S: StabiliserGroup) -> list[PauliElement]:
    """All ``2^n`` elements, element ``k`` being the product of generators in bitmask ``k``."""
    out = [PauliElement.identity(S.n)]
    for k in range(1, 2**S.n):
        low = (k & -k).bit_length() - 1
        out.append(multiply(out[k & (k - 1)], S.generators[low]))
    return out


def group_arrays(S: StabiliserGroup) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised element table: letters ``(2^n, n)`` in I/X/Y/Z codes and Hermitian signs.

    Row ``k`` is the product of the generators in bitmask ``k``, the same order
    as :func:`group_elements`.
    """
    n = S.n
    xs = np.zeros((1, n), dtype=np.uint8)
    zs = np.zeros((1, n), dtype=np.uint8)
    ph = np.zeros(1, dtype=np.int64)
    for g in S.generators:
        gx = np.array(g.x, dtype=np.uint8)
        gz = np.array(g.z, dtype=np.uint8)
        swaps = (zs & gx).sum(axis=1)
        xs = np.concatenate([xs, xs ^ gx])
        zs = np.concatenate([zs, zs ^ gz])
        ph = np.concatenate([ph, ph + g.phase + 2 * swaps])
    n_y = (xs & zs).sum(axis=1)
    e = (ph - n_y) % 4
    if np.any(e % 2):
        raise ValueError("group contains a non-Hermitian element")
    letters = np.where(xs == 1, np.where(zs == 1, Y, X), np.where(zs == 1, Z, I)).astype(np.int8)
    signs = np.where(e == 0, 1, -1).astype(np.int8)
    return letters, signs


def tensor_product(S1: StabiliserGroup, S2: StabiliserGroup) -> StabiliserGroup:
    """Group of the product state: ``S1`` on the first qubits, ``S2`` on the rest."""
    pad1, pad2 = (0,) * S2.n, (0,) * S1.n
    gens = [PauliElement(g.x + pad1, g.z + pad1, g.phase) for g in S1.generators]
    gens += [PauliElement(pad2 + g.x, pad2 + g.z, g.phase) for g in S2.generators]
    return StabiliserGroup(tuple(gens))


def canonical_generators(S: StabiliserGroup) -> StabiliserGroup:
    """Reduced row echelon form of the generators over GF(2), phases carried along.

    Two groups are equal exactly when their canonical forms are identical.
    """
    n = S.n
    rows = list(S.generators)
    pivot_row = 0
    for col in range(2 * n):
        bits = [(r.x + r.z)[col] for r in rows]
        cand = [i for i in range(pivot_row, n) if bits[i]]
        if not cand:
            continue
        p = cand[0]
        rows[pivot_row], rows[p] = rows[p], rows[pivot_row]
        for i in range(n):
            if i != pivot_row and (rows[i].x + rows[i].z)[col]:
                rows[i] = _hermitian(multiply(rows[i], rows[pivot_row]))
        pivot_row += 1
        if pivot_row == n:
            break
    return StabiliserGroup(tuple(rows))


def _hermitian(p: PauliElement) -> PauliElement:
    # product of commuting Hermitian Paulis is Hermitian; this only asserts it
    if not p.is_hermitian():
        raise ValueError(f"{p} is not Hermitian")
    return p


# --------------------------------------------------------------------------
# graphs
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on ``n`` vertices, stored as a frozen edge set."""

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        clean = set()
        for a, b in self.edges:
            a, b = int(a), int(b)
            if a == b:
                raise ValueError(f"self-loop at vertex {a}")
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise ValueError(f"edge ({a}, {b}) out of range for n={self.n}")
            clean.add((min(a, b), max(a, b)))
        object.__setattr__(self, "edges", frozenset(clean))
        if self.n < 1:
            raise ValueError("graph needs at least one vertex")

    @classmethod
    def from_adjacency(cls, adj) -> Graph:
        a = np.asarray(adj, dtype=np.uint8)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("adjacency must be square")
        if np.any(a != a.T):
            raise ValueError("adjacency must be symmetric")
        if np.any(np.diag(a)):
            raise ValueError("adjacency must have zero diagonal")
        n = a.shape[0]
        return cls(n, frozenset((i, j) for i in range(n) for j in range(i + 1, n) if a[i, j]))

    @property
    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.uint8)
        for i, j in self.edges:
            a[i, j] = a[j, i] = 1
        return a

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def neighbours(self, v: int) -> list[int]:
        return [w for e in self.edges for w in e if v in e and w != v]

    def is_connected(self) -> bool:
        seen = {0}
        stack = [0]
        adj = self.adjacency
        while stack:
            v = stack.pop()
            for w in np.nonzero(adj[v])[0]:
                if int(w) not in seen:
                    seen.add(int(w))
                    stack.append(int(w))
        return len(seen) == self.n


def local_complement(G: Graph, v: int) -> Graph:
    """Toggle every edge inside the neighbourhood of ``v``."""
    if not 0 <= v < G.n:
        raise ValueError(f"vertex {v} out of range for n={G.n}")
    a = G.adjacency
    nb = np.nonzero(a[v])[0]
    block = a[np.ix_(nb, nb)] ^ 1
    np.fill_diagonal(block, 0)
    a[np.ix_(nb, nb)] = block
    return Graph.from_adjacency(a)


def graph_state_group(G: Graph) -> StabiliserGroup:
    """Generators ``K_j = X_j prod_k Z_k^{adj[j,k]}``."""
    a = G.adjacency
    gens = []
    for j in range(G.n):
        x = tuple(int(k == j) for k in range(G.n))
        gens.append(PauliElement(x, tuple(int(b) for b in a[j]), 0))
    return StabiliserGroup(tuple(gens))


# --------------------------------------------------------------------------
# local Clifford coset actions
# --------------------------------------------------------------------------

# coset representatives of the single-qubit Clifford group modulo the
# symmetry group of the target state (and Paulis).  "HS" applies S first.
COSETS = {"H": ("I", "H", "HS"), "T": ("I", "S")}


def _conj_h(x: int, z: int, phase: int) -> tuple[int, int, int]:
    # H X^x Z^z H = Z^x X^z = (-1)^{xz} X^z Z^x
    return z, x, phase + 2 * (x & z)


def _conj_s(x: int, z: int, phase: int) -> tuple[int, int, int]:
    # S X S^dag = Y = i X Z, S Z S^dag = Z
    return x, z ^ x, phase + x


_GATES = {"H": _conj_h, "S": _conj_s}


def conjugate_qubit(p: PauliElement, qubit: int, op: str) -> PauliElement:
    """Conjugate ``p`` on one qubit by ``I``, ``H``, ``S`` or a word like ``"HS"``.

    Words act right to left: ``"HS"`` is the unitary ``H S``, so ``S`` is applied first.
    """
    x, z = list(p.x), list(p.z)
    phase = p.phase
    for gate in reversed(op):
        if gate == "I":
            continue
        x[qubit], z[qubit], phase = _GATES[gate](x[qubit], z[qubit], phase)
    return PauliElement(tuple(x), tuple(z), phase)


@dataclass(frozen=True)
class LocalOpAssignment:
    """Per-qubit coset representative plus a Z pre-action sign bit."""

    mode: str
    ops: tuple[str, ...]
    signs: tuple[int, ...]

    def __post_init__(self):
        if self.mode not in COSETS:
            raise ValueError(f"unknown mode {self.mode!r}")
        object.__setattr__(self, "ops", tuple(self.ops))
        object.__setattr__(self, "signs", tuple(int(s) & 1 for s in self.signs))
        if len(self.ops) != len(self.signs):
            raise ValueError("ops and signs differ in length")
        bad = [o for o in self.ops if o not in COSETS[self.mode]]
        if bad:
            raise ValueError(f"ops {bad} not in the {self.mode}-mode alphabet {COSETS[self.mode]}")

    @property
    def n(self) -> int:
        return len(self.ops)

    @classmethod
    def from_indices(cls, mode: str, op_index: Sequence[int], sign_mask: int) -> LocalOpAssignment:
        alphabet = COSETS[mode]
        n = len(op_index)
        return cls(mode, tuple(alphabet[int(i)] for i in op_index),
                   tuple((sign_mask >> q) & 1 for q in range(n)))


def apply_local_assignment(S: StabiliserGroup, L: LocalOpAssignment) -> StabiliserGroup:
    """Apply ``Z`` on every qubit with a sign bit, then the per-qubit coset op."""
    if S.n != L.n:
        raise ValueError(f"assignment for {L.n} qubits applied to {S.n}-qubit group")
    gens = []
    for g in S.generators:
        flips = sum(s & xb for s, xb in zip(L.signs, g.x))
        g = PauliElement(g.x, g.z, g.phase + 2 * flips)
        for q, op in enumerate(L.ops):
            g = conjugate_qubit(g, q, op)
        gens.append(g)
    return StabiliserGroup(tuple(gens))


def letter_action(op: str) -> tuple[np.ndarray, np.ndarray]:
    """How a coset op permutes letters: ``(new_letter[l], sign[l])`` for l in I, X, Y, Z."""
    new = np.zeros(4, dtype=np.int8)
    sgn = np.zeros(4, dtype=np.int8)
    for ell in range(4):
        p = PauliElement.from_label("+" + LETTERS[ell])
        q = conjugate_qubit(p, 0, op)
        new[ell] = q.letters()[0]
        sgn[ell] = q.sign
    return new, sgn

"""
Vertices of the symmetry-projected stabiliser polytope.

Generation follows the graph-state route: for every connected orbit
representative, every per-qubit coset representative and every sign
pattern, compute the reduced enumerator of the state and keep the distinct
ones.  Product states are assembled from the lower-``n`` vertex sets by
convolution.  Finally the union is filtered down to its extreme points.

Sign patterns are handled in bulk.  A Z pre-action with bit mask ``s``
multiplies element ``u`` of a graph-state group by ``(-1)^{|u & s|}``, so the
enumerators of all ``2^n`` sign patterns form the Walsh-Hadamard transform of
the unsigned per-element contributions.
"""
from __future__ import annotations

import itertools
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .enumerator import ReducedEnumerator, check_mode, convolve, project
from .graphs import check_coverage, representatives
from .pauli import (
    COSETS,
    Graph,
    LocalOpAssignment,
    Z,
    apply_local_assignment,
    graph_state_group,
    group_arrays,
    letter_action,
)
from .simplex import INFEASIBLE, OPTIMAL, get_solver

log = logging.getLogger(__name__)

CACHE_VERSION = 1
MEMBERSHIP_TOL = 1e-9
CACHE_ENV = "MAGICROM_CACHE"


# --------------------------------------------------------------------------
# labels
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Connected:
    graph: Graph
    assignment: LocalOpAssignment

    def to_json(self) -> dict:
        return {"kind": "connected", "n": self.graph.n, "edges": [list(e) for e in self.graph.sorted_edges()],
                "ops": list(self.assignment.ops), "signs": list(self.assignment.signs)}


@dataclass(frozen=True)
class Product:
    # (qubit count, index into that level's vertex list)
    parts: tuple[tuple[int, int], ...]

    def to_json(self) -> dict:
        return {"kind": "product", "parts": [list(p) for p in self.parts]}


def label_from_json(d: dict, mode: str):
    if d["kind"] == "connected":
        G = Graph(d["n"], frozenset(tuple(e) for e in d["edges"]))
        return Connected(G, LocalOpAssignment(mode, tuple(d["ops"]), tuple(d["signs"])))
    if d["kind"] == "product":
        return Product(tuple((int(a), int(b)) for a, b in d["parts"]))
    raise ValueError(f"unknown label kind {d.get('kind')!r}")


@dataclass(frozen=True)
class LabeledVector:
    coords: ReducedEnumerator
    label: Connected | Product

    @property
    def connected(self) -> bool:
        return isinstance(self.label, Connected)


def recompute(label, mode: str, lower: dict | None = None) -> ReducedEnumerator:
    """Recompute coordinates from a label, independently of the bulk generator."""
    if isinstance(label, Connected):
        S = apply_local_assignment(graph_state_group(label.graph), label.assignment)
        return project(S, mode)
    out = None
    for m, idx in label.parts:
        v = lower[m].vertices[idx].coords
        out = v if out is None else convolve(out, v)
    return out


@dataclass
class ProjectedPolytope:
    n: int
    mode: str
    vertices: list[LabeledVector]
    all_points_count: int = 0
    connected_count: int = 0
    product_count: int = 0

    def matrix(self) -> np.ndarray:
        """Integer coordinates, one row per vertex."""
        return np.array([v.coords.coeffs for v in self.vertices], dtype=np.int64)

    def connected_vertices(self) -> list[LabeledVector]:
        return [v for v in self.vertices if v.connected]


# --------------------------------------------------------------------------
# connected projections
# --------------------------------------------------------------------------


def walsh_hadamard(f: np.ndarray) -> np.ndarray:
    """Unnormalised transform along the last axis: ``F[s] = sum_u f[u] (-1)^{|u & s|}``."""
    f = np.array(f)
    size = f.shape[-1]
    h = 1
    lead = f.shape[:-1]
    while h < size:
        g = f.reshape(*lead, size // (2 * h), 2, h)
        a = g[..., 0, :].copy()
        b = g[..., 1, :]
        g[..., 0, :] = a + b
        g[..., 1, :] = a - b
        f = g.reshape(*lead, size)
        h *= 2
    return f


def assignment_digits(mode: str, n: int, start: int = 0, stop: int | None = None) -> np.ndarray:
    """Coset index per qubit for assignments ``start..stop`` (qubit 0 is the lowest digit)."""
    K = len(COSETS[mode])
    if stop is None:
        stop = K**n
    a = np.arange(start, stop, dtype=np.int64)
    return ((a[:, None] // (K ** np.arange(n, dtype=np.int64))) % K).astype(np.intp)


def graph_projections(G: Graph, mode: str, chunk: int = 4096) -> tuple[np.ndarray, np.ndarray]:
    """Distinct reduced enumerators of all coset/sign decorations of one graph state.

    Returns ``(coords, index)``: coords is ``(k, n+1)`` int, index is ``(k, 2)``
    holding ``(assignment_number, sign_mask)`` of the first occurrence.
    """
    n = G.n
    letters, signs0 = group_arrays(graph_state_group(G))
    U = letters.shape[0]
    weight = (letters != 0).sum(axis=1)
    tables = [letter_action(op) for op in COSETS[mode]]
    new_letter = np.stack([t[0] for t in tables])
    flip = np.stack([t[1] for t in tables]) < 0
    K = len(tables)
    total = K**n
    dtype = np.int16 if n <= 13 else np.int32
    found_c, found_i = [], []
    for start in range(0, total, chunk):
        A = assignment_digits(mode, n, start, min(total, start + chunk))
        a = A.shape[0]
        idx_a = A[:, None, :]
        idx_l = letters[None, :, :]
        neg = flip[idx_a, idx_l].sum(axis=2) & 1
        sign = np.where(neg, -signs0[None, :], signs0[None, :]).astype(np.int32)
        if mode == "H":
            zfree = ~(new_letter[idx_a, idx_l] == Z).any(axis=2)
            cat = np.where(zfree, weight[None, :], -1)
        else:
            cat = np.broadcast_to(weight[None, :], (a, U))
        f = np.zeros((a, n + 2, U), dtype=np.int32)
        ai, ui = np.meshgrid(np.arange(a), np.arange(U), indexing="ij")
        f[ai, np.where(cat < 0, n + 1, cat), ui] = sign
        F = walsh_hadamard(f[:, : n + 1, :])
        rows = F.transpose(0, 2, 1).reshape(-1, n + 1).astype(dtype)
        uniq, first = np.unique(rows, axis=0, return_index=True)
        found_c.append(uniq)
        found_i.append(np.stack([start + first // U, first % U], axis=1))
    coords = np.concatenate(found_c)
    index = np.concatenate(found_i)
    uniq, first = np.unique(coords, axis=0, return_index=True)
    return uniq.astype(np.int64), index[first]


def _graph_job(args):
    G, mode = args
    return graph_projections(G, mode)


def connected_projections(n: int, mode: str, catalog=None, jobs: int = 1) -> list[LabeledVector]:
    """Distinct projections of fully entangled ``n``-qubit stabiliser states."""
    check_mode(mode)
    graphs = representatives(n, catalog)
    if jobs > 1 and len(graphs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_graph_job, [(G, mode) for G in graphs]))
    else:
        results = [graph_projections(G, mode) for G in graphs]
    coords = np.concatenate([r[0] for r in results])
    which = np.concatenate([np.full(len(r[0]), gi) for gi, r in enumerate(results)])
    index = np.concatenate([r[1] for r in results])
    uniq, first = np.unique(coords, axis=0, return_index=True)
    out = []
    for row, k in zip(uniq, first):
        G = graphs[int(which[k])]
        a, s = index[k]
        ops = assignment_digits(mode, n, int(a), int(a) + 1)[0]
        label = Connected(G, LocalOpAssignment.from_indices(mode, ops, int(s)))
        out.append(LabeledVector(ReducedEnumerator(n, mode, tuple(int(v) for v in row)), label))
    return out


# --------------------------------------------------------------------------
# products
# --------------------------------------------------------------------------


def partitions(n: int, max_part: int | None = None, min_parts: int = 1):
    """Partitions of ``n`` as descending tuples, in lexicographically descending order."""
    if max_part is None:
        max_part = n

    def rec(rem, cap):
        if rem == 0:
            yield ()
            return
        for p in range(min(rem, cap), 0, -1):
            for rest in rec(rem - p, p):
                yield (p,) + rest

    return [p for p in rec(n, max_part) if len(p) >= min_parts]


def partition_products(n: int, mode: str, vertex_sets: dict, max_part: int, min_parts: int = 1,
                       only_connected: bool = False) -> list[LabeledVector]:
    """Distinct convolutions over all partitions of ``n`` with parts ``<= max_part``.

    ``vertex_sets`` maps a qubit count to a :class:`ProjectedPolytope` (or any
    object with a ``vertices`` list).  Factors of equal size are combined as
    multisets.
    """
    found: dict[tuple, LabeledVector] = {}
    for part in partitions(n, max_part, min_parts):
        pools = []
        for size in sorted(set(part), reverse=True):
            if size not in vertex_sets:
                raise KeyError(f"missing vertex set for n={size}")
            verts = vertex_sets[size].vertices
            idx = [i for i, v in enumerate(verts) if v.connected or not only_connected]
            pools.append([(size, c) for c in itertools.combinations_with_replacement(idx, part.count(size))])
        for choice in itertools.product(*pools):
            refs = tuple((size, i) for size, combo in choice for i in combo)
            poly = np.array([1], dtype=object)
            for size, i in refs:
                poly = np.convolve(poly, np.asarray(vertex_sets[size].vertices[i].coords.coeffs, dtype=object))
            key = tuple(int(v) for v in poly)
            if key not in found:
                found[key] = LabeledVector(ReducedEnumerator(n, mode, key), Product(refs))
    return [found[k] for k in sorted(found)]


def product_projections(n: int, mode: str, vertex_sets: dict) -> list[LabeledVector]:
    """Projections of product states built from extremal lower-``n`` vertices."""
    check_mode(mode)
    if n < 2:
        return []
    return partition_products(n, mode, vertex_sets, max_part=n - 1, min_parts=2)


# --------------------------------------------------------------------------
# extreme points
# --------------------------------------------------------------------------


@dataclass
class Membership:
    inside: bool
    weights: np.ndarray | None = None
    # functional h with h.p > h.q for all q when outside (homogeneous coords)
    separator: np.ndarray | None = None


def membership_lp(p, Q, solver: str = "simplex", tol: float = MEMBERSHIP_TOL) -> Membership:
    """Decide ``p in conv(Q)``; coordinate 0 of every point must be the affine 1."""
    p = np.asarray(p, dtype=float)
    Q = np.asarray(Q, dtype=float)
    if Q.ndim != 2 or Q.shape[1] != p.shape[0]:
        raise ValueError("dimension mismatch between p and Q")
    if not (np.all(Q[:, 0] == 1) and p[0] == 1):
        raise ValueError("coordinate 0 must be the affine coordinate 1")
    A = Q.T
    if solver == "simplex":
        res = get_solver("simplex")(np.zeros(len(Q)), A, p, feas_tol=tol)
        if res.status == OPTIMAL:
            return Membership(True, weights=res.x)
        if res.status == INFEASIBLE:
            return Membership(False, separator=res.certificate)
        raise RuntimeError(f"membership LP ended with status {res.status}")
    res = get_solver(solver)(np.zeros(len(Q)), A, p)
    if res.status == OPTIMAL:
        return Membership(True, weights=res.x)
    return Membership(False)


def _lexmax(P: np.ndarray, rows: np.ndarray) -> int:
    sub = P[rows]
    order = np.lexsort(sub.T[::-1])
    return int(rows[order[-1]])


def _argmax_vertex(P: np.ndarray, direction: np.ndarray) -> int:
    vals = P @ direction
    best = vals.max()
    scale = max(1.0, float(np.abs(vals).max()))
    rows = np.nonzero(vals >= best - 1e-9 * scale)[0]
    return _lexmax(P, rows)


def extremal_filter(points, seed: int = 0, solver: str = "simplex") -> np.ndarray:
    """Indices (sorted) of the extreme points among ``points``.

    Frame algorithm: keep a growing set of extreme points; a candidate inside
    the hull of the frame is discarded, otherwise the separating functional
    of the failed membership test is maximised over all points and the
    maximiser joins the frame.  A final pass removes any frame point that the
    rest of the frame covers.  ``points`` must be distinct, coordinate 0 the
    affine 1.
    """
    P = np.asarray(points)
    if P.ndim != 2:
        raise ValueError("points must be a 2-d array")
    N, d1 = P.shape
    if N == 0:
        raise ValueError("no points")
    if not np.all(P[:, 0] == 1):
        raise ValueError("coordinate 0 must be the affine coordinate 1")
    Pf = P.astype(float)
    if N <= d1:
        frame = set(range(N))
    else:
        rng = np.random.default_rng(seed)
        frame = set()
        for k in range(1, d1):
            for s in (1.0, -1.0):
                e = np.zeros(d1)
                e[k] = s
                frame.add(_argmax_vertex(Pf, e))
        for _ in range(4 * d1):
            dvec = np.concatenate([[0.0], rng.integers(-1000, 1001, d1 - 1).astype(float)])
            frame.add(_argmax_vertex(Pf, dvec))
        for i in range(N):
            if i in frame:
                continue
            while True:
                F = sorted(frame)
                lo, hi = Pf[F].min(axis=0), Pf[F].max(axis=0)
                out_k = np.nonzero((Pf[i] < lo - 1e-12) | (Pf[i] > hi + 1e-12))[0]
                if out_k.size:
                    k = int(out_k[0])
                    h = np.zeros(d1)
                    h[k] = 1.0 if Pf[i, k] > hi[k] else -1.0
                else:
                    mem = membership_lp(Pf[i], Pf[F], solver=solver)
                    if mem.inside:
                        break
                    h = mem.separator
                    if h is None:
                        frame.add(i)
                        break
                    h = h.copy()
                    h[0] = 0.0
                j = _argmax_vertex(Pf, h)
                if j in frame:
                    # separator too weak to expose a new point; the candidate itself is outside
                    frame.add(i)
                    break
                frame.add(j)
                if j == i:
                    break
    # cleanup: drop frame points covered by the other frame points
    F = sorted(frame)
    keep = []
    for i in F:
        others = [j for j in F if j != i]
        if others and membership_lp(Pf[i], Pf[others], solver=solver).inside:
            continue
        keep.append(i)
    if len(keep) != len(F):
        # removals can cascade only if two removed points covered each other; re-check
        return np.array(sorted(_naive_on(Pf, keep, solver)), dtype=np.intp)
    return np.array(keep, dtype=np.intp)


def _naive_on(Pf, idx, solver):
    keep = []
    for i in idx:
        others = [j for j in idx if j != i]
        if others and membership_lp(Pf[i], Pf[others], solver=solver).inside:
            continue
        keep.append(i)
    return keep


def naive_extremal_filter(points, solver: str = "highs") -> np.ndarray:
    """Reference filter: a point is extreme iff it is not in the hull of all the others."""
    Pf = np.asarray(points, dtype=float)
    return np.array(_naive_on(Pf, list(range(len(Pf))), solver), dtype=np.intp)


def filter_polytope(n: int, mode: str, connected: list[LabeledVector],
                    products: list[LabeledVector]) -> ProjectedPolytope:
    merged: dict[tuple, LabeledVector] = {}
    for v in connected + products:
        merged.setdefault(v.coords.coeffs, v)  # connected labels take precedence
    keys = sorted(merged)
    P = np.array(keys, dtype=np.int64)
    keep = extremal_filter(P)
    verts = [merged[keys[i]] for i in keep]
    return ProjectedPolytope(n, mode, verts, all_points_count=len(connected) + len(products),
                             connected_count=len(connected), product_count=len(products))


# --------------------------------------------------------------------------
# cache
# --------------------------------------------------------------------------


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "magicrom"


def cache_path(cache_dir, mode: str, n: int) -> Path:
    return Path(cache_dir) / f"vertices_{mode}{n}.jsonl"


def save_polytope(P: ProjectedPolytope, cache_dir) -> Path:
    cache_dir = Path(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    path = cache_path(cache_dir, P.mode, P.n)
    lines = [json.dumps({"n": P.n, "mode": P.mode, "coeffs": list(v.coords.coeffs), "label": v.label.to_json()},
                        separators=(",", ":")) for v in P.vertices]
    tmp = path.with_suffix(".tmp")
    tmp.write_text("\n".join(lines) + "\n")
    tmp.replace(path)
    meta = {"version": CACHE_VERSION, "n": P.n, "mode": P.mode, "convention": "integer-enumerators",
            "vertices": len(P.vertices), "connected": P.connected_count, "products": P.product_count}
    path.with_suffix(".meta.json").write_text(json.dumps(meta, indent=1) + "\n")
    return path


class CacheError(RuntimeError):
    pass


def load_polytope(cache_dir, mode: str, n: int) -> ProjectedPolytope:
    path = cache_path(cache_dir, mode, n)
    meta_path = path.with_suffix(".meta.json")
    if not path.is_file() or not meta_path.is_file():
        raise FileNotFoundError(path)
    meta = json.loads(meta_path.read_text())
    if meta.get("version") != CACHE_VERSION or meta.get("mode") != mode or meta.get("n") != n:
        raise CacheError(f"{path}: cache version or header mismatch")
    verts = []
    for lineno, line in enumerate(path.read_text().splitlines(), 1):
        if not line.strip():
            continue
        rec = json.loads(line)
        if rec["n"] != n or rec["mode"] != mode:
            raise CacheError(f"{path}:{lineno}: record for {rec['mode']}{rec['n']}")
        coords = ReducedEnumerator(n, mode, tuple(rec["coeffs"]))
        verts.append(LabeledVector(coords, label_from_json(rec["label"], mode)))
    if len(verts) != meta["vertices"]:
        raise CacheError(f"{path}: expected {meta['vertices']} vertices, found {len(verts)}")
    return ProjectedPolytope(n, mode, verts, all_points_count=meta["connected"] + meta["products"],
                             connected_count=meta["connected"], product_count=meta["products"])


def verify_polytope(P: ProjectedPolytope, lower: dict) -> list[str]:
    """Recompute every vertex from its label; returns a list of problems."""
    problems = []
    for k, v in enumerate(P.vertices):
        if v.coords.coeffs[0] != 1:
            problems.append(f"{P.mode}{P.n} vertex {k}: affine coordinate is {v.coords.coeffs[0]}")
        try:
            got = recompute(v.label, P.mode, lower)
        except (KeyError, IndexError, ValueError) as exc:
            problems.append(f"{P.mode}{P.n} vertex {k}: label does not resolve ({exc})")
            continue
        if got.coeffs != v.coords.coeffs:
            problems.append(f"{P.mode}{P.n} vertex {k}: label gives {got.coeffs}, stored {v.coords.coeffs}")
    if len({v.coords.coeffs for v in P.vertices}) != len(P.vertices):
        problems.append(f"{P.mode}{P.n}: duplicate vertex coordinates")
    return problems


# --------------------------------------------------------------------------
# driver
# --------------------------------------------------------------------------


def build_polytope(n: int, mode: str, catalog=None, cache_dir=None, jobs: int = 1,
                   _levels: dict | None = None) -> ProjectedPolytope:
    """Vertex set for ``n`` qubits, building or loading every lower level first.

    With ``cache_dir=None`` nothing is read or written.
    """
    check_mode(mode)
    levels = {} if _levels is None else _levels
    return build_levels(n, mode, catalog, cache_dir, jobs, levels)[n]


def build_levels(n: int, mode: str, catalog=None, cache_dir=None, jobs: int = 1,
                 levels: dict | None = None) -> dict[int, ProjectedPolytope]:
    """All vertex sets ``1..n``."""
    check_mode(mode)
    levels = {} if levels is None else levels
    for m in range(1, n + 1):
        if m not in levels and (cache_dir is None or not cache_path(cache_dir, mode, m).is_file()):
            check_coverage(m, catalog)
    for m in range(1, n + 1):
        if m in levels:
            continue
        if cache_dir is not None:
            try:
                levels[m] = load_polytope(cache_dir, mode, m)
                continue
            except FileNotFoundError:
                pass
            except CacheError as exc:
                log.warning("rebuilding: %s", exc)
        conn = connected_projections(m, mode, catalog, jobs=jobs)
        prods = product_projections(m, mode, levels)
        levels[m] = filter_polytope(m, mode, conn, prods)
        log.info("%s%d: connected=%d products=%d vertices=%d", mode, m, len(conn), len(prods),
                 len(levels[m].vertices))
        if cache_dir is not None:
            save_polytope(levels[m], cache_dir)
    return levels

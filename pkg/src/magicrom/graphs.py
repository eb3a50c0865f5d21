"""
Connected graph representatives up to local complementation and relabelling.

Every stabiliser state is a local Clifford image of a graph state, and two
graph states are local-Clifford equivalent exactly when their graphs are
related by local complementations.  Combined with qubit permutations this
leaves one connected graph per orbit to enumerate.

For ``n <= 6`` the orbits are found by brute force over all labelled graphs.
Larger catalogs are generated by attaching a new vertex to representatives of
all (possibly disconnected) ``n-1`` vertex orbits, which reaches every orbit,
and are shipped as text files in ``magicrom/data``.
"""
from __future__ import annotations

import ast
import itertools
import re
import warnings
from collections import deque
from functools import cache
from importlib import resources
from pathlib import Path

import numpy as np

from .pauli import Graph, local_complement

try:  # optional fast canonical labelling
    import pynauty
except ImportError:  # pragma: no cover - exercised only without the extra
    pynauty = None

BRUTE_FORCE_MAX = 6
ORBIT_WALK_MAX = 8
BUNDLED = (7, 8, 9)

_LINE = re.compile(r"^\s*n\s*=\s*(\d+)\s*;\s*edges\s*=\s*(\[.*\])\s*$")


class CatalogError(ValueError):
    pass


# --------------------------------------------------------------------------
# canonical forms
# --------------------------------------------------------------------------


@cache
def _perms(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=np.intp)


def _upper(n: int):
    return np.triu_indices(n, 1)


def _bits_to_int(bits: np.ndarray) -> np.ndarray:
    # big-endian: first upper-triangle entry is the most significant bit
    m = bits.shape[-1]
    w = (np.int64(1) << np.arange(m - 1, -1, -1, dtype=np.int64))
    return bits.astype(np.int64) @ w


def lexmin_key(adj: np.ndarray, perms: np.ndarray | None = None) -> tuple[int, np.ndarray]:
    """Smallest upper-triangle bit string over vertex permutations, and the permutation."""
    n = adj.shape[0]
    if n == 1:
        return 0, np.zeros(1, dtype=np.intp)
    if perms is None:
        perms = _perms(n)
    iu, ju = _upper(n)
    bits = adj[perms[:, iu], perms[:, ju]]
    vals = _bits_to_int(bits)
    k = int(np.argmin(vals))
    return int(vals[k]), perms[k]


def _refined_cells(adj: np.ndarray) -> list[list[int]]:
    """Colour refinement, cells listed in an isomorphism-invariant order."""
    n = adj.shape[0]
    colour = [0] * n
    while True:
        sig = [(colour[v], tuple(sorted(colour[w] for w in np.nonzero(adj[v])[0]))) for v in range(n)]
        ranks = {s: r for r, s in enumerate(sorted(set(sig)))}
        new = [ranks[s] for s in sig]
        if len(set(new)) == len(set(colour)):
            colour = new
            break
        colour = new
    cells: dict[int, list[int]] = {}
    for v, c in enumerate(colour):
        cells.setdefault(c, []).append(v)
    return [cells[c] for c in sorted(cells)]


def _refined_key(adj: np.ndarray) -> tuple:
    cells = _refined_cells(adj)
    choices = [list(itertools.permutations(c)) for c in cells]
    perms = np.array([sum(p, ()) for p in itertools.product(*choices)], dtype=np.intp)
    val, _ = lexmin_key(adj, perms)
    return (tuple(len(c) for c in cells), val)


def canonical_key(G: Graph):
    """Hashable isomorphism invariant that is complete (equal iff isomorphic)."""
    n = G.n
    adj = G.adjacency
    if n <= 7:
        return (n, lexmin_key(adj)[0])
    if pynauty is not None:
        g = pynauty.Graph(n, adjacency_dict={v: [int(w) for w in np.nonzero(adj[v])[0]] for v in range(n)})
        return (n, pynauty.certificate(g))
    return (n, _refined_key(adj))


def lexmin_graph(G: Graph) -> Graph:
    """Relabelling of ``G`` with the lexicographically smallest adjacency."""
    _, p = lexmin_key(G.adjacency)
    a = G.adjacency[np.ix_(p, p)]
    return Graph.from_adjacency(a)


# --------------------------------------------------------------------------
# orbits
# --------------------------------------------------------------------------


def lc_orbit(G: Graph, limit: int | None = None) -> dict:
    """Breadth-first walk of the orbit under local complementation and relabelling.

    Returns ``{canonical_key: graph}`` with one graph per isomorphism class.
    """
    start = canonical_key(G)
    seen = {start: G}
    queue = deque([G])
    while queue:
        H = queue.popleft()
        for v in range(H.n):
            K = local_complement(H, v)
            key = canonical_key(K)
            if key not in seen:
                seen[key] = K
                queue.append(K)
                if limit is not None and len(seen) >= limit:
                    return seen
    return seen


def graph_orbit_equal(G1: Graph, G2: Graph) -> bool:
    if G1.n != G2.n:
        return False
    if G1.n > ORBIT_WALK_MAX:
        raise ValueError(f"exhaustive orbit walk limited to n <= {ORBIT_WALK_MAX}")
    if G1.is_connected() != G2.is_connected():
        return False
    return canonical_key(G2) in lc_orbit(G1)


def orbit_key(G: Graph):
    """Smallest canonical key over the orbit; equal iff the graphs are orbit-equivalent."""
    return min(lc_orbit(G))


def _all_labelled(n: int) -> np.ndarray:
    m = n * (n - 1) // 2
    codes = np.arange(2**m, dtype=np.int64)
    bits = ((codes[:, None] >> np.arange(m - 1, -1, -1)) & 1).astype(np.uint8)
    return bits


@cache
def enumerate_representatives(n: int) -> tuple[Graph, ...]:
    """One connected graph per orbit, found by closing over every labelled graph.

    The representative is the orbit member with the smallest adjacency bit string.
    """
    if not 1 <= n <= BRUTE_FORCE_MAX:
        raise ValueError(f"brute-force enumeration supports 1 <= n <= {BRUTE_FORCE_MAX}")
    if n == 1:
        return (Graph(1, frozenset()),)
    iu, ju = _upper(n)
    perms = _perms(n)
    bits = _all_labelled(n)
    # canonical key for every labelled graph, in chunks
    keys = np.empty(len(bits), dtype=np.int64)
    for start in range(0, len(bits), 512):
        chunk = bits[start:start + 512]
        adj = np.zeros((len(chunk), n, n), dtype=np.uint8)
        adj[:, iu, ju] = chunk
        adj[:, ju, iu] = chunk
        pb = adj[:, perms[:, iu], perms[:, ju]]
        keys[start:start + 512] = _bits_to_int(pb).min(axis=1)
    classes = np.unique(keys)
    index = {int(k): i for i, k in enumerate(classes)}
    parent = list(range(len(classes)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def graph_of(key: int) -> Graph:
        b = (key >> np.arange(len(iu) - 1, -1, -1)) & 1
        a = np.zeros((n, n), dtype=np.uint8)
        a[iu, ju] = b
        a[ju, iu] = b
        return Graph.from_adjacency(a)

    for k in classes:
        G = graph_of(int(k))
        for v in range(n):
            kk = lexmin_key(local_complement(G, v).adjacency, perms)[0]
            ra, rb = find(index[int(k)]), find(index[kk])
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    reps = {}
    for k in classes:
        root = find(index[int(k)])
        reps.setdefault(root, int(k))  # classes are sorted, so first hit is the minimum
    out = [graph_of(k) for k in sorted(reps.values())]
    return tuple(G for G in out if G.is_connected())


# --------------------------------------------------------------------------
# catalog generation by vertex extension
# --------------------------------------------------------------------------


def _disjoint_union(parts: list[Graph]) -> Graph:
    edges = []
    off = 0
    for P in parts:
        edges += [(a + off, b + off) for a, b in P.edges]
        off += P.n
    return Graph(off, frozenset(edges))


def all_orbit_representatives(n: int, connected: dict[int, tuple[Graph, ...]]) -> list[Graph]:
    """Representatives of every orbit on ``n`` vertices, connected or not."""
    out = []

    def parts_of(rem, max_part):
        if rem == 0:
            yield []
            return
        for p in range(min(rem, max_part), 0, -1):
            for rest in parts_of(rem - p, p):
                yield [p] + rest

    for partition in parts_of(n, n):
        pools = []
        for size, mult in sorted({p: partition.count(p) for p in partition}.items(), reverse=True):
            pools.append(list(itertools.combinations_with_replacement(connected[size], mult)))
        for choice in itertools.product(*pools):
            out.append(_disjoint_union([g for group in choice for g in group]))
    return out


def extend_catalog(n: int, connected: dict[int, tuple[Graph, ...]],
                   walk_limit: int | None = None) -> list[Graph]:
    """Connected orbit representatives on ``n`` vertices from those on fewer vertices.

    With ``walk_limit`` the orbit walks are truncated, which can only leave
    duplicate orbits in the output, never drop one.
    """
    known: dict = {}
    reps = []
    for R in all_orbit_representatives(n - 1, connected):
        adj = R.adjacency
        for mask in range(1, 2 ** (n - 1)):
            a = np.zeros((n, n), dtype=np.uint8)
            a[:n - 1, :n - 1] = adj
            nb = [(mask >> q) & 1 for q in range(n - 1)]
            a[n - 1, :n - 1] = nb
            a[:n - 1, n - 1] = nb
            G = Graph.from_adjacency(a)
            if not G.is_connected():
                continue
            key = canonical_key(G)
            if key in known:
                continue
            orbit = lc_orbit(G, limit=walk_limit)
            hits = {known[k] for k in orbit if k in known}
            if hits:
                oid = min(hits)
            else:
                oid = len(reps)
                reps.append(G)
            for k in orbit:
                known.setdefault(k, oid)
    return reps


# --------------------------------------------------------------------------
# catalog files
# --------------------------------------------------------------------------


def format_graph(G: Graph) -> str:
    edges = ",".join(f"({a},{b})" for a, b in G.sorted_edges())
    return f"n={G.n}; edges=[{edges}]"


def write_catalog(path, graphs, comment: str | None = None) -> None:
    lines = []
    if comment:
        lines += [f"# {c}" for c in comment.splitlines()]
    lines += [format_graph(G) for G in graphs]
    Path(path).write_text("\n".join(lines) + "\n")


def parse_catalog(text: str, source: str = "<catalog>") -> list[Graph]:
    graphs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE.match(line)
        if not m:
            raise CatalogError(f"{source}:{lineno}: expected 'n=<int>; edges=[(a,b),...]', got {raw!r}")
        n = int(m.group(1))
        try:
            edges = ast.literal_eval(m.group(2))
            G = Graph(n, frozenset(tuple(e) for e in edges))
        except (ValueError, SyntaxError, TypeError) as exc:
            raise CatalogError(f"{source}:{lineno}: {exc}") from None
        if not G.is_connected():
            raise CatalogError(f"{source}:{lineno}: graph is disconnected")
        graphs.append(G)
    return graphs


def dedupe_orbits(graphs: list[Graph], source: str = "<catalog>") -> list[Graph]:
    out, seen = [], set()
    for G in graphs:
        key = orbit_key(G) if G.n <= ORBIT_WALK_MAX else canonical_key(G)
        if key in seen:
            warnings.warn(f"{source}: duplicate orbit entry {format_graph(G)} dropped", stacklevel=3)
            continue
        seen.add(key)
        out.append(G)
    return out


def load_catalog(path) -> list[Graph]:
    path = Path(path)
    graphs = parse_catalog(path.read_text(), str(path))
    return dedupe_orbits(graphs, str(path))


def bundled_catalog(n: int) -> list[Graph]:
    name = f"graphs_n{n}.txt"
    data = resources.files("magicrom") / "data" / name
    if not data.is_file():
        raise CatalogError(f"no bundled catalog for n={n}; pass a catalog file covering n={n}")
    graphs = parse_catalog(data.read_text(), name)
    bad = [G for G in graphs if G.n != n]
    if bad:
        raise CatalogError(f"{name}: contains a graph with n={bad[0].n}")
    return graphs


def check_coverage(n: int, catalog=None) -> None:
    """Raise :class:`CatalogError` unless representatives for ``n`` are obtainable."""
    if n <= BRUTE_FORCE_MAX:
        return
    if catalog is not None:
        graphs = load_catalog(catalog) if isinstance(catalog, (str, Path)) else list(catalog)
        if any(G.n == n for G in graphs):
            return
    if not (resources.files("magicrom") / "data" / f"graphs_n{n}.txt").is_file():
        raise CatalogError(f"no graph catalog covers n={n}; pass --catalog with connected LC-orbit "
                           f"representatives for n={n} (see tools/generate_catalogs.py)")


def representatives(n: int, catalog=None) -> list[Graph]:
    """Connected representatives for ``n`` qubits.

    ``catalog`` may be a path or a list of graphs; graphs of other sizes in it
    are ignored.  Without one, brute force is used up to six vertices and the
    bundled files above that.
    """
    if catalog is not None:
        graphs = load_catalog(catalog) if isinstance(catalog, (str, Path)) else list(catalog)
        mine = [G for G in graphs if G.n == n]
        if mine:
            return mine
        if n > BRUTE_FORCE_MAX and n not in BUNDLED:
            raise CatalogError(f"catalog has no graphs with n={n}")
    if n <= BRUTE_FORCE_MAX:
        return list(enumerate_representatives(n))
    return bundled_catalog(n)

"""Problem-instance graphs, exact combinatorial oracles, and the hypercube
walk graph used by the coin-controlled ansatz.

Vertices are 0-based.  Edges are stored canonically as (u, v, w) with
u < v, no self-loops and no duplicates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import CapacityError, ParameterError

ORACLE_VERTEX_CAP = 24


@dataclass(frozen=True)
class Graph:
    """Undirected weighted graph."""

    n_vertices: int
    edges: tuple  # of (u, v, w)

    def __post_init__(self):
        if self.n_vertices < 1:
            raise ParameterError("graph needs at least one vertex")
        seen = set()
        for u, v, w in self.edges:
            if not (0 <= u < v < self.n_vertices):
                raise ParameterError(f"edge ({u},{v}) violates 0 <= u < v < n")
            if (u, v) in seen:
                raise ParameterError(f"duplicate edge ({u},{v})")
            seen.add((u, v))

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def total_weight(self) -> float:
        return float(sum(w for _, _, w in self.edges))

    def is_connected(self) -> bool:
        if self.n_vertices == 1:
            return True
        adj = [[] for _ in range(self.n_vertices)]
        for u, v, _ in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        seen = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == self.n_vertices


def make_graph(n_vertices, edge_list):
    """Build a Graph from (u, v) or (u, v, w) tuples, canonicalizing order."""
    edges = []
    for e in edge_list:
        if len(e) == 2:
            u, v = e
            w = 1.0
        else:
            u, v, w = e
        if u > v:
            u, v = v, u
        edges.append((int(u), int(v), float(w)))
    edges.sort()
    return Graph(n_vertices, tuple(edges))


def random_connected_graph(n: int, m_min: int, m_max: int, seed: int) -> Graph:
    """Uniformly sample a connected unweighted graph.

    The edge count m is drawn uniformly from [m_min, m_max]; the m-edge set
    is drawn uniformly and rejected until connected.  Deterministic for a
    fixed seed.
    """
    if n < 2:
        raise ParameterError("need n >= 2")
    max_edges = n * (n - 1) // 2
    if not (n - 1 <= m_min <= m_max <= max_edges):
        raise ParameterError(
            f"edge bounds must satisfy n-1 <= m_min <= m_max <= {max_edges}"
        )
    rng = np.random.Generator(np.random.PCG64(seed))
    pairs = list(combinations(range(n), 2))
    while True:
        m = int(rng.integers(m_min, m_max + 1))
        idx = rng.choice(len(pairs), size=m, replace=False)
        g = make_graph(n, [pairs[i] for i in sorted(idx)])
        if g.is_connected():
            return g


def _check_oracle_cap(g: Graph):
    if g.n_vertices > ORACLE_VERTEX_CAP:
        raise CapacityError(
            f"brute-force oracle capped at {ORACLE_VERTEX_CAP} vertices"
        )


def max_cut_value(g: Graph) -> float:
    """Exact maximum cut weight by enumeration over all bipartitions."""
    _check_oracle_cap(g)
    x = np.arange(1 << g.n_vertices, dtype=np.int64)
    cut = np.zeros(x.shape, dtype=float)
    for u, v, w in g.edges:
        cut += w * (((x >> u) ^ (x >> v)) & 1)
    return float(cut.max())


def mis_optimum(g: Graph) -> int:
    """Size of a maximum independent set (branch and bound)."""
    _check_oracle_cap(g)
    n = g.n_vertices
    nbr = [0] * n
    for u, v, _ in g.edges:
        nbr[u] |= 1 << v
        nbr[v] |= 1 << u
    best = 0

    def grow(candidates: int, size: int):
        nonlocal best
        if size + candidates.bit_count() <= best:
            return
        if candidates == 0:
            best = max(best, size)
            return
        v = (candidates & -candidates).bit_length() - 1
        # include v
        grow(candidates & ~((1 << v) | nbr[v]), size + 1)
        # exclude v
        grow(candidates & ~(1 << v), size)

    grow((1 << n) - 1, 0)
    return best


@dataclass(frozen=True)
class WalkGraph:
    """Hypercube walk graph: label-0 Hamming-distance-1 edges and a label-1
    self-loop of weight equal to the objective value at each vertex."""

    base: Graph
    self_loops: tuple  # weight per vertex, index order
    edge_labels: dict = field(default_factory=dict)  # (u, v) -> label

    @property
    def n_qubits(self) -> int:
        return int(self.base.n_vertices).bit_length() - 1


def hypercube_walk_graph(energies) -> WalkGraph:
    """Build the n-cube walk graph whose adjacency realizes the transverse
    mixer and whose self-loop weights carry the diagonal objective."""
    energies = np.asarray(energies, dtype=float)
    dim = len(energies)
    n = dim.bit_length() - 1
    if dim != 1 << n or dim < 2:
        raise ParameterError("diagonal length must be a power of two >= 2")
    if n > 12:
        raise CapacityError("walk graph capped at 12 qubits")
    edges = []
    labels = {}
    for x in range(dim):
        for i in range(n):
            y = x ^ (1 << i)
            if x < y:
                edges.append((x, y, 1.0))
                labels[(x, y)] = 0
    base = make_graph(dim, edges)
    return WalkGraph(base, tuple(float(e) for e in energies), labels)


def save_edgelist(g: Graph, path):
    """Plain-text edge list: first line "n m", then "u v w" per edge."""
    lines = [f"{g.n_vertices} {g.n_edges}"]
    for u, v, w in g.edges:
        lines.append(f"{u} {v} {w!r}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_edgelist(path) -> Graph:
    with open(path) as fh:
        tokens = fh.read().split("\n")
    n, m = (int(t) for t in tokens[0].split())
    edges = []
    for line in tokens[1 : m + 1]:
        u, v, w = line.split()
        edges.append((int(u), int(v), float(w)))
    return make_graph(n, edges)

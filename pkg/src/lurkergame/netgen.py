"""Network generation and structural metrics.

Graphs are stored in compressed sparse row form (``indptr``/``indices``) so the
numba kernels in :mod:`lurkergame.engine` and the metric routines below can use
them without conversion.
"""

import enum
import io
from dataclasses import dataclass

import numba
import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import DisconnectedGraphError, SpecificationError

__all__ = [
    "Graph",
    "NetworkModel",
    "NetworkSpec",
    "generate",
    "generate_ws",
    "generate_ba",
    "generate_complete",
    "avg_path_length",
    "diameter",
    "path_stats",
    "clustering_coefficient",
    "transitivity",
    "n_components",
    "write_edgelist",
    "read_edgelist",
]

WS_MAX_RETRIES = 100


class Graph:
    """Immutable undirected simple graph on nodes ``0..node_count-1``.

    Parameters
    ----------
    node_count : int
    indptr, indices : array_like
        CSR adjacency. Each node's neighbor slice must be sorted.
    """

    __slots__ = ("node_count", "indptr", "indices", "edges", "edge_ids")

    def __init__(self, node_count, indptr, indices):
        node_count = int(node_count)
        if node_count < 1:
            raise SpecificationError("node_count must be positive")
        indptr = np.ascontiguousarray(indptr, dtype=np.int64)
        indices = np.ascontiguousarray(indices, dtype=np.int64)
        if indptr.shape != (node_count + 1,) or indptr[-1] != indices.size:
            raise SpecificationError("inconsistent CSR arrays")
        edges, edge_ids = _edge_table(indptr, indices)
        for arr in (indptr, indices, edges, edge_ids):
            arr.flags.writeable = False
        object.__setattr__(self, "node_count", node_count)
        object.__setattr__(self, "indptr", indptr)
        object.__setattr__(self, "indices", indices)
        # edges[e] = (u, v) with u < v, sorted; edge_ids is aligned with indices
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "edge_ids", edge_ids)

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    @classmethod
    def from_edges(cls, node_count, edges):
        """Build a graph from an iterable of ``(u, v)`` pairs.

        Self-loops and duplicate pairs are rejected rather than dropped.
        """
        e = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                       dtype=np.int64).reshape(-1, 2)
        if e.size and (e.min() < 0 or e.max() >= node_count):
            raise SpecificationError("edge endpoint out of range")
        if np.any(e[:, 0] == e[:, 1]):
            raise SpecificationError("self-loop in edge list")
        lo = np.minimum(e[:, 0], e[:, 1])
        hi = np.maximum(e[:, 0], e[:, 1])
        keys = lo * node_count + hi
        if np.unique(keys).size != keys.size:
            raise SpecificationError("duplicate edge in edge list")
        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        indptr = np.zeros(node_count + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=node_count), out=indptr[1:])
        return cls(node_count, indptr, dst)

    @classmethod
    def from_adjacency(cls, adjacency):
        """Build a graph from a sequence of neighbor collections."""
        n = len(adjacency)
        edges = [(u, v) for u, nbrs in enumerate(adjacency) for v in nbrs if u < v]
        g = cls.from_edges(n, edges)
        degs = np.array([len(set(a)) for a in adjacency], dtype=np.int64)
        if not np.array_equal(degs, g.degrees):
            raise SpecificationError("adjacency is not symmetric")
        return g

    @property
    def n_edges(self):
        return self.edges.shape[0]

    @property
    def degrees(self):
        return np.diff(self.indptr)

    @property
    def adjacency(self):
        """Per-node sorted neighbor arrays (read-only views)."""
        return [self.neighbors(i) for i in range(self.node_count)]

    def neighbors(self, i):
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def degree(self, i):
        return int(self.indptr[i + 1] - self.indptr[i])

    def validate(self):
        """Check symmetry, simplicity and sorted neighbor lists; raise on failure."""
        n = self.node_count
        for i in range(n):
            nb = self.neighbors(i)
            if nb.size and (nb[0] < 0 or nb[-1] >= n):
                raise SpecificationError(f"node {i}: neighbor id out of range")
            if np.any(np.diff(nb) <= 0):
                raise SpecificationError(f"node {i}: neighbors unsorted or duplicated")
            if np.any(nb == i):
                raise SpecificationError(f"node {i}: self-loop")
        src = np.repeat(np.arange(n), self.degrees)
        fwd = src * n + self.indices
        rev = self.indices * n + src
        if not np.array_equal(np.sort(fwd), np.sort(rev)):
            raise SpecificationError("adjacency is not symmetric")
        return True

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.node_count == other.node_count
                and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices))

    def __hash__(self):
        return hash((self.node_count, self.indptr.tobytes(), self.indices.tobytes()))

    def __repr__(self):
        return f"Graph(node_count={self.node_count}, n_edges={self.n_edges})"


def _edge_table(indptr, indices):
    n = indptr.size - 1
    src = np.repeat(np.arange(n, dtype=np.int64), np.diff(indptr))
    upper = src < indices
    edges = np.stack([src[upper], indices[upper]], axis=1)
    # CSR order already sorts the upper entries by (u, v)
    key_all = np.minimum(src, indices) * n + np.maximum(src, indices)
    key_edges = edges[:, 0] * n + edges[:, 1]
    edge_ids = np.searchsorted(key_edges, key_all).astype(np.int64)
    return edges, edge_ids


class NetworkModel(enum.Enum):
    WS = "WS"
    BA = "BA"
    COMPLETE = "Complete"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        for member in cls:
            if str(value).lower() in (member.value.lower(), member.name.lower()):
                return member
        raise SpecificationError(
            f"network.model: unknown model {value!r} (expected one of WS, BA, Complete)")


@dataclass(frozen=True)
class NetworkSpec:
    """Parameters of a network family.

    ``mean_degree`` is the lattice degree for WS and the number of edges each
    new node brings (``m``) for BA. It is ignored for the complete graph.
    """

    model: NetworkModel
    n: int
    mean_degree: int = 4
    beta: float = 0.0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "model", NetworkModel.parse(self.model))
        if self.n < 1:
            raise SpecificationError("network.n: must be a positive integer")
        if self.model is NetworkModel.WS:
            if self.mean_degree < 2 or self.mean_degree % 2:
                raise SpecificationError("network.mean_degree: WS requires an even value >= 2")
            if self.n <= self.mean_degree:
                raise SpecificationError("network.n: WS requires n > mean_degree")
            if not 0.0 <= self.beta <= 1.0:
                raise SpecificationError("network.beta: must lie in [0, 1]")
        elif self.model is NetworkModel.BA:
            if self.mean_degree < 1:
                raise SpecificationError("network.mean_degree: BA requires m >= 1")
            if self.mean_degree >= self.n:
                raise SpecificationError("network.mean_degree: BA requires m < n")
        elif self.n < 2:
            raise SpecificationError("network.n: complete graph requires n >= 2")

    @property
    def m(self):
        return self.mean_degree

    def with_seed(self, seed):
        return NetworkSpec(self.model, self.n, self.mean_degree, self.beta, int(seed))

    @property
    def label(self):
        if self.model is NetworkModel.WS:
            return f"WS beta={self.beta:g}"
        if self.model is NetworkModel.BA:
            return f"BA m={self.mean_degree}"
        return "Complete"


def generate(spec):
    """Dispatch on ``spec.model``."""
    if spec.model is NetworkModel.WS:
        return generate_ws(spec)
    if spec.model is NetworkModel.BA:
        return generate_ba(spec)
    return generate_complete(spec.n)


def _ws_once(n, k, beta, rng):
    adj = [set() for _ in range(n)]
    half = k // 2
    for u in range(n):
        for j in range(1, half + 1):
            v = (u + j) % n
            adj[u].add(v)
            adj[v].add(u)
    if beta > 0.0:
        for j in range(1, half + 1):
            draws = rng.random(n)
            for u in range(n):
                if draws[u] >= beta:
                    continue
                if len(adj[u]) >= n - 1:
                    continue
                v = (u + j) % n
                w = int(rng.integers(n))
                while w == u or w in adj[u]:
                    w = int(rng.integers(n))
                adj[u].discard(v)
                adj[v].discard(u)
                adj[u].add(w)
                adj[w].add(u)
    edges = [(u, v) for u in range(n) for v in adj[u] if u < v]
    return Graph.from_edges(n, edges)


def generate_ws(spec):
    """Watts-Strogatz ring lattice with far-endpoint rewiring.

    Each node is joined to ``mean_degree/2`` neighbors on either side; then,
    lap by lap, the edge ``(u, u+j)`` is rewired with probability ``beta`` to
    ``(u, w)`` with ``w`` uniform over non-neighbors of ``u``. A disconnected
    result is discarded and regenerated from ``seed + 1``, ``seed + 2``, ...
    """
    if spec.model is not NetworkModel.WS:
        raise SpecificationError("generate_ws needs a WS spec")
    for attempt in range(WS_MAX_RETRIES + 1):
        rng = np.random.default_rng(spec.seed + attempt)
        g = _ws_once(spec.n, spec.mean_degree, spec.beta, rng)
        if spec.beta == 0.0 or n_components(g) == 1:
            return g
    raise SpecificationError(
        f"WS rewiring produced a disconnected graph {WS_MAX_RETRIES + 1} times")


def generate_ba(spec):
    """Barabasi-Albert preferential attachment.

    Starts from a clique on ``m + 1`` nodes. Every later node picks ``m``
    distinct targets with probability proportional to current degree, by
    repeated draws from the degree-weighted stub list with duplicates
    discarded.
    """
    if spec.model is not NetworkModel.BA:
        raise SpecificationError("generate_ba needs a BA spec")
    n, m = spec.n, spec.mean_degree
    rng = np.random.default_rng(spec.seed)
    seed_nodes = min(m + 1, n)
    edges = [(u, v) for u in range(seed_nodes) for v in range(u + 1, seed_nodes)]
    stubs = np.empty(2 * (len(edges) + m * max(n - seed_nodes, 0)), dtype=np.int64)
    n_stubs = 0
    for u, v in edges:
        stubs[n_stubs] = u
        stubs[n_stubs + 1] = v
        n_stubs += 2
    for new in range(seed_nodes, n):
        targets = []
        while len(targets) < m:
            t = int(stubs[rng.integers(n_stubs)])
            if t not in targets:
                targets.append(t)
        for t in targets:
            edges.append((t, new))
            stubs[n_stubs] = t
            stubs[n_stubs + 1] = new
            n_stubs += 2
    return Graph.from_edges(n, edges)


def generate_complete(n):
    """Complete graph K_n."""
    n = int(n)
    if n < 2:
        raise SpecificationError("complete graph requires n >= 2")
    indptr = np.arange(n + 1, dtype=np.int64) * (n - 1)
    full = np.tile(np.arange(n, dtype=np.int64), (n, 1))
    indices = full[~np.eye(n, dtype=bool)]
    return Graph(n, indptr, indices)


def n_components(g):
    """Number of connected components."""
    if g.n_edges == 0:
        return g.node_count
    data = np.ones(g.indices.size, dtype=np.int8)
    mat = csr_matrix((data, g.indices, g.indptr), shape=(g.node_count, g.node_count))
    return int(connected_components(mat, directed=False)[0])


@numba.njit(cache=True, nogil=True)
def _bfs_all_pairs(indptr, indices, n):
    dist = np.empty(n, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    total = 0
    diam = 0
    reached_all = True
    for src in range(n):
        dist[:] = -1
        dist[src] = 0
        queue[0] = src
        head = 0
        tail = 1
        while head < tail:
            u = queue[head]
            head += 1
            du = dist[u] + 1
            for p in range(indptr[u], indptr[u + 1]):
                v = indices[p]
                if dist[v] < 0:
                    dist[v] = du
                    total += du
                    if du > diam:
                        diam = du
                    queue[tail] = v
                    tail += 1
        if tail < n:
            reached_all = False
            break
    return total, diam, reached_all


def path_stats(g):
    """Exact ``(average shortest path length, diameter)`` by BFS from every node."""
    n = g.node_count
    if n == 1:
        return 0.0, 0
    total, diam, ok = _bfs_all_pairs(g.indptr, g.indices, n)
    if not ok:
        raise DisconnectedGraphError(n_components(g))
    return total / (n * (n - 1)), int(diam)


def avg_path_length(g):
    return path_stats(g)[0]


def diameter(g):
    return path_stats(g)[1]


@numba.njit(cache=True, nogil=True)
def _triangle_counts(indptr, indices, n):
    # tri[i] = number of links among the neighbors of i
    mark = np.full(n, -1, dtype=np.int64)
    tri = np.zeros(n, dtype=np.int64)
    for i in range(n):
        for p in range(indptr[i], indptr[i + 1]):
            mark[indices[p]] = i
        links = 0
        for p in range(indptr[i], indptr[i + 1]):
            u = indices[p]
            for q in range(indptr[u], indptr[u + 1]):
                if mark[indices[q]] == i:
                    links += 1
        tri[i] = links // 2
    return tri


def _require_connected(g):
    c = n_components(g)
    if c != 1:
        raise DisconnectedGraphError(c)


def clustering_coefficient(g):
    """Mean local clustering coefficient; nodes of degree < 2 contribute 0."""
    _require_connected(g)
    deg = g.degrees.astype(np.float64)
    tri = _triangle_counts(g.indptr, g.indices, g.node_count).astype(np.float64)
    pairs = deg * (deg - 1) / 2
    local = np.divide(tri, pairs, out=np.zeros_like(tri), where=pairs > 0)
    return float(local.mean())


def transitivity(g):
    """Global clustering: closed triplets over connected triplets."""
    _require_connected(g)
    deg = g.degrees.astype(np.float64)
    tri = _triangle_counts(g.indptr, g.indices, g.node_count).astype(np.float64)
    triplets = (deg * (deg - 1) / 2).sum()
    return float(tri.sum() / triplets) if triplets > 0 else 0.0


def write_edgelist(g, fh=None, comments=()):
    """Serialize as ``# nodes=<n>`` followed by sorted ``u v`` lines.

    Extra comment lines (without the leading ``#``) go after the header.
    Returns the text when ``fh`` is None.
    """
    out = io.StringIO() if fh is None else fh
    out.write(f"# nodes={g.node_count}\n")
    for line in comments:
        out.write(f"# {line}\n")
    for u, v in g.edges:
        out.write(f"{u} {v}\n")
    if fh is None:
        return out.getvalue()
    return None


def read_edgelist(fh):
    """Parse the edge-list format written by :func:`write_edgelist`."""
    if isinstance(fh, str):
        fh = io.StringIO(fh)
    n = None
    edges = []
    for line in fh:
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if n is None and body.startswith("nodes="):
                n = int(body.split("=", 1)[1])
            continue
        u, v = line.split()
        edges.append((int(u), int(v)))
    if n is None:
        raise SpecificationError("edge list lacks the '# nodes=<n>' header")
    return Graph.from_edges(n, edges)

"""Undirected simple graphs in CSR form, edge-list I/O and topology diagnostics."""

from __future__ import annotations

from dataclasses import dataclass, field
from os import PathLike

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph


class GraphError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable undirected simple graph.

    Neighbors of node ``u`` are ``indices[indptr[u]:indptr[u + 1]]``, sorted
    ascending. ``labels`` holds the external id of every node (the ids found in
    the source edge list) and is what gets written on export. ``origin`` is set
    on induced subgraphs and maps each node to its id in the parent graph.
    """

    indptr: np.ndarray
    indices: np.ndarray
    labels: np.ndarray = None
    origin: np.ndarray | None = None
    _local: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.labels is None:
            object.__setattr__(self, "labels", np.arange(self.node_count, dtype=np.int64))
        for arr in (self.indptr, self.indices, self.labels, self.origin):
            if arr is not None:
                arr.setflags(write=False)

    @classmethod
    def from_edges(cls, n: int, u, v, labels=None, origin=None) -> "Graph":
        """Build from endpoint arrays; self-loops and duplicates are dropped."""
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        if u.size and (min(u.min(), v.min()) < 0 or max(u.max(), v.max()) >= n):
            raise GraphError("edge endpoint outside node range")
        keep = u != v
        u, v = u[keep], v[keep]
        lo, hi = np.minimum(u, v), np.maximum(u, v)
        codes = np.unique(lo * n + hi)
        lo, hi = codes // n, codes % n
        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        if labels is not None:
            labels = np.asarray(labels, dtype=np.int64)
        if origin is not None:
            origin = np.asarray(origin, dtype=np.int64)
        return cls(indptr, dst.astype(np.int64), labels, origin)

    @property
    def node_count(self) -> int:
        return len(self.indptr) - 1

    @property
    def edge_count(self) -> int:
        return len(self.indices) // 2

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, u: int) -> np.ndarray:
        return self.indices[self.indptr[u]:self.indptr[u + 1]]

    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        """Each undirected edge once, as (lo, hi) arrays."""
        src = np.repeat(np.arange(self.node_count), self.degrees())
        keep = src < self.indices
        return src[keep], self.indices[keep]

    def arc_sources(self) -> np.ndarray:
        return np.repeat(np.arange(self.node_count), self.degrees())

    def adjacency_matrix(self) -> sparse.csr_matrix:
        n = self.node_count
        data = np.ones(len(self.indices), dtype=np.float64)
        return sparse.csr_matrix((data, self.indices, self.indptr), shape=(n, n))

    def global_ids(self, local) -> np.ndarray:
        """Map node ids of this graph to ids of the graph it was induced from."""
        local = np.asarray(local, dtype=np.int64)
        return local if self.origin is None else self.origin[local]

    def local_ids(self, ids) -> np.ndarray:
        """Inverse of :meth:`global_ids`; ids not present map to -1."""
        ids = np.asarray(ids, dtype=np.int64)
        if self.origin is None:
            out = ids.copy()
            out[(ids < 0) | (ids >= self.node_count)] = -1
            return out
        if self._local is None:
            size = int(self.origin.max()) + 1 if self.origin.size else 0
            table = np.full(size, -1, dtype=np.int64)
            table[self.origin] = np.arange(self.node_count)
            object.__setattr__(self, "_local", table)
        table = self._local
        out = np.full(ids.shape, -1, dtype=np.int64)
        ok = (ids >= 0) & (ids < len(table))
        out[ok] = table[ids[ok]]
        return out

    def ids_for_labels(self, labels) -> np.ndarray:
        """Node ids carrying the given external labels; raises on unknown labels."""
        labels = np.asarray(labels, dtype=np.int64)
        order = np.argsort(self.labels, kind="stable")
        srt = self.labels[order]
        pos = np.minimum(np.searchsorted(srt, labels), max(self.node_count - 1, 0))
        if labels.size and (self.node_count == 0 or np.any(srt[pos] != labels)):
            bad = labels[srt[pos] != labels] if self.node_count else labels
            raise GraphError(f"unknown node id {int(bad[0])}")
        return order[pos]

    def check(self) -> None:
        """Full scan of the simple-graph invariants; raises GraphError."""
        n = self.node_count
        src = self.arc_sources()
        if np.any(src == self.indices):
            raise GraphError("self-loop")
        for u in range(n):
            nb = self.neighbors(u)
            if np.any(np.diff(nb) <= 0):
                raise GraphError(f"neighbors of {u} not strictly sorted")
        fwd = np.sort(src * n + self.indices)
        rev = np.sort(self.indices * n + src)
        if not np.array_equal(fwd, rev):
            raise GraphError("adjacency not symmetric")


def load_edge_list(path: str | PathLike) -> Graph:
    """Read a whitespace-separated edge list; '#' lines are comments.

    A comment of the form ``# isolated 7 9 ...`` declares degree-zero nodes,
    as written by :func:`write_edge_list`.
    Node ids are compacted to 0..n-1 in ascending order of the file ids; the
    original ids are kept in ``Graph.labels``.
    """
    us, vs, isolated = [], [], []
    try:
        fh = open(path)
    except OSError as exc:
        raise GraphError(f"cannot read {path}: {exc}") from exc
    with fh:
        for lineno, line in enumerate(fh, 1):
            s = line.strip()
            if s.startswith("# isolated"):
                isolated.extend(int(x) for x in s.split()[2:])
                continue
            if not s or s.startswith("#"):
                continue
            parts = s.split()
            if len(parts) < 2:
                raise GraphError(f"{path}:{lineno}: expected two node ids")
            try:
                a, b = int(parts[0]), int(parts[1])
            except ValueError:
                raise GraphError(f"{path}:{lineno}: node ids must be integers") from None
            if a < 0 or b < 0:
                raise GraphError(f"{path}:{lineno}: node ids must be nonnegative")
            us.append(a)
            vs.append(b)
    if not us and not isolated:
        raise GraphError(f"{path}: zero nodes")
    raw = np.concatenate([np.asarray(us, dtype=np.int64), np.asarray(vs, dtype=np.int64),
                          np.asarray(isolated, dtype=np.int64)])
    labels, inv = np.unique(raw, return_inverse=True)
    m = len(us)
    return Graph.from_edges(len(labels), inv[:m], inv[m:2 * m], labels=labels)


def write_edge_list(g: Graph, path: str | PathLike) -> None:
    u, v = g.edges()
    with open(path, "w") as fh:
        fh.write(f"# nodes {g.node_count} edges {g.edge_count}\n")
        lab = g.labels
        fh.writelines(f"{a} {b}\n" for a, b in zip(lab[u].tolist(), lab[v].tolist()))
        # isolated nodes would otherwise be lost on reload
        iso = np.flatnonzero(g.degrees() == 0)
        if iso.size:
            fh.write("# isolated " + " ".join(map(str, lab[iso].tolist())) + "\n")


def largest_component(g: Graph) -> Graph:
    """Induced subgraph on the largest connected component."""
    _, comp = csgraph.connected_components(g.adjacency_matrix(), directed=False)
    keep = np.flatnonzero(comp == np.bincount(comp).argmax())
    return induced_subgraph(g, keep)


def induced_subgraph(g: Graph, keep) -> Graph:
    """Subgraph induced by ``keep``; ``origin`` of the result indexes into ``g``."""
    keep = np.sort(np.asarray(keep, dtype=np.int64))
    n = g.node_count
    pos = np.full(n, -1, dtype=np.int64)
    pos[keep] = np.arange(len(keep))
    src = g.arc_sources()
    m = (pos[src] >= 0) & (pos[g.indices] >= 0) & (src < g.indices)
    return Graph.from_edges(
        len(keep), pos[src[m]], pos[g.indices[m]],
        labels=g.labels[keep], origin=keep,
    )


def triangle_counts(g: Graph, nodes=None) -> np.ndarray:
    """Triangles through each node (all nodes, or just ``nodes``)."""
    a = g.adjacency_matrix()
    rows = a if nodes is None else a[np.asarray(nodes, dtype=np.int64)]
    return np.asarray((rows @ a).multiply(rows).sum(axis=1)).ravel() / 2.0


def local_clustering(g: Graph, nodes=None) -> np.ndarray:
    """Local clustering coefficient; nodes of degree < 2 get 0."""
    deg = g.degrees() if nodes is None else g.degrees()[np.asarray(nodes, dtype=np.int64)]
    tri = triangle_counts(g, nodes)
    pairs = deg * (deg - 1) / 2.0
    out = np.zeros(len(deg))
    np.divide(tri, pairs, out=out, where=pairs > 0)
    return out


def degree_assortativity(g: Graph) -> float:
    """Pearson correlation of endpoint degrees over edges; 0 for zero variance."""
    if g.edge_count == 0:
        return 0.0
    deg = g.degrees().astype(np.float64)
    x = deg[g.arc_sources()]
    y = deg[g.indices]
    xc = x - x.mean()
    var = np.mean(xc * xc)
    if var <= 1e-12 * max(1.0, x.mean() ** 2):
        return 0.0
    return float(np.mean(xc * (y - y.mean())) / var)


@dataclass(frozen=True)
class TopologyReport:
    node_count: int
    edge_count: int
    avg_degree: float
    avg_clustering: float
    diameter: int
    radius: int
    assortativity: float
    estimated: bool
    component_size: int

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def _eccentricities(adj: sparse.csr_matrix, sources: np.ndarray, chunk: int = 256) -> np.ndarray:
    ecc = np.empty(len(sources), dtype=np.int64)
    for i in range(0, len(sources), chunk):
        d = csgraph.shortest_path(adj, method="D", directed=False, unweighted=True,
                                  indices=sources[i:i + chunk])
        d[np.isinf(d)] = -1
        ecc[i:i + chunk] = d.max(axis=1).astype(np.int64)
    return ecc


def topology_report(g: Graph, diameter_sample: int | None = None, rng_seed: int = 0) -> TopologyReport:
    """Degree, clustering, diameter/radius and assortativity of ``g``.

    Diameter and radius are taken over the largest connected component (over
    all of them when several tie). With
    ``diameter_sample`` they come from BFS eccentricities of that many
    uniformly drawn sources and ``estimated`` is set.
    """
    n = g.node_count
    if n == 0:
        raise GraphError("empty graph")
    _, comp = csgraph.connected_components(g.adjacency_matrix(), directed=False)
    sizes = np.bincount(comp)
    # components tied for largest are all kept so the result is label-invariant
    cc = induced_subgraph(g, np.flatnonzero(sizes[comp] == sizes.max()))
    adj = cc.adjacency_matrix()
    m = cc.node_count
    if diameter_sample is None or diameter_sample >= m:
        sources = np.arange(m)
        estimated = False
    else:
        if diameter_sample < 1:
            raise GraphError("diameter_sample must be positive")
        rng = np.random.default_rng(rng_seed)
        sources = np.sort(rng.choice(m, size=diameter_sample, replace=False))
        estimated = True
    ecc = _eccentricities(adj, sources)
    return TopologyReport(
        node_count=n,
        edge_count=g.edge_count,
        avg_degree=2.0 * g.edge_count / n,
        avg_clustering=float(local_clustering(g).mean()),
        diameter=int(ecc.max()),
        radius=int(ecc.min()),
        assortativity=degree_assortativity(g),
        estimated=estimated,
        component_size=int(sizes.max()),
    )


"""Independent cascade model with multi-parent traces.

Coins are counter-based: the uniform for the attempt ``u -> v`` in a run with
key ``k`` is a hash of ``(k, u, v)`` (ids in the oracle id space). A node is
active in exactly one round, so every directed attempt is made at most once,
which keeps attempts independent. It also makes runs reproducible regardless
of evaluation order and couples runs that share a key across different ``p``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from os import PathLike

import numpy as np

from .graph import Graph, GraphError
from .partial import PartialView
from .seeding import SeedSet

DEFAULT_P = 0.01

_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_G1 = np.uint64(0x9E3779B97F4A7C15)
_G2 = np.uint64(0xC2B2AE3D27D4EB4F)
_S30, _S27, _S31, _S11 = (np.uint64(s) for s in (30, 27, 31, 11))


def _mix(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


def run_keys(rng_seed: int, runs: int) -> np.ndarray:
    """Per-run 64-bit coin keys; key ``i`` depends only on ``(rng_seed, i)``."""
    base = _mix(np.array([rng_seed & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64))
    idx = np.arange(1, runs + 1, dtype=np.uint64)
    return _mix(base ^ _mix(idx * _G1))


def coin_uniforms(keys: np.ndarray, src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """Uniforms in [0, 1) for attempts ``src -> dst`` under per-attempt ``keys``."""
    s = src.astype(np.uint64)
    d = dst.astype(np.uint64)
    h = _mix(_mix(keys ^ (s * _G1)) ^ (d * _G2 + _G1))
    return (h >> _S11).astype(np.float64) * (1.0 / 9007199254740992.0)


@dataclass(frozen=True)
class EdgeProbabilities:
    """Transmission probability per undirected edge, defaulting to ``default``.

    ``overrides`` maps ``(u, v)`` pairs of oracle node ids (either order) to a
    probability.
    """

    default: float = DEFAULT_P
    overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        vals = [self.default, *self.overrides.values()]
        if any(not 0.0 <= x <= 1.0 for x in vals):
            raise GraphError("edge probabilities must lie in [0, 1]")
        canon = {}
        for (u, v), w in self.overrides.items():
            canon[(min(u, v), max(u, v))] = float(w)
        object.__setattr__(self, "overrides", canon)

    @property
    def uniform(self) -> bool:
        return not self.overrides

    def arc_values(self, g: Graph) -> np.ndarray | None:
        """Probabilities aligned with ``g.indices``, or None when uniform."""
        if self.uniform:
            return None
        src = g.global_ids(g.arc_sources())
        dst = g.global_ids(g.indices)
        lo, hi = np.minimum(src, dst), np.maximum(src, dst)
        keys = np.array(sorted(self.overrides), dtype=np.int64).reshape(-1, 2)
        vals = np.array([self.overrides[tuple(k)] for k in keys.tolist()])
        big = np.int64(1) << 32
        codes = keys[:, 0] * big + keys[:, 1]
        arc = lo * big + hi
        pos = np.minimum(np.searchsorted(codes, arc), len(codes) - 1)
        hit = codes[pos] == arc
        out = np.full(len(arc), self.default)
        out[hit] = vals[pos[hit]]
        return out

    def edge_value(self, u: int, v: int) -> float:
        return self.overrides.get((min(u, v), max(u, v)), self.default)


def read_weights(path: str | PathLike, oracle: Graph, default: float) -> EdgeProbabilities:
    """Lines ``u v w`` with node labels as in the edge list."""
    rows = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            parts = s.split()
            if len(parts) != 3:
                raise GraphError(f"{path}:{lineno}: expected 'u v weight'")
            rows.append((int(parts[0]), int(parts[1]), float(parts[2])))
    if not rows:
        return EdgeProbabilities(default)
    ids = oracle.ids_for_labels([r[0] for r in rows] + [r[1] for r in rows])
    m = len(rows)
    return EdgeProbabilities(default, {(int(ids[i]), int(ids[m + i])): rows[i][2] for i in range(m)})


@dataclass(frozen=True, eq=False)
class DiffusionTrace:
    """One ICM run on a graph, in that graph's node ids.

    ``activation_time`` is -1 for nodes never activated. The successful
    activations are the pairs ``(parent_src[i], parent_child[i])``, sorted by
    child then parent.
    """

    activation_time: np.ndarray
    parent_child: np.ndarray
    parent_src: np.ndarray
    seeds: np.ndarray

    @property
    def node_count(self) -> int:
        return len(self.activation_time)

    @property
    def horizon(self) -> int:
        return int(self.activation_time.max()) if self.node_count else 0

    @property
    def activated(self) -> np.ndarray:
        return np.flatnonzero(self.activation_time >= 0)

    @property
    def size(self) -> int:
        return int(np.count_nonzero(self.activation_time >= 0))

    def parents(self, j: int) -> np.ndarray:
        lo, hi = np.searchsorted(self.parent_child, [j, j + 1])
        return self.parent_src[lo:hi]

    def new_per_step(self) -> np.ndarray:
        t = self.activation_time
        return np.bincount(t[t >= 0], minlength=self.horizon + 1)


@dataclass(frozen=True, eq=False)
class TraceBatch:
    """``runs`` ICM runs sharing a graph and seed set.

    ``times`` is (runs, n). Parent pairs index children by flat position
    ``run * n + node`` and are sorted by that, then by parent.
    """

    times: np.ndarray
    parent_child: np.ndarray
    parent_src: np.ndarray
    seeds: np.ndarray

    @property
    def runs(self) -> int:
        return self.times.shape[0]

    @property
    def node_count(self) -> int:
        return self.times.shape[1]

    def sizes(self) -> np.ndarray:
        return np.count_nonzero(self.times >= 0, axis=1)

    def horizons(self) -> np.ndarray:
        return self.times.max(axis=1).astype(np.int64)

    def trace(self, i: int) -> DiffusionTrace:
        n = self.node_count
        lo, hi = np.searchsorted(self.parent_child, [i * n, (i + 1) * n])
        return DiffusionTrace(self.times[i].copy(), self.parent_child[lo:hi] - i * n,
                              self.parent_src[lo:hi].copy(), self.seeds)

    def __iter__(self):
        return (self.trace(i) for i in range(self.runs))


def _seed_locals(g: Graph, seeds: SeedSet | np.ndarray) -> np.ndarray:
    ids = seeds.seeds if isinstance(seeds, SeedSet) else np.asarray(seeds, dtype=np.int64)
    local = g.local_ids(ids)
    if np.any(local < 0):
        bad = ids[local < 0][0]
        raise GraphError(f"seed {int(bad)} is not a node of the graph")
    return np.sort(local)


def simulate(g: Graph, seeds: SeedSet | np.ndarray, probs: EdgeProbabilities | float,
             keys: np.ndarray) -> TraceBatch:
    """Run one synchronous ICM cascade per key.

    Each round, every node activated in the previous round attempts each
    neighbor that was inactive at the start of the round. All attempts of the
    round are resolved before any activation commits, so a node can collect
    several parents.
    """
    if not isinstance(probs, EdgeProbabilities):
        probs = EdgeProbabilities(float(probs))
    keys = np.asarray(keys, dtype=np.uint64)
    seeds_local = _seed_locals(g, seeds)
    n, runs = g.node_count, len(keys)
    arc_p = probs.arc_values(g)
    p = probs.default
    gid = g.origin
    indptr, indices = g.indptr, g.indices

    times = np.full(runs * n, -1, dtype=np.int32)
    frontier = (np.arange(runs, dtype=np.int64)[:, None] * n + seeds_local[None, :]).ravel()
    frontier.sort()
    times[frontier] = 0
    children, parents = [], []
    t = 0
    while frontier.size:
        t += 1
        node = frontier % n
        starts = indptr[node]
        cnt = indptr[node + 1] - starts
        total = int(cnt.sum())
        if total == 0:
            break
        first = np.cumsum(cnt) - cnt
        arcs = np.repeat(starts - first, cnt) + np.arange(total)
        src_flat = np.repeat(frontier, cnt)
        dst = indices[arcs]
        dst_flat = src_flat - (src_flat % n) + dst
        open_ = times[dst_flat] < 0
        arcs, src_flat, dst, dst_flat = arcs[open_], src_flat[open_], dst[open_], dst_flat[open_]
        src = src_flat % n
        if arc_p is None and p >= 1.0:
            live = np.ones(len(arcs), dtype=bool)
        elif arc_p is None and p <= 0.0:
            live = np.zeros(len(arcs), dtype=bool)
        else:
            thr = p if arc_p is None else arc_p[arcs]
            gs, gd = (src, dst) if gid is None else (gid[src], gid[dst])
            live = coin_uniforms(keys[src_flat // n], gs, gd) < thr
        child = dst_flat[live]
        times[child] = t
        children.append(child)
        parents.append(src[live])
        frontier = np.unique(child)
    if children:
        child = np.concatenate(children)
        par = np.concatenate(parents)
        order = np.lexsort((par, child))
        child, par = child[order], par[order]
    else:
        child = np.empty(0, dtype=np.int64)
        par = np.empty(0, dtype=np.int64)
    return TraceBatch(times.reshape(runs, n), child, par, seeds_local)


def run_icm_batch(g: Graph, seeds, probs, rng_seed: int, runs: int) -> TraceBatch:
    return simulate(g, seeds, probs, run_keys(rng_seed, runs))


def run_icm(g: Graph, seeds, probs, rng_seed: int) -> DiffusionTrace:
    """A single ICM run; identical to run 0 of ``run_icm_batch`` with the same seed."""
    return simulate(g, seeds, probs, run_keys(rng_seed, 1)).trace(0)


@dataclass(frozen=True)
class CascadeExpectations:
    sigma: float
    sigma_o: float
    sigma_ph: float
    sigma_h: float
    sigma_p: float

    def as_tuple(self) -> tuple:
        return (self.sigma, self.sigma_o, self.sigma_ph, self.sigma_h, self.sigma_p)


def _levels(adj: dict, sources: list, allowed) -> dict:
    dist = {s: 0 for s in sources}
    layer = list(sources)
    d = 0
    while layer:
        d += 1
        nxt = []
        for u in layer:
            for w in adj[u]:
                if w not in dist and allowed(w):
                    dist[w] = d
                    nxt.append(w)
        layer = nxt
    return dist


def exact_icm_expectations(g: Graph, seeds, probs, view: PartialView | None = None,
                           attribution: str = "fractional",
                           max_edges: int = 25) -> CascadeExpectations:
    """Exact expected (sigma, sigma_o, sigma_ph, sigma_h, sigma_p); see :func:`exact_icm_moments`."""
    return exact_icm_moments(g, seeds, probs, view, attribution, max_edges)[0]


def exact_icm_moments(g: Graph, seeds, probs, view: PartialView | None = None,
                      attribution: str = "fractional",
                      max_edges: int = 25) -> tuple[CascadeExpectations, CascadeExpectations]:
    """Exact expected cascade sizes by enumerating live-edge worlds.

    Each undirected edge is attempted at most once per run, so the ICM is
    equivalent to keeping every edge independently with its probability and
    spreading deterministically over the kept edges: activation time is the
    BFS level and the parents of a node are its kept neighbors one level up.
    Edges with probability 0 or 1 are fixed, the rest (at most ``max_edges``)
    are enumerated. Returns the means and the per-run variances.
    """
    if not isinstance(probs, EdgeProbabilities):
        probs = EdgeProbabilities(float(probs))
    n = g.node_count
    seed_list = _seed_locals(g, seeds).tolist()
    hidden = np.zeros(n, dtype=bool) if view is None else view.hidden
    if len(hidden) != n:
        raise GraphError("view does not match graph")
    hid = hidden.tolist()
    lo, hi = g.edges()
    edges = list(zip(lo.tolist(), hi.tolist()))
    gl = g.global_ids(np.arange(n)).tolist()
    pe = [probs.edge_value(gl[u], gl[v]) for u, v in edges]
    fixed = [e for e, q in zip(edges, pe) if q >= 1.0]
    rand = [(e, q) for e, q in zip(edges, pe) if 0.0 < q < 1.0]
    if len(rand) > max_edges:
        raise GraphError(f"{len(rand)} random edges; enumeration limited to {max_edges}")

    acc = np.zeros(5)
    acc2 = np.zeros(5)
    for mask in range(1 << len(rand)):
        w = 1.0
        adj = {u: [] for u in range(n)}
        for u, v in fixed:
            adj[u].append(v)
            adj[v].append(u)
        for i, ((u, v), q) in enumerate(rand):
            if mask >> i & 1:
                w *= q
                adj[u].append(v)
                adj[v].append(u)
            else:
                w *= 1.0 - q
        dist = _levels(adj, seed_list, lambda x: True)
        f = {}
        for j in sorted(dist, key=dist.get):
            if hid[j]:
                f[j] = 0.0
            elif dist[j] == 0:
                f[j] = 1.0
            else:
                ps = [f[i] for i in adj[j] if dist.get(i) == dist[j] - 1]
                f[j] = sum(ps) / len(ps) if attribution == "fractional" else min(ps)
        sigma = len(dist)
        sigma_h = sum(1 for j in dist if hid[j])
        sigma_o = sum(f[j] for j in dist if not hid[j])
        sigma_ph = sum(1.0 - f[j] for j in dist if not hid[j])
        visible_seeds = [s for s in seed_list if not hid[s]]
        sigma_p = len(_levels(adj, visible_seeds, lambda x: not hid[x]))
        x = np.array([sigma, sigma_o, sigma_ph, sigma_h, sigma_p])
        acc += w * x
        acc2 += w * x * x
    var = np.maximum(acc2 - acc * acc, 0.0)
    return CascadeExpectations(*map(float, acc)), CascadeExpectations(*map(float, var))

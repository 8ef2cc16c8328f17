"""Seed selection on the partial network."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from os import PathLike

import numpy as np

from .graph import Graph, GraphError
from .partial import round_half_up


@dataclass(frozen=True, eq=False)
class SeedSet:
    """Seed node ids in the id space of the oracle graph."""

    seeds: np.ndarray
    gamma: float | None = None

    def __post_init__(self):
        if len(np.unique(self.seeds)) != len(self.seeds):
            raise GraphError("seed ids must be distinct")
        self.seeds.setflags(write=False)

    def __len__(self) -> int:
        return len(self.seeds)


def seed_count(gamma: float, n_visible: int) -> int:
    """max(1, round-half-up(gamma * |V_p|))."""
    if gamma < 0:
        raise GraphError("gamma must be nonnegative")
    return max(1, round_half_up(gamma * n_visible))


def _check_k(g: Graph, k: int) -> None:
    if k < 1:
        raise GraphError("need at least one seed")
    if k > g.node_count:
        raise GraphError(f"k={k} exceeds the {g.node_count} visible nodes")


def degree_discount_seeds(g_partial: Graph, k: int, p: float, gamma: float | None = None,
                          updates: list | None = None) -> SeedSet:
    """Greedy degree-discount selection for the independent cascade model.

    A node with degree d and t already selected neighbors scores
    ``d - 2t - (d - t) * t * p``. Each round takes the best score (lowest id on
    ties) and rescores only the neighbors of the pick, using a lazy heap.
    ``updates``, when given, collects the ids of every rescored node.
    """
    _check_k(g_partial, k)
    if not 0.0 <= p <= 1.0:
        raise GraphError("p must lie in [0, 1]")
    deg = g_partial.degrees().astype(np.float64)
    score = deg.copy()
    t = np.zeros(g_partial.node_count, dtype=np.int64)
    chosen = np.zeros(g_partial.node_count, dtype=bool)
    heap = [(-s, u) for u, s in enumerate(score.tolist())]
    heapq.heapify(heap)
    picked = []
    while len(picked) < k:
        neg, u = heapq.heappop(heap)
        if chosen[u] or -neg != score[u]:
            continue
        chosen[u] = True
        picked.append(u)
        for v in g_partial.neighbors(u).tolist():
            if chosen[v]:
                continue
            t[v] += 1
            d, tv = deg[v], t[v]
            score[v] = d - 2 * tv - (d - tv) * tv * p
            heapq.heappush(heap, (-score[v], v))
            if updates is not None:
                updates.append(v)
    return SeedSet(g_partial.global_ids(np.array(picked, dtype=np.int64)), gamma)


def random_seeds(g_partial: Graph, k: int, rng_seed, gamma: float | None = None) -> SeedSet:
    _check_k(g_partial, k)
    rng = np.random.default_rng(rng_seed)
    local = rng.choice(g_partial.node_count, size=k, replace=False)
    return SeedSet(g_partial.global_ids(np.sort(local)), gamma)


def write_seeds(seeds: SeedSet, oracle: Graph, path: str | PathLike) -> None:
    with open(path, "w") as fh:
        if seeds.gamma is not None:
            fh.write(f"# gamma {seeds.gamma!r} rounding half-up\n")
        fh.writelines(f"{x}\n" for x in oracle.labels[seeds.seeds].tolist())


def read_seeds(path: str | PathLike, oracle: Graph) -> SeedSet:
    gamma, labels = None, []
    with open(path) as fh:
        for ln in fh:
            parts = ln.split()
            if not parts:
                continue
            if parts[0] == "#":
                if len(parts) > 2 and parts[1] == "gamma":
                    gamma = float(parts[2])
                continue
            labels.append(int(parts[0]))
    if not labels:
        raise GraphError(f"{path}: no seeds")
    return SeedSet(oracle.ids_for_labels(labels), gamma)

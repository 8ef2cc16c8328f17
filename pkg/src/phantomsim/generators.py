"""Synthetic oracle networks: G(n, p) and a TOSHK-style social growth model."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

from .graph import Graph, GraphError


def _pair_from_index(idx: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # pairs u < v enumerated as v*(v-1)/2 + u
    v = np.floor((1.0 + np.sqrt(1.0 + 8.0 * idx.astype(np.float64))) / 2.0).astype(np.int64)
    base = v * (v - 1) // 2
    over = base > idx
    v[over] -= 1
    base = v * (v - 1) // 2
    under = idx - base >= v
    v[under] += 1
    base = v * (v - 1) // 2
    return idx - base, v


def erdos_renyi(n: int, p_edge: float, rng_seed: int) -> Graph:
    """Sample G(n, p) by geometric skipping over the n(n-1)/2 candidate pairs.

    Expected cost is O(n + |E|).
    """
    if n < 1:
        raise GraphError("n must be >= 1")
    if not 0.0 <= p_edge <= 1.0:
        raise GraphError("p_edge must lie in [0, 1]")
    total = n * (n - 1) // 2
    rng = np.random.default_rng(rng_seed)
    if p_edge == 0.0 or total == 0:
        return Graph.from_edges(n, [], [])
    if p_edge == 1.0:
        picked = np.arange(total, dtype=np.int64)
    else:
        chunks = []
        pos = -1
        batch = max(1024, int(total * p_edge * 1.05) + 64)
        while True:
            gaps = rng.geometric(p_edge, size=batch).astype(np.int64)
            steps = pos + np.cumsum(gaps)
            if steps[-1] >= total:
                chunks.append(steps[steps < total])
                break
            chunks.append(steps)
            pos = int(steps[-1])
        picked = np.concatenate(chunks)
    u, v = _pair_from_index(picked)
    return Graph.from_edges(n, u, v)


@dataclass(frozen=True)
class ToshkParams:
    n: int
    p_neighbor: float
    k_target: float

    def validate(self) -> None:
        if self.n < 2:
            raise GraphError("TOSHK needs n >= 2")
        if not 0.0 <= self.p_neighbor <= 1.0:
            raise GraphError("p_neighbor must lie in [0, 1]")
        if self.k_target <= 0:
            raise GraphError("k_target must be positive")
        if self.k_target >= self.n:
            raise GraphError(f"k_target={self.k_target} unreachable with n={self.n}")


def _expected_links(m: int, budget: int, p: float, k: float) -> float:
    # E[min(budget, m + Binomial(candidates, p))] with ~k candidates per contact
    cand = max(0, int(round(m * k)) - m)
    if m >= budget:
        return float(budget)
    total = 0.0
    for s in range(cand + 1):
        w = math.comb(cand, s) * p**s * (1.0 - p) ** (cand - s)
        total += w * min(budget, m + s)
    return total


def contact_mix(params: ToshkParams) -> float:
    """Probability of one (rather than two) initial contacts per arrival.

    Chosen so the expected number of links an arrival creates matches
    ``k_target / 2``, which keeps the average degree near ``k_target``.
    """
    half = params.k_target / 2.0
    lo = math.floor(half)
    frac = half - lo
    budgets = [(max(1, lo), 1.0 - frac), (max(1, lo + 1), frac)]

    def links(m):
        return sum(w * _expected_links(m, b, params.p_neighbor, params.k_target) for b, w in budgets)

    one, two = links(1), links(2)
    # a single contact already meets the budget: keep arrivals local
    if one >= half - 1e-6 or two - one < 1e-12:
        return 1.0
    return min(1.0, max(0.0, (half - two) / (one - two)))


def toshk(params: ToshkParams, rng_seed: int) -> Graph:
    """Grow a clustered social graph node by node.

    Starts from a clique of ``ceil(k/2) + 1`` nodes. Each arrival links to one
    or two uniformly chosen existing nodes, then walks their neighbors in random
    order and links to each with probability ``p_neighbor`` until its link
    budget (``k/2`` on average) is spent.
    """
    params.validate()
    n, p, k = params.n, params.p_neighbor, params.k_target
    rng = random.Random(rng_seed)
    q = contact_mix(params)
    half = k / 2.0
    lo = math.floor(half)
    frac = half - lo

    s0 = min(n, math.ceil(k / 2) + 1)
    adj: list[list[int]] = [[j for j in range(s0) if j != i] for i in range(s0)]
    us: list[int] = []
    vs: list[int] = []
    for i in range(s0):
        for j in range(i + 1, s0):
            us.append(i)
            vs.append(j)

    for new in range(s0, n):
        budget = max(1, lo + (1 if rng.random() < frac else 0))
        m_r = 1 if rng.random() < q else 2
        m_r = min(m_r, new, budget)
        contacts = rng.sample(range(new), m_r)
        linked = set(contacts)
        cand = []
        seen = set(contacts)
        for c in contacts:
            for w in adj[c]:
                if w not in seen:
                    seen.add(w)
                    cand.append(w)
        rng.shuffle(cand)
        for w in cand:
            if len(linked) >= budget:
                break
            if rng.random() < p:
                linked.add(w)
        mine = sorted(linked)
        adj.append(mine)
        for w in mine:
            adj[w].append(new)
            us.append(w)
            vs.append(new)
    return Graph.from_edges(n, us, vs)

"""Observed / phantom / hidden decomposition of oracle cascades."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .diffusion import DiffusionTrace, TraceBatch
from .graph import Graph, GraphError, local_clustering
from .partial import PartialView

ATTRIBUTIONS = ("fractional", "strict")


@dataclass(frozen=True)
class StepRecord:
    step: int
    new_activations: int
    observed_fraction_new: float


@dataclass(frozen=True)
class CascadeDecomposition:
    sigma: float
    sigma_o: float
    sigma_ph: float
    sigma_h: float
    per_step: tuple
    first_hop_observed_fraction: float


@dataclass(frozen=True, eq=False)
class BatchDecomposition:
    """Per-run decomposition arrays for a :class:`TraceBatch`.

    ``new`` and ``observed_new`` are (runs, steps) matrices of new activations
    and of their observed mass per step.
    """

    sigma: np.ndarray
    sigma_o: np.ndarray
    sigma_ph: np.ndarray
    sigma_h: np.ndarray
    first_hop: np.ndarray
    new: np.ndarray
    observed_new: np.ndarray
    labels: np.ndarray

    def run(self, i: int) -> CascadeDecomposition:
        steps = []
        for t in range(self.new.shape[1]):
            k = int(self.new[i, t])
            if k:
                steps.append(StepRecord(t, k, float(self.observed_new[i, t] / k)))
        return CascadeDecomposition(float(self.sigma[i]), float(self.sigma_o[i]),
                                    float(self.sigma_ph[i]), float(self.sigma_h[i]),
                                    tuple(steps), float(self.first_hop[i]))


def observed_labels(batch: TraceBatch, hidden: np.ndarray, attribution: str = "fractional") -> np.ndarray:
    """Observed fraction f_o of every node in every run, shape (runs, n).

    Seeds get 1, hidden nodes 0, and a visible node gets the mean f_o of the
    parents that activated it ("fractional") or their minimum ("strict", any
    hidden ancestor makes it fully phantom). Inactive nodes get 0.
    """
    if attribution not in ATTRIBUTIONS:
        raise ValueError(f"attribution must be one of {ATTRIBUTIONS}")
    runs, n = batch.times.shape
    if len(hidden) != n:
        raise GraphError(f"view covers {len(hidden)} nodes, trace has {n}")
    times = batch.times.ravel()
    hid = np.tile(hidden, runs)
    f = np.zeros(runs * n)
    f[times == 0] = 1.0
    f[hid] = 0.0
    child, par = batch.parent_child, batch.parent_src
    if child.size:
        level = times[child]
        par_flat = child - child % n + par
        order = np.argsort(level, kind="stable")
        bounds = np.searchsorted(level[order], np.arange(1, level.max() + 2))
        for t in range(len(bounds) - 1):
            sel = order[bounds[t]:bounds[t + 1]]
            if not sel.size:
                continue
            c, vals = child[sel], f[par_flat[sel]]
            uc, inv = np.unique(c, return_inverse=True)
            if attribution == "fractional":
                f[uc] = np.bincount(inv, weights=vals) / np.bincount(inv)
            else:
                m = np.ones(len(uc))
                np.minimum.at(m, inv, vals)
                f[uc] = m
            f[uc[hid[uc]]] = 0.0
    return f.reshape(runs, n)


def decompose_batch(batch: TraceBatch, view: PartialView, attribution: str = "fractional") -> BatchDecomposition:
    hidden = view.hidden
    f = observed_labels(batch, hidden, attribution)
    act = batch.times >= 0
    vis_act = act & ~hidden[None, :]
    sigma = act.sum(axis=1).astype(np.float64)
    sigma_h = (act & hidden[None, :]).sum(axis=1).astype(np.float64)
    sigma_o = np.where(vis_act, f, 0.0).sum(axis=1)
    sigma_ph = np.where(vis_act, 1.0 - f, 0.0).sum(axis=1)
    steps = int(batch.times.max()) + 1 if batch.times.size else 1
    runs = batch.runs
    t = batch.times
    row = np.broadcast_to(np.arange(runs)[:, None], t.shape)
    idx = row[act] * steps + t[act]
    new = np.bincount(idx, minlength=runs * steps).reshape(runs, steps)
    obs = np.bincount(idx, weights=f[act], minlength=runs * steps).reshape(runs, steps)
    early = obs[:, :2].sum(axis=1)
    first_hop = np.divide(early, sigma, out=np.zeros(runs), where=sigma > 0)
    return BatchDecomposition(sigma, sigma_o, sigma_ph, sigma_h, first_hop, new, obs, f)


def decompose(trace: DiffusionTrace, view: PartialView, attribution: str = "fractional") -> CascadeDecomposition:
    """Split an oracle-graph trace into observed, phantom and hidden mass."""
    batch = TraceBatch(trace.activation_time[None, :], trace.parent_child, trace.parent_src, trace.seeds)
    return decompose_batch(batch, view, attribution).run(0)


def shape_histogram(traces) -> np.ndarray:
    """Mean new activations per step; step t averages only traces reaching t."""
    sums, counts = shape_sums(traces)
    return sums / counts


def shape_sums(traces) -> tuple[np.ndarray, np.ndarray]:
    """Summed new activations per step and the number of traces reaching each step.

    Accepts DiffusionTrace objects or a TraceBatch.
    """
    if isinstance(traces, TraceBatch):
        t = traces.times
        horizons = t.max(axis=1)
        width = int(horizons.max()) + 1
        act = t >= 0
        sums = np.bincount(t[act], minlength=width).astype(np.float64)
    else:
        traces = list(traces)
        if not traces:
            raise ValueError("shape_histogram needs at least one trace")
        horizons = np.array([tr.horizon for tr in traces])
        width = int(horizons.max()) + 1
        sums = np.zeros(width)
        for tr in traces:
            c = tr.new_per_step()
            sums[:len(c)] += c
    counts = np.bincount(horizons, minlength=width)[::-1].cumsum()[::-1].astype(np.float64)
    return sums, counts


@dataclass(frozen=True)
class LevelStats:
    steps: np.ndarray
    mean_clustering: np.ndarray
    mean_degree: np.ndarray
    counts: np.ndarray


def level_sums(times: np.ndarray, g: Graph, clustering: np.ndarray | None = None):
    """Per-step (count, clustering sum, degree sum) over nodes activated at each step.

    ``times`` is one activation-time vector or a (runs, n) matrix. Clustering is
    computed only for nodes that were activated unless supplied.
    """
    t = np.atleast_2d(times)
    act = t >= 0
    nodes = np.broadcast_to(np.arange(t.shape[1]), t.shape)[act]
    steps = t[act]
    width = int(steps.max()) + 1 if steps.size else 0
    if clustering is None:
        uniq, inv = np.unique(nodes, return_inverse=True)
        clu = local_clustering(g, uniq)[inv]
    else:
        clu = clustering[nodes]
    deg = g.degrees()[nodes].astype(np.float64)
    count = np.bincount(steps, minlength=width)
    return count, np.bincount(steps, weights=clu, minlength=width), np.bincount(steps, weights=deg, minlength=width)


def level_stats(trace: DiffusionTrace, g: Graph) -> LevelStats:
    """Mean local clustering and degree (in ``g``) of the nodes new at each step."""
    count, clu, deg = level_sums(trace.activation_time, g)
    keep = np.flatnonzero(count)
    c = count[keep].astype(np.float64)
    return LevelStats(keep, clu[keep] / c, deg[keep] / c, count[keep])

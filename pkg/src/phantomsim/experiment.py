"""The oracle-vs-partial protocol: v samples x r runs per (rho, gamma), CSV output."""

from __future__ import annotations

import csv
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from . import correction, metrics
from .cascades import decompose_batch, level_sums, shape_sums
from .diffusion import EdgeProbabilities, read_weights, run_keys, simulate
from .generators import ToshkParams, erdos_renyi, toshk
from .graph import Graph, GraphError, largest_component, load_edge_list
from .partial import partial_graph, sample_hidden
from .seeding import degree_discount_seeds, random_seeds, seed_count

log = logging.getLogger(__name__)

SCENARIO_ORACLE, SCENARIO_PARTIAL = 0, 1
_TAG_VIEW, _TAG_SEEDS, _TAG_RUNS = 11, 12, 13
METHODS = ("partial", "sice", "rece")
# cap on runs * nodes held in one activation-time matrix
_CELL_BUDGET = 20_000_000


@dataclass
class ExperimentConfig:
    graph: str | None = None
    model: str | None = None
    nodes: int = 10000
    p_edge: float = 0.00021
    k: float = 22.0
    p_neighbor: float = 0.9
    graph_seed: int = 0
    largest_component: bool = False
    weights: str | None = None
    rho_list: tuple = (0.1, 0.2, 0.3, 0.4, 0.5)
    gamma_list: tuple = (0.0001, 0.001, 0.01)
    p: float = 0.01
    v: int = 50
    r: int = 50
    seed_strategy: str = "degree-discount"
    paired_runs: bool = True
    attribution: str = "fractional"
    sice_literal: bool = False
    seed: int = 0
    workers: int = 1
    out_dir: str | None = None
    keep_traces: bool = False

    def validate(self) -> None:
        if self.v < 1 or self.r < 1:
            raise GraphError("v and r must be >= 1")
        if any(not 0.0 <= x < 1.0 for x in self.rho_list):
            raise GraphError("every rho must lie in [0, 1)")
        if any(x < 0 for x in self.gamma_list):
            raise GraphError("gamma must be nonnegative")
        if not 0.0 <= self.p <= 1.0:
            raise GraphError("p must lie in [0, 1]")
        if self.seed_strategy not in ("degree-discount", "random"):
            raise GraphError(f"unknown seed strategy {self.seed_strategy!r}")
        if self.graph is None and self.model not in ("er", "toshk"):
            raise GraphError("config needs a graph file or model = er | toshk")

    @classmethod
    def from_file(cls, path, **overrides) -> "ExperimentConfig":
        """Parse ``key = value`` lines ('#' comments); ``overrides`` win."""
        raw = {}
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                s = line.split("#", 1)[0].strip()
                if not s:
                    continue
                if "=" not in s:
                    raise GraphError(f"{path}:{lineno}: expected key = value")
                key, val = (x.strip() for x in s.split("=", 1))
                raw[key.replace("-", "_")] = val
        raw.update({k: v for k, v in overrides.items() if v is not None})
        return cls.from_mapping(raw)

    @classmethod
    def from_mapping(cls, raw: dict) -> "ExperimentConfig":
        known = {f.name: f for f in fields(cls)}
        kwargs = {}
        for key, val in raw.items():
            if key not in known:
                raise GraphError(f"unknown config key {key!r}")
            kwargs[key] = _coerce(cls.__dataclass_fields__[key].default, key, val)
        return cls(**kwargs)


def _coerce(default, key, val):
    if not isinstance(val, str):
        return tuple(val) if key.endswith("_list") else val
    if key.endswith("_list"):
        return tuple(float(x) for x in val.replace(",", " ").split())
    if isinstance(default, bool):
        if val.lower() not in ("1", "0", "true", "false", "yes", "no"):
            raise GraphError(f"{key}: expected a boolean, got {val!r}")
        return val.lower() in ("1", "true", "yes")
    if isinstance(default, int):
        return int(val)
    if isinstance(default, float):
        return float(val)
    return val


def build_graph(cfg: ExperimentConfig) -> Graph:
    if cfg.graph is not None:
        g = load_edge_list(cfg.graph)
    elif cfg.model == "er":
        g = erdos_renyi(cfg.nodes, cfg.p_edge, cfg.graph_seed)
    else:
        g = toshk(ToshkParams(cfg.nodes, cfg.p_neighbor, cfg.k), cfg.graph_seed)
    if cfg.largest_component:
        lcc = largest_component(g)
        # re-root so the component is an oracle graph in its own right
        g = Graph(lcc.indptr, lcc.indices, lcc.labels)
    return g


def _code(x: float) -> int:
    return int(round(x * 1_000_000_000))


def stream_seed(master: int, *parts) -> int:
    """64-bit seed derived from the master seed and integer-coded stream parts."""
    ss = np.random.SeedSequence(entropy=master, spawn_key=tuple(int(p) for p in parts))
    a, b = ss.generate_state(2, np.uint32).tolist()
    return (a << 32) | b


@dataclass
class UnitResult:
    rho: float
    gamma: float
    sample_id: int
    summary: metrics.SampleSummary
    corrections: dict
    shape: tuple
    levels: tuple
    first_hop: float


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    units: list = field(default_factory=list)

    def cells(self) -> list[tuple[float, float]]:
        return sorted({(u.rho, u.gamma) for u in self.units})

    def summaries(self, rho=None, gamma=None) -> list[metrics.SampleSummary]:
        return [u.summary for u in self._select(rho, gamma)]

    def _select(self, rho, gamma):
        return [u for u in self.units
                if (rho is None or u.rho == rho) and (gamma is None or u.gamma == gamma)]

    def relative_error(self, rho, gamma) -> tuple[float, float, float]:
        return metrics.normal_ci(metrics.sample_errors(self.summaries(rho, gamma)))

    def correction_error(self, rho, gamma, method) -> float:
        return float(np.mean([u.corrections[method][1] for u in self._select(rho, gamma)]))

    def first_hop(self, rho, gamma) -> tuple[float, float, float]:
        return metrics.normal_ci([u.first_hop for u in self._select(rho, gamma)])

    def shape(self, rho, gamma) -> tuple[np.ndarray, np.ndarray]:
        return _merge([u.shape for u in self._select(rho, gamma)])

    def levels(self, rho, gamma) -> tuple:
        return _merge([u.levels for u in self._select(rho, gamma)])

    def zscores(self, rho, gamma) -> np.ndarray:
        """(samples, r) matrix of convergence z-scores of the oracle cascade size."""
        return np.array([metrics.convergence_zscores(s.run_sizes) for s in self.summaries(rho, gamma)])


def _merge(parts) -> tuple:
    if not parts:
        return ()
    width = max(len(p[0]) for p in parts)
    out = [np.zeros(width) for _ in parts[0]]
    for p in parts:
        for acc, arr in zip(out, p):
            acc[:len(arr)] += arr
    return tuple(out)


_WORKER: dict = {}


def _init_worker(g: Graph, probs: EdgeProbabilities, cfg: ExperimentConfig) -> None:
    _WORKER.update(g=g, probs=probs, cfg=cfg)


def _run_unit_task(task) -> UnitResult:
    return run_unit(_WORKER["g"], _WORKER["probs"], _WORKER["cfg"], *task)


def run_unit(g: Graph, probs: EdgeProbabilities, cfg: ExperimentConfig,
             rho: float, gamma: float, sample_id: int) -> UnitResult:
    """One hidden-node sample: seeds on the partial graph, r runs per scenario.

    Views depend on (master seed, rho, sample) only, so the same views are
    reused across seed fractions.
    """
    m = cfg.seed
    view = sample_hidden(g, rho, stream_seed(m, _TAG_VIEW, _code(rho), sample_id), sample_id)
    gp = partial_graph(g, view)
    k = seed_count(gamma, gp.node_count)
    if k > gp.node_count:
        raise GraphError(f"gamma={gamma} needs {k} seeds but only {gp.node_count} nodes are visible")
    if cfg.seed_strategy == "degree-discount":
        seeds = degree_discount_seeds(gp, k, cfg.p, gamma)
    else:
        seeds = random_seeds(gp, k, stream_seed(m, _TAG_SEEDS, _code(rho), _code(gamma), sample_id), gamma)

    def keys(scenario):
        parts = [_TAG_RUNS, _code(rho), _code(gamma), sample_id]
        if not cfg.paired_runs:
            parts.append(scenario)
        return run_keys(stream_seed(m, *parts), cfg.r)

    chunk = max(1, _CELL_BUDGET // max(g.node_count, 1))
    o_keys, p_keys = keys(SCENARIO_ORACLE), keys(SCENARIO_PARTIAL)
    sig, sig_o, sig_ph, sig_h, first = [], [], [], [], []
    shape_parts, level_parts = [], []
    sizes_p, est_sice, est_rece = [], [], []
    fallback = 2.0 * gp.edge_count / max(gp.node_count, 1)
    for lo in range(0, cfg.r, chunk):
        ob = simulate(g, seeds, probs, o_keys[lo:lo + chunk])
        dec = decompose_batch(ob, view, cfg.attribution)
        sig.append(dec.sigma)
        sig_o.append(dec.sigma_o)
        sig_ph.append(dec.sigma_ph)
        sig_h.append(dec.sigma_h)
        first.append(dec.first_hop)
        shape_parts.append(shape_sums(ob))
        pb = simulate(gp, seeds, probs, p_keys[lo:lo + chunk])
        level_parts.append(level_sums(pb.times, gp))
        lv, deg = correction.profile_arrays(pb.times, gp)
        sp = lv.sum(axis=1)
        sizes_p.append(sp)
        s0 = lv[:, 0]
        if cfg.sice_literal:
            est_sice.append(sp / (1.0 - rho))
        else:
            est_sice.append(s0 + (sp - s0) / (1.0 - rho))
        est_rece.append(correction.rece_arrays(lv, deg, rho, cfg.p, fallback))
        if cfg.keep_traces and cfg.out_dir:
            _dump_traces(cfg, rho, gamma, sample_id, lo, ob, pb)

    sig = np.concatenate(sig)
    mean_sigma = float(sig.mean())
    sp = np.concatenate(sizes_p)
    summary = metrics.SampleSummary(
        sample_id, rho, gamma, mean_sigma,
        float(np.concatenate(sig_o).mean()), float(np.concatenate(sig_ph).mean()),
        float(np.concatenate(sig_h).mean()), float(sp.mean()), cfg.r, tuple(sig.tolist()),
    )
    corr = {}
    for name, est in (("partial", sp), ("sice", np.concatenate(est_sice)), ("rece", np.concatenate(est_rece))):
        hat = float(est.mean())
        corr[name] = (hat, correction.correction_error(mean_sigma, hat))
    return UnitResult(rho, gamma, sample_id, summary, corr, _merge(shape_parts),
                      _merge(level_parts), float(np.concatenate(first).mean()))


def _dump_traces(cfg, rho, gamma, sample_id, lo, ob, pb) -> None:
    d = Path(cfg.out_dir) / "traces"
    d.mkdir(parents=True, exist_ok=True)
    np.savez_compressed(
        d / f"rho{rho!r}_gamma{gamma!r}_s{sample_id}_r{lo}.npz",
        oracle_times=ob.times, oracle_child=ob.parent_child, oracle_parent=ob.parent_src,
        partial_times=pb.times, partial_child=pb.parent_child, partial_parent=pb.parent_src,
    )


def run_experiment(cfg: ExperimentConfig, graph: Graph | None = None) -> ExperimentResult:
    """Run every (rho, gamma, sample) unit; the output does not depend on ``workers``."""
    cfg.validate()
    g = graph if graph is not None else build_graph(cfg)
    probs = read_weights(cfg.weights, g, cfg.p) if cfg.weights else EdgeProbabilities(cfg.p)
    tasks = [(rho, gamma, s) for rho in sorted(cfg.rho_list) for gamma in sorted(cfg.gamma_list)
             for s in range(cfg.v)]
    log.info("running %d units on %d nodes / %d edges", len(tasks), g.node_count, g.edge_count)
    workers = cfg.workers if cfg.workers > 0 else (os.cpu_count() or 1)
    if workers <= 1:
        units = [run_unit(g, probs, cfg, *t) for t in tasks]
    else:
        with ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(g, probs, cfg)) as ex:
            units = list(ex.map(_run_unit_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    return ExperimentResult(cfg, units)


HEADERS = {
    "relative_error.csv": ["rho", "gamma", "relative_error", "ci_low", "ci_high", "v", "r"],
    "samples.csv": ["rho", "gamma", "sample_id", "mean_sigma", "mean_sigma_o", "mean_sigma_ph",
                    "mean_sigma_h", "mean_sigma_p", "r"],
    "corrections.csv": ["rho", "gamma", "sample_id", "method", "sigma_hat", "abs_rel_error"],
    "shape.csv": ["rho", "gamma", "step", "mean_new_activations", "trace_count"],
    "levels.csv": ["rho", "gamma", "step", "mean_clustering", "mean_degree", "count"],
    "first_hop.csv": ["rho", "gamma", "mean_first_hop_observed_fraction", "ci_low", "ci_high", "v"],
    "convergence.csv": ["rho", "gamma", "run", "mean_z", "std_z", "mean_abs_z"],
}


def _fmt(x):
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(int(x)) if isinstance(x, (np.integer,)) else str(x)


def export_csv(result: ExperimentResult, out_dir) -> list[Path]:
    """Write the CSV tables; rows ordered by (rho, gamma, sample_id / step)."""
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise GraphError(f"cannot create {out}: {exc}") from exc
    rows = {name: [] for name in HEADERS}
    r = result.config.r
    for rho, gamma in result.cells():
        sel = sorted(result._select(rho, gamma), key=lambda u: u.sample_id)
        mean, lo, hi = result.relative_error(rho, gamma)
        rows["relative_error.csv"].append([rho, gamma, mean, lo, hi, len(sel), r])
        for u in sel:
            s = u.summary
            rows["samples.csv"].append([rho, gamma, s.sample_id, s.mean_sigma, s.mean_sigma_o,
                                        s.mean_sigma_ph, s.mean_sigma_h, s.mean_sigma_p, s.run_count])
            for method in METHODS:
                hat, err = u.corrections[method]
                rows["corrections.csv"].append([rho, gamma, s.sample_id, method, hat, err])
        sums, counts = result.shape(rho, gamma)
        for t in range(len(sums)):
            if counts[t] > 0:
                rows["shape.csv"].append([rho, gamma, t, sums[t] / counts[t], int(counts[t])])
        count, clu, deg = result.levels(rho, gamma)
        for t in range(len(count)):
            if count[t] > 0:
                rows["levels.csv"].append([rho, gamma, t, clu[t] / count[t], deg[t] / count[t], int(count[t])])
        fm, flo, fhi = result.first_hop(rho, gamma)
        rows["first_hop.csv"].append([rho, gamma, fm, flo, fhi, len(sel)])
        if r >= 2:
            z = result.zscores(rho, gamma)
            for i in range(r):
                rows["convergence.csv"].append([rho, gamma, i + 1, float(z[:, i].mean()),
                                                float(z[:, i].std()), float(np.abs(z[:, i]).mean())])
    paths = []
    for name, header in HEADERS.items():
        path = out / name
        try:
            with open(path, "w", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(header)
                w.writerows([_fmt(x) for x in row] for row in rows[name])
        except OSError as exc:
            raise GraphError(f"cannot write {path}: {exc}") from exc
        paths.append(path)
    return paths


def with_overrides(cfg: ExperimentConfig, **kw) -> ExperimentConfig:
    return replace(cfg, **{k: v for k, v in kw.items() if v is not None})

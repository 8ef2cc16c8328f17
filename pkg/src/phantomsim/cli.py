"""Command-line entry point: ``phantomsim <subcommand> ...``."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys

from . import correction
from .cascades import ATTRIBUTIONS, decompose_batch
from .diffusion import DEFAULT_P, EdgeProbabilities, read_weights, run_keys, simulate
from .experiment import ExperimentConfig, export_csv, run_experiment, stream_seed
from .generators import ToshkParams, erdos_renyi, toshk
from .graph import Graph, GraphError, largest_component, load_edge_list, topology_report, write_edge_list
from .metrics import MetricError
from .partial import partial_graph, read_view, sample_hidden, write_view
from .seeding import degree_discount_seeds, random_seeds, read_seeds, seed_count, write_seeds

_TAG_CLI_SAMPLE, _TAG_CLI_SEEDS = 21, 22


def _globals(parser: argparse.ArgumentParser, suppress: bool) -> None:
    # registered on the root and on every subcommand so they work on either side
    d = argparse.SUPPRESS if suppress else None
    parser.add_argument("--seed", type=int, default=d if suppress else 0, help="master RNG seed")
    parser.add_argument("--workers", type=int, default=d if suppress else 1, help="worker processes (0 = all cores)")
    parser.add_argument("--out-dir", default=d, help="directory for experiment CSVs")
    parser.add_argument("-v", "--verbose", action="store_true", default=d if suppress else False)


def _load(path: str, lcc: bool = False) -> Graph:
    g = load_edge_list(path)
    if lcc:
        sub = largest_component(g)
        g = Graph(sub.indptr, sub.indices, sub.labels)
    return g


def _out(path):
    return open(path, "w", newline="") if path and path != "-" else sys.stdout


def cmd_generate(a) -> None:
    if a.model == "er":
        if a.p is None:
            raise GraphError("--p is required for the er model")
        g = erdos_renyi(a.nodes, a.p, a.seed)
    else:
        g = toshk(ToshkParams(a.nodes, a.pneighbor, a.k), a.seed)
    write_edge_list(g, a.out)
    print(f"wrote {g.node_count} nodes / {g.edge_count} edges to {a.out}", file=sys.stderr)


def cmd_inspect(a) -> None:
    g = _load(a.graph, a.largest_component)
    rep = topology_report(g, a.diameter_sample, a.seed)
    print(json.dumps(rep.as_dict(), indent=2))


def cmd_sample(a) -> None:
    g = _load(a.graph, a.largest_component)
    view = sample_hidden(g, a.rho, stream_seed(a.seed, _TAG_CLI_SAMPLE, a.sample_id), a.sample_id)
    write_view(view, g, a.out)


def cmd_seed(a) -> None:
    g = _load(a.graph, a.largest_component)
    view = read_view(a.view, g) if a.view else None
    gp = partial_graph(g, view) if view is not None else g
    k = a.k if a.k is not None else seed_count(a.gamma, gp.node_count)
    if a.strategy == "degree-discount":
        seeds = degree_discount_seeds(gp, k, a.p, a.gamma)
    else:
        seeds = random_seeds(gp, k, stream_seed(a.seed, _TAG_CLI_SEEDS), a.gamma)
    write_seeds(seeds, g, a.out)


def cmd_diffuse(a) -> None:
    g = _load(a.graph, a.largest_component)
    probs = read_weights(a.weights, g, a.p) if a.weights else EdgeProbabilities(a.p)
    seeds = read_seeds(a.seeds, g)
    keys = run_keys(a.seed, a.runs)
    ob = simulate(g, seeds, probs, keys)
    fh = _out(a.out)
    try:
        w = csv.writer(fh, lineterminator="\n")
        if a.view is None:
            w.writerow(["run_id", "sigma", "horizon"])
            for i, (s, h) in enumerate(zip(ob.sizes().tolist(), ob.horizons().tolist())):
                w.writerow([i, s, h])
            return
        view = read_view(a.view, g)
        gp = partial_graph(g, view)
        dec = decompose_batch(ob, view, a.attribution)
        sp = simulate(gp, seeds, probs, keys).sizes()
        hz = ob.horizons()
        gamma = "" if seeds.gamma is None else repr(seeds.gamma)
        w.writerow(["run_id", "sample_id", "rho", "gamma", "sigma", "sigma_o", "sigma_ph", "sigma_h",
                    "sigma_p", "horizon"])
        for i in range(ob.runs):
            w.writerow([i, view.sample_id, repr(view.rho), gamma, int(dec.sigma[i]), repr(float(dec.sigma_o[i])),
                        repr(float(dec.sigma_ph[i])), int(dec.sigma_h[i]), int(sp[i]), int(hz[i])])
    finally:
        if fh is not sys.stdout:
            fh.close()


def cmd_correct(a) -> None:
    prof = correction.read_profile(a.profile, a.rho, a.p, a.fallback_degree)
    rows = []
    if a.method in ("sice", "both"):
        est = correction.sice(prof, a.literal)
        rows.append(["sice", est.mode, "total", repr(est.sigma_hat)])
    if a.method in ("rece", "both"):
        est = correction.rece(prof)
        rows.extend(["rece", "recursive", t, repr(x)] for t, x in enumerate(est.per_level))
        rows.append(["rece", "recursive", "total", repr(est.sigma_hat)])
    fh = _out(a.out)
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["method", "mode", "step", "sigma_hat"])
        w.writerows(rows)
    finally:
        if fh is not sys.stdout:
            fh.close()


def _floats(text: str) -> tuple:
    return tuple(float(x) for x in text.replace(",", " ").split())


def cmd_experiment(a) -> None:
    over = {
        "graph": a.graph, "model": a.model, "nodes": a.nodes, "p_edge": a.p_edge, "k": a.k,
        "p_neighbor": a.pneighbor, "graph_seed": a.graph_seed, "weights": a.weights,
        "rho_list": a.rho_list, "gamma_list": a.gamma_list, "p": a.p, "v": a.v, "r": a.r,
        "seed_strategy": a.strategy, "attribution": a.attribution, "seed": a.seed,
        "workers": a.workers, "out_dir": a.out_dir,
        "largest_component": True if a.largest_component else None,
        "keep_traces": True if a.keep_traces else None,
        "sice_literal": True if a.literal else None,
        "paired_runs": False if a.unpaired else None,
    }
    over = {k: v for k, v in over.items() if v is not None}
    if a.config:
        cfg = ExperimentConfig.from_file(a.config, **over)
    else:
        cfg = ExperimentConfig.from_mapping(over)
    if cfg.out_dir is None:
        cfg.out_dir = "results"
    res = run_experiment(cfg)
    for path in export_csv(res, cfg.out_dir):
        print(path, file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="phantomsim", description="Phantom-cascade simulation on partial networks.")
    _globals(ap, suppress=False)
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        _globals(sp, suppress=True)
        sp.set_defaults(func=fn)
        return sp

    sp = add("generate", cmd_generate, "write a synthetic graph as an edge list")
    sp.add_argument("--model", choices=("er", "toshk"), required=True)
    sp.add_argument("--nodes", type=int, required=True)
    sp.add_argument("--p", "--p-edge", dest="p", type=float, help="edge probability (er)")
    sp.add_argument("--k", type=float, default=22.0, help="target average degree (toshk)")
    sp.add_argument("--pneighbor", "--p-neighbor", dest="pneighbor", type=float, default=0.9)
    sp.add_argument("--out", required=True)

    sp = add("inspect", cmd_inspect, "topology report of an edge list")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--largest-component", action="store_true")
    sp.add_argument("--diameter-sample", type=int, help="estimate diameter/radius from this many BFS sources")

    sp = add("sample", cmd_sample, "hide a uniform fraction of nodes")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--rho", type=float, required=True)
    sp.add_argument("--sample-id", type=int, default=0)
    sp.add_argument("--largest-component", action="store_true")
    sp.add_argument("--out", required=True)

    sp = add("seed", cmd_seed, "choose seeds on the partial graph")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--view")
    sp.add_argument("--gamma", type=float, default=0.001)
    sp.add_argument("--k", type=int, help="explicit seed count, overrides --gamma")
    sp.add_argument("--strategy", choices=("degree-discount", "random"), default="degree-discount")
    sp.add_argument("--p", type=float, default=DEFAULT_P)
    sp.add_argument("--largest-component", action="store_true")
    sp.add_argument("--out", required=True)

    sp = add("diffuse", cmd_diffuse, "run ICM cascades and write per-run sizes")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--seeds", required=True)
    sp.add_argument("--p", type=float, default=DEFAULT_P)
    sp.add_argument("--weights")
    sp.add_argument("--runs", type=int, default=50)
    sp.add_argument("--view", help="also decompose against this view and run the partial scenario")
    sp.add_argument("--attribution", choices=ATTRIBUTIONS, default="fractional")
    sp.add_argument("--largest-component", action="store_true")
    sp.add_argument("--out", default="-")

    sp = add("experiment", cmd_experiment, "full oracle-vs-partial protocol, CSVs into --out-dir")
    sp.add_argument("--config", help="key = value file; command-line flags override it")
    sp.add_argument("--graph")
    sp.add_argument("--model", choices=("er", "toshk"))
    sp.add_argument("--nodes", type=int)
    sp.add_argument("--p-edge", type=float)
    sp.add_argument("--k", type=float)
    sp.add_argument("--pneighbor", "--p-neighbor", dest="pneighbor", type=float)
    sp.add_argument("--graph-seed", type=int)
    sp.add_argument("--weights")
    sp.add_argument("--rho-list", type=_floats)
    sp.add_argument("--gamma-list", type=_floats)
    sp.add_argument("--p", type=float)
    sp.add_argument("--v", type=int)
    sp.add_argument("--r", type=int)
    sp.add_argument("--strategy", choices=("degree-discount", "random"))
    sp.add_argument("--attribution", choices=ATTRIBUTIONS)
    sp.add_argument("--literal", action="store_true", help="SiCE inflates seeds too")
    sp.add_argument("--unpaired", action="store_true", help="independent coins for the two scenarios")
    sp.add_argument("--largest-component", action="store_true")
    sp.add_argument("--keep-traces", action="store_true")

    sp = add("correct", cmd_correct, "SiCE / ReCE estimates from a partial-cascade profile")
    sp.add_argument("--profile", required=True)
    sp.add_argument("--rho", type=float, required=True)
    sp.add_argument("--p", type=float, default=DEFAULT_P)
    sp.add_argument("--method", choices=("sice", "rece", "both"), default="both")
    sp.add_argument("--literal", action="store_true")
    sp.add_argument("--fallback-degree", type=float)
    sp.add_argument("--out", default="-")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except (GraphError, MetricError, OSError) as exc:
        print(f"phantomsim: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface tying together generation, synthesis, estimation,
and evaluation.

Subcommands: generate, synth, sample, reconstruct, roc, benchmark, compare,
select. Relative output paths are placed under $GGMRECON_OUTDIR when that
variable is set. All randomized commands require --seed, which is recorded in
persisted reports, so identical invocations produce byte-identical files.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import io as gio
from .edges import EdgeDecisionSet
from .errors import EmptySweep, GgmError
from .evaluate import (
    METHODS,
    auc,
    benchmark,
    compare_networks,
    decision_sweep,
    default_grid,
    roc_sweep,
)
from .glasso import GlassoConfig, glasso_edges, glasso_fit
from .graphs import MODEL_ALIASES, generate_graph
from .lpc import LpcConfig, lpc_reconstruct
from .ridge import RidgeConfig, ggmridge_reconstruct
from .stats import DataMatrix, empirical_covariance, standardize_columns
from .synth import covariance_from_precision, sample_gaussian, synthesize_precision

OUTDIR_ENV = "GGMRECON_OUTDIR"

# Real-data defaults for each estimator when reconstructing at one setting.
RECONSTRUCT_DEFAULTS = {
    "lpc": {"alpha": 0.1, "alpha_lpc": 0.02},
    "glasso": {"lam": 0.6},
    "ggmridge": {"lambda_r": 1.0, "alpha_r": 0.01, "null_reps": 20},
}


@dataclass(frozen=True)
class RunConfig:
    """Validated invocation: the subcommand plus its option mapping."""

    subcommand: str
    options: dict


def _out_path(path: str) -> Path:
    base = os.environ.get(OUTDIR_ENV)
    p = Path(path)
    if base and not p.is_absolute():
        out = Path(base) / p
    else:
        out = p
    if out.parent != Path(""):
        out.parent.mkdir(parents=True, exist_ok=True)
    return out


def parse_grid(spec: str) -> np.ndarray:
    """Parse 'start:stop:step' ranges and comma-joined values, e.g.
    '1e-4:0.4:0.01,0.6,0.7,0.8,0.9,1'."""
    values: list[float] = []
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        if ":" in part:
            pieces = part.split(":")
            if len(pieces) != 3:
                raise ValueError(f"bad grid range {part!r}, want start:stop:step")
            start, stop, step = (float(x) for x in pieces)
            if step <= 0:
                raise ValueError(f"grid step must be > 0 in {part!r}")
            count = int(np.floor((stop - start) / step + 1e-9)) + 1
            if count < 1:
                raise ValueError(f"empty grid range {part!r}")
            values.extend((start + step * np.arange(count)).tolist())
        else:
            values.append(float(part))
    if not values:
        raise ValueError(f"empty grid {spec!r}")
    return np.asarray(values)


def select_threshold_by_edge_ratio(
    sweep: list[tuple[float, EdgeDecisionSet]], ratio: float = 3.0
) -> tuple[float, EdgeDecisionSet]:
    """The sweep entry whose edges-per-active-node count is closest to
    `ratio`; ties break toward the smaller parameter.

    Entries with no active nodes score a ratio of 0 and additionally lose
    all ties, so they are only returned when every entry is empty.
    """
    best = None
    for param, dset in sweep:
        nodes = dset.active_node_count()
        achieved = dset.edge_count / nodes if nodes else 0.0
        key = (abs(achieved - ratio), 1 if nodes == 0 else 0, param)
        if best is None or key < best[0]:
            best = (key, param, dset)
    if best is None:
        raise EmptySweep("no sweep entries to select from")
    return best[1], best[2]


def _load_data(opts) -> DataMatrix:
    data = gio.load_matrix_csv(opts["input"], transpose=opts.get("transpose", False))
    if opts.get("standardize"):
        data = standardize_columns(data)
    return data


def _graph_params(opts) -> dict:
    params = {}
    for key in ("edge_prob", "m", "k", "beta"):
        if opts.get(key) is not None:
            params[key] = opts[key]
    return params


def _reconstruct_one(data: DataMatrix, opts) -> EdgeDecisionSet:
    method = opts["method"]
    center = opts["center"]
    d = RECONSTRUCT_DEFAULTS[method]
    if method == "lpc":
        cfg = LpcConfig(
            alpha=opts.get("alpha") or d["alpha"],
            alpha_lpc=opts.get("alpha_lpc") or d["alpha_lpc"],
        )
        return lpc_reconstruct(data, cfg, center=center)
    if method == "glasso":
        cfg = GlassoConfig(lam=d["lam"] if opts.get("lam") is None else opts["lam"])
        s = empirical_covariance(data, center=center)
        return glasso_edges(glasso_fit(s, cfg), names=data.names)
    cfg = RidgeConfig(
        lambda_r=opts.get("lambda_r") or d["lambda_r"],
        alpha_r=opts.get("alpha_r") or d["alpha_r"],
        null_reps=opts.get("null_reps") or d["null_reps"],
    )
    return ggmridge_reconstruct(data, cfg, seed=opts["seed"], center=center)


def _write_edge_outputs(dset: EdgeDecisionSet, opts):
    written = []
    if opts.get("edges_out"):
        path = _out_path(opts["edges_out"])
        gio.export_edge_list(dset, path, fmt="tsv")
        written.append(str(path))
    if opts.get("graphml_out"):
        path = _out_path(opts["graphml_out"])
        gio.export_edge_list(dset, path, fmt="graphml")
        written.append(str(path))
    if opts.get("decisions_out"):
        path = _out_path(opts["decisions_out"])
        gio.write_decisions_tsv(dset, path)
        written.append(str(path))
    return written


def _cmd_generate(opts) -> int:
    adj = generate_graph(opts["model"], opts["p"], opts["seed"], **_graph_params(opts))
    path = _out_path(opts["out"])
    gio.write_edge_list(adj, path)
    print(f"generate: {adj.model} p={adj.p} edges={adj.edge_count} -> {path}")
    return 0


def _cmd_synth(opts) -> int:
    adj = gio.read_edge_list(opts["adjacency"], opts["p"])
    rng = np.random.default_rng(opts["seed"])
    draw = covariance_from_precision(synthesize_precision(adj, rng), rng)
    sigma_path = _out_path(opts["sigma_out"])
    gio.write_dense_csv(draw.sigma, sigma_path)
    if opts.get("precision_out"):
        gio.write_dense_csv(draw.omega, _out_path(opts["precision_out"]))
    print(f"synth: p={adj.p} edges={adj.edge_count} sigma -> {sigma_path}")
    return 0


def _cmd_sample(opts) -> int:
    sigma = gio.read_dense_csv(opts["sigma"])
    data = sample_gaussian(sigma, opts["n"], opts["seed"])
    path = _out_path(opts["out"])
    gio.write_matrix_csv(data, path)
    print(f"sample: n={data.n} p={data.p} -> {path}")
    return 0


def _cmd_reconstruct(opts) -> int:
    data = _load_data(opts)
    dset = _reconstruct_one(data, opts)
    written = _write_edge_outputs(dset, opts)
    print(
        f"reconstruct: method={dset.method} p={dset.p} "
        f"edges={dset.edge_count} nodes={dset.active_node_count()} "
        f"-> {', '.join(written) if written else '(no outputs requested)'}"
    )
    return 0


def _cmd_roc(opts) -> int:
    data = _load_data(opts)
    truth = gio.read_edge_list(opts["truth"], data.p)
    grid = parse_grid(opts["grid"]) if opts.get("grid") else default_grid(opts["method"])
    fixed = {}
    if opts["method"] == "ggmridge":
        fixed = {"lambda_r": opts.get("lambda_r") or 1.0,
                 "null_reps": opts.get("null_reps") or 20}
    elif opts["method"] == "lpc":
        fixed = {"alpha": opts.get("alpha")}  # None keeps the tied sweep
    curve = roc_sweep(opts["method"], grid, data, truth, fixed=fixed,
                      center=opts["center"], seed=opts["seed"])
    area = auc(curve)
    path = _out_path(opts["out"])
    gio.write_curve_csv(curve, path)
    if opts.get("svg"):
        gio.write_roc_svg([curve], _out_path(opts["svg"]))
    print(f"roc: method={opts['method']} points={int(curve.valid.sum())} "
          f"auc={area:.4f} -> {path}")
    return 0


def _cmd_benchmark(opts) -> int:
    models = (["erdos_renyi", "watts_strogatz", "barabasi_albert"]
              if opts["graph"] == "all" else [MODEL_ALIASES[opts["graph"]]])
    params = _graph_params(opts)
    sizes = opts["sizes"] if opts.get("sizes") else [(opts["p"], opts["n"])]
    report = benchmark(
        [(m, params) for m in models],
        sizes,
        methods=opts["methods"],
        replications=opts["reps"],
        seed=opts["seed"],
        threads=opts["threads"],
        center=False,
    )
    table = gio.format_benchmark_table(report)
    if opts.get("out_csv"):
        gio.write_benchmark_csv(report, _out_path(opts["out_csv"]))
    if opts.get("out_table"):
        gio._write_text(_out_path(opts["out_table"]), table)
    if opts.get("curves_dir"):
        base = _out_path(os.path.join(opts["curves_dir"], "x")).parent
        for (graph, p, n, method), curve in report.curves.items():
            gio.write_curve_csv(curve, base / f"roc_{graph}_p{p}_n{n}_{method}.csv")
    print(table, end="")
    return 0


def _cmd_compare(opts) -> int:
    sets = [gio.read_decisions_tsv(path) for path in opts["decisions"]]
    cmp = compare_networks(sets)
    lines = ["method\tnodes\tedges\tmax_degree"]
    for m in cmp.methods:
        lines.append(f"{m}\t{cmp.node_counts[m]}\t{cmp.edge_counts[m]}\t"
                     f"{cmp.max_degrees[m]}")
    lines.append("methods\tshared_nodes\tshared_edges")
    for combo in cmp.shared_nodes:
        lines.append(f"{'+'.join(combo)}\t{cmp.shared_nodes[combo]}\t"
                     f"{cmp.shared_edges[combo]}")
    text = "\n".join(lines) + "\n"
    if opts.get("out"):
        gio._write_text(_out_path(opts["out"]), text)
    print(text, end="")
    return 0


def _cmd_select(opts) -> int:
    data = _load_data(opts)
    method = opts["method"]
    grid = parse_grid(opts["grid"]) if opts.get("grid") else default_grid(method)
    fixed = {}
    if method == "ggmridge":
        fixed = {"lambda_r": opts.get("lambda_r") or 1.0,
                 "null_reps": opts.get("null_reps") or 20}
    elif method == "lpc":
        fixed = {"alpha": opts.get("alpha") or 0.1}
    best = None
    for param, dset in decision_sweep(method, grid, data, fixed=fixed,
                                      center=opts["center"], seed=opts["seed"]):
        nodes = dset.active_node_count()
        achieved = dset.edge_count / nodes if nodes else 0.0
        key = (abs(achieved - opts["ratio"]), 1 if nodes == 0 else 0, param)
        if best is None or key < best[0]:
            best = (key, param, dset, achieved)
    if best is None:
        raise EmptySweep("selection grid was empty")
    _, param, dset, achieved = best
    written = _write_edge_outputs(dset, opts)
    print(
        f"select: method={method} param={param:g} edges={dset.edge_count} "
        f"nodes={dset.active_node_count()} ratio={achieved:.3f} "
        f"-> {', '.join(written) if written else '(no outputs requested)'}"
    )
    return 0


_HANDLERS = {
    "generate": _cmd_generate,
    "synth": _cmd_synth,
    "sample": _cmd_sample,
    "reconstruct": _cmd_reconstruct,
    "roc": _cmd_roc,
    "benchmark": _cmd_benchmark,
    "compare": _cmd_compare,
    "select": _cmd_select,
}


def _sizes_arg(text: str) -> list[tuple[int, int]]:
    sizes = []
    for part in text.split(","):
        p_str, n_str = part.split(":")
        sizes.append((int(p_str), int(n_str)))
    return sizes


def _add_center_flag(parser, default: bool):
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--center", dest="center", action="store_true",
                       help="mean-center columns before covariance")
    group.add_argument("--no-center", dest="center", action="store_false")
    parser.set_defaults(center=default)


def _add_method_params(parser):
    parser.add_argument("--alpha", type=float, help="LPC screening level")
    parser.add_argument("--alpha-lpc", type=float, dest="alpha_lpc",
                        help="LPC edge-test level")
    parser.add_argument("--lam", type=float, help="glasso penalty")
    parser.add_argument("--lambda-r", type=float, dest="lambda_r",
                        help="ridge penalty")
    parser.add_argument("--alpha-r", type=float, dest="alpha_r",
                        help="ridge test level")
    parser.add_argument("--null-reps", type=int, dest="null_reps",
                        help="ridge permutation replicates")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ggmrecon",
        description="Gaussian graphical model network reconstruction & benchmarking",
        epilog=f"Set {OUTDIR_ENV} to redirect relative output paths.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    g = sub.add_parser("generate", help="write a random graph edge list")
    g.add_argument("--model", required=True, choices=sorted(MODEL_ALIASES))
    g.add_argument("--p", type=int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--edge-prob", type=float, dest="edge_prob")
    g.add_argument("--m", type=int)
    g.add_argument("--k", type=int)
    g.add_argument("--beta", type=float)
    g.add_argument("--out", required=True)

    s = sub.add_parser("synth", help="build a covariance matrix for a graph")
    s.add_argument("--adjacency", required=True, help="edge-list file")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--sigma-out", required=True, dest="sigma_out")
    s.add_argument("--precision-out", dest="precision_out")

    sa = sub.add_parser("sample", help="draw Gaussian samples from a covariance")
    sa.add_argument("--sigma", required=True, help="dense covariance CSV")
    sa.add_argument("--n", type=int, required=True)
    sa.add_argument("--seed", type=int, required=True)
    sa.add_argument("--out", required=True)

    r = sub.add_parser("reconstruct", help="estimate a network from data")
    r.add_argument("--input", required=True)
    r.add_argument("--transpose", action="store_true",
                   help="input has one variable per row")
    r.add_argument("--standardize", action="store_true",
                   help="rescale columns to unit variance after loading")
    r.add_argument("--method", required=True, choices=METHODS)
    r.add_argument("--seed", type=int, default=0)
    _add_method_params(r)
    _add_center_flag(r, default=True)
    r.add_argument("--edges-out", dest="edges_out")
    r.add_argument("--graphml-out", dest="graphml_out")
    r.add_argument("--decisions-out", dest="decisions_out")

    rc = sub.add_parser("roc", help="sweep a method against a known graph")
    rc.add_argument("--input", required=True)
    rc.add_argument("--transpose", action="store_true")
    rc.add_argument("--standardize", action="store_true")
    rc.add_argument("--truth", required=True, help="ground-truth edge list")
    rc.add_argument("--method", required=True, choices=METHODS)
    rc.add_argument("--grid", help="e.g. 0.001:1:0.005 or 0.01,0.05,0.1")
    rc.add_argument("--seed", type=int, default=0)
    _add_method_params(rc)
    _add_center_flag(rc, default=False)
    rc.add_argument("--out", required=True)
    rc.add_argument("--svg")

    b = sub.add_parser("benchmark", help="replicated simulation study")
    b.add_argument("--graph", required=True,
                   choices=sorted(MODEL_ALIASES) + ["all"])
    b.add_argument("--p", type=int, default=50)
    b.add_argument("--n", type=int, default=20)
    b.add_argument("--sizes", type=_sizes_arg,
                   help="comma list of p:n pairs, overrides --p/--n")
    b.add_argument("--reps", type=int, required=True)
    b.add_argument("--seed", type=int, required=True)
    b.add_argument("--threads", type=int, default=1)
    b.add_argument("--methods", type=lambda t: t.split(","),
                   default=list(METHODS))
    b.add_argument("--edge-prob", type=float, dest="edge_prob")
    b.add_argument("--m", type=int)
    b.add_argument("--k", type=int)
    b.add_argument("--beta", type=float)
    b.add_argument("--out-csv", dest="out_csv")
    b.add_argument("--out-table", dest="out_table")
    b.add_argument("--curves-dir", dest="curves_dir")

    c = sub.add_parser("compare", help="overlap report for decision files")
    c.add_argument("decisions", nargs="+", help="decision TSV files")
    c.add_argument("--out")

    se = sub.add_parser("select", help="pick a threshold by edge/node ratio")
    se.add_argument("--input", required=True)
    se.add_argument("--transpose", action="store_true")
    se.add_argument("--standardize", action="store_true")
    se.add_argument("--method", required=True, choices=METHODS)
    se.add_argument("--grid")
    se.add_argument("--ratio", type=float, default=3.0)
    se.add_argument("--seed", type=int, default=0)
    _add_method_params(se)
    _add_center_flag(se, default=True)
    se.add_argument("--edges-out", dest="edges_out")
    se.add_argument("--graphml-out", dest="graphml_out")
    se.add_argument("--decisions-out", dest="decisions_out")

    return parser


def run_cli(args: list[str]) -> int:
    """Parse and dispatch; returns the process exit status."""
    parser = build_parser()
    ns = parser.parse_args(args)
    cfg = RunConfig(subcommand=ns.subcommand, options=vars(ns))
    handler = _HANDLERS[cfg.subcommand]
    try:
        return handler(cfg.options)
    except GgmError as exc:
        print(f"ggmrecon {cfg.subcommand}: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"ggmrecon {cfg.subcommand}: i/o error: {exc}", file=sys.stderr)
        return 1


def main(argv: list[str] | None = None) -> int:
    return run_cli(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())

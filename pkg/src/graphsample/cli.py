"""Command-line interface.

Subcommands:
    gen         generate a graph and write it as an edge list
    analyze     print incoherence / conditioning / bound numbers for a graph
    recover     one-shot basis pursuit solve from CSV inputs
    experiment  run a preset or config-file experiment to CSV (+ figures)

Exit codes: 0 success, 2 configuration error, 3 solver-failure rate above 50%.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import experiments, plotting
from .diffusion import (
    DiffusionMatrix,
    binary_diffusion,
    load_matrix_csv,
    metropolis_matrix,
)
from .errors import GraphSampleError, ParameterError
from .graphs import GraphSpec, load_edge_list, save_adjacency_csv, save_edge_list
from .recovery import SolverConfig, basis_pursuit
from .sampling import variable_density_plan
from .spectral import (
    bound_c1_nonnegative,
    bound_t1_uniform,
    bound_t2_er,
    bound_t3_small_world,
    bound_t4_variable_density,
    cond_nonnegative_shortcut,
    delta_kappa_small_world,
    gamma_from_matrix,
    incoherence_mu,
    sparse_spectrum,
)
from .graphs import generate_ring_regular

_FAMILY_ALIASES = {
    "er": "er",
    "small-world": "small_world",
    "small_world": "small_world",
    "ring": "ring_regular",
    "ring_regular": "ring_regular",
    "star": "star_like",
    "star_like": "star_like",
}


def _graph_spec_from_args(args) -> GraphSpec:
    family = _FAMILY_ALIASES[args.family]
    return GraphSpec(
        family=family,
        n=args.n,
        b=args.b,
        d=args.d,
        target_edges=args.target_edges,
    )


def _add_family_arguments(parser, require_n=True):
    parser.add_argument("--family", choices=sorted(_FAMILY_ALIASES), required=False)
    parser.add_argument("--n", type=int, required=require_n)
    parser.add_argument("--b", type=float, default=None)
    parser.add_argument("--d", type=int, default=None)
    parser.add_argument("--target-edges", dest="target_edges", type=int, default=None)
    parser.add_argument("--seed", type=int, default=0)


def _cmd_gen(args) -> int:
    spec = _graph_spec_from_args(args)
    graph = spec.build(np.random.default_rng(args.seed))
    save_edge_list(graph, args.out)
    if args.adjacency_csv:
        save_adjacency_csv(graph, args.adjacency_csv)
    print(f"wrote {graph.n} vertices, {graph.edge_count} edges to {args.out}")
    return 0


def _cmd_analyze(args) -> int:
    if args.edge_list:
        graph = load_edge_list(args.edge_list)
        spec_dict = {"source": str(args.edge_list)}
    else:
        if not args.family:
            raise ParameterError("analyze needs --edge-list or --family")
        spec = _graph_spec_from_args(args)
        graph = spec.build(np.random.default_rng(args.seed))
        spec_dict = spec.to_dict()
    if args.metropolis:
        h = metropolis_matrix(graph)
    else:
        h = binary_diffusion(graph, args.delta)
    report: dict = {
        "graph": spec_dict,
        "n": graph.n,
        "edge_count": graph.edge_count,
        "k": args.k,
        "diffusion": "metropolis" if args.metropolis else f"binary(delta={args.delta})",
    }
    gamma = gamma_from_matrix(h)
    mu = incoherence_mu(h, gamma)
    spec_g = sparse_spectrum(gamma.gamma, args.k, method=args.method)
    spec_gi = sparse_spectrum(np.linalg.inv(gamma.gamma), args.k, method=args.method)
    kappa_val = max(spec_g.cond, spec_gi.cond)
    vd = variable_density_plan(h, gamma)
    report.update(
        {
            "mu": mu,
            "kappa": kappa_val,
            "kappa_method": spec_g.method,
            "kappa_is_estimate": not (spec_g.certified and spec_gi.certified),
            "phi_bar": vd.phi_bar,
        }
    )
    bounds = [
        bound_t1_uniform(graph.n, args.k, mu, kappa_val, args.C, args.epsilon),
        bound_t4_variable_density(
            graph.n, args.k, vd.phi_bar, kappa_val, args.C, args.epsilon
        ),
    ]
    if not args.metropolis and args.family and _FAMILY_ALIASES[args.family] == "er":
        if 0.0 < args.b < 1.0:
            bounds.append(
                bound_t2_er(graph.n, args.k, args.b, args.delta, args.C, args.epsilon)
            )
    if not args.metropolis and args.family and _FAMILY_ALIASES[args.family] == "small_world":
        ring = generate_ring_regular(graph.n, args.d)
        dk = delta_kappa_small_world(ring, graph.n, args.d, args.b, args.delta, args.k)
        report["delta_kappa"] = dk
        bounds.append(
            bound_t3_small_world(graph.n, args.k, mu, dk, args.C, args.epsilon)
        )
    if h.nonnegative:
        cond_val = cond_nonnegative_shortcut(h, args.k, method=args.method)
        report["cond_nonnegative"] = cond_val
        bounds.append(
            bound_c1_nonnegative(graph.n, args.k, mu, cond_val, args.C, args.epsilon)
        )
    report["bounds"] = [b.to_dict() for b in bounds]
    text = json.dumps(report, indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return 0


def _cmd_recover(args) -> int:
    h_m = load_matrix_csv(args.matrix)
    y = np.atleast_1d(np.loadtxt(args.y, delimiter=","))
    config = SolverConfig(
        abs_tol=args.abs_tol,
        rel_tol=args.rel_tol,
        max_iterations=args.max_iterations,
    )
    result = basis_pursuit(h_m, y, config)
    np.savetxt(args.out, result.alpha_hat, delimiter=",")
    summary = {
        "status": result.status,
        "residual_norm": result.residual_norm,
        "l1_value": result.l1_value,
        "iterations": result.iterations,
        "out": str(args.out),
    }
    print(json.dumps(summary, indent=2))
    return 0


def _cmd_experiment(args) -> int:
    if bool(args.preset) == bool(args.config):
        raise ParameterError("experiment needs exactly one of --preset or --config")
    if args.preset:
        configs = experiments.preset(args.preset, args.scale, master_seed=args.seed)
    else:
        configs = [experiments.load_config(path) for path in args.config]
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    worst_failure_rate = 0.0
    rendered = []
    for config in configs:
        def progress(cfg, row):
            print(
                f"[{cfg.name}] m={row['m']:>5d} mean_error={row['mean_error']:.4f} "
                f"success_rate={row['success_rate']:.2f}",
                flush=True,
            )
        curve = experiments.run_experiment(config, progress=progress)
        target = Path(config.output_path) if config.output_path else out_dir / f"{config.name}.{args.format}"
        experiments.emit(curve, fmt=args.format, path=target)
        print(f"wrote {target}")
        rendered.append((config.name, curve))
        total = sum(row["trials"] for row in curve.rows)
        failures = sum(row["failed_trials"] for row in curve.rows)
        worst_failure_rate = max(worst_failure_rate, failures / total)
    if not args.no_plot:
        figure_path = out_dir / f"{args.preset or 'experiment'}_curves.png"
        plotting.render_curves(rendered, figure_path, title=args.preset)
        print(f"wrote {figure_path}")
    if worst_failure_rate > 0.5:
        print(
            f"solver failure rate {worst_failure_rate:.0%} exceeds 50%",
            file=sys.stderr,
        )
        return 3
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphsample",
        description="Random sampling and sparse recovery of diffused graph signals",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate a graph edge list")
    _add_family_arguments(p_gen)
    p_gen.add_argument("--out", required=True)
    p_gen.add_argument("--adjacency-csv", dest="adjacency_csv", default=None)
    p_gen.set_defaults(func=_cmd_gen)

    p_an = sub.add_parser("analyze", help="incoherence / conditioning / bounds")
    _add_family_arguments(p_an, require_n=False)
    p_an.add_argument("--edge-list", dest="edge_list", default=None)
    p_an.add_argument("--delta", type=float, default=1.0)
    p_an.add_argument("--metropolis", action="store_true")
    p_an.add_argument("--k", type=int, required=True)
    p_an.add_argument("--C", type=float, default=1.0)
    p_an.add_argument("--epsilon", type=float, default=1.0)
    p_an.add_argument(
        "--method",
        choices=["auto", "brute_force", "greedy_estimate"],
        default="auto",
    )
    p_an.add_argument("--out", default=None)
    p_an.set_defaults(func=_cmd_analyze)

    p_rec = sub.add_parser("recover", help="one-shot basis pursuit solve")
    p_rec.add_argument("--matrix", required=True)
    p_rec.add_argument("--y", required=True)
    p_rec.add_argument("--out", required=True)
    p_rec.add_argument("--abs-tol", dest="abs_tol", type=float, default=1e-8)
    p_rec.add_argument("--rel-tol", dest="rel_tol", type=float, default=1e-6)
    p_rec.add_argument(
        "--max-iterations", dest="max_iterations", type=int, default=10_000
    )
    p_rec.set_defaults(func=_cmd_recover)

    p_exp = sub.add_parser("experiment", help="run a batch experiment")
    p_exp.add_argument("--preset", choices=["example1", "example2", "example3", "example4"])
    p_exp.add_argument("--scale", choices=["paper", "desk"], default="desk")
    p_exp.add_argument("--seed", type=int, default=12345)
    p_exp.add_argument("--config", action="append", default=None)
    p_exp.add_argument("--out", required=True)
    p_exp.add_argument("--format", choices=["csv", "json"], default="csv")
    p_exp.add_argument("--no-plot", action="store_true")
    p_exp.set_defaults(func=_cmd_experiment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GraphSampleError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

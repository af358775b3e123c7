"""Command line entry point: generate, run, predict, plotdata.

Exit status is 0 on success, 1 for configuration or usage errors and 2 for
failures while doing the work.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from dataclasses import replace
from pathlib import Path

import numpy as np

from .analytics import (
    DegreeClassProfile,
    er_percolation_threshold,
    eta_regularization_condition,
    mean_field_tbs_condition,
    molloy_reed_ratio,
)
from .generators import Family, GeneratorSpec, RewireMode, RewireSpec, fit_power_law_exponent, generate, network_filename, rewire_assortativity
from .graph import degree_stats, read_edge_list, write_edge_list
from .harness import ConfigError, emit_plot_data, export_csv, load_sweep, read_csv, records_to_csv, run_sweep, substream
from .placement import read_assignment

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _cmd_generate(args) -> int:
    try:
        base = GeneratorSpec(Family(args.family), args.node_count, args.mean_degree, args.alpha)
        rewire = None if args.rewire == "none" else RewireSpec(RewireMode(args.rewire), target_assortativity=args.rewire_target)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    for s in range(args.seed, args.seed + args.count):
        spec = replace(base, rng_seed=s)
        net = generate(spec, substream(s, 0))
        name = network_filename(spec)
        if rewire is not None:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore" if args.quiet else "default")
                net = rewire_assortativity(net, rewire, substream(s, 1))
            name = name.replace(".edges", f"_{rewire.mode.value}.edges")
        write_edge_list(net, out / name)
        print(out / name)
    return EXIT_OK


def _cmd_run(args) -> int:
    try:
        text = Path(args.config).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {args.config}: {exc.strerror}") from None
    spec = load_sweep(text)
    with warnings.catch_warnings():
        if args.quiet:
            warnings.simplefilter("ignore", RuntimeWarning)
        records = run_sweep(spec, workers=args.workers)
    path = args.output or spec.output_path
    if path:
        export_csv(records, path)
    else:
        sys.stdout.write(records_to_csv(records))
    return EXIT_OK


def _cmd_predict(args) -> int:
    net = read_edge_list(args.network)
    assignment = read_assignment(args.assignment)
    if len(assignment) != net.node_count:
        raise ConfigError(f"assignment has {len(assignment)} nodes, network has {net.node_count}")
    stats = degree_stats(net)
    ratio = molloy_reed_ratio(DegreeClassProfile.from_assignment(net, assignment))
    theta = float(assignment.is_ss.mean())
    lines = [
        f"nodes\t{net.node_count}",
        f"mean_degree\t{stats.mean_degree:.6g}",
        f"theta\t{theta:.6g}",
        f"molloy_reed_ratio\t{ratio:.6g}",
        f"ss_percolates\t{ratio > 1}",
        f"er_threshold\t{er_percolation_threshold(stats.mean_degree):.6g}",
        f"theta_above_gamma\t{mean_field_tbs_condition(theta, args.gamma)}",
    ]
    try:
        gamma_exp = fit_power_law_exponent(net)
    except ValueError:
        gamma_exp = None
    lines.append(f"fitted_gamma\t{'n/a' if gamma_exp is None else f'{gamma_exp:.4g}'}")
    if args.eta is not None:
        cond = "n/a" if gamma_exp is None else eta_regularization_condition(args.eta, gamma_exp)
        lines.append(f"eta_condition\t{cond}")
    print("\n".join(lines))
    return EXIT_OK


def _cmd_plotdata(args) -> int:
    records = read_csv(args.csv)
    emit_plot_data(records, args.mode, args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mixcascade", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="write network instances as edge lists")
    g.add_argument("--family", choices=[f.value for f in Family], required=True)
    g.add_argument("--node-count", type=int, default=1000)
    g.add_argument("--mean-degree", type=int, default=4)
    g.add_argument("--alpha", type=float)
    g.add_argument("--count", type=int, default=1)
    g.add_argument("--seed", type=int, default=0, help="first instance seed")
    g.add_argument("--rewire", choices=["none", "assortative", "disassortative"], default="none")
    g.add_argument("--rewire-target", type=float, default=0.3)
    g.add_argument("--outdir", default=".")
    g.add_argument("-q", "--quiet", action="store_true")
    g.set_defaults(func=_cmd_generate)

    r = sub.add_parser("run", help="run a sweep from a TOML config and write CSV")
    r.add_argument("config")
    r.add_argument("-o", "--output", help="CSV path (default: output_path key, else stdout)")
    r.add_argument("-j", "--workers", type=int, help="overrides MIXCASCADE_WORKERS")
    r.add_argument("-q", "--quiet", action="store_true", help="silence rewiring warnings")
    r.set_defaults(func=_cmd_run)

    pr = sub.add_parser("predict", help="analytical predictors for a network and assignment")
    pr.add_argument("network")
    pr.add_argument("assignment")
    pr.add_argument("--gamma", type=float, required=True, help="TBS threshold")
    pr.add_argument("--eta", type=float)
    pr.set_defaults(func=_cmd_predict)

    pd = sub.add_parser("plotdata", help="turn a sweep CSV into plot-ready series")
    pd.add_argument("csv")
    pd.add_argument("--mode", choices=["curves", "heatmap"], default="curves")
    pd.add_argument("-o", "--output", required=True)
    pd.set_defaults(func=_cmd_plotdata)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # surfaced as a runtime failure
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

    lurkergame generate-network --model BA --n 5000 --output out/
    lurkergame metrics --model WS --beta 0.0 --output out/
    lurkergame simulate --nu 0.5 --prize-k 2 --beta 0.5 --n 1000 --output out/
    lurkergame meanfield --output out/
    lurkergame sweep --model BA --n 1000 --k-values 1 3 5 --output out/

Every artifact starts with comment lines carrying the resolved configuration,
and ``--config`` accepts either a YAML file or a previously written artifact.
"""

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import engine, meanfield, netgen
from .config import load_file, parse_config
from .errors import LurkerGameError, SpecificationError
from .sweep import SweepSpec, sweep, sweep_two_pass, worker_count

__all__ = ["main", "build_parser", "dispatch", "EXIT_OK", "EXIT_CONFIG", "EXIT_RUNTIME"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

# flag dest -> (section, key)
_FLAG_KEYS = {
    "model": ("network", "model"),
    "n": ("network", "n"),
    "mean_degree": ("network", "mean_degree"),
    "m": ("network", "m"),
    "beta": ("network", "beta"),
    "net_seed": ("network", "seed"),
    "graph": ("network", "graph_path"),
    "r": ("game", "r"),
    "nu": ("game", "nu"),
    "K": ("game", "K"),
    "vc": ("game", "vc"),
    "prize_k": ("game", "prize_period_k"),
    "memory": ("game", "memory_mode"),
    "cutoff": ("game", "cutoff"),
    "init_rho_c": ("execution", "init_rho_c"),
    "max_steps": ("execution", "max_steps"),
    "runs": ("execution", "runs"),
    "seed": ("execution", "master_seed"),
    "output": ("execution", "output_path"),
    "stride": ("execution", "sample_stride"),
    "workers": ("execution", "worker_count"),
    "t_end": ("meanfield", "t_end"),
    "dt": ("meanfield", "dt"),
    "nu_grid": ("sweep", "nu_grid"),
    "k_values": ("sweep", "k_values"),
    "fine_step": ("sweep", "fine_step"),
    "refine": ("sweep", "refine"),
}

log = logging.getLogger("lurkergame")


def _add_common(p):
    p.add_argument("--config", help="YAML configuration or a previous artifact")
    p.add_argument("--output", help="output directory")
    p.add_argument("--verbose", "-v", action="store_true")
    p.add_argument("--workers", type=int, help="worker processes (metrics and sweep)")
    net = p.add_argument_group("network")
    net.add_argument("--model", choices=["WS", "BA", "Complete"])
    net.add_argument("--n", type=int)
    net.add_argument("--mean-degree", type=int, help="WS lattice degree")
    net.add_argument("--m", type=int, help="BA edges per new node")
    net.add_argument("--beta", type=float, help="WS rewiring probability")
    net.add_argument("--net-seed", type=int)


def _add_game(p, with_nu=True):
    game = p.add_argument_group("game")
    game.add_argument("--r", type=float)
    if with_nu:
        game.add_argument("--nu", type=float)
    game.add_argument("--K", type=float)
    game.add_argument("--vc", type=float)
    game.add_argument("--memory", choices=["memoryless", "memory-aware"])
    game.add_argument("--cutoff", type=float)


def _add_exec(p):
    ex = p.add_argument_group("execution")
    ex.add_argument("--init-rho-c", type=float)
    ex.add_argument("--max-steps", type=int)
    ex.add_argument("--runs", type=int)
    ex.add_argument("--seed", type=int, help="master seed of the dynamics")


def build_parser():
    parser = argparse.ArgumentParser(prog="lurkergame", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("generate-network", help="write a network as an edge list")
    _add_common(p)

    p = sub.add_parser("metrics", help="path length, diameter and clustering")
    _add_common(p)
    p.add_argument("--runs", type=int, help="number of consecutive network seeds")

    p = sub.add_parser("simulate", help="Monte Carlo run(s) on one network")
    _add_common(p)
    _add_game(p)
    p.add_argument("--prize-k", type=int, help="prize period (omit to disable rewarding)")
    _add_exec(p)
    p.add_argument("--stride", type=int, help="time-series sampling stride")
    p.add_argument("--graph", help="play on this edge-list file instead of generating one")

    p = sub.add_parser("meanfield", help="integrate the mean-field equation")
    _add_common(p)
    _add_game(p)
    p.add_argument("--init-rho-c", type=float)
    p.add_argument("--t-end", type=float)
    p.add_argument("--dt", type=float)

    p = sub.add_parser("sweep", help="phase fractions over nu and prize period")
    _add_common(p)
    _add_game(p, with_nu=False)
    _add_exec(p)
    p.add_argument("--nu-grid", type=float, nargs="+")
    p.add_argument("--k-values", type=int, nargs="+")
    p.add_argument("--fine-step", type=float)
    p.add_argument("--no-refine", dest="refine", action="store_const", const=False)
    return parser


def _overrides(args):
    out = {}
    for dest, (section, key) in _FLAG_KEYS.items():
        value = getattr(args, dest, None)
        if value is not None:
            out.setdefault(section, {})[key] = value
    return out


def _fmt(x):
    return format(float(x), ".12g")


def _header(config, extra=()):
    lines = [f"# config={config.echo()}"]
    lines += [f"# {line}" for line in extra]
    return "\n".join(lines) + "\n"


def _out_path(config, name):
    return os.path.join(config.execution.output_path, name)


def _write(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    log.info("wrote %s", path)
    return path


def _cmd_generate(config):
    g = netgen.generate(config.network)
    text = netgen.write_edgelist(g, comments=[f"config={config.echo()}"])
    return [_write(_out_path(config, "network.edgelist"), text)]


def _metrics_row(spec):
    g = netgen.generate(spec)
    apl, diam = netgen.path_stats(g)
    return spec.seed, apl, diam, netgen.clustering_coefficient(g), netgen.transitivity(g)


def _cmd_metrics(config):
    spec = config.network
    specs = [spec.with_seed(spec.seed + i) for i in range(config.execution.runs)]
    workers = min(worker_count(config.execution.worker_count), len(specs))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_metrics_row, specs))
    else:
        rows = [_metrics_row(s) for s in specs]
    beta_or_m = spec.beta if spec.model is netgen.NetworkModel.WS else spec.mean_degree
    lines = ["model,beta_or_m,n,seed,avg_path_length,diameter,clustering,transitivity"]
    for seed, apl, diam, cc, tr in rows:
        lines.append(f"{spec.model.value},{beta_or_m:g},{spec.n},{seed},{apl:.6f},{diam},"
                     f"{cc:.6f},{tr:.6f}")
    if len(rows) > 1:
        m = np.mean([r[1:] for r in rows], axis=0)
        lines.append(f"{spec.model.value},{beta_or_m:g},{spec.n},mean,{m[0]:.6f},{m[1]:g},"
                     f"{m[2]:.6f},{m[3]:.6f}")
    return [_write(_out_path(config, "metrics.csv"), _header(config) + "\n".join(lines) + "\n")]


def _cmd_simulate(config):
    ex = config.execution
    if config.graph_path is not None:
        with open(config.graph_path, encoding="utf-8") as fh:
            g = netgen.read_edgelist(fh)
    else:
        g = netgen.generate(config.network)
    written = []
    summaries = []
    seeds = np.random.SeedSequence(ex.master_seed).generate_state(ex.runs, np.uint32)
    for i in range(ex.runs):
        seed = ex.master_seed if ex.runs == 1 else int(seeds[i])
        res = engine.run(g, config.game, ex.init_rho_c, ex.max_steps, seed, ex.sample_stride)
        lines = ["step,rho_c"] + [f"{s},{_fmt(r)}" for s, r in res.series]
        name = "series.csv" if ex.runs == 1 else f"series_{i:03d}.csv"
        written.append(_write(_out_path(config, name),
                              _header(config, [f"run={i} seed={seed}"]) + "\n".join(lines) + "\n"))
        summaries.append({"run": i, "seed": seed, "phase": res.phase.value,
                          "ordering": res.phase.ordering, "steps_executed": res.steps_executed,
                          "final_rho_c": res.final_rho_c})
    summary = {"config": json.loads(config.echo())}
    if ex.runs == 1:
        summary.update(summaries[0])
    else:
        summary["runs"] = summaries
    written.append(_write(_out_path(config, "summary.json"),
                          json.dumps(summary, indent=2, sort_keys=True) + "\n"))
    return written


def _cmd_meanfield(config):
    tr = meanfield.integrate(config.execution.init_rho_c, config.game,
                             config.meanfield["t_end"], config.meanfield["dt"])
    lines = ["t,rho_c,rho_d"]
    lines += [f"{_fmt(t)},{_fmt(c)},{_fmt(d)}" for t, c, d in zip(tr.t, tr.rho_c, tr.rho_d)]
    extra = [f"p_c={_fmt(tr.p_c)} p_d={_fmt(tr.p_d)}"]
    return [_write(_out_path(config, "trajectory.csv"),
                   _header(config, extra) + "\n".join(lines) + "\n")]


def _cmd_sweep(config):
    ex = config.execution
    sw = config.sweep
    spec = SweepSpec(config.network, config.game, tuple(sw["nu_grid"]), tuple(sw["k_values"]),
                     ex.runs, ex.max_steps, ex.master_seed, ex.init_rho_c)
    workers = worker_count(ex.worker_count)
    if sw["refine"]:
        res = sweep_two_pass(spec, sw["fine_step"], sw["window"], workers)
    else:
        res = sweep(spec, workers)
    written = [_write(_out_path(config, "sweep.csv"), _header(config) + res.to_csv())]
    net = config.network
    beta_or_m = net.beta if net.model is netgen.NetworkModel.WS else net.mean_degree
    lines = ["model,beta_or_m,memory,k,critical_nu"]
    for k, crit in res.critical.items():
        lines.append(f"{net.model.value},{beta_or_m:g},{config.game.memory_mode.value},"
                     f"{'none' if k is None else k},{'none' if crit is None else format(crit, 'g')}")
    written.append(_write(_out_path(config, "critical.csv"),
                          _header(config) + "\n".join(lines) + "\n"))
    return written


def dispatch(config):
    """Run the subcommand of ``config``; return the list of files written."""
    os.makedirs(config.execution.output_path, exist_ok=True)
    if config.subcommand == "generate-network":
        return _cmd_generate(config)
    if config.subcommand == "metrics":
        return _cmd_metrics(config)
    if config.subcommand == "simulate":
        return _cmd_simulate(config)
    if config.subcommand == "meanfield":
        return _cmd_meanfield(config)
    return _cmd_sweep(config)


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    overrides = _overrides(args)
    env_workers = os.environ.get("LURKERGAME_WORKERS")
    try:
        file_values = load_file(args.config) if args.config else None
        if env_workers and "worker_count" not in overrides.get("execution", {}):
            overrides.setdefault("execution", {})["worker_count"] = env_workers
        config = parse_config(args.subcommand, file_values, overrides)
    except (SpecificationError, OSError, ValueError) as exc:
        print(f"lurkergame: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        for path in dispatch(config):
            print(path)
    except LurkerGameError as exc:
        print(f"lurkergame: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as exc:
        print(f"lurkergame: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

"""Run configuration: hierarchical YAML merged with command-line overrides.

A configuration has the sections ``network``, ``game``, ``execution``,
``meanfield`` and ``sweep``. Values given on the command line replace those
from the file; everything left unset takes the documented default. Artifacts
written by the CLI carry the resolved configuration as a ``# config=<json>``
comment line, and such an artifact is itself accepted as a configuration file.
"""

import json
import os
from dataclasses import dataclass

import yaml

from .errors import SpecificationError
from .game import GameParams, MemoryMode
from .netgen import NetworkModel, NetworkSpec

__all__ = ["RunConfig", "SUBCOMMANDS", "DEFAULTS", "load_file", "parse_config"]

SUBCOMMANDS = ("generate-network", "metrics", "simulate", "meanfield", "sweep")

DEFAULTS = {
    "network": {"model": "WS", "n": 5000, "mean_degree": None, "m": None,
                "beta": 0.0, "seed": 0, "graph_path": None},
    "game": {"r": 2.0, "nu": None, "K": 0.5, "vc": 1.0, "prize_period_k": None,
             "memory_mode": "memoryless", "cutoff": 20.0},
    "execution": {"init_rho_c": 0.5, "max_steps": 10**7, "runs": None, "master_seed": 0,
                  "output_path": "out", "sample_stride": None, "worker_count": None},
    "meanfield": {"t_end": 50.0, "dt": 1e-3},
    "sweep": {"nu_grid": [round(0.1 * i, 1) for i in range(1, 11)], "k_values": [1, 3, 5],
              "refine": True, "fine_step": 0.02, "window": 0.1},
}

_INT_KEYS = {("network", "n"), ("network", "mean_degree"), ("network", "m"),
             ("network", "seed"), ("game", "prize_period_k"), ("execution", "max_steps"),
             ("execution", "runs"), ("execution", "master_seed"),
             ("execution", "sample_stride"), ("execution", "worker_count")}
_FLOAT_KEYS = {("network", "beta"), ("game", "r"), ("game", "nu"), ("game", "K"),
               ("game", "vc"), ("game", "cutoff"), ("execution", "init_rho_c"),
               ("meanfield", "t_end"), ("meanfield", "dt"), ("sweep", "fine_step"),
               ("sweep", "window")}


@dataclass(frozen=True)
class Execution:
    init_rho_c: float
    max_steps: int
    runs: int
    master_seed: int
    output_path: str
    sample_stride: int | None
    worker_count: int | None


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved configuration of one CLI invocation.

    ``game`` is None only for subcommands that do not play the game.
    ``resolved`` is the plain nested dict echoed into artifacts.
    """

    subcommand: str
    network: NetworkSpec
    game: GameParams | None
    execution: Execution
    meanfield: dict
    sweep: dict
    resolved: dict

    @property
    def graph_path(self):
        """Edge-list file to play on instead of a generated network, if any."""
        return self.resolved["network"]["graph_path"]

    def echo(self):
        """The resolved configuration as one canonical JSON line.

        ``worker_count`` and ``output_path`` are left out: they never change
        results, so a rerun into another directory gives identical bytes.
        """
        data = {sec: dict(vals) for sec, vals in self.resolved.items()}
        data["execution"].pop("worker_count")
        data["execution"].pop("output_path")
        return json.dumps({"subcommand": self.subcommand, **data},
                          sort_keys=True, separators=(",", ":"))


def load_file(path):
    """Read a YAML configuration, or the ``# config=`` line of an artifact."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    for line in text.splitlines():
        if line.startswith("# config="):
            data = json.loads(line[len("# config="):])
            data.pop("subcommand", None)
            return data
    data = yaml.safe_load(text)
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise SpecificationError(f"{path}: top level must be a mapping of sections")
    return data


def _merge(file_values, overrides):
    merged = {sec: dict(vals) for sec, vals in DEFAULTS.items()}
    for source in (file_values or {}, overrides or {}):
        for section, values in source.items():
            if section not in merged:
                raise SpecificationError(f"unknown configuration section {section!r}")
            if values is None:
                continue
            if not isinstance(values, dict):
                raise SpecificationError(f"section {section!r} must be a mapping")
            for key, value in values.items():
                if key not in merged[section]:
                    raise SpecificationError(f"unknown key {section}.{key}")
                merged[section][key] = value
    return merged


def _coerce(merged):
    for (sec, key) in _INT_KEYS:
        v = merged[sec][key]
        if v is None:
            continue
        if isinstance(v, bool) or (isinstance(v, float) and not v.is_integer()):
            raise SpecificationError(f"{sec}.{key}: expected an integer, got {v!r}")
        try:
            merged[sec][key] = int(v)
        except (TypeError, ValueError):
            raise SpecificationError(f"{sec}.{key}: expected an integer, got {v!r}") from None
    for (sec, key) in _FLOAT_KEYS:
        v = merged[sec][key]
        if v is None:
            continue
        try:
            merged[sec][key] = float(v)
        except (TypeError, ValueError):
            raise SpecificationError(f"{sec}.{key}: expected a number, got {v!r}") from None
    sw = merged["sweep"]
    try:
        sw["nu_grid"] = [round(float(x), 10) for x in sw["nu_grid"]]
        sw["k_values"] = [None if k in (None, "none") else int(k) for k in sw["k_values"]]
    except (TypeError, ValueError) as exc:
        raise SpecificationError(f"sweep: malformed grid ({exc})") from None
    sw["refine"] = bool(sw["refine"])
    return merged


def _network(net):
    model = NetworkModel.parse(net["model"])
    net["model"] = model.value
    if model is NetworkModel.BA:
        if net["mean_degree"] is not None and net["m"] is None:
            raise SpecificationError("network.m: BA takes m (edges per new node), "
                                     "not mean_degree")
        net["m"] = 2 if net["m"] is None else net["m"]
        net["mean_degree"] = None
        degree = net["m"]
    elif model is NetworkModel.WS:
        if net["m"] is not None:
            raise SpecificationError("network.m: only meaningful for BA")
        net["mean_degree"] = 4 if net["mean_degree"] is None else net["mean_degree"]
        degree = net["mean_degree"]
    else:
        net["mean_degree"] = net["m"] = None
        degree = 4
    if net["n"] is None or net["n"] < 1:
        raise SpecificationError("network.n: must be a positive integer")
    return NetworkSpec(model, net["n"], degree, net["beta"], net["seed"])


def parse_config(subcommand, file_values=None, overrides=None):
    """Merge defaults, file values and overrides into a validated RunConfig.

    Raises SpecificationError naming the offending key and its constraint.
    """
    if subcommand not in SUBCOMMANDS:
        raise SpecificationError(f"unknown subcommand {subcommand!r}")
    merged = _coerce(_merge(file_values, overrides))
    network = _network(merged["network"])
    if merged["network"]["graph_path"] is not None:
        if subcommand != "simulate":
            raise SpecificationError("network.graph_path: only used by simulate")
        merged["network"]["graph_path"] = os.fspath(merged["network"]["graph_path"])

    game_cfg = merged["game"]
    MemoryMode.parse(game_cfg["memory_mode"])
    if game_cfg["nu"] is None:
        if subcommand == "simulate":
            raise SpecificationError("game.nu: required for simulate, must lie in (0,1]")
        game = None
        if subcommand in ("meanfield", "sweep"):
            # nu cancels in the mean field and is set per cell in a sweep
            game = GameParams(nu=1.0, **{k: v for k, v in game_cfg.items() if k != "nu"})
    else:
        game = GameParams(**game_cfg)
    if game is not None:
        game_cfg["memory_mode"] = game.memory_mode.value

    ex = merged["execution"]
    if ex["runs"] is None:
        ex["runs"] = 30 if subcommand == "sweep" else 1
    if not 0.0 <= ex["init_rho_c"] <= 1.0:
        raise SpecificationError("execution.init_rho_c: must lie in [0,1]")
    if ex["max_steps"] < 1:
        raise SpecificationError("execution.max_steps: must be >= 1")
    if ex["runs"] < 1:
        raise SpecificationError("execution.runs: must be >= 1")
    if ex["sample_stride"] is not None and ex["sample_stride"] < 1:
        raise SpecificationError("execution.sample_stride: must be >= 1")
    if ex["worker_count"] is not None and ex["worker_count"] < 1:
        raise SpecificationError("execution.worker_count: must be >= 1")
    ex["output_path"] = os.fspath(ex["output_path"])
    execution = Execution(**ex)

    mf = merged["meanfield"]
    if not mf["t_end"] > 0 or not mf["dt"] > 0:
        raise SpecificationError("meanfield.t_end/dt: must be > 0")
    sw = merged["sweep"]
    if not sw["fine_step"] > 0:
        raise SpecificationError("sweep.fine_step: must be > 0")
    for nu in sw["nu_grid"]:
        if not 0 < nu <= 1:
            raise SpecificationError(f"sweep.nu_grid: {nu} outside (0,1]")
    return RunConfig(subcommand, network, game, execution, dict(mf), dict(sw), merged)

"""Parameter sweeps over the interest coefficient and the prize period.

Every ``(nu, k)`` cell is simulated ``runs_per_point`` times, each run on a
freshly generated network. Seeds are derived from the master seed, the run
index and the cell values themselves (not their grid position), so a cell
gives the same outcome whether it was part of a coarse or a refined grid.
"""

import csv
import io
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .engine import Phase, run
from .errors import SpecificationError
from .netgen import NetworkModel, NetworkSpec, generate

__all__ = [
    "SweepSpec",
    "CellCounts",
    "SweepResult",
    "classify",
    "sweep",
    "sweep_two_pass",
    "refined_grid",
    "critical_nu",
    "worker_count",
    "run_seeds",
    "CSV_HEADER",
]

log = logging.getLogger(__name__)

CSV_HEADER = ["model", "beta_or_m", "memory", "nu", "k",
              "frac_coop", "frac_defect", "frac_coexist"]
WORKERS_ENV = "LURKERGAME_WORKERS"


def _nu_key(nu):
    return round(float(nu), 10)


@dataclass(frozen=True)
class SweepSpec:
    """What to sweep.

    ``k_values`` entries are prize periods; ``None`` runs the cell with
    rewarding disabled. ``params_base`` supplies every other game constant.
    """

    network: NetworkSpec
    params_base: object
    nu_grid: tuple
    k_values: tuple = (1, 3, 5)
    runs_per_point: int = 30
    max_steps: int = 10**7
    master_seed: int = 0
    init_rho_c: float = 0.5

    def __post_init__(self):
        grid = tuple(_nu_key(v) for v in self.nu_grid)
        object.__setattr__(self, "nu_grid", grid)
        object.__setattr__(self, "k_values", tuple(self.k_values))
        if not grid:
            raise SpecificationError("sweep.nu_grid: must not be empty")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise SpecificationError("sweep.nu_grid: must be strictly increasing")
        if grid[0] <= 0 or grid[-1] > 1:
            raise SpecificationError("sweep.nu_grid: values must lie in (0,1]")
        if self.runs_per_point < 1:
            raise SpecificationError("sweep.runs_per_point: must be >= 1")
        if self.max_steps < 1:
            raise SpecificationError("sweep.max_steps: must be >= 1")
        for k in self.k_values:
            if k is not None and (int(k) != k or k < 1):
                raise SpecificationError(f"sweep.k_values: {k!r} is not a positive integer")

    def with_grid(self, nu_grid):
        return SweepSpec(self.network, self.params_base, tuple(nu_grid), self.k_values,
                         self.runs_per_point, self.max_steps, self.master_seed,
                         self.init_rho_c)


@dataclass
class CellCounts:
    cooperate: int = 0
    defect: int = 0
    coexist: int = 0

    @property
    def runs(self):
        return self.cooperate + self.defect + self.coexist

    def add(self, phase):
        if phase is Phase.ALL_COOPERATE:
            self.cooperate += 1
        elif phase is Phase.ALL_DEFECT:
            self.defect += 1
        else:
            self.coexist += 1

    @property
    def fraction_cooperate(self):
        return self.cooperate / self.runs

    @property
    def fraction_defect(self):
        return self.defect / self.runs

    @property
    def fraction_coexist(self):
        return self.coexist / self.runs


@dataclass
class SweepResult:
    """Phase counts per ``(nu, k)`` cell."""

    spec: SweepSpec
    cells: dict = field(default_factory=dict)

    @property
    def nu_grid(self):
        return tuple(sorted({nu for nu, _ in self.cells}))

    @property
    def k_values(self):
        return self.spec.k_values

    def cell(self, nu, k):
        return self.cells[(_nu_key(nu), k)]

    def fraction_cooperate(self, nu, k):
        return self.cell(nu, k).fraction_cooperate

    @property
    def critical(self):
        return {k: critical_nu(self, k) for k in self.k_values}

    def merge(self, other):
        """Union of two results over the same network and game; cells of
        ``other`` replace duplicates."""
        cells = dict(self.cells)
        cells.update(other.cells)
        grid = sorted({nu for nu, _ in cells})
        return SweepResult(self.spec.with_grid(grid), cells)

    def rows(self):
        net = self.spec.network
        beta_or_m = net.beta if net.model is NetworkModel.WS else net.mean_degree
        memory = self.spec.params_base.memory_mode.value
        for k in self.k_values:
            for nu in self.nu_grid:
                c = self.cells[(nu, k)]
                yield [net.model.value, f"{beta_or_m:g}", memory, f"{nu:g}",
                       "none" if k is None else str(k),
                       f"{c.fraction_cooperate:.6f}", f"{c.fraction_defect:.6f}",
                       f"{c.fraction_coexist:.6f}"]

    def to_csv(self, header=True):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if header:
            w.writerow(CSV_HEADER)
        w.writerows(self.rows())
        return buf.getvalue()


def classify(result):
    """Phase of a finished run (consensus or coexistence)."""
    return result.phase


def run_seeds(master_seed, run_index, nu, k):
    """``(network seed, dynamics seed)`` of one run of one cell.

    The network seed depends only on the run index, so run ``i`` of every
    cell plays on the same graph instance.
    """
    net = np.random.SeedSequence([master_seed, run_index]).generate_state(1, np.uint64)[0]
    dyn = np.random.SeedSequence(
        [master_seed, run_index, int(round(nu * 10**6)), 0 if k is None else int(k) + 1]
    ).generate_state(1, np.uint64)[0]
    return int(net >> np.uint64(1)), int(dyn)


def _one_run(task):
    network, params, init_rho_c, max_steps, master_seed, run_index, nu, k = task
    net_seed, dyn_seed = run_seeds(master_seed, run_index, nu, k)
    g = generate(network.with_seed(net_seed))
    p = params.replace(nu=nu, prize_period_k=k)
    res = run(g, p, init_rho_c, max_steps, dyn_seed)
    return res.phase


def worker_count(requested=None):
    """Worker processes to use: explicit request, then the environment, then CPU count."""
    if requested is not None:
        return max(1, int(requested))
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def sweep(spec, workers=None):
    """Simulate every cell of ``spec`` and collect phase counts."""
    tasks = []
    keys = []
    for k in spec.k_values:
        for nu in spec.nu_grid:
            for i in range(spec.runs_per_point):
                tasks.append((spec.network, spec.params_base, spec.init_rho_c,
                              spec.max_steps, spec.master_seed, i, nu, k))
                keys.append((nu, k))
    n_workers = worker_count(workers)
    log.info("sweep %s: %d cells x %d runs on %d worker(s)", spec.network.label,
             len(tasks) // spec.runs_per_point, spec.runs_per_point, n_workers)
    if n_workers == 1:
        phases = map(_one_run, tasks)
    else:
        pool = ProcessPoolExecutor(max_workers=n_workers)
        phases = pool.map(_one_run, tasks, chunksize=max(1, spec.runs_per_point // 2))
    cells = {}
    try:
        for key, phase in zip(keys, phases):
            cells.setdefault(key, CellCounts()).add(phase)
            c = cells[key]
            if c.runs == spec.runs_per_point:
                log.debug("cell nu=%g k=%s: coop=%d defect=%d coexist=%d",
                          key[0], key[1], c.cooperate, c.defect, c.coexist)
    finally:
        if n_workers != 1:
            pool.shutdown()
    return SweepResult(spec, cells)


def critical_nu(result, k):
    """Smallest grid ``nu`` from which cooperation wins a majority of runs at
    every larger grid ``nu`` as well; ``None`` if the largest grid point fails.
    """
    grid = result.nu_grid
    if len(grid) < 2:
        raise SpecificationError("critical_nu needs at least two grid points")
    best = None
    for nu in reversed(grid):
        if result.cells[(nu, k)].fraction_cooperate > 0.5:
            best = nu
        else:
            break
    return best


def refined_grid(result, fine_step=0.02, window=0.1):
    """Extra grid points at ``fine_step`` spacing within ``window`` of each
    coarse critical estimate."""
    extra = set()
    existing = set(result.nu_grid)
    for k in result.k_values:
        c = critical_nu(result, k)
        if c is None:
            continue
        lo, hi = c - window, c + window
        n_lo = int(np.ceil(lo / fine_step - 1e-9))
        n_hi = int(np.floor(hi / fine_step + 1e-9))
        for j in range(n_lo, n_hi + 1):
            nu = _nu_key(j * fine_step)
            if 0 < nu <= 1 and nu not in existing:
                extra.add(nu)
    return tuple(sorted(extra))


def sweep_two_pass(spec, fine_step=0.02, window=0.1, workers=None):
    """Sweep ``spec.nu_grid``, then refine around each critical estimate."""
    coarse = sweep(spec, workers)
    extra = refined_grid(coarse, fine_step, window)
    if not extra:
        return coarse
    fine = sweep(spec.with_grid(extra), workers)
    return coarse.merge(fine)

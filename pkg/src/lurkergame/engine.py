"""Monte Carlo dynamics on a network.

One time step activates a random linked pair ``(x, y)`` with different
strategies. Both play in every group they belong to (the closed neighborhood
of themselves and of each neighbor), cooperators collect their prize when
their streak reaches the prize period, and ``y`` then adopts the strategy of
``x`` with the Fermi probability. The loop runs until the population reaches
consensus or the step budget is exhausted.

The inner loop is a numba kernel shared by :func:`step` and :func:`run`, so a
sequence of single steps and one long run from the same state and generator
produce identical trajectories.
"""

import enum
import math
from dataclasses import dataclass, field

import numba
import numpy as np

from .errors import Absorbed, ContractError
from .game import GameParams, Strategy

__all__ = [
    "Phase",
    "PopulationState",
    "Activation",
    "RunResult",
    "groups_of",
    "initial_state",
    "step",
    "run",
    "sample_stride",
]

SERIES_POINTS = 10_000


class Phase(enum.Enum):
    ALL_COOPERATE = "AllCooperate"
    ALL_DEFECT = "AllDefect"
    COEXISTENCE = "Coexistence"

    @property
    def ordering(self):
        """Spin-system label: consensus is ferromagnetic, coexistence paramagnetic."""
        return "paramagnetic" if self is Phase.COEXISTENCE else "ferromagnetic"


def groups_of(g, agent):
    """Groups ``agent`` plays in: its own closed neighborhood and each neighbor's.

    Each group is a sorted array of node ids; the agent's own group comes first.
    """
    if not 0 <= agent < g.node_count:
        raise ContractError(f"agent {agent} out of range")
    out = []
    for center in (agent, *g.neighbors(agent).tolist()):
        out.append(np.sort(np.append(g.neighbors(center), center)))
    return out


@dataclass(frozen=True)
class Activation:
    """Record of the last step: who played, what they earned, whether ``y`` switched."""

    x: int
    y: int
    payoff_x: float
    payoff_y: float
    prize_x: float
    prize_y: float
    adopted: bool


@dataclass
class PopulationState:
    """Mutable population on a fixed graph.

    ``payoffs`` holds the last activation's payoff in memoryless mode and the
    lifetime total in memory-aware mode. ``streaks`` counts cooperative
    activations since the last prize or defection. The remaining arrays are
    bookkeeping maintained by the kernel: ``coop_in_group[j]`` is the number
    of cooperators in the closed neighborhood of ``j``, and ``mixed`` lists the
    ids of edges whose endpoints disagree (positions in ``mixed_pos``).
    """

    strategies: np.ndarray
    payoffs: np.ndarray
    streaks: np.ndarray
    rng: np.random.Generator
    step: int = 0
    coop_in_group: np.ndarray = field(default=None, repr=False)
    mixed: np.ndarray = field(default=None, repr=False)
    mixed_pos: np.ndarray = field(default=None, repr=False)
    counters: np.ndarray = field(default=None, repr=False)
    last: Activation | None = None

    @property
    def node_count(self):
        return self.strategies.size

    @property
    def n_cooperators(self):
        return int(self.counters[1])

    @property
    def n_mixed(self):
        return int(self.counters[0])

    @property
    def rho_c(self):
        return self.n_cooperators / self.node_count

    @property
    def absorbed(self):
        return self.n_mixed == 0


def initial_state(g, strategies, rng):
    """Build a state from an explicit 0/1 strategy vector."""
    s = np.ascontiguousarray(strategies, dtype=np.int8)
    if s.shape != (g.node_count,) or np.any((s != 0) & (s != 1)):
        raise ContractError("strategies must be a 0/1 vector with one entry per node")
    n = g.node_count
    src = np.repeat(np.arange(n), g.degrees)
    coop = s.astype(np.int64)
    coop_in_group = coop + np.bincount(src, weights=coop[g.indices], minlength=n).astype(np.int64)
    e = g.edges
    is_mixed = s[e[:, 0]] != s[e[:, 1]]
    mixed = np.full(g.n_edges, -1, dtype=np.int64)
    mixed_pos = np.full(g.n_edges, -1, dtype=np.int64)
    ids = np.flatnonzero(is_mixed)
    mixed[:ids.size] = ids
    mixed_pos[ids] = np.arange(ids.size)
    counters = np.array([ids.size, int(coop.sum())], dtype=np.int64)
    return PopulationState(
        strategies=s,
        payoffs=np.zeros(n),
        streaks=np.zeros(n, dtype=np.int64),
        rng=rng,
        coop_in_group=coop_in_group,
        mixed=mixed,
        mixed_pos=mixed_pos,
        counters=counters,
    )


@numba.njit(cache=True)
def _activate(a, indptr, indices, s, cig, payoffs, streaks, pool, vc, prize_k, memory_aware):
    # payoff of a from every group it belongs to, plus any prize due
    total = 0.0
    for p in range(indptr[a], indptr[a + 1]):
        total += cig[indices[p]]
    total += cig[a]
    pay = pool * total
    award = 0.0
    if s[a] == 1:
        pay -= vc * (indptr[a + 1] - indptr[a] + 1)
        streaks[a] += 1
        if prize_k > 0 and streaks[a] == prize_k:
            award = prize_k * vc
            streaks[a] = 0
    pay += award
    if memory_aware:
        payoffs[a] += pay
    else:
        payoffs[a] = pay
    return pay, award


@numba.njit(cache=True)
def _flip(y, indptr, indices, edge_ids, s, cig, streaks, mixed, mixed_pos, counters):
    new = 1 - s[y]
    s[y] = new
    delta = 1 if new == 1 else -1
    cig[y] += delta
    counters[1] += delta
    streaks[y] = 0
    for p in range(indptr[y], indptr[y + 1]):
        w = indices[p]
        cig[w] += delta
        e = edge_ids[p]
        if s[w] != new:
            if mixed_pos[e] < 0:
                mixed_pos[e] = counters[0]
                mixed[counters[0]] = e
                counters[0] += 1
        elif mixed_pos[e] >= 0:
            last = counters[0] - 1
            moved = mixed[last]
            pos = mixed_pos[e]
            mixed[pos] = moved
            mixed_pos[moved] = pos
            mixed[last] = -1
            mixed_pos[e] = -1
            counters[0] = last


@numba.njit(cache=True)
def _advance(indptr, indices, edges, edge_ids, s, cig, payoffs, streaks,
             mixed, mixed_pos, counters, rng,
             pool, vc, inv_k, cutoff, prize_k, memory_aware,
             n_steps, step0, stride, series_steps, series_coop, series_len, last):
    """Run up to ``n_steps`` steps; return the number executed.

    Stops early when no mixed edge is left. The cooperator count is appended
    to the series whenever the global step counter hits a multiple of
    ``stride``.
    """
    done = 0
    while done < n_steps:
        n_mixed = counters[0]
        if n_mixed == 0:
            break
        pick = rng.integers(0, 2 * n_mixed)
        e = mixed[pick >> 1]
        if pick & 1:
            x = edges[e, 0]
            y = edges[e, 1]
        else:
            x = edges[e, 1]
            y = edges[e, 0]
        pay_x, award_x = _activate(x, indptr, indices, s, cig, payoffs, streaks,
                                   pool, vc, prize_k, memory_aware)
        pay_y, award_y = _activate(y, indptr, indices, s, cig, payoffs, streaks,
                                   pool, vc, prize_k, memory_aware)
        z = (payoffs[y] - payoffs[x]) * inv_k
        if z > cutoff:
            z = cutoff
        elif z < -cutoff:
            z = -cutoff
        w = 1.0 / (1.0 + math.exp(z))
        adopted = rng.random() < w
        if adopted:
            _flip(y, indptr, indices, edge_ids, s, cig, streaks, mixed, mixed_pos, counters)
        done += 1
        now = step0 + done
        if now % stride == 0:
            series_steps[series_len[0]] = now
            series_coop[series_len[0]] = counters[1]
            series_len[0] += 1
        last[0] = x
        last[1] = y
        last[2] = pay_x
        last[3] = pay_y
        last[4] = award_x
        last[5] = award_y
        last[6] = 1.0 if adopted else 0.0
    return done


def _kernel_args(g, state, params):
    return (g.indptr, g.indices, g.edges, g.edge_ids, state.strategies, state.coop_in_group,
            state.payoffs, state.streaks, state.mixed, state.mixed_pos, state.counters,
            state.rng, params.r * params.nu * params.vc, params.vc, 1.0 / params.K,
            params.cutoff, params.prize_period_k or 0, params.memory_aware)


def _drive(g, state, params, n_steps, stride, series_steps, series_coop, series_len):
    last = np.zeros(7)
    done = _advance(*_kernel_args(g, state, params), n_steps, state.step, stride,
                    series_steps, series_coop, series_len, last)
    state.step += int(done)
    if done:
        state.last = Activation(int(last[0]), int(last[1]), float(last[2]), float(last[3]),
                                float(last[4]), float(last[5]), bool(last[6]))
    return int(done)


def step(state, g, params):
    """Advance ``state`` by one time step in place and return it.

    Raises :class:`Absorbed` when every edge joins agents of equal strategy.
    """
    if state.absorbed:
        raise Absorbed(f"consensus reached at step {state.step}")
    dummy_i = np.zeros(1, dtype=np.int64)
    _drive(g, state, params, 1, 1 << 62, dummy_i, dummy_i, np.zeros(1, dtype=np.int64))
    return state


@dataclass(frozen=True)
class RunResult:
    """Outcome of one simulation.

    ``steps`` and ``rho_c`` form the sampled time series; the first sample is
    step 0 and the last is always the final state.
    """

    steps: np.ndarray
    rho_c: np.ndarray
    phase: Phase
    steps_executed: int
    seed: int

    @property
    def final_rho_c(self):
        return float(self.rho_c[-1])

    @property
    def series(self):
        return list(zip(self.steps.tolist(), self.rho_c.tolist()))


def sample_stride(max_steps):
    return max(1, int(max_steps) // SERIES_POINTS)


def _phase(n_coop, n):
    if n_coop == n:
        return Phase.ALL_COOPERATE
    if n_coop == 0:
        return Phase.ALL_DEFECT
    return Phase.COEXISTENCE


def run(g, params, init_rho_c, max_steps, seed, stride=None):
    """Simulate from a random initial condition until consensus or ``max_steps``.

    Exactly ``round(n * init_rho_c)`` cooperators are placed uniformly at
    random. The cooperator density is sampled every ``stride`` steps
    (default ``max(1, max_steps // 10**4)``).
    """
    if not 0.0 <= init_rho_c <= 1.0:
        raise ContractError("init_rho_c must lie in [0, 1]")
    if max_steps < 1:
        raise ContractError("max_steps must be >= 1")
    if not isinstance(params, GameParams):
        raise ContractError("params must be a GameParams")
    n = g.node_count
    stride = sample_stride(max_steps) if stride is None else int(stride)
    if stride < 1:
        raise ContractError("stride must be >= 1")
    rng = np.random.default_rng(seed)
    n_coop = int(math.floor(n * init_rho_c + 0.5))
    strategies = np.zeros(n, dtype=np.int8)
    strategies[rng.choice(n, size=n_coop, replace=False)] = Strategy.COOPERATOR
    state = initial_state(g, strategies, rng)

    cap = int(max_steps) // stride + 2
    series_steps = np.zeros(cap, dtype=np.int64)
    series_coop = np.zeros(cap, dtype=np.int64)
    series_steps[0] = 0
    series_coop[0] = state.n_cooperators
    series_len = np.ones(1, dtype=np.int64)
    _drive(g, state, params, int(max_steps), stride, series_steps, series_coop, series_len)
    k = int(series_len[0])
    if series_steps[k - 1] != state.step:
        series_steps[k] = state.step
        series_coop[k] = state.n_cooperators
        k += 1
    return RunResult(
        steps=series_steps[:k].copy(),
        rho_c=series_coop[:k] / n,
        phase=_phase(state.n_cooperators, n),
        steps_executed=state.step,
        seed=seed,
    )

"""Mean-field dynamics of a fully mixed population.

With constant transition probabilities the two-species system reduces to one
logistic equation for the cooperator density,

    d rho_c / dt = (p_c - p_d) * rho_c * (1 - rho_c),

with ``rho_d = 1 - rho_c``. :func:`integrate` solves it by fixed-step RK4 and
:func:`closed_form` gives the analytic solution used to check it.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractError, IntegrationError
from .game import fermi_prob, payoff_meanfield

__all__ = ["MeanFieldTrajectory", "transition_probs", "integrate", "closed_form"]

DEFAULT_DT = 1e-3


@dataclass(frozen=True)
class MeanFieldTrajectory:
    t: np.ndarray
    rho_c: np.ndarray
    rho_d: np.ndarray
    p_c: float
    p_d: float

    @property
    def samples(self):
        return list(zip(self.t.tolist(), self.rho_c.tolist(), self.rho_d.tolist()))

    def __len__(self):
        return self.t.size


def transition_probs(params, population=1000):
    """``(p_c, p_d)``: chance that a cooperator, resp. defector, prevails in a
    random C-D encounter.

    The payoffs are evaluated at half occupancy of ``population`` agents; the
    pool term cancels in the difference, so the result depends only on ``K``,
    ``vc`` and the cutoff.
    """
    pi_c, pi_d = payoff_meanfield(population // 2 or 1, params)
    # fermi_prob(x, y) is the chance that y takes x's strategy
    p_c = fermi_prob(pi_c, pi_d, params)
    p_d = fermi_prob(pi_d, pi_c, params)
    return p_c, p_d


def _rhs(rho, rate):
    return rate * rho * (1.0 - rho)


def integrate(rho_c0, params, t_end, dt=DEFAULT_DT):
    """Integrate the cooperator density from ``rho_c0`` over ``[0, t_end]``.

    Fixed-step classical RK4; one sample per step. The final step is
    shortened so the last sample lands exactly on ``t_end``.
    """
    if not 0.0 <= rho_c0 <= 1.0:
        raise ContractError("rho_c0 must lie in [0, 1]")
    if not dt > 0 or not t_end > 0:
        raise ContractError("dt and t_end must be positive")
    p_c, p_d = transition_probs(params)
    rate = p_c - p_d
    n_steps = int(math.ceil(t_end / dt - 1e-9))
    t = np.empty(n_steps + 1)
    rho = np.empty(n_steps + 1)
    t[0] = 0.0
    rho[0] = rho_c0
    y = float(rho_c0)
    for i in range(n_steps):
        h = min(dt, t_end - i * dt)
        k1 = _rhs(y, rate)
        k2 = _rhs(y + 0.5 * h * k1, rate)
        k3 = _rhs(y + 0.5 * h * k2, rate)
        k4 = _rhs(y + h * k3, rate)
        y = y + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
        if not math.isfinite(y):
            raise IntegrationError(f"non-finite density at step {i + 1}")
        t[i + 1] = min((i + 1) * dt, t_end)
        rho[i + 1] = y
    np.clip(rho, 0.0, 1.0, out=rho)
    return MeanFieldTrajectory(t, rho, 1.0 - rho, p_c, p_d)


def closed_form(rho_c0, params, t):
    """Exact solution ``rho0 / (rho0 + (1 - rho0) * exp(c t))`` with ``c = p_d - p_c``."""
    p_c, p_d = transition_probs(params)
    c = p_d - p_c
    t = np.asarray(t, dtype=np.float64)
    # cap the exponent; beyond it the density is 0 to double precision anyway
    out = rho_c0 / (rho_c0 + (1.0 - rho_c0) * np.exp(np.minimum(c * t, 700.0)))
    if rho_c0 == 0.0:
        out = np.zeros_like(t)
    return float(out) if out.ndim == 0 else out

"""
Extinction of cooperators in a fully mixed population
======================================================

Without network structure every cooperator meets every defector, and the
cooperator density obeys a logistic equation whose rate does not depend on
the synergy factor or on the interest coefficient.
"""

import numpy as np

from lurkergame import GameParams, meanfield

# the chances that a cooperator (p_c) or a defector (p_d) wins an encounter
params = GameParams(nu=0.5)
p_c, p_d = meanfield.transition_probs(params)
print(f"p_c = {p_c:.4f}   p_d = {p_d:.4f}")

# the synergy factor and nu cancel out of the payoff difference
for r, nu in [(2.0, 0.1), (5.0, 0.9), (40.0, 1.0)]:
    print(r, nu, meanfield.transition_probs(GameParams(nu=nu, r=r)))

# integrate from an even split; cooperators die out exponentially fast
traj = meanfield.integrate(0.5, params, t_end=30.0)
for t in (0, 5, 10, 20, 30):
    i = np.searchsorted(traj.t, t)
    print(f"t={t:>4}  rho_c={traj.rho_c[i]:.3e}  rho_d={traj.rho_d[i]:.6f}")

# RK4 against the closed-form solution
exact = meanfield.closed_form(0.5, params, traj.t)
print("max deviation from closed form:", np.abs(traj.rho_c - exact).max())

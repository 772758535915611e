"""
Where cooperation starts to win
===============================

A coarse sweep over the interest coefficient on small networks. Each cell
plays several runs on freshly generated graphs and counts how they end; the
critical value is where cooperators start winning most runs for good.
"""

from lurkergame import GameParams, NetworkSpec
from lurkergame.sweep import SweepSpec, sweep

grid = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6)
for net in (NetworkSpec("WS", 300, 4, 0.0), NetworkSpec("WS", 300, 4, 0.5),
            NetworkSpec("BA", 300, 2)):
    spec = SweepSpec(net, GameParams(nu=1.0), grid, k_values=(1, 3), runs_per_point=8,
                     max_steps=10**6, master_seed=1)
    res = sweep(spec, workers=1)
    print(net.label, "critical nu:", res.critical)
    print(res.to_csv())

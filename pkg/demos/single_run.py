"""
Two fates of the same network
=============================

On a small-world graph with a prize every second cooperative activation,
a high interest coefficient lets cooperators take over while a low one
drives them extinct. Both runs start from an even split.
"""

from lurkergame import GameParams, NetworkSpec, generate, run

g = generate(NetworkSpec("WS", 1000, 4, beta=0.5, seed=0))

for nu in (0.5, 0.3):
    params = GameParams(nu=nu, prize_period_k=2)
    res = run(g, params, init_rho_c=0.5, max_steps=10**7, seed=42)
    print(f"nu={nu}: {res.phase.value} ({res.phase.ordering}) after {res.steps_executed} steps")
    # a coarse view of the time series
    every = max(1, len(res.steps) // 8)
    for s, rho in list(zip(res.steps, res.rho_c))[::every]:
        print(f"   step {s:>9}  rho_c = {rho:.3f}")

# memory-aware agents accumulate payoffs and tend to freeze into coexistence
params = GameParams(nu=0.4, prize_period_k=3, memory_mode="memory-aware")
res = run(g, params, init_rho_c=0.5, max_steps=10**6, seed=7)
print("memory-aware:", res.phase.value, "final rho_c =", res.final_rho_c)

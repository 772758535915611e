"""Evolutionary public-goods dynamics of lurking on complex networks.

Submodules
----------
netgen     network generators (Watts-Strogatz, Barabasi-Albert, complete) and metrics
game       payoffs, prize schedule, Fermi adoption probability
meanfield  fully mixed dynamics and their analytic solution
engine     Monte Carlo simulation on a network
sweep      phase fractions over (nu, k) grids and critical nu
cli        command-line front end
"""

from .engine import Phase, RunResult, run
from .errors import (Absorbed, ContractError, DisconnectedGraphError, IntegrationError,
                     LurkerGameError, SpecificationError)
from .game import GameParams, MemoryMode, Strategy, fermi_prob, payoff_group, payoff_meanfield, prize
from .netgen import Graph, NetworkModel, NetworkSpec, generate
from .sweep import SweepSpec, critical_nu, sweep, sweep_two_pass

__version__ = "0.1.0"

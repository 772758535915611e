"""Payoffs, prize schedule and the Fermi adoption probability."""

import enum
import math
from dataclasses import dataclass, replace

from scipy.special import expit

from .errors import ContractError, SpecificationError

__all__ = [
    "Strategy",
    "MemoryMode",
    "GameParams",
    "payoff_meanfield",
    "payoff_group",
    "prize",
    "fermi_prob",
]


class Strategy(enum.IntEnum):
    DEFECTOR = 0
    COOPERATOR = 1


class MemoryMode(enum.Enum):
    MEMORYLESS = "memoryless"
    MEMORY_AWARE = "memory-aware"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).lower().replace("_", "-")
        aliases = {"memoryless": cls.MEMORYLESS, "memory-less": cls.MEMORYLESS,
                   "memory-aware": cls.MEMORY_AWARE, "memoryaware": cls.MEMORY_AWARE}
        try:
            return aliases[key]
        except KeyError:
            raise SpecificationError(
                f"game.memory_mode: unknown mode {value!r} "
                "(expected 'memoryless' or 'memory-aware')") from None


@dataclass(frozen=True)
class GameParams:
    """Model constants.

    Attributes
    ----------
    nu : float
        Interest-heterogeneity coefficient in (0, 1]. Scales the pool.
    r : float
        Synergy factor, > 0.
    K : float
        Noise of strategy adoption, > 0.
    vc : float
        Value of one virtual coin, > 0.
    prize_period_k : int or None
        Cooperators are paid ``k * vc`` every ``k`` cooperative activations.
        ``None`` disables rewarding.
    memory_mode : MemoryMode
    cutoff : float
        Clamp on ``|payoff difference| / K`` inside the Fermi function.
    """

    nu: float
    r: float = 2.0
    K: float = 0.5
    vc: float = 1.0
    prize_period_k: int | None = None
    memory_mode: MemoryMode = MemoryMode.MEMORYLESS
    cutoff: float = 20.0

    def __post_init__(self):
        object.__setattr__(self, "memory_mode", MemoryMode.parse(self.memory_mode))
        if not self.r > 0:
            raise SpecificationError(f"game.r: must be > 0, got {self.r}")
        if not 0 < self.nu <= 1:
            raise SpecificationError(f"game.nu: must lie in (0,1], got {self.nu}")
        if not self.K > 0:
            raise SpecificationError(f"game.K: must be > 0, got {self.K}")
        if not self.vc > 0:
            raise SpecificationError(f"game.vc: must be > 0, got {self.vc}")
        if self.prize_period_k is not None:
            if int(self.prize_period_k) != self.prize_period_k or self.prize_period_k < 1:
                raise SpecificationError(
                    f"game.prize_period_k: must be an integer >= 1, got {self.prize_period_k}")
            object.__setattr__(self, "prize_period_k", int(self.prize_period_k))
        if not self.cutoff > 0:
            raise SpecificationError(f"game.cutoff: must be > 0, got {self.cutoff}")

    def replace(self, **changes):
        return replace(self, **changes)

    @property
    def memory_aware(self):
        return self.memory_mode is MemoryMode.MEMORY_AWARE

    def as_dict(self):
        return {
            "r": self.r,
            "nu": self.nu,
            "K": self.K,
            "vc": self.vc,
            "prize_period_k": self.prize_period_k,
            "memory_mode": self.memory_mode.value,
            "cutoff": self.cutoff,
        }


def payoff_meanfield(n_cooperators, params):
    """Fully mixed payoffs ``(pi_c, pi_d)`` with ``n_cooperators`` contributors.

    The pool ``r * nu * N^c * vc`` is shared whole by everyone; a cooperator
    has paid one coin into it. ``pi_c`` is meaningless when there are no
    cooperators but is returned anyway.
    """
    if n_cooperators < 0:
        raise ContractError("n_cooperators must be >= 0")
    pi_d = params.r * params.nu * n_cooperators * params.vc
    return pi_d - params.vc, pi_d


def payoff_group(group_cooperators, is_cooperator, params):
    """Payoff of one member of one group.

    Every member receives the full pot ``r * nu * N^c_g * vc``; a cooperator
    also pays ``vc`` into this group.
    """
    if group_cooperators < 0:
        raise ContractError("group_cooperators must be >= 0")
    if is_cooperator and group_cooperators < 1:
        raise ContractError("a cooperating member implies group_cooperators >= 1")
    pot = params.r * params.nu * group_cooperators * params.vc
    return pot - params.vc if is_cooperator else pot


def prize(streak, params):
    """Reward due after ``streak`` consecutive cooperative activations.

    Pays ``streak * vc`` exactly when the streak reaches the prize period and
    nothing otherwise. The caller resets the streak after an award.
    """
    if streak < 0:
        raise ContractError("streak must be >= 0")
    k = params.prize_period_k
    if k is None or streak != k:
        return 0.0
    return streak * params.vc


def fermi_prob(pi_x, pi_y, params):
    """Probability that ``y`` adopts the strategy of ``x``.

    ``1 / (1 + exp((pi_y - pi_x) / K))`` with the exponent clamped to
    ``[-cutoff, cutoff]``.
    """
    z = (pi_y - pi_x) / params.K
    if math.isnan(z):
        raise ContractError("payoff difference is NaN")
    z = min(max(z, -params.cutoff), params.cutoff)
    return float(expit(-z))

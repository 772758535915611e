"""Exception types raised across the package."""


class LurkerGameError(Exception):
    """Base class for all package errors."""


class SpecificationError(LurkerGameError, ValueError):
    """An invalid network specification or parameter set."""


class ContractError(LurkerGameError, ValueError):
    """A function was called outside its precondition."""


class DisconnectedGraphError(LurkerGameError):
    """A path metric was requested on a graph with more than one component."""

    def __init__(self, n_components):
        self.n_components = int(n_components)
        super().__init__(f"graph is disconnected ({self.n_components} components)")


class IntegrationError(LurkerGameError, ArithmeticError):
    """The ODE integrator produced a non-finite value."""


class Absorbed(LurkerGameError):
    """Raised by a single step when no edge joins agents of different strategies."""

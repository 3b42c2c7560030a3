"""Exception types shared across the package."""


class IldccError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(IldccError, ValueError):
    """An argument lies outside the domain of an operation."""


class DisconnectedGraphError(DomainError):
    """A graph quantity that requires connectivity was asked of a disconnected graph."""


class InfeasibleError(IldccError):
    """No grid placement satisfies the requested connection."""


class NumericError(IldccError, ArithmeticError):
    """An iterative numerical routine failed to converge."""


class ConfigError(IldccError, ValueError):
    """An experiment configuration is malformed or violates an invariant."""

class QuantumWalkError(Exception):
    """Base class for every error raised by the walk toolkit."""

    pass


class InvalidCoinError(QuantumWalkError):
    """Raised when a coin vector or coin spec is malformed or not normalized."""

    pass


class ParticleIndexError(QuantumWalkError):
    """Raised when a particle index, pair or subset is out of range."""

    pass


class SizeBudgetError(QuantumWalkError):
    """Raised when a request exceeds the configured size budget."""

    pass


class QuadratureError(QuantumWalkError):
    """Raised when adaptive quadrature fails to reach the requested tolerance."""

    pass


class InvariantViolation(QuantumWalkError):
    """Raised when an oracle comparison or invariant check fails."""

    pass

class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class StructuralError(RuntimeError):
    """An internal invariant failed (e.g. an infinite torus solution group)."""

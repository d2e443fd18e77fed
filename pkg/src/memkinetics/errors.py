"""Exception hierarchy: one class per failure mode so callers can branch cleanly."""


class MemKineticsError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(MemKineticsError, ValueError):
    """Argument outside the supported domain (order range, overflow guard, ...)."""


class PoleError(DomainError):
    """A gamma-function pole was hit where a finite value is required."""


class ConvergenceError(MemKineticsError, ArithmeticError):
    """A series or iteration exhausted its term budget without converging."""


class InsufficientSamplesError(MemKineticsError, ValueError):
    """Too few samples for the requested discrete operator."""


class NonCommensurateError(MemKineticsError, ValueError):
    """Multi-order problem whose orders have no small common denominator."""


class ValidationError(MemKineticsError, ValueError):
    """One or more scenario/config invariants violated; carries the full list."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))

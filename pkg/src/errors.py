"""Exception hierarchy for unruh-pairs.

Every error raised on purpose by the library derives from UnruhPairsError so
callers (and the CLI) can catch the whole family in one place. Value-type
validation failures surface as pydantic's ValidationError instead.
"""

from __future__ import annotations

from typing import Any


class UnruhPairsError(Exception):
    """Root of all library errors."""


class DomainError(UnruhPairsError, ValueError):
    """An argument lies outside the domain of an operation."""


class InvalidDecayError(DomainError):
    """A semi-infinite integral was requested with a non-positive decay rate."""


class DegenerateSamplesError(DomainError):
    """Extrapolation samples are too few or share an epsilon value."""


class InvalidStateError(DomainError):
    """Density-matrix components do not describe a valid state."""


class ConditionNotMetError(DomainError):
    """A closed form was requested outside the regime where it holds."""


class ConfigError(UnruhPairsError, ValueError):
    """A run configuration could not be loaded or applied."""


class NonConvergenceError(UnruhPairsError, ArithmeticError):
    """A numerical procedure exhausted its budget above tolerance.

    Attributes:
        operation: Name of the operation that failed.
        diagnostics: Free-form numbers describing the failure (error estimate,
            subdivisions used, boundaries, ...).
    """

    def __init__(
        self, operation: str, message: str, diagnostics: dict[str, Any] | None = None
    ) -> None:
        self.operation = operation
        self.message = message
        self.diagnostics = dict(diagnostics or {})
        super().__init__(f"{operation}: {message}")

    def __reduce__(self) -> tuple[Any, ...]:
        # Survives the trip back from worker processes.
        return (type(self), (self.operation, self.message, self.diagnostics))


class BranchBoundaryError(UnruhPairsError, ValueError):
    """Pole enumeration was requested exactly on a branch boundary."""

    def __init__(self, tau_b: float, boundaries: tuple[float, ...] = ()) -> None:
        self.tau_b = tau_b
        self.boundaries = boundaries
        super().__init__(f"tau_b={tau_b!r} lies on a branch boundary {list(boundaries)}")

    def __reduce__(self) -> tuple[Any, ...]:
        return (type(self), (self.tau_b, self.boundaries))


class WrongScenarioError(UnruhPairsError, TypeError):
    """An operation restricted to one scenario family got another scenario."""


class DeltaScenarioError(WrongScenarioError):
    """A brute-force cross term was requested for a delta-supported scenario."""

"""Single-detector excitation rates.

The excitation integral I_I of a uniformly accelerated detector grows
linearly with the total proper time, so it is only ever represented as a
rate times the symbolic DurationFactor marker.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from src.errors import DomainError
from src.models import Detector


def bose_factor(x: float) -> float:
    """1 / (exp(2pi x) - 1) without overflow for large x."""
    y = 2.0 * math.pi * x
    return math.exp(-y) / -math.expm1(-y)


def planck_factor(x: float) -> float:
    """1 / (1 - exp(-2pi x)), the geometric sum over a pole tower."""
    return 1.0 / -math.expm1(-2.0 * math.pi * x)


@dataclass(frozen=True, slots=True)
class DurationFactor:
    """Symbolic stand-in for the formally infinite interaction time."""

    variable: str = "tau"

    def __str__(self) -> str:
        return f"∫d{self.variable}"


@dataclass(frozen=True, slots=True)
class ResponseRate:
    """Planckian excitation rate of one detector."""

    per_proper_time: float
    per_lambda: float
    temperature: float


@dataclass(frozen=True, slots=True)
class ResponseIntegral:
    """I_I written as rate x duration."""

    rate: ResponseRate
    duration: DurationFactor


class ResponseCalculator:
    """Closed-form response of a detector in the Minkowski vacuum."""

    @staticmethod
    def excitation_rate_per_proper_time(detector: Detector) -> float:
        """(dE / 2pi) / (exp(2pi dE / kappa) - 1).

        Raises:
            DomainError: If kappa is not positive.
        """
        if not detector.kappa > 0:
            raise DomainError(f"kappa must be positive, got {detector.kappa!r}")
        x = detector.delta_e / detector.kappa
        return detector.delta_e / (2.0 * math.pi) * bose_factor(x)

    @staticmethod
    def excitation_rate_per_lambda(x: float) -> float:
        """Rate per unit dimensionless time lambda = kappa * tau.

        Raises:
            DomainError: For ``x <= 0``.
        """
        if not x > 0:
            raise DomainError(f"x must be positive, got {x!r}")
        return x / (2.0 * math.pi) * bose_factor(x)

    @staticmethod
    def response_rate(detector: Detector) -> ResponseRate:
        """Both rates plus the Unruh temperature."""
        per_tau = ResponseCalculator.excitation_rate_per_proper_time(detector)
        return ResponseRate(
            per_proper_time=per_tau,
            per_lambda=per_tau / detector.kappa,
            temperature=detector.temperature,
        )

    @staticmethod
    def response_integral(detector: Detector) -> ResponseIntegral:
        """I_I as the rate multiplying the symbolic total duration."""
        return ResponseIntegral(
            rate=ResponseCalculator.response_rate(detector), duration=DurationFactor()
        )


excitation_rate_per_proper_time = ResponseCalculator.excitation_rate_per_proper_time
excitation_rate_per_lambda = ResponseCalculator.excitation_rate_per_lambda

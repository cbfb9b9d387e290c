"""Oracle-equivalence checks.

Each named check evaluates a closed form from the response and cross-term
engines against an independent brute-force or special-function value and
reports whether they agree within a tolerance. Checks are plain functions of
picklable arguments so the CLI can fan them out over worker processes.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass

from src.crossterm import BoundedOnly, FiniteValue, cross_term, inertial_limit_cross_term
from src.errors import UnruhPairsError
from src.models import (
    AntiParallelLongitudinal,
    BoostedPair,
    Detector,
    InertialLimitParams,
    OracleConfig,
    Oriented,
    ParallelLongitudinal,
    QuadratureConfig,
    Scenario,
)
from src.numerics import bessel_k0
from src.oracle import OracleSuite
from src.response import excitation_rate_per_proper_time

logger = logging.getLogger(__name__)

K0_AT_ONE = 0.4210244382


@dataclass
class CheckResult:
    """Measured against expected for one row of the oracle table."""

    name: str
    measured: complex
    expected: complex
    error: float
    tolerance: float
    relative: bool
    passed: bool
    detail: str = ""


def _compare(
    name: str,
    measured: complex,
    expected: complex,
    tolerance: float,
    *,
    relative: bool = True,
    detail: str = "",
) -> CheckResult:
    diff = abs(complex(measured) - complex(expected))
    error = diff / abs(expected) if relative and expected != 0 else diff
    return CheckResult(
        name=name,
        measured=complex(measured),
        expected=complex(expected),
        error=error,
        tolerance=tolerance,
        relative=relative,
        passed=bool(error <= tolerance),
        detail=detail,
    )


def _warn_if_unsettled(name: str, discrepancy: float, scale: float, tolerance: float) -> None:
    if discrepancy > tolerance * max(abs(scale), 1e-300):
        logger.warning(
            "%s: extrapolation moved %.3g, more than the tolerance allows", name, discrepancy
        )


def _numeric_cross_term(result: object) -> FiniteValue:
    if isinstance(result, BoundedOnly) and result.numeric_value is not None:
        return result.numeric_value
    if isinstance(result, FiniteValue):
        return result
    raise TypeError(f"no numerical cross term in {result!r}")


def _cross_term_check(
    name: str,
    scenario: Scenario,
    x: float,
    tolerance: float | None,
    oracle: OracleConfig,
    quad: QuadratureConfig,
) -> list[CheckResult]:
    det_a = Detector.from_ratio(x, scenario.kappa_a)
    det_b = Detector.from_ratio(x, scenario.kappa_b)
    result = cross_term(scenario, det_a, det_b, quad)
    engine = _numeric_cross_term(result)
    brute = OracleSuite.cross_term_estimate(scenario, det_a, det_b, oracle)
    tol = 2e-2 if tolerance is None else tolerance
    _warn_if_unsettled(name, brute.discrepancy, abs(engine.value), tol)
    rows = [
        _compare(
            name,
            brute.value,
            engine.value,
            tol,
            detail=f"extrapolation moved {brute.discrepancy:.3g}",
        )
    ]
    if isinstance(result, BoundedOnly):
        bound = result.upper_bound
        margin = bound - abs(engine.value)
        rows.append(
            CheckResult(
                name=f"{name}.bound",
                measured=complex(abs(engine.value)),
                expected=complex(bound),
                error=max(0.0, -margin),
                tolerance=engine.error_estimate,
                relative=False,
                passed=margin >= -engine.error_estimate,
                detail="|I_E| against its closed-form bound",
            )
        )
    return rows


def check_response_rate(
    tolerance: float | None, oracle: OracleConfig, quad: QuadratureConfig
) -> list[CheckResult]:
    rows = []
    for x in (0.5, 1.0, 2.0):
        det = Detector.from_ratio(x, 1.0)
        brute = OracleSuite.response_rate_estimate(det, oracle)
        expected = excitation_rate_per_proper_time(det)
        tol = 1e-2 if tolerance is None else tolerance
        _warn_if_unsettled(f"response_rate[x={x:g}]", brute.discrepancy, expected, tol)
        rows.append(
            _compare(
                f"response_rate[x={x:g}]",
                brute.value.real,
                expected,
                tol,
                detail=f"extrapolation moved {brute.discrepancy:.3g}",
            )
        )
    return rows


def check_parallel_longitudinal(
    tolerance: float | None, oracle: OracleConfig, quad: QuadratureConfig
) -> list[CheckResult]:
    scenario = ParallelLongitudinal(kappa=1.0, x0=2.0)
    return _cross_term_check("parallel_longitudinal", scenario, 1.0, tolerance, oracle, quad)


def check_anti_parallel_longitudinal_negative(
    tolerance: float | None, oracle: OracleConfig, quad: QuadratureConfig
) -> list[CheckResult]:
    scenario = AntiParallelLongitudinal(kappa=1.0, x1=-1.0)
    return _cross_term_check(
        "anti_parallel_longitudinal_negative", scenario, 1.0, tolerance, oracle, quad
    )


def check_anti_parallel_longitudinal_positive(
    tolerance: float | None, oracle: OracleConfig, quad: QuadratureConfig
) -> list[CheckResult]:
    scenario = AntiParallelLongitudinal(kappa=1.0, x1=0.5)
    return _cross_term_check(
        "anti_parallel_longitudinal_positive", scenario, 1.0, tolerance, oracle, quad
    )


def check_oriented(
    tolerance: float | None, oracle: OracleConfig, quad: QuadratureConfig
) -> list[CheckResult]:
    scenario = Oriented(kappa=1.0, phi=0.5 * math.pi)
    return _cross_term_check("oriented", scenario, 1.0, tolerance, oracle, quad)


def check_boosted_pair(
    tolerance: float | None, oracle: OracleConfig, quad: QuadratureConfig
) -> list[CheckResult]:
    scenario = BoostedPair(kappa=1.0, alpha=0.5, rho0=1.0)
    return _cross_term_check("boosted_pair", scenario, 1.0, tolerance, oracle, quad)


def check_bessel_k0(
    tolerance: float | None, oracle: OracleConfig, quad: QuadratureConfig
) -> list[CheckResult]:
    tol = 1e-9 if tolerance is None else tolerance
    return [
        _compare(
            "bessel_k0[integral]",
            bessel_k0(1.0),
            OracleSuite.bessel_k0_integral(1.0),
            tol,
            relative=False,
        ),
        _compare("bessel_k0[reference]", bessel_k0(1.0), K0_AT_ONE, tol, relative=False),
    ]


def check_inertial_limit(
    tolerance: float | None, oracle: OracleConfig, quad: QuadratureConfig
) -> list[CheckResult]:
    v, rho0 = 0.6, 1.0
    params = InertialLimitParams(v=v, rho0=rho0, delta_e_a=1.0, delta_e_b=1.0)
    kernel = 2.0 * bessel_k0(params.ell * math.sqrt(params.epsilon_eff**2 - params.p**2))
    identity = _compare(
        "inertial_limit[identity]",
        OracleSuite.inertial_identity(params, quad),
        kernel,
        1e-6 if tolerance is None else tolerance,
        detail="Fourier integral against 2 K0",
    )

    scenario = BoostedPair.model_validate({"kappa": 1e-3, "v": v, "rho0": rho0})
    det_a = Detector(delta_e=params.delta_e_a, kappa=scenario.kappa)
    det_b = Detector(delta_e=params.delta_e_b, kappa=scenario.kappa)
    engine = _numeric_cross_term(cross_term(scenario, det_a, det_b, quad))
    limit = _compare(
        "inertial_limit[boosted_pair]",
        engine.value,
        inertial_limit_cross_term(params),
        1e-2 if tolerance is None else tolerance,
        detail=f"kappa={scenario.kappa:g}",
    )
    return [identity, limit]


CheckFunction = Callable[[float | None, OracleConfig, QuadratureConfig], list[CheckResult]]

CHECKS: dict[str, CheckFunction] = {
    "response_rate": check_response_rate,
    "parallel_longitudinal": check_parallel_longitudinal,
    "anti_parallel_longitudinal_negative": check_anti_parallel_longitudinal_negative,
    "anti_parallel_longitudinal_positive": check_anti_parallel_longitudinal_positive,
    "oriented": check_oriented,
    "boosted_pair": check_boosted_pair,
    "bessel_k0": check_bessel_k0,
    "inertial_limit": check_inertial_limit,
}
CHECK_NAMES = tuple(CHECKS)


def run_check(
    name: str,
    tolerance: float | None = None,
    oracle: OracleConfig | None = None,
    quad: QuadratureConfig | None = None,
) -> list[CheckResult]:
    """Run one named check; library errors become a failed row carrying the message."""
    oracle = oracle or OracleConfig()
    quad = quad or QuadratureConfig()
    logger.info("running check %s", name)
    try:
        return CHECKS[name](tolerance, oracle, quad)
    except UnruhPairsError as exc:
        logger.warning("check %s failed: %s", name, exc)
        return [
            CheckResult(
                name=name,
                measured=complex("nan"),
                expected=complex("nan"),
                error=math.inf,
                tolerance=math.nan if tolerance is None else tolerance,
                relative=True,
                passed=False,
                detail=f"{type(exc).__name__}: {exc}",
            )
        ]

"""The cross term I_E of a detector pair.

After closing the tau_A contour in the upper half plane and summing each pole
tower geometrically, I_E becomes a single integral over tau_B of

    f(tau_B) = i / (4 pi K k_A D) * [w_+ e^{i(dE_B tau_B + x_A ln|eta_+|)}
                                    - w_- e^{i(dE_B tau_B + x_A ln|eta_-|)}]

where the weights w are 1, e^{-2 pi x_A} or e^{-pi x_A} times the Planck
factor 1/(1 - e^{-2 pi x_A}) depending on the sign of the root and on where
the i*epsilon prescription pushes it. Three scenarios collapse to an
energy-conserving delta function; the rest are integrated numerically and,
where a closed form exists, bounded.
"""

from __future__ import annotations

import cmath
import logging
import math
from collections.abc import Callable
from dataclasses import dataclass

from src.errors import BranchBoundaryError, DomainError, WrongScenarioError
from src.geometry import (
    abcd,
    branch_boundaries,
    d_growth,
    eta_roots,
    k_constant,
)
from src.models import (
    BOUNDED_KINDS,
    DELTA_KINDS,
    AntiParallelLongitudinal,
    AntiParallelTransverse,
    BoostedPair,
    Detector,
    InertialLimitParams,
    Oriented,
    ParallelDifferentAcceleration,
    ParallelLongitudinal,
    ParallelTransverse,
    QuadratureConfig,
    Scenario,
    ensure_matching_accelerations,
)
from src.numerics import bessel_k0, oscillatory_tail_integral
from src.response import planck_factor

logger = logging.getLogger(__name__)

# Below this separation parameter sin(x sigma)/sinh(sigma) uses its Taylor form.
SIGMA_TAYLOR_THRESHOLD = 1e-6


@dataclass(frozen=True, slots=True)
class DeltaTerm:
    """I_E = coefficient * delta(omega) in the variable lambda_B = k_B tau_B.

    ``frequency`` is the angular frequency, per unit lambda_B, of the
    residue-reduced integrand; ``omega`` is the argument of the delta
    function (the two agree up to sign).
    """

    coefficient: complex
    omega: float
    expression: str
    frequency: float

    @property
    def vanishes(self) -> bool:
        """Whether the delta function is supported away from the physical point."""
        return self.omega != 0.0


@dataclass(frozen=True, slots=True)
class FiniteValue:
    """A convergent cross term with its quadrature error estimate."""

    value: complex
    error_estimate: float


@dataclass(frozen=True, slots=True)
class BoundedOnly:
    """A closed-form upper bound on |I_E|, optionally with the numeric value."""

    upper_bound: float
    numeric_value: FiniteValue | None = None


CrossTermResult = DeltaTerm | FiniteValue | BoundedOnly


def _sin_ratio(x: float, sigma: float) -> float:
    """sin(x sigma) / sinh(sigma), continuous at sigma = 0."""
    if sigma < SIGMA_TAYLOR_THRESHOLD:
        return x * (1.0 - sigma * sigma * (x * x + 1.0) / 6.0)
    return math.sin(x * sigma) / math.sinh(sigma)


def _inverse_sinh_pi(x: float) -> float:
    """1 / sinh(pi x) without overflow."""
    return 2.0 * math.exp(-math.pi * x) * planck_factor(x)


def p_factor_from_q(q: float) -> float:
    """Closed form of the integral of du / (2 cosh u + 2 q) over the real line."""
    if q <= -1.0:
        raise DomainError(f"integral diverges for q={q!r} <= -1")
    if q == 1.0:
        return 1.0
    if q > 1.0:
        root = math.sqrt(q * q - 1.0)
        return math.log(q + root) / root
    root = math.sqrt(1.0 - q * q)
    if q > 0.0:
        return math.atan(root / q) / root
    if q == 0.0:
        return 0.5 * math.pi / root
    return (math.pi - math.atan(root / -q)) / root


class CrossTermEngine:
    """Residue-reduced integrands, closed forms and bounds for I_E."""

    @staticmethod
    def generalized_sigma(kappa_a: float, kappa_b: float, rho0: float) -> float:
        """sigma = arccosh(M), M = (k_a/k_b + k_b/k_a + k_a k_b rho0^2) / 2.

        Raises:
            DomainError: For non-positive accelerations or negative shift.
        """
        if not (kappa_a > 0 and kappa_b > 0 and rho0 >= 0):
            raise DomainError("generalized_sigma needs kappa_a, kappa_b > 0 and rho0 >= 0")
        m1 = ((kappa_a - kappa_b) ** 2 + (kappa_a * kappa_b * rho0) ** 2) / (
            2.0 * kappa_a * kappa_b
        )
        return math.log1p(m1 + math.sqrt(m1 * (m1 + 2.0)))

    @staticmethod
    def integrand(scenario: Scenario, det_a: Detector, det_b: Detector) -> Callable[[float], complex]:
        """Build f(tau_B) once for repeated evaluation."""
        ensure_matching_accelerations(scenario, det_a, det_b)
        xa = det_a.x
        eb = det_b.delta_e
        ka, kb = scenario.kappa_a, scenario.kappa_b
        planck = planck_factor(xa)
        weights = {
            "up": planck,
            "down": math.exp(-2.0 * math.pi * xa) * planck,
            "odd": math.exp(-math.pi * xa) * planck,
        }

        if isinstance(scenario, AntiParallelTransverse):
            sigma = CrossTermEngine.generalized_sigma(ka, kb, scenario.rho0)
            if sigma < SIGMA_TAYLOR_THRESHOLD:
                amplitude = kb * CrossTermEngine._anti_parallel_coefficient(xa, sigma) / (
                    2.0 * math.pi
                )
                omega_tau = kb * (det_b.x - xa)
                return lambda tau_b: amplitude * cmath.exp(1j * omega_tau * tau_b)

        k = k_constant(scenario)
        prefactor = 1j / (4.0 * math.pi * k * ka)

        def weight(eta: float, eps: int) -> float:
            if eta < 0:
                return weights["odd"]
            return weights["up"] if eps > 0 else weights["down"]

        def f(tau_b: float) -> complex:
            a, b, c, d = abcd(scenario, tau_b)
            try:
                if d == 0.0:
                    raise BranchBoundaryError(tau_b)
                eta_p, eta_m = eta_roots(a, b, c, d)
            except BranchBoundaryError:
                raise BranchBoundaryError(tau_b, branch_boundaries(scenario)) from None
            s = 1 if k * d > 0 else -1
            phase = eb * tau_b
            plus = weight(eta_p, s) * cmath.exp(1j * (phase + xa * math.log(abs(eta_p))))
            minus = weight(eta_m, -s) * cmath.exp(1j * (phase + xa * math.log(abs(eta_m))))
            return prefactor / d * (plus - minus)

        return f

    @staticmethod
    def residue_reduced_integrand(
        scenario: Scenario, det_a: Detector, det_b: Detector, tau_b: float
    ) -> complex:
        """f(tau_B) with I_E = integral of f over tau_B.

        Raises:
            BranchBoundaryError: If ``tau_b`` is a branch boundary.
        """
        return CrossTermEngine.integrand(scenario, det_a, det_b)(tau_b)

    @staticmethod
    def _anti_parallel_coefficient(xa: float, sigma: float) -> float:
        return -0.5 * _sin_ratio(xa, sigma) * _inverse_sinh_pi(xa)

    @staticmethod
    def delta_coefficient(scenario: Scenario, det_a: Detector, det_b: Detector) -> DeltaTerm:
        """Closed-form delta term of the three energy-conserving scenarios.

        The delta function is written in lambda_B = k_B tau_B, with
        ``integral exp(i omega lambda) d lambda = 2 pi delta(omega)``.

        Raises:
            WrongScenarioError: For scenarios outside the delta family.
        """
        ensure_matching_accelerations(scenario, det_a, det_b)
        xa, xb = det_a.x, det_b.x
        planck = planck_factor(xa)
        q = math.exp(-2.0 * math.pi * xa)
        match scenario:
            case ParallelTransverse():
                _, b, _, d = abcd(scenario, 0.0)
                log_plus = math.log(b + d)
                coefficient = (
                    1j
                    / (2.0 * d)
                    * planck
                    * (cmath.exp(1j * xa * log_plus) - q * cmath.exp(-1j * xa * log_plus))
                )
                return DeltaTerm(
                    coefficient=coefficient,
                    omega=xa + xb,
                    expression="i P(x_A) (w+^{ix_A} - e^{-2pi x_A} w-^{ix_A}) / (w+ - w-)",
                    frequency=xa + xb,
                )
            case ParallelDifferentAcceleration(kappa_a=ka, kappa_b=kb):
                sigma = math.log(ka / kb)
                coefficient = (
                    1j
                    / (2.0 * math.sinh(sigma))
                    * planck
                    * (cmath.exp(1j * xa * sigma) - q * cmath.exp(-1j * xa * sigma))
                )
                return DeltaTerm(
                    coefficient=coefficient,
                    omega=xa + xb,
                    expression="i P(x_A) (e^{i x_A s} - e^{-2pi x_A} e^{-i x_A s}) / (2 sinh s)",
                    frequency=xa + xb,
                )
            case AntiParallelTransverse(kappa_a=ka, kappa_b=kb, rho0=rho0):
                sigma = CrossTermEngine.generalized_sigma(ka, kb, rho0)
                return DeltaTerm(
                    coefficient=complex(CrossTermEngine._anti_parallel_coefficient(xa, sigma)),
                    omega=xa - xb,
                    expression="-(1/2) sin(x_A s) / (sinh s sinh(pi x_A))",
                    frequency=xb - xa,
                )
        raise WrongScenarioError(f"{scenario.kind} has no delta-function cross term")

    @staticmethod
    def p_factor(scenario: Scenario) -> float:
        """P for the longitudinal scenarios.

        P is the integral of k dtau / (2 cosh(k tau) + k x0) for the parallel
        pair and of k dtau / (2 cosh(k tau) - k x1) for the anti-parallel one,
        in closed form: an arctan branch, a log branch, or exactly 1 at the
        point where they meet.

        For the anti-parallel pair with x1 > 0 the argument q = -k x1 / 2 is
        negative and P is (pi - arctan(sqrt(1 - q^2) / |q|)) / sqrt(1 - q^2),
        the value of the defining integral. That integrand dominates the
        modulus of the residue-reduced one, so this P is the one that bounds
        |I_E|; the principal arctan of sqrt(1 - q^2) / q would be negative.

        Raises:
            WrongScenarioError: For other scenarios.
        """
        match scenario:
            case ParallelLongitudinal(kappa=k, x0=x0):
                return p_factor_from_q(0.5 * k * x0)
            case AntiParallelLongitudinal(kappa=k, x1=x1):
                return p_factor_from_q(-0.5 * k * x1)
        raise WrongScenarioError(f"P is not defined for {scenario.kind}")

    @staticmethod
    def cross_term_upper_bound(scenario: Scenario, det_a: Detector, det_b: Detector) -> float:
        """Closed-form bound on |I_E| from the triangle inequality.

        Raises:
            WrongScenarioError: Outside the bounded family.
        """
        ensure_matching_accelerations(scenario, det_a, det_b)
        xa = det_a.x
        planck = planck_factor(xa)
        coth = (1.0 + math.exp(-2.0 * math.pi * xa)) * planck
        match scenario:
            case ParallelLongitudinal(kappa=k, x0=x0):
                return CrossTermEngine.p_factor(scenario) * coth / (2.0 * math.pi * k * x0)
            case AntiParallelLongitudinal(kappa=k, x1=x1) if x1 < 0:
                p = CrossTermEngine.p_factor(scenario)
                return p * _inverse_sinh_pi(xa) / (2.0 * math.pi * k * abs(x1))
            case AntiParallelLongitudinal(kappa=k, x1=x1):
                return CrossTermEngine.p_factor(scenario) * planck / (math.pi * k * x1)
            case Oriented(phi=phi):
                tanh_a = math.tanh(math.pi * xa)
                tanh_b = math.tanh(0.5 * math.pi * xa)
                return coth / (4.0 * math.sin(phi)) * (1.0 - phi / math.pi * tanh_a * tanh_b)
        raise WrongScenarioError(f"no closed-form bound for {scenario.kind}")

    @staticmethod
    def integrate_cross_term(
        scenario: Scenario,
        det_a: Detector,
        det_b: Detector,
        cfg: QuadratureConfig | None = None,
    ) -> FiniteValue:
        """Numerical I_E for a scenario whose integrand decays like e^{-k_B |tau_B|}."""
        cfg = cfg or QuadratureConfig()
        f = CrossTermEngine.integrand(scenario, det_a, det_b)
        ka, kb = scenario.kappa_a, scenario.kappa_b
        d_inf, t0 = d_growth(scenario)
        scale = 4.0 * math.pi * abs(k_constant(scenario)) * ka
        planck = planck_factor(det_a.x)
        envelope = 2.0 * planck / (scale * d_inf)

        boundaries = branch_boundaries(scenario)
        singular_bound = None
        if boundaries:
            d_min = min(abs(abcd(scenario, p)[3]) for p in boundaries)
            singular_bound = 4.0 * planck / (scale * d_min)

        stretch = math.cosh(scenario.alpha) if isinstance(scenario, BoostedPair) else 2.0
        panel = 4.0 * math.pi / (det_b.delta_e + stretch * det_a.delta_e + ka + kb)
        logger.debug(
            "integrating %s: envelope=%.3g t0=%.3g boundaries=%s panel=%.3g",
            scenario.kind,
            envelope,
            t0,
            boundaries,
            panel,
        )
        result = oscillatory_tail_integral(
            f,
            kb,
            cfg,
            envelope=envelope,
            t0=t0,
            singular_points=boundaries,
            singular_bound=singular_bound,
            panel_width=min(panel, cfg.panel_width),
        )
        return FiniteValue(value=result.value, error_estimate=result.error_estimate)

    @staticmethod
    def cross_term(
        scenario: Scenario,
        det_a: Detector,
        det_b: Detector,
        cfg: QuadratureConfig | None = None,
    ) -> CrossTermResult:
        """Classify and evaluate I_E for any scenario in the catalog.

        Raises:
            NonConvergenceError: If the numerical integral does not converge.
        """
        if scenario.kind in DELTA_KINDS:
            return CrossTermEngine.delta_coefficient(scenario, det_a, det_b)
        numeric = CrossTermEngine.integrate_cross_term(scenario, det_a, det_b, cfg)
        if scenario.kind in BOUNDED_KINDS:
            return BoundedOnly(
                upper_bound=CrossTermEngine.cross_term_upper_bound(scenario, det_a, det_b),
                numeric_value=numeric,
            )
        return numeric

    @staticmethod
    def inertial_limit_cross_term(params: InertialLimitParams) -> complex:
        """Small-acceleration limit of the boosted pair.

        (i / 2pi) (sqrt(1 - v^2) / v) K0(ell sqrt(eps^2 - p^2)).

        Raises:
            DomainError: If eps_eff <= p.
        """
        gap = params.epsilon_eff**2 - params.p**2
        if not gap > 0:
            raise DomainError("epsilon_eff must exceed p")
        prefactor = math.sqrt(1.0 - params.v**2) / params.v
        return 1j / (2.0 * math.pi) * prefactor * bessel_k0(params.ell * math.sqrt(gap))


generalized_sigma = CrossTermEngine.generalized_sigma
residue_reduced_integrand = CrossTermEngine.residue_reduced_integrand
delta_coefficient = CrossTermEngine.delta_coefficient
p_factor = CrossTermEngine.p_factor
cross_term_upper_bound = CrossTermEngine.cross_term_upper_bound
cross_term = CrossTermEngine.cross_term
inertial_limit_cross_term = CrossTermEngine.inertial_limit_cross_term

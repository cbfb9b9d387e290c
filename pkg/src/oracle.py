"""Brute-force validators.

Everything here works from the worldlines alone: the regularised Feynman
double integral for I_E, the Wightman single integral for the response rate,
the Fourier identity behind the Bessel-K0 limit of the boosted pair, and the
polynomial extrapolation to vanishing regulator. None of it goes through
the residue engine.
"""

from __future__ import annotations

import cmath
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from src.errors import DeltaScenarioError, DegenerateSamplesError, DomainError
from src.geometry import (
    Event,
    branch_boundaries,
    interval_squared,
    worldline_coordinates,
    worldline_position,
)
from src.models import (
    DELTA_KINDS,
    Detector,
    InertialLimitParams,
    OracleConfig,
    ParallelTransverse,
    QuadratureConfig,
    Role,
    Scenario,
    ensure_matching_accelerations,
)
from src.numerics import adaptive_quadrature, fourier_half_line, panel_edges

logger = logging.getLogger(__name__)

_INV_FOUR_PI_SQ = 1.0 / (4.0 * math.pi * math.pi)
_OUTER_TOLERANCE_FACTOR = 100.0


@dataclass(frozen=True)
class ExtrapolationResult:
    """Zero-regulator estimate and how far it moved from the finest sample."""

    value: complex
    discrepancy: float
    samples: tuple[tuple[float, complex], ...] = ()


def _taper(tau: float, half_width: float, fraction: float) -> float:
    """C^1 window: 1 inside, cos^2 roll-off over the outer ``fraction``, 0 beyond."""
    a = abs(tau)
    if a >= half_width:
        return 0.0
    flat = (1.0 - fraction) * half_width
    if a <= flat:
        return 1.0
    c = math.cos(0.5 * math.pi * (a - flat) / (half_width - flat))
    return c * c


def _ladder(center: float, width: float, reach: float) -> list[float]:
    """Breakpoints at center +- width * 2^k up to ``reach`` away."""
    points = []
    step = width
    while step < reach:
        points.extend((center - step, center + step))
        step *= 2.0
    return points


class OracleSuite:
    """Independent brute-force evaluations used to validate the closed forms."""

    @staticmethod
    def epsilon_extrapolate(samples: Sequence[tuple[float, complex]]) -> ExtrapolationResult:
        """Fit a polynomial in epsilon through the samples and return its constant term.

        Two samples give the linear Richardson step; each additional sample
        removes one more power of epsilon.

        Raises:
            DegenerateSamplesError: For fewer than two samples, repeated or
                non-positive epsilon values, or non-finite data.
        """
        if len(samples) < 2:
            raise DegenerateSamplesError(f"need at least two samples, got {len(samples)}")
        eps = np.array([float(e) for e, _ in samples])
        values = np.array([complex(v) for _, v in samples])
        if np.any(eps <= 0) or not np.all(np.isfinite(eps)) or not np.all(np.isfinite(values)):
            raise DegenerateSamplesError("epsilon values must be positive and samples finite")
        if len(np.unique(eps)) != len(eps):
            raise DegenerateSamplesError(f"repeated epsilon values in {eps.tolist()}")

        scaled = eps / eps.max()
        matrix = np.vander(scaled, len(eps), increasing=True)
        coeffs = np.linalg.solve(matrix, values)
        limit = complex(coeffs[0])
        finest = complex(values[int(np.argmin(eps))])
        discrepancy = abs(limit - finest)
        logger.debug("extrapolated %d samples: %s (moved %.3g)", len(eps), limit, discrepancy)
        return ExtrapolationResult(
            value=limit,
            discrepancy=discrepancy,
            samples=tuple((float(e), complex(v)) for e, v in samples),
        )

    # ── Response rate ─────────────────────────────────────────

    @staticmethod
    def _response_rate_at(det: Detector, epsilon: float, oc: OracleConfig) -> float:
        kappa, gap = det.kappa, det.delta_e
        probe = ParallelTransverse(kappa=kappa, rho0=1.0)
        half = oc.window / kappa

        def integrand(s: float) -> complex:
            # The pair (s/2, -s/2) makes the Wightman function's conjugate
            # symmetry exact, so the full line is twice the real part on s > 0.
            late = worldline_position(probe, Role.ALICE, 0.5 * s)
            early = worldline_position(probe, Role.ALICE, -0.5 * s)
            dt = complex(late.t - early.t, -epsilon)
            spatial = (late.x - early.x) ** 2 + (late.y - early.y) ** 2 + (late.z - early.z) ** 2
            wightman = -_INV_FOUR_PI_SQ / (dt * dt - spatial)
            return 2.0 * (wightman * complex(math.cos(gap * s), -math.sin(gap * s))).real

        unit = 1.0 / kappa
        points = [p for p in _ladder(0.0, epsilon, unit) if p > 0]
        points += [unit, *panel_edges(unit, half, min(unit, math.pi / gap))]
        result = adaptive_quadrature(integrand, 0.0, half, oc.quadrature, points=points)
        return result.value.real

    @staticmethod
    def response_rate_estimate(det: Detector, oc: OracleConfig | None = None) -> ExtrapolationResult:
        """Excitation rate per proper time from the Wightman function, per regulator."""
        oc = oc or OracleConfig()
        samples = []
        for eps in oc.epsilon_values:
            value = OracleSuite._response_rate_at(det, eps / det.kappa, oc)
            logger.debug("response rate x=%.6g eps=%.3g: %.12g", det.x, eps, value)
            samples.append((eps, complex(value)))
        return OracleSuite.epsilon_extrapolate(samples)

    @staticmethod
    def brute_force_response_rate(det: Detector, oc: OracleConfig | None = None) -> float:
        """Response rate from direct quadrature of the Wightman function.

        Integrates ``exp(-i dE s) G_W(x(s/2), x(-s/2))`` over ``|s| <= window/kappa``
        with the ``(t - t' - i eps)^2`` prescription on the hyperbola, for each
        regulator ``eps/kappa`` of the schedule, then extrapolates to eps = 0.

        Raises:
            NonConvergenceError: If a quadrature fails.
        """
        return OracleSuite.response_rate_estimate(det, oc).value.real

    # ── Cross term ────────────────────────────────────────────

    @staticmethod
    def _lightcone_roots(
        scenario: Scenario, role: Role, target: Event, half: float, density: int, kappa: float
    ) -> list[float]:
        """Proper times on ``role``'s worldline that are null separated from ``target``."""
        grid = np.linspace(-half, half, max(16, math.ceil(2.0 * half * kappa * density)) + 1)
        coords = worldline_coordinates(scenario, role, grid)
        s2 = (
            (coords[:, 0] - target.t) ** 2
            - (coords[:, 1] - target.x) ** 2
            - (coords[:, 2] - target.y) ** 2
            - (coords[:, 3] - target.z) ** 2
        )

        def s2_at(tau: float) -> float:
            return interval_squared(worldline_position(scenario, role, tau), target)

        roots = [float(grid[i]) for i in np.flatnonzero(s2 == 0.0)]
        for i in np.flatnonzero(s2[:-1] * s2[1:] < 0):
            roots.append(float(optimize.brentq(s2_at, grid[i], grid[i + 1], xtol=1e-14)))
        return sorted(roots)

    @staticmethod
    def _cross_term_at(
        scenario: Scenario,
        det_a: Detector,
        det_b: Detector,
        epsilon: float,
        oc: OracleConfig,
        inner: Role,
    ) -> complex:
        outer = Role.BOB if inner is Role.ALICE else Role.ALICE
        gaps = {Role.ALICE: det_a.delta_e, Role.BOB: det_b.delta_e}
        kappas = {Role.ALICE: scenario.kappa_a, Role.BOB: scenario.kappa_b}
        halves = {role: oc.window / k for role, k in kappas.items()}
        k_in, gap_in, half_in = kappas[inner], gaps[inner], halves[inner]
        k_out, gap_out, half_out = kappas[outer], gaps[outer], halves[outer]
        inner_panel = min(2.0 / k_in, 2.0 * math.pi / gap_in)
        outer_panel = min(2.0 / k_out, 2.0 * math.pi / gap_out)

        def inner_integral(tau_out: float) -> complex:
            weight_out = _taper(tau_out, half_out, oc.taper)
            if weight_out == 0.0:
                return 0j
            here = worldline_position(scenario, outer, tau_out)

            def amplitude(tau_in: float) -> complex:
                phase = gap_in * tau_in
                w = _taper(tau_in, half_in, oc.taper)
                return w * complex(math.cos(phase), math.sin(phase))

            def s2(tau_in: float) -> float:
                return interval_squared(here, worldline_position(scenario, inner, tau_in))

            # Each simple light-cone crossing is replaced by its linearised
            # pole c / (a (tau - r) - i eps), integrated in closed form; the
            # remainder stays bounded as eps -> 0.
            poles = []
            h = 1e-5 / k_in
            for r in OracleSuite._lightcone_roots(
                scenario, inner, here, half_in, oc.grid_density, k_in
            ):
                slope = (s2(r + h) - s2(r - h)) / (2.0 * h)
                if -half_in < r < half_in and slope != 0.0:
                    poles.append((r, slope, amplitude(r)))

            def remainder(tau_in: float) -> complex:
                value = amplitude(tau_in) / complex(s2(tau_in), -epsilon)
                for r, a, c in poles:
                    value -= c / complex(a * (tau_in - r), -epsilon)
                return value

            flat = (1.0 - oc.taper) * half_in
            points = panel_edges(-half_in, half_in, inner_panel) + [-flat, flat]
            subtracted = 0j
            for r, a, c in poles:
                points.extend(_ladder(r, epsilon / abs(a), 0.5 / k_in))
                points.append(r)
                upper = cmath.log(complex(a * (half_in - r), -epsilon))
                lower = cmath.log(complex(a * (-half_in - r), -epsilon))
                subtracted += c / a * (upper - lower)
            points = [p for p in points if -half_in < p < half_in]
            result = adaptive_quadrature(remainder, -half_in, half_in, oc.quadrature, points=points)
            phase = gap_out * tau_out
            inner_value = result.value + subtracted
            return weight_out * complex(math.cos(phase), math.sin(phase)) * inner_value

        # The outer integrand inherits the inner quadrature error.
        outer_quad = oc.quadrature.model_copy(
            update={
                "abs_tol": _OUTER_TOLERANCE_FACTOR * oc.quadrature.abs_tol,
                "rel_tol": _OUTER_TOLERANCE_FACTOR * oc.quadrature.rel_tol,
            }
        )
        flat = (1.0 - oc.taper) * half_out
        points = panel_edges(-half_out, half_out, outer_panel) + [-flat, flat]
        if outer is Role.BOB:
            points += list(branch_boundaries(scenario))
        points = [p for p in points if -half_out < p < half_out]
        result = adaptive_quadrature(inner_integral, -half_out, half_out, outer_quad, points=points)
        return _INV_FOUR_PI_SQ * result.value

    @staticmethod
    def cross_term_estimate(
        scenario: Scenario,
        det_a: Detector,
        det_b: Detector,
        oc: OracleConfig | None = None,
        *,
        inner: Role = Role.ALICE,
    ) -> ExtrapolationResult:
        """The regularised double integral per regulator, extrapolated.

        Raises:
            DeltaScenarioError: For the energy-conserving scenarios, whose
                double integral grows with the window.
            NonConvergenceError: If a quadrature fails.
        """
        if scenario.kind in DELTA_KINDS:
            raise DeltaScenarioError(
                f"{scenario.kind} has a delta-function cross term; the windowed integral diverges"
            )
        ensure_matching_accelerations(scenario, det_a, det_b)
        oc = oc or OracleConfig()
        samples = []
        for eps in oc.epsilon_values:
            value = OracleSuite._cross_term_at(
                scenario, det_a, det_b, eps / scenario.kappa_a**2, oc, Role(inner)
            )
            logger.debug("cross term %s eps=%.3g: %s", scenario.kind, eps, value)
            samples.append((eps, value))
        return OracleSuite.epsilon_extrapolate(samples)

    @staticmethod
    def brute_force_cross_term(
        scenario: Scenario,
        det_a: Detector,
        det_b: Detector,
        oc: OracleConfig | None = None,
        *,
        inner: Role = Role.ALICE,
    ) -> complex:
        """I_E from the double integral of the regularised Feynman propagator.

        Computes ``(1/4pi^2) iint w_A w_B exp(i(dE_A tau_A + dE_B tau_B)) /
        (sigma^2 - i eps)`` over both proper-time windows, integrating ``inner``
        first, for every regulator of the schedule, and extrapolates.

        Raises:
            DeltaScenarioError: For delta-function scenarios.
            NonConvergenceError: If a quadrature fails.
        """
        return OracleSuite.cross_term_estimate(scenario, det_a, det_b, oc, inner=inner).value

    # ── Special-function identities ───────────────────────────

    @staticmethod
    def bessel_k0_integral(z: float, cfg: QuadratureConfig | None = None) -> float:
        """K0(z) from its integral representation over exp(-z cosh t).

        Raises:
            DomainError: For ``z <= 0``.
        """
        if not z > 0:
            raise DomainError(f"K0 is defined for z > 0, got {z!r}")
        cfg = cfg or QuadratureConfig(abs_tol=1e-13, rel_tol=1e-12)
        upper = math.acosh(1.0 + 60.0 / z)
        result = adaptive_quadrature(lambda t: math.exp(-z * math.cosh(t)), 0.0, upper, cfg)
        return result.value.real

    @staticmethod
    def inertial_identity(params: InertialLimitParams, cfg: QuadratureConfig | None = None) -> complex:
        """Numerical value of the integral that equals 2 K0(ell sqrt(eps^2 - p^2)).

        With r = sqrt(tau^2 + ell^2) the integral of exp(i eps tau + i p r) / r
        over the real line is split at tau = 0 and each half is handed to the
        Fourier-weighted rule with the smooth amplitude exp(ip(r - tau)) / r.

        Raises:
            DomainError: If eps_eff <= p.
        """
        ell, eps, p = params.ell, params.epsilon_eff, params.p
        if not eps > p:
            raise DomainError("epsilon_eff must exceed p")

        def amplitude(tau: float) -> complex:
            r = math.hypot(tau, ell)
            # r - tau without cancellation at large tau.
            phase = p * ell * ell / (r + tau)
            return complex(math.cos(phase), math.sin(phase)) / r

        forward = fourier_half_line(amplitude, eps + p, cfg)
        backward = fourier_half_line(amplitude, -(eps - p), cfg)
        return forward.value + backward.value


epsilon_extrapolate = OracleSuite.epsilon_extrapolate
brute_force_response_rate = OracleSuite.brute_force_response_rate
brute_force_cross_term = OracleSuite.brute_force_cross_term

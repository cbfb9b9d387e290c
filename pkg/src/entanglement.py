"""Entanglement analysis for a detector pair.

Assembles the perturbative two-qubit state rho_AB, evaluates the PPT
negativity, the Wootters concurrence and the entanglement of formation, and
turns the cross term and the response rates into a per-scenario verdict.

The state is written in the basis {|11>, |10>, |01>, |00>} (Alice first,
|1> excited):

    [[0,          0,          0,          c^2 E                ],
     [0,          c^2 P_A,    c^2 P_AB,   c^2 W_A              ],
     [0,          c^2 P_AB*,  c^2 P_B,    c^2 W_B              ],
     [c^2 E*,     c^2 W_A*,   c^2 W_B*,   1 - c^2 (P_A + P_B)  ]]
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from src.crossterm import (
    SIGMA_TAYLOR_THRESHOLD,
    BoundedOnly,
    CrossTermEngine,
    CrossTermResult,
    DeltaTerm,
    FiniteValue,
)
from src.errors import ConditionNotMetError, DomainError, InvalidStateError
from src.models import (
    AntiParallelTransverse,
    Detector,
    QuadratureConfig,
    Scenario,
    Verdict,
)
from src.numerics import binary_entropy, complex_eigenvalues_4x4
from src.response import ResponseCalculator, ResponseRate, bose_factor, planck_factor

logger = logging.getLogger(__name__)

_SIGMA_Y = np.array([[0.0, -1j], [1j, 0.0]])
_SIGMA_YY = np.kron(_SIGMA_Y, _SIGMA_Y)

# x_A and x_B closer than this (relative) count as the same ratio.
_RATIO_MATCH = 1e-12


@dataclass(frozen=True)
class DensityMatrixComponents:
    """Inputs of rho_AB at order c^2.

    ``p_ab``, ``w_a`` and ``w_b`` enter neither the PPT condition nor the
    measures at this order; they default to zero and ``offdiagonal_evaluated``
    stays False until someone supplies actual values.
    """

    coupling: float
    p_a: float
    p_b: float
    e: complex
    p_ab: complex = 0j
    w_a: complex = 0j
    w_b: complex = 0j
    offdiagonal_evaluated: bool = False


@dataclass(frozen=True)
class ExtractionRate:
    """Entanglement extraction rates per unit proper time."""

    concurrence: float
    negativity: float


@dataclass
class EntanglementReport:
    """Verdict and supporting quantities for one detector pair."""

    verdict: Verdict
    cross_term: CrossTermResult
    response_rates: tuple[ResponseRate, ResponseRate]
    notes: str
    xi: float | None = None
    sigma: float | None = None
    bound: float | None = None
    concurrence_rate: float | None = None
    negativity_rate: float | None = None
    reduced_concurrence_rate: float | None = None
    reduced_negativity_rate: float | None = None

    @property
    def entangled(self) -> bool:
        return self.verdict == Verdict.ENTANGLED


def _check_measure_inputs(c: float, p_a: float, p_b: float, abs_e: float) -> None:
    if c < 0 or p_a < 0 or p_b < 0 or abs_e < 0:
        raise DomainError(
            f"c, P_A, P_B and |E| must be non-negative, got {c!r}, {p_a!r}, {p_b!r}, {abs_e!r}"
        )
    if not p_a * p_b < abs_e * abs_e:
        raise ConditionNotMetError(
            f"P_A P_B = {p_a * p_b:.6g} >= |E|^2 = {abs_e * abs_e:.6g}: state is not entangled"
        )


def _as_state(rho: np.ndarray) -> np.ndarray:
    m = np.asarray(rho, dtype=complex)
    if m.shape != (4, 4):
        raise DomainError(f"expected a 4x4 density matrix, got shape {m.shape}")
    return m


class EntanglementAnalyzer:
    """Xi criterion, two-qubit measures and per-scenario verdicts."""

    @staticmethod
    def xi(x: float, sigma: float) -> float:
        """Xi = |sin(x sigma)| / sinh(sigma) * e^{pi x} - x.

        At sigma = 0 this is x (e^{pi x} - 1), evaluated without cancellation.

        Raises:
            DomainError: For ``x <= 0`` or ``sigma < 0``.
        """
        if not x > 0:
            raise DomainError(f"x must be positive, got {x!r}")
        if not sigma >= 0:
            raise DomainError(f"sigma must be non-negative, got {sigma!r}")
        s = EntanglementAnalyzer._abs_sin_ratio(x, sigma)
        return x * math.expm1(math.pi * x) + (s - x) * math.exp(math.pi * x)

    @staticmethod
    def _abs_sin_ratio(x: float, sigma: float) -> float:
        if sigma == 0.0:
            return x
        if sigma < SIGMA_TAYLOR_THRESHOLD:
            return abs(x * (1.0 - sigma * sigma * (x * x + 1.0) / 6.0))
        return abs(math.sin(x * sigma)) / math.sinh(sigma)

    @staticmethod
    def xi_planck_ratio(x: float, sigma: float) -> float:
        """Xi / (e^{2 pi x} - 1), finite for every x > 0.

        Raises:
            DomainError: For ``x <= 0`` or ``sigma < 0``.
        """
        if not x > 0:
            raise DomainError(f"x must be positive, got {x!r}")
        if not sigma >= 0:
            raise DomainError(f"sigma must be non-negative, got {sigma!r}")
        s = EntanglementAnalyzer._abs_sin_ratio(x, sigma)
        damp = math.exp(-math.pi * x)
        return x * damp / (1.0 + damp) + (s - x) * damp * planck_factor(x)

    @staticmethod
    def entanglement_condition_rates(rate_e: float, rate_a: float, rate_b: float) -> bool:
        """True iff rate_A * rate_B < rate_E^2 (strict)."""
        return rate_a * rate_b < rate_e * rate_e

    @staticmethod
    def concurrence_rate_per_proper_time(
        x: float,
        sigma: float,
        c: float,
        m_squared: float,
        kappa: float,
    ) -> ExtractionRate:
        """Symmetric-pair extraction rate max(0, (c^2 kappa / pi) m^2 Xi / (e^{2pi x} - 1)).

        The negativity rate is half the concurrence rate.

        Raises:
            DomainError: For non-positive ``x`` or ``kappa``, or negative
                ``sigma``, ``c`` or ``m_squared``.
        """
        if not kappa > 0:
            raise DomainError(f"kappa must be positive, got {kappa!r}")
        if c < 0 or m_squared < 0:
            raise DomainError("coupling and m_squared must be non-negative")
        ratio = EntanglementAnalyzer.xi_planck_ratio(x, sigma)
        rate = max(0.0, c * c * kappa / math.pi * m_squared * ratio)
        return ExtractionRate(concurrence=rate, negativity=0.5 * rate)

    @staticmethod
    def assemble_density_matrix(
        comp: DensityMatrixComponents, *, fourth_order: bool = False
    ) -> np.ndarray:
        """Build rho_AB from its O(c^2) components.

        With ``fourth_order`` the doubly excited population
        c^4 (|E|^2 + P_A P_B + |P_AB|^2) is restored in the |11><11| slot and
        removed from |00><00|. Without it the matrix is not positive
        semidefinite at O(c^4), which is harmless for the negativity but
        hides the concurrence from Wootters' formula.

        Raises:
            InvalidStateError: For negative or non-finite inputs, a negative
                diagonal entry or a trace different from 1.
        """
        c, p_a, p_b = comp.coupling, comp.p_a, comp.p_b
        values = (c, p_a, p_b, comp.e, comp.p_ab, comp.w_a, comp.w_b)
        if not all(np.isfinite(v) for v in values):
            raise InvalidStateError("density matrix components must be finite")
        if c < 0 or p_a < 0 or p_b < 0:
            raise InvalidStateError("coupling, P_A and P_B must be non-negative")

        c2 = c * c
        rho = np.zeros((4, 4), dtype=complex)
        rho[0, 3] = c2 * comp.e
        rho[1, 1] = c2 * p_a
        rho[1, 2] = c2 * comp.p_ab
        rho[1, 3] = c2 * comp.w_a
        rho[2, 2] = c2 * p_b
        rho[2, 3] = c2 * comp.w_b
        rho[3, 3] = 1.0 - c2 * (p_a + p_b)
        if fourth_order:
            doubly = c2 * c2 * (abs(comp.e) ** 2 + p_a * p_b + abs(comp.p_ab) ** 2)
            rho[0, 0] = doubly
            rho[3, 3] -= doubly
        upper = np.triu(rho, k=1)
        rho = rho + upper.conj().T

        diagonal = rho.diagonal().real
        if np.any(diagonal < 0):
            raise InvalidStateError(
                f"negative population {diagonal.min():.6g}; coupling {c!r} is too large"
            )
        trace = float(diagonal.sum())
        if abs(trace - 1.0) > 1e-12:
            raise InvalidStateError(f"trace is {trace!r}, expected 1")
        return rho

    @staticmethod
    def negativity_closed_form(c: float, p_a: float, p_b: float, abs_e: float) -> float:
        """-(c^2/2) [P_A + P_B - sqrt((P_A - P_B)^2 + 4|E|^2)].

        Raises:
            ConditionNotMetError: If P_A P_B >= |E|^2.
        """
        _check_measure_inputs(c, p_a, p_b, abs_e)
        root = math.sqrt((p_a - p_b) ** 2 + 4.0 * abs_e * abs_e)
        return -0.5 * c * c * (p_a + p_b - root)

    @staticmethod
    def negativity_from_partial_transpose(rho: np.ndarray, atol: float = 1e-15) -> float:
        """Minus the sum of the negative eigenvalues of rho^{T_B}.

        Eigenvalues above ``-atol`` are treated as round-off.
        """
        m = _as_state(rho)
        transposed = m.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)
        eigenvalues = [v.real for v in complex_eigenvalues_4x4(transposed)]
        return -sum(v for v in eigenvalues if v < -atol)

    @staticmethod
    def concurrence_closed_form(c: float, p_a: float, p_b: float, abs_e: float) -> float:
        """2 c^2 (|E| - sqrt(P_A P_B)).

        Raises:
            ConditionNotMetError: If P_A P_B >= |E|^2.
        """
        _check_measure_inputs(c, p_a, p_b, abs_e)
        return 2.0 * c * c * (abs_e - math.sqrt(p_a * p_b))

    @staticmethod
    def concurrence_wootters(rho: np.ndarray) -> float:
        """Wootters' concurrence max(0, l1 - l2 - l3 - l4).

        The l_i are the descending square roots of the eigenvalues of
        rho (sy x sy) rho* (sy x sy).
        """
        m = _as_state(rho)
        flipped = _SIGMA_YY @ m.conj() @ _SIGMA_YY
        eigenvalues = complex_eigenvalues_4x4(m @ flipped)
        roots = sorted((math.sqrt(max(v.real, 0.0)) for v in eigenvalues), reverse=True)
        return max(0.0, roots[0] - roots[1] - roots[2] - roots[3])

    @staticmethod
    def entanglement_of_formation(concurrence: float) -> float:
        """h((1 + sqrt(1 - C^2)) / 2) in bits.

        Raises:
            DomainError: If C lies outside [0, 1].
        """
        if not 0.0 <= concurrence <= 1.0:
            raise DomainError(f"concurrence must lie in [0, 1], got {concurrence!r}")
        return binary_entropy(0.5 * (1.0 + math.sqrt(1.0 - concurrence * concurrence)))

    @staticmethod
    def verdict(
        scenario: Scenario,
        det_a: Detector,
        det_b: Detector,
        cfg: QuadratureConfig | None = None,
        coupling: float = 1.0,
    ) -> EntanglementReport:
        """Decide whether the pair extracts entanglement from the vacuum.

        Args:
            scenario: Worldline configuration of the pair.
            det_a: Alice's detector.
            det_b: Bob's detector.
            cfg: Quadrature settings for the numerically integrated cross terms.
            coupling: Coupling constant c used for the full rates.

        Returns:
            EntanglementReport with the verdict, the cross term, both response
            rates and, for the energy-conserving anti-parallel pair, Xi and the
            extraction rates.

        Raises:
            DomainError: If a detector's acceleration disagrees with the scenario.
            NonConvergenceError: Propagated from the cross-term quadrature.
        """
        rates = (
            ResponseCalculator.response_rate(det_a),
            ResponseCalculator.response_rate(det_b),
        )
        term = CrossTermEngine.cross_term(scenario, det_a, det_b, cfg)

        match term:
            case DeltaTerm() if term.vanishes:
                note = (
                    f"I_E is supported on delta({term.omega:.6g}) with a nonzero argument: "
                    "the energy conjugate to the boost Killing vector cannot be conserved, "
                    "so the cross term vanishes"
                )
                report = EntanglementReport(
                    verdict=Verdict.NOT_ENTANGLED_DELTA,
                    cross_term=term,
                    response_rates=rates,
                    notes=note,
                )
            case DeltaTerm():
                report = EntanglementAnalyzer._resonant_report(
                    scenario, det_a, det_b, term, rates, coupling
                )
            case BoundedOnly():
                report = EntanglementReport(
                    verdict=Verdict.NOT_ENTANGLED_BOUNDED,
                    cross_term=term,
                    response_rates=rates,
                    bound=term.upper_bound,
                    notes=(
                        f"|I_E| <= {term.upper_bound:.6g} stays finite while I_A and I_B "
                        "grow linearly with the interaction time"
                    ),
                )
            case FiniteValue():
                bound = abs(term.value) + term.error_estimate
                report = EntanglementReport(
                    verdict=Verdict.NOT_ENTANGLED_BOUNDED,
                    cross_term=term,
                    response_rates=rates,
                    bound=bound,
                    notes=(
                        f"|I_E| = {abs(term.value):.6g} is finite while I_A and I_B "
                        "grow linearly with the interaction time"
                    ),
                )
            case _:
                raise TypeError(f"unexpected cross-term result {term!r}")
        logger.debug("verdict for %s: %s", scenario.kind, report.verdict)
        return report

    @staticmethod
    def _resonant_report(
        scenario: Scenario,
        det_a: Detector,
        det_b: Detector,
        term: DeltaTerm,
        rates: tuple[ResponseRate, ResponseRate],
        coupling: float,
    ) -> EntanglementReport:
        # Only the anti-parallel transverse pair reaches here: omega = x_A - x_B = 0.
        assert isinstance(scenario, AntiParallelTransverse)
        xa, xb = det_a.x, det_b.x
        if not math.isclose(xa, xb, rel_tol=_RATIO_MATCH):
            return EntanglementReport(
                verdict=Verdict.NOT_ENTANGLED_DELTA,
                cross_term=term,
                response_rates=rates,
                notes=f"x_A = {xa:.6g} and x_B = {xb:.6g} differ, so delta(x_A - x_B) vanishes",
            )

        sigma = CrossTermEngine.generalized_sigma(
            scenario.kappa_a, scenario.kappa_b, scenario.rho0
        )
        xi_value = EntanglementAnalyzer.xi(xa, sigma)

        # Per unit lambda: the common duration integral divides out of both sides.
        reduced_a = xa / (2.0 * math.pi) * bose_factor(xa)
        reduced_b = xb / (2.0 * math.pi) * bose_factor(xb)
        reduced_e = abs(term.coefficient) / (2.0 * math.pi)
        entangled = xi_value > 0

        def measures(c: float, m_a: float, m_b: float) -> tuple[float, float]:
            if not entangled:
                return 0.0, 0.0
            p_a, p_b = m_a * reduced_a, m_b * reduced_b
            abs_e = math.sqrt(m_a * m_b) * reduced_e
            try:
                concurrence = EntanglementAnalyzer.concurrence_closed_form(c, p_a, p_b, abs_e)
                negativity = EntanglementAnalyzer.negativity_closed_form(c, p_a, p_b, abs_e)
            except ConditionNotMetError:
                return 0.0, 0.0
            return scenario.kappa_a * concurrence, scenario.kappa_a * negativity

        full = measures(coupling, det_a.m_squared, det_b.m_squared)
        reduced = measures(1.0, 1.0, 1.0)
        note = (
            "x_A = x_B conserves the boost Killing energy; per unit lambda the "
            f"condition reduces to Xi > 0 and Xi = {xi_value:.6g}"
        )
        return EntanglementReport(
            verdict=Verdict.ENTANGLED if entangled else Verdict.NOT_ENTANGLED_XI,
            cross_term=term,
            response_rates=rates,
            notes=note,
            xi=xi_value,
            sigma=sigma,
            concurrence_rate=full[0],
            negativity_rate=full[1],
            reduced_concurrence_rate=reduced[0],
            reduced_negativity_rate=reduced[1],
        )


xi = EntanglementAnalyzer.xi
xi_planck_ratio = EntanglementAnalyzer.xi_planck_ratio
entanglement_condition_rates = EntanglementAnalyzer.entanglement_condition_rates
concurrence_rate_per_proper_time = EntanglementAnalyzer.concurrence_rate_per_proper_time
assemble_density_matrix = EntanglementAnalyzer.assemble_density_matrix
negativity_closed_form = EntanglementAnalyzer.negativity_closed_form
negativity_from_partial_transpose = EntanglementAnalyzer.negativity_from_partial_transpose
concurrence_closed_form = EntanglementAnalyzer.concurrence_closed_form
concurrence_wootters = EntanglementAnalyzer.concurrence_wootters
entanglement_of_formation = EntanglementAnalyzer.entanglement_of_formation
verdict = EntanglementAnalyzer.verdict

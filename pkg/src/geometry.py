"""Worldline catalog and interval geometry for the seven detector scenarios.

Alice always rides the hyperbola ``(sinh(k*tau), cosh(k*tau), 0, 0) / k`` (shifted
to pass through the origin in the boosted case). Everything the cross-term
engine needs about Bob is packed into the decomposition

    sigma^2(tau_A, tau_B) = K * [A e^{k_A tau_A} - 2 B + C e^{-k_A tau_A}]

with A, B, C functions of tau_B and K constant, and into
``D = sqrt(B^2 - A C)`` with a fixed sign convention per scenario.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass
from types import ModuleType
from typing import Any

import numpy as np

from src.errors import BranchBoundaryError, DomainError
from src.models import (
    AntiParallelLongitudinal,
    AntiParallelTransverse,
    BoostedPair,
    ImagOffsetClass,
    Oriented,
    ParallelDifferentAcceleration,
    ParallelLongitudinal,
    ParallelTransverse,
    Role,
    Scenario,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class Event:
    """A point of Minkowski spacetime in inertial coordinates."""

    t: float
    x: float
    y: float = 0.0
    z: float = 0.0


@dataclass(frozen=True, slots=True)
class IntervalDecomposition:
    """The A/B/C/K representation of the Alice-Bob interval."""

    eval_a: Callable[[float], float]
    eval_b: Callable[[float], float]
    eval_c: Callable[[float], float]
    k: float
    kappa_a: float

    def interval(self, tau_a: float, tau_b: float) -> float:
        """Squared interval rebuilt from the decomposition."""
        e = math.exp(self.kappa_a * tau_a)
        return self.k * (
            self.eval_a(tau_b) * e - 2.0 * self.eval_b(tau_b) + self.eval_c(tau_b) / e
        )


@dataclass(frozen=True, slots=True)
class PoleBranch:
    """One tower of upper-half-plane poles in tau_A at a fixed tau_B.

    Attributes:
        sign: +1 for the root eta_+, -1 for eta_-.
        eta: The root of ``A eta^2 - 2 B eta + C`` (eta = e^{k_A tau_A}).
        real_part: ``ln|eta| / k_A``, common real part of the tower.
        imag_offset_class: Even (2n pi) or odd ((2n+1) pi) multiples of pi/k_A.
        epsilon_sign: Direction in which the i*epsilon prescription moves the
            real-axis member of the tower.
        validity_region: Interval of tau_B between neighbouring branch
            boundaries on which this classification holds.
        poles: The first members of the tower as complex tau_A values.
    """

    sign: int
    eta: float
    real_part: float
    imag_offset_class: ImagOffsetClass
    epsilon_sign: int
    validity_region: tuple[float, float]
    poles: tuple[complex, ...]

    @property
    def first_index(self) -> int:
        """Lowest n of the tower (1 when the real-axis pole is pushed down)."""
        return _tower_start(self.imag_offset_class, self.epsilon_sign)


def _tower_start(cls: ImagOffsetClass, epsilon_sign: int) -> int:
    if cls is ImagOffsetClass.EVEN_PI and epsilon_sign < 0:
        return 1
    return 0


# ── Worldlines ────────────────────────────────────────────────


def _coords(scenario: Scenario, role: Role, tau: Any, xp: ModuleType) -> tuple[Any, ...]:
    zero = 0.0 * tau
    if role is Role.ALICE:
        k = scenario.kappa_a
        if isinstance(scenario, BoostedPair):
            return xp.sinh(k * tau) / k, (xp.cosh(k * tau) - 1.0) / k, zero, zero
        return xp.sinh(k * tau) / k, xp.cosh(k * tau) / k, zero, zero

    k = scenario.kappa_b
    sh, ch = xp.sinh(k * tau) / k, xp.cosh(k * tau) / k
    match scenario:
        case ParallelTransverse(rho0=rho0):
            return sh, ch, zero + rho0, zero
        case ParallelDifferentAcceleration():
            return sh, ch, zero, zero
        case ParallelLongitudinal(x0=x0):
            return sh, ch + x0, zero, zero
        case AntiParallelTransverse(rho0=rho0):
            return sh, -ch, zero + rho0, zero
        case AntiParallelLongitudinal(x1=x1):
            return sh, x1 - ch, zero, zero
        case Oriented(phi=phi):
            return sh, math.cos(phi) * ch, math.sin(phi) * ch, zero
        case BoostedPair(alpha=alpha, rho0=rho0):
            u = k * tau + alpha
            return (
                (xp.sinh(u) - math.sinh(alpha)) / k,
                (xp.cosh(u) - math.cosh(alpha)) / k,
                zero + rho0,
                zero,
            )
    raise DomainError(f"unknown scenario {scenario!r}")


def worldline_position(scenario: Scenario, role: Role, tau: float) -> Event:
    """Inertial coordinates of a detector at proper time ``tau``."""
    t, x, y, z = _coords(scenario, Role(role), float(tau), math)
    return Event(float(t), float(x), float(y), float(z))


def worldline_coordinates(scenario: Scenario, role: Role, tau: np.ndarray) -> np.ndarray:
    """Vectorised worldline: returns an array of shape ``tau.shape + (4,)``."""
    tau = np.asarray(tau, dtype=float)
    return np.stack(_coords(scenario, Role(role), tau, np), axis=-1)


def interval_squared(e1: Event, e2: Event) -> float:
    """(t1 - t2)^2 - |x1 - x2|^2 with signature (+,-,-,-)."""
    return (
        (e1.t - e2.t) ** 2 - (e1.x - e2.x) ** 2 - (e1.y - e2.y) ** 2 - (e1.z - e2.z) ** 2
    )


# ── Interval decomposition ────────────────────────────────────


def k_constant(scenario: Scenario) -> float:
    """The constant K of the decomposition."""
    match scenario:
        case ParallelDifferentAcceleration(kappa_a=ka, kappa_b=kb):
            return 1.0 / (ka * kb)
        case AntiParallelTransverse(kappa_a=ka, kappa_b=kb):
            return -1.0 / (ka * kb)
        case AntiParallelLongitudinal(kappa=k):
            return -1.0 / k**2
        case _:
            return 1.0 / scenario.kappa_a**2


def _anti_parallel_m_minus_one(s: AntiParallelTransverse) -> float:
    ka, kb = s.kappa_a, s.kappa_b
    return ((ka - kb) ** 2 + (ka * kb * s.rho0) ** 2) / (2.0 * ka * kb)


def abcd(scenario: Scenario, tau_b: float) -> tuple[float, float, float, float]:
    """A, B, C and D at ``tau_b`` in closed form."""
    match scenario:
        case ParallelTransverse(kappa=k, rho0=rho0):
            q = k * rho0
            return (
                math.exp(-k * tau_b),
                1.0 + 0.5 * q * q,
                math.exp(k * tau_b),
                q * math.sqrt(1.0 + 0.25 * q * q),
            )
        case ParallelDifferentAcceleration(kappa_a=ka, kappa_b=kb):
            r = ka / kb
            return (
                math.exp(-kb * tau_b),
                0.5 * (r + 1.0 / r),
                math.exp(kb * tau_b),
                0.5 * (r - 1.0 / r),
            )
        case ParallelLongitudinal(kappa=k, x0=x0):
            s = k * x0
            d = s * math.cosh(k * tau_b) + 0.5 * s * s
            return math.exp(-k * tau_b) + s, 1.0 + d, math.exp(k * tau_b) + s, d
        case AntiParallelTransverse(kappa_b=kb):
            m1 = _anti_parallel_m_minus_one(scenario)
            return (
                math.exp(kb * tau_b),
                -(1.0 + m1),
                math.exp(-kb * tau_b),
                math.sqrt(m1 * (m1 + 2.0)),
            )
        case AntiParallelLongitudinal(kappa=k, x1=x1):
            s = k * x1
            ch = math.cosh(k * tau_b)
            return (
                math.exp(k * tau_b) - s,
                s * ch - 0.5 * s * s - 1.0,
                math.exp(-k * tau_b) - s,
                0.5 * s * (2.0 * ch - s),
            )
        case Oriented(kappa=k, phi=phi):
            ch, sh = math.cosh(k * tau_b), math.sinh(k * tau_b)
            c = math.cos(phi) * ch
            return c - sh, 1.0, c + sh, math.sin(phi) * ch
        case BoostedPair(kappa=k, alpha=alpha, rho0=rho0):
            kt = k * tau_b
            half = 0.5 * (k * rho0) ** 2
            g = 4.0 * math.cosh(0.5 * (kt + alpha)) * math.sinh(0.5 * kt) * math.sinh(0.5 * alpha)
            return (
                math.expm1(-kt) * math.exp(-alpha) + 1.0,
                1.0 + half + g,
                math.expm1(kt) * math.exp(alpha) + 1.0,
                math.hypot(k * rho0, half + g),
            )
    raise DomainError(f"unknown scenario {scenario!r}")


def interval_decomposition(scenario: Scenario) -> IntervalDecomposition:
    """The A, B, C, K representation of the scenario's interval."""
    return IntervalDecomposition(
        eval_a=lambda tau_b: abcd(scenario, tau_b)[0],
        eval_b=lambda tau_b: abcd(scenario, tau_b)[1],
        eval_c=lambda tau_b: abcd(scenario, tau_b)[2],
        k=k_constant(scenario),
        kappa_a=scenario.kappa_a,
    )


def d_of_tau_b(scenario: Scenario, tau_b: float) -> float:
    """D(tau_b), with D^2 = B^2 - A C.

    Non-negative for the parallel, oriented and boosted families; sinh(sigma)
    for the anti-parallel transverse pair; carries the sign of x1 for the
    anti-parallel longitudinal pair.
    """
    return abcd(scenario, tau_b)[3]


def d_growth(scenario: Scenario) -> tuple[float, float]:
    """Exponential lower bound on |D| for the scenarios where D grows.

    Returns:
        ``(d_inf, t0)`` such that ``|D(tau_b)| >= d_inf * exp(k_B |tau_b|)``
        whenever ``|tau_b| >= t0``.

    Raises:
        DomainError: For scenarios with constant D.
    """
    match scenario:
        case ParallelLongitudinal(kappa=k, x0=x0):
            return 0.5 * k * x0, 0.0
        case AntiParallelLongitudinal(kappa=k, x1=x1) if x1 < 0:
            return 0.5 * k * abs(x1), 0.0
        case AntiParallelLongitudinal(kappa=k, x1=x1):
            s = k * x1
            return 0.5 * s * (1.0 - 0.5 * s), math.log(2.0) / k
        case Oriented(phi=phi):
            return 0.5 * math.sin(phi), 0.0
        case BoostedPair(kappa=k, alpha=alpha, rho0=rho0):
            s = abs(math.sinh(0.5 * alpha))
            c0 = 2.0 * s * s + 0.5 * (k * rho0) ** 2
            d_inf = 0.25 * s * math.exp(-0.5 * abs(alpha))
            t0 = max(0.5 * abs(alpha) + 1.0, math.log(c0 * math.exp(0.5 * abs(alpha)) / (0.6 * s)))
            return d_inf, t0 / k
    raise DomainError(f"D is constant for {scenario.kind}; no growth bound")


# ── Roots and poles ───────────────────────────────────────────


def eta_roots(a: float, b: float, c: float, d: float) -> tuple[float, float]:
    """Roots ``(B + D)/A`` and ``(B - D)/A`` without cancellation.

    Raises:
        BranchBoundaryError: When a root is infinite or zero.
    """
    if b * d >= 0.0:
        s = b + d
        if a == 0.0 or s == 0.0:
            raise BranchBoundaryError(float("nan"))
        eta_plus, eta_minus = s / a, c / s
    else:
        s = b - d
        if a == 0.0 or s == 0.0:
            raise BranchBoundaryError(float("nan"))
        eta_minus, eta_plus = s / a, c / s
    if eta_plus == 0.0 or eta_minus == 0.0:
        raise BranchBoundaryError(float("nan"))
    return eta_plus, eta_minus


def branch_boundaries(scenario: Scenario) -> tuple[float, ...]:
    """Values of tau_B where A or C vanishes, sorted and de-duplicated.

    A root eta passes through infinity or zero there, so the phase of the
    residue-reduced integrand oscillates without bound as tau_B approaches.
    """
    points: list[float] = []
    match scenario:
        case Oriented(kappa=k, phi=phi):
            lt = math.log(math.tan(0.5 * phi))
            points = [-lt / k, lt / k]
        case AntiParallelLongitudinal(kappa=k, x1=x1) if x1 > 0:
            lx = math.log(k * x1)
            points = [lx / k, -lx / k]
        case BoostedPair(kappa=k, alpha=alpha) if alpha < 0:
            points = [-math.log1p(-math.exp(alpha)) / k]
        case BoostedPair(kappa=k, alpha=alpha):
            points = [math.log1p(-math.exp(-alpha)) / k]
    merged: list[float] = []
    for p in sorted(points):
        if not merged or p - merged[-1] > 1e-9 / scenario.kappa_b:
            merged.append(p)
    return tuple(merged)


def _region(boundaries: tuple[float, ...], tau_b: float) -> tuple[float, float]:
    lo, hi = -math.inf, math.inf
    for p in boundaries:
        if p < tau_b:
            lo = p
        elif p > tau_b:
            hi = p
            break
    return lo, hi


def poles_upper_half(scenario: Scenario, tau_b: float, n_max: int = 3) -> list[PoleBranch]:
    """Pole towers of the Feynman denominator in the upper tau_A half plane.

    Each root eta of ``A eta^2 - 2 B eta + C`` gives poles at
    ``ln|eta|/k_A + i*m*pi/k_A``. A positive root gives even multiples: from
    n = 0 when the i*epsilon shift of the root points up, from n = 1 when it
    points down. A negative root gives odd multiples from n = 0.

    Raises:
        BranchBoundaryError: If ``tau_b`` sits on a branch boundary.
    """
    if n_max < 0:
        raise DomainError("n_max must be non-negative")
    a, b, c, d = abcd(scenario, tau_b)
    boundaries = branch_boundaries(scenario)
    try:
        eta_plus, eta_minus = eta_roots(a, b, c, d)
    except BranchBoundaryError:
        raise BranchBoundaryError(tau_b, boundaries) from None

    ka = scenario.kappa_a
    kd_sign = 1 if k_constant(scenario) * d > 0 else -1
    region = _region(boundaries, tau_b)
    branches = []
    for sign, eta in ((1, eta_plus), (-1, eta_minus)):
        eps = sign * kd_sign
        real = math.log(abs(eta)) / ka
        cls = ImagOffsetClass.EVEN_PI if eta > 0 else ImagOffsetClass.ODD_PI
        shift = 0 if cls is ImagOffsetClass.EVEN_PI else 1
        offsets = [
            (2 * n + shift) * math.pi for n in range(_tower_start(cls, eps), n_max + 1)
        ]
        branches.append(
            PoleBranch(
                sign=sign,
                eta=eta,
                real_part=real,
                imag_offset_class=cls,
                epsilon_sign=eps,
                validity_region=region,
                poles=tuple(complex(real, off / ka) for off in offsets),
            )
        )
    return branches


# ── Scenario transformations ──────────────────────────────────


def mirror_scenario(scenario: Scenario) -> Scenario:
    """The scenario with Alice and Bob exchanged, expressed back in the catalog.

    Exchanging roles of the anti-parallel transverse pair swaps the two
    accelerations; for the boosted pair it reverses the rapidity; the
    longitudinal anti-parallel, oriented and transverse parallel pairs map to
    themselves.

    Raises:
        DomainError: For the parallel longitudinal and different-acceleration
            pairs, whose mirrors (x0 < 0, kappa_a < kappa_b) are outside the
            catalog.
    """
    match scenario:
        case AntiParallelTransverse(kappa_a=ka, kappa_b=kb, rho0=rho0):
            return AntiParallelTransverse(kappa_a=kb, kappa_b=ka, rho0=rho0)
        case BoostedPair(kappa=k, alpha=alpha, rho0=rho0):
            return BoostedPair(kappa=k, alpha=-alpha, rho0=rho0)
        case ParallelTransverse() | AntiParallelLongitudinal() | Oriented():
            return scenario
    raise DomainError(f"the mirror of {scenario.kind} is not in the scenario catalog")


_LENGTH_FIELDS = ("rho0", "x0", "x1")
_ACCELERATION_FIELDS = ("kappa", "kappa_a", "kappa_b")


def rescale_scenario(scenario: Scenario, factor: float) -> Scenario:
    """Multiply accelerations by ``factor`` and divide lengths by it."""
    if not factor > 0:
        raise DomainError(f"rescaling factor must be positive, got {factor!r}")
    data = scenario.model_dump()
    for name in _ACCELERATION_FIELDS:
        if name in data:
            data[name] *= factor
    for name in _LENGTH_FIELDS:
        if name in data:
            data[name] /= factor
    return type(scenario).model_validate(data)

"""Shared numerical kernels.

Complex-valued adaptive quadrature on top of QUADPACK, semi-infinite
integration of exponentially decaying oscillatory integrands (with
logarithmic windows around phase singularities), Fourier-weighted half-line
integrals, the Bessel function K0, 4x4 eigenvalues and the binary entropy.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from src.errors import DomainError, InvalidDecayError, NonConvergenceError
from src.models import QuadratureConfig

logger = logging.getLogger(__name__)

ComplexFunction = Callable[[float], complex]

# Floor on the distance to a singular point, relative to its magnitude.
_RESOLUTION = 1e-13


@dataclass(frozen=True, slots=True)
class QuadResult:
    """Value of a one-dimensional integral with its error estimate."""

    value: complex
    error_estimate: float
    subdivisions_used: int

    def __add__(self, other: QuadResult) -> QuadResult:
        return QuadResult(
            value=self.value + other.value,
            error_estimate=self.error_estimate + other.error_estimate,
            subdivisions_used=self.subdivisions_used + other.subdivisions_used,
        )


_ZERO = QuadResult(0j, 0.0, 0)


def _quad_part(
    g: Callable[[float], float], a: float, b: float, **kwargs: object
) -> tuple[float, float, int, str | None]:
    out = integrate.quad(g, a, b, full_output=1, **kwargs)
    value, err, info = out[0], out[1], out[2]
    message = out[3] if len(out) > 3 else None
    used = int(info.get("last", info.get("lst", 0))) if isinstance(info, dict) else 0
    return float(value), float(err), used, message


def adaptive_quadrature(
    f: ComplexFunction,
    a: float,
    b: float,
    cfg: QuadratureConfig | None = None,
    *,
    points: Iterable[float] | None = None,
) -> QuadResult:
    """Integrate a complex function over a finite interval.

    Real and imaginary parts go through QUADPACK's Gauss-Kronrod 21 rule with
    adaptive bisection; the complex samples are cached so the second pass
    reuses the abscissae the first one visited.

    Args:
        f: Integrand, finite on [a, b] except at the declared points.
        a: Lower limit.
        b: Upper limit, strictly larger than ``a``.
        cfg: Tolerances and subdivision budget.
        points: Interior abscissae where the integrand is non-smooth.

    Returns:
        The integral with the combined error estimate.

    Raises:
        DomainError: If ``a >= b``.
        NonConvergenceError: If the budget runs out above tolerance.
    """
    cfg = cfg or QuadratureConfig()
    if not a < b:
        raise DomainError(f"adaptive_quadrature needs a < b, got [{a!r}, {b!r}]")

    cache: dict[float, complex] = {}

    def sample(t: float) -> complex:
        value = cache.get(t)
        if value is None:
            value = complex(f(t))
            cache[t] = value
        return value

    inner = sorted({float(p) for p in points or () if a < p < b})
    kwargs: dict[str, object] = {
        "epsabs": cfg.abs_tol,
        "epsrel": cfg.rel_tol,
        "limit": max(cfg.max_subdivisions, 2 * len(inner) + 2),
    }
    if inner:
        kwargs["points"] = inner

    re, re_err, re_used, re_msg = _quad_part(lambda t: sample(t).real, a, b, **kwargs)
    im, im_err, im_used, im_msg = _quad_part(lambda t: sample(t).imag, a, b, **kwargs)

    value = complex(re, im)
    error = math.hypot(re_err, im_err)
    diagnostics = {
        "interval": (a, b),
        "error_estimate": error,
        "subdivisions": max(re_used, im_used),
        "breakpoints": len(inner),
    }
    if not (math.isfinite(re) and math.isfinite(im)):
        raise NonConvergenceError("adaptive_quadrature", "non-finite integral", diagnostics)
    tolerance = max(cfg.abs_tol, cfg.rel_tol * abs(value))
    if (re_msg or im_msg) and error > tolerance:
        raise NonConvergenceError(
            "adaptive_quadrature", str(re_msg or im_msg).strip(), diagnostics
        )
    return QuadResult(value=value, error_estimate=error, subdivisions_used=max(re_used, im_used))


def panel_edges(lo: float, hi: float, width: float) -> list[float]:
    """Interior edges splitting [lo, hi] into equal panels no wider than ``width``."""
    count = max(1, math.ceil((hi - lo) / width))
    return [float(e) for e in np.linspace(lo, hi, count + 1)[1:-1]]


def _singular_side(
    f: ComplexFunction,
    p: float,
    h: float,
    side: int,
    bound: float,
    cfg: QuadratureConfig,
) -> QuadResult:
    # t = p + side * exp(-u) maps (p, p + side*h) onto u in (-ln h, oo); the
    # part beyond u_max is smaller than bound * exp(-u_max).
    u_min = -math.log(h)
    u_max = min(
        math.log(4.0 * bound / cfg.abs_tol),
        -math.log(_RESOLUTION * max(1.0, abs(p))),
    )
    u_max = max(u_max, u_min + 1.0)

    def g(u: float) -> complex:
        step = math.exp(-u)
        return f(p + side * step) * step

    edges = [u_min + k for k in range(1, math.ceil(u_max - u_min))]
    return adaptive_quadrature(g, u_min, u_max, cfg, points=edges)


def oscillatory_tail_integral(
    f: ComplexFunction,
    decay_rate: float | None = None,
    cfg: QuadratureConfig | None = None,
    *,
    envelope: float = 1.0,
    t0: float = 0.0,
    singular_points: Sequence[float] = (),
    singular_bound: float | None = None,
    panel_width: float | None = None,
) -> QuadResult:
    """Integrate over the whole real line an integrand with exponential tails.

    The caller guarantees ``|f(t)| <= envelope * exp(-decay_rate*|t|)`` for
    ``|t| >= t0``. The line is truncated at T with
    ``envelope * exp(-decay_rate*T) / decay_rate < abs_tol / 4`` on each side.
    The interior is cut into panels of at most ``panel_width`` and every
    declared singular point gets a window integrated in ``u = -ln|t - p|``.

    Raises:
        InvalidDecayError: If the decay rate is not positive.
        NonConvergenceError: Propagated from the panel integrals.
    """
    cfg = cfg or QuadratureConfig()
    rate = cfg.tail_decay_rate if decay_rate is None else decay_rate
    if not rate > 0:
        raise InvalidDecayError(f"decay rate must be positive, got {rate!r}")
    width = panel_width or cfg.panel_width

    horizon = math.log(max(4.0 * envelope / (rate * cfg.abs_tol), math.e)) / rate
    singular = sorted({float(p) for p in singular_points})
    reach = max((abs(p) for p in singular), default=0.0)
    horizon = max(horizon, t0, reach + 1.0)
    logger.debug(
        "tail integral: rate=%.6g envelope=%.6g horizon=%.6g singular=%s",
        rate,
        envelope,
        horizon,
        singular,
    )

    fences = [-horizon, *singular, horizon]
    windows: list[tuple[float, float]] = []
    for i, p in enumerate(singular, start=1):
        gap = min(p - fences[i - 1], fences[i + 1] - p)
        windows.append((p, min(0.5 * width, gap / 3.0)))

    total = _ZERO
    lo = -horizon
    for p, h in windows:
        if p - h > lo:
            total += adaptive_quadrature(f, lo, p - h, cfg, points=panel_edges(lo, p - h, width))
        bound = envelope if singular_bound is None else singular_bound
        total += _singular_side(f, p, h, -1, bound, cfg)
        total += _singular_side(f, p, h, +1, bound, cfg)
        lo = p + h
    total += adaptive_quadrature(f, lo, horizon, cfg, points=panel_edges(lo, horizon, width))
    return total


def fourier_half_line(
    g: ComplexFunction,
    omega: float,
    cfg: QuadratureConfig | None = None,
    *,
    start: float = 0.0,
) -> QuadResult:
    """Integrate ``g(t) * exp(i*omega*t)`` over ``[start, oo)``.

    ``g`` must be smooth and non-oscillating; slowly decaying amplitudes such
    as 1/t are fine. Uses QUADPACK's Fourier-weighted semi-infinite rule.
    """
    cfg = cfg or QuadratureConfig()
    if omega == 0.0:
        raise DomainError("fourier_half_line needs a nonzero frequency")
    sign = 1.0 if omega > 0 else -1.0
    w = abs(omega)

    parts = {}
    for name, weight, component in (
        ("rc", "cos", lambda t: complex(g(t)).real),
        ("rs", "sin", lambda t: complex(g(t)).real),
        ("ic", "cos", lambda t: complex(g(t)).imag),
        ("is", "sin", lambda t: complex(g(t)).imag),
    ):
        out = integrate.quad(
            component,
            start,
            np.inf,
            weight=weight,
            wvar=w,
            epsabs=cfg.abs_tol,
            full_output=1,
        )
        if len(out) > 3 and out[1] > max(cfg.abs_tol, cfg.rel_tol * abs(out[0])):
            raise NonConvergenceError(
                "fourier_half_line",
                str(out[3]).strip(),
                {"omega": omega, "component": name, "error_estimate": out[1]},
            )
        parts[name] = (float(out[0]), float(out[1]))

    re = parts["rc"][0] - sign * parts["is"][0]
    im = sign * parts["rs"][0] + parts["ic"][0]
    error = sum(err for _, err in parts.values())
    return QuadResult(value=complex(re, im), error_estimate=error, subdivisions_used=0)


def bessel_k0(z: float) -> float:
    """Modified Bessel function of the second kind, order zero.

    Raises:
        DomainError: For ``z <= 0`` or non-finite ``z``.
    """
    if not (math.isfinite(z) and z > 0):
        raise DomainError(f"K0 is defined for z > 0, got {z!r}")
    return float(special.k0(z))


def complex_eigenvalues_4x4(matrix: np.ndarray | Sequence[Sequence[complex]]) -> list[complex]:
    """Eigenvalues of a 4x4 complex matrix, in no particular order.

    Raises:
        DomainError: If the matrix is not 4x4 or has non-finite entries.
        NonConvergenceError: If LAPACK's iteration fails.
    """
    m = np.asarray(matrix, dtype=complex)
    if m.shape != (4, 4):
        raise DomainError(f"expected a 4x4 matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise DomainError("matrix has non-finite entries")
    try:
        values = np.linalg.eigvals(m)
    except np.linalg.LinAlgError as exc:
        raise NonConvergenceError("complex_eigenvalues_4x4", str(exc)) from exc
    return [complex(v) for v in values]


def binary_entropy(x: float) -> float:
    """Base-2 binary entropy h(x) with 0*log(0) = 0.

    Raises:
        DomainError: Outside [0, 1].
    """
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"binary entropy needs 0 <= x <= 1, got {x!r}")
    return float((special.entr(x) + special.entr(1.0 - x)) / math.log(2.0))

"""Pydantic data models for unruh-pairs.

Defines the value types shared by every layer: the detector, the seven
worldline scenarios (a tagged union selected by ``kind``), the
inertial-limit parameters and the quadrature/oracle settings. All models are
frozen pydantic v2 models so they can be handed to worker processes freely.
"""

from __future__ import annotations

import math
from enum import StrEnum
from typing import Annotated, Any, Literal

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    TypeAdapter,
    computed_field,
    model_validator,
)

from src.errors import DomainError


class Role(StrEnum):
    """Which detector of the pair a quantity belongs to."""

    ALICE = "alice"
    BOB = "bob"


class ScenarioKind(StrEnum):
    """Discriminator values of the scenario union."""

    PARALLEL_TRANSVERSE = "parallel_transverse"
    PARALLEL_DIFFERENT_ACCELERATION = "parallel_different_acceleration"
    PARALLEL_LONGITUDINAL = "parallel_longitudinal"
    ANTI_PARALLEL_TRANSVERSE = "anti_parallel_transverse"
    ANTI_PARALLEL_LONGITUDINAL = "anti_parallel_longitudinal"
    ORIENTED = "oriented"
    BOOSTED_PAIR = "boosted_pair"


class Verdict(StrEnum):
    """Outcome of the entanglement analysis for one detector pair."""

    ENTANGLED = "entangled"
    NOT_ENTANGLED_DELTA = "not_entangled_delta"
    NOT_ENTANGLED_BOUNDED = "not_entangled_bounded"
    NOT_ENTANGLED_XI = "not_entangled_xi"


class ImagOffsetClass(StrEnum):
    """Whether a pole tower sits at 2n*pi/kappa_A or (2n+1)*pi/kappa_A."""

    EVEN_PI = "even_pi"
    ODD_PI = "odd_pi"


DELTA_KINDS = frozenset(
    {
        ScenarioKind.PARALLEL_TRANSVERSE,
        ScenarioKind.PARALLEL_DIFFERENT_ACCELERATION,
        ScenarioKind.ANTI_PARALLEL_TRANSVERSE,
    }
)
BOUNDED_KINDS = frozenset(
    {
        ScenarioKind.PARALLEL_LONGITUDINAL,
        ScenarioKind.ANTI_PARALLEL_LONGITUDINAL,
        ScenarioKind.ORIENTED,
    }
)


class Detector(BaseModel):
    """A two-level Unruh-DeWitt detector on a uniformly accelerated worldline."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    delta_e: float = Field(..., gt=0, description="Excitation energy (natural units)")
    kappa: float = Field(..., gt=0, description="Acceleration magnitude")
    m_squared: float = Field(default=1.0, ge=0, description="Monopole matrix element squared")
    label: str = Field(default="", max_length=100, description="Free-form label")

    @classmethod
    def from_ratio(cls, x: float, kappa: float, **kwargs: Any) -> Detector:
        """Build a detector from its dimensionless ratio x = delta_e / kappa."""
        return cls(delta_e=x * kappa, kappa=kappa, **kwargs)

    @computed_field
    @property
    def x(self) -> float:
        """Dimensionless ratio delta_e / kappa."""
        return self.delta_e / self.kappa

    @computed_field
    @property
    def temperature(self) -> float:
        """Unruh temperature kappa / 2pi seen along the worldline."""
        return self.kappa / (2.0 * math.pi)


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class ParallelTransverse(_Frozen):
    """Equal accelerations along +x, Bob shifted transversally by rho0."""

    kind: Literal["parallel_transverse"] = "parallel_transverse"
    kappa: float = Field(..., gt=0)
    rho0: float = Field(..., gt=0, description="Transverse shift")

    @property
    def kappa_a(self) -> float:
        return self.kappa

    @property
    def kappa_b(self) -> float:
        return self.kappa


class ParallelDifferentAcceleration(_Frozen):
    """Both along +x on the same axis, Alice accelerating harder."""

    kind: Literal["parallel_different_acceleration"] = "parallel_different_acceleration"
    kappa_a: float = Field(..., gt=0)
    kappa_b: float = Field(..., gt=0)

    @model_validator(mode="after")
    def validate_ordering(self) -> ParallelDifferentAcceleration:
        """Alice is labelled as the detector with the larger acceleration."""
        if not self.kappa_a > self.kappa_b:
            raise ValueError("kappa_a must be strictly larger than kappa_b")
        return self


class ParallelLongitudinal(_Frozen):
    """Equal accelerations along +x, Bob shifted along x by x0."""

    kind: Literal["parallel_longitudinal"] = "parallel_longitudinal"
    kappa: float = Field(..., gt=0)
    x0: float = Field(..., gt=0, description="Longitudinal shift")

    @property
    def kappa_a(self) -> float:
        return self.kappa

    @property
    def kappa_b(self) -> float:
        return self.kappa


class AntiParallelTransverse(_Frozen):
    """Bob in the left wedge with his own acceleration, shifted transversally."""

    kind: Literal["anti_parallel_transverse"] = "anti_parallel_transverse"
    kappa_a: float = Field(..., gt=0)
    kappa_b: float = Field(..., gt=0)
    rho0: float = Field(default=0.0, ge=0, description="Transverse shift")


class AntiParallelLongitudinal(_Frozen):
    """Bob in the left wedge, translated along x by x1."""

    kind: Literal["anti_parallel_longitudinal"] = "anti_parallel_longitudinal"
    kappa: float = Field(..., gt=0)
    x1: float = Field(..., description="Longitudinal shift, nonzero and below 2/kappa")

    @model_validator(mode="after")
    def validate_shift(self) -> AntiParallelLongitudinal:
        """The shift must be nonzero and the two hyperbolae must not intersect."""
        if self.x1 == 0.0:
            raise ValueError("x1 must be nonzero")
        if not self.x1 < 2.0 / self.kappa:
            raise ValueError("x1 must be smaller than 2/kappa (worldlines would intersect)")
        return self

    @property
    def kappa_a(self) -> float:
        return self.kappa

    @property
    def kappa_b(self) -> float:
        return self.kappa


class Oriented(_Frozen):
    """Equal accelerations whose directions differ by the angle phi."""

    kind: Literal["oriented"] = "oriented"
    kappa: float = Field(..., gt=0)
    phi: float = Field(..., gt=0, lt=math.pi, description="Angle between accelerations")

    @property
    def kappa_a(self) -> float:
        return self.kappa

    @property
    def kappa_b(self) -> float:
        return self.kappa


class BoostedPair(_Frozen):
    """Both hyperbolae pass near the origin; Bob's is boosted by rapidity alpha.

    ``v`` may be given instead of ``alpha``; it is the relative speed the pair
    reduces to in the small-acceleration limit (alpha = atanh v).
    """

    kind: Literal["boosted_pair"] = "boosted_pair"
    kappa: float = Field(..., gt=0)
    alpha: float = Field(..., description="Boost rapidity, nonzero")
    rho0: float = Field(..., gt=0, description="Transverse shift")

    @model_validator(mode="before")
    @classmethod
    def accept_speed(cls, data: Any) -> Any:
        if isinstance(data, dict) and "v" in data:
            data = dict(data)
            v = data.pop("v")
            if "alpha" in data:
                raise ValueError("give either alpha or v, not both")
            if not -1.0 < float(v) < 1.0:
                raise ValueError("v must lie in (-1, 1)")
            data["alpha"] = math.atanh(float(v))
        return data

    @model_validator(mode="after")
    def validate_rapidity(self) -> BoostedPair:
        if self.alpha == 0.0:
            raise ValueError("alpha must be nonzero")
        return self

    @property
    def kappa_a(self) -> float:
        return self.kappa

    @property
    def kappa_b(self) -> float:
        return self.kappa

    @property
    def v(self) -> float:
        """Relative speed of the inertial limit."""
        return math.tanh(self.alpha)


Scenario = Annotated[
    ParallelTransverse
    | ParallelDifferentAcceleration
    | ParallelLongitudinal
    | AntiParallelTransverse
    | AntiParallelLongitudinal
    | Oriented
    | BoostedPair,
    Field(discriminator="kind"),
]

SCENARIO_ADAPTER: TypeAdapter[Scenario] = TypeAdapter(Scenario)


def parse_scenario(data: dict[str, Any]) -> Scenario:
    """Validate a plain mapping into the matching scenario variant."""
    return SCENARIO_ADAPTER.validate_python(data)


def ensure_matching_accelerations(scenario: Scenario, det_a: Detector, det_b: Detector) -> None:
    """Check that each detector carries the acceleration its worldline implies.

    Raises:
        DomainError: If either detector's kappa disagrees with the scenario.
    """
    for role, det, expected in (
        (Role.ALICE, det_a, scenario.kappa_a),
        (Role.BOB, det_b, scenario.kappa_b),
    ):
        if not math.isclose(det.kappa, expected, rel_tol=1e-12):
            raise DomainError(
                f"{role.value} detector has kappa={det.kappa!r} but the "
                f"{scenario.kind} worldline requires {expected!r}"
            )


class InertialLimitParams(BaseModel):
    """Parameters of the small-acceleration limit of the boosted pair."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    v: float = Field(..., gt=0, lt=1, description="Relative speed")
    rho0: float = Field(..., gt=0, description="Impact parameter")
    delta_e_a: float = Field(..., gt=0)
    delta_e_b: float = Field(..., gt=0)

    @computed_field
    @property
    def ell(self) -> float:
        return math.sqrt(1.0 - self.v**2) / self.v * self.rho0

    @computed_field
    @property
    def epsilon_eff(self) -> float:
        return self.delta_e_b + self.delta_e_a / math.sqrt(1.0 - self.v**2)

    @computed_field
    @property
    def p(self) -> float:
        return self.v * self.delta_e_a / math.sqrt(1.0 - self.v**2)


class QuadratureConfig(BaseModel):
    """Tolerances and budgets of the one-dimensional integrators."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    abs_tol: float = Field(default=1e-10, gt=0, description="Absolute tolerance")
    rel_tol: float = Field(default=1e-8, gt=0, description="Relative tolerance")
    max_subdivisions: int = Field(default=200, ge=1, description="Subintervals per call")
    tail_decay_rate: float = Field(
        default=1.0, gt=0, description="Fallback exponential decay rate for tails"
    )
    panel_width: float = Field(default=8.0, gt=0, description="Widest interior panel")


class OracleConfig(BaseModel):
    """Settings of the brute-force double-integral validators."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    window: float = Field(default=40.0, gt=0, description="Half-width L in units of 1/kappa")
    epsilon_values: list[float] = Field(
        default_factory=lambda: [1e-3, 5e-4], min_length=2, description="Regulators, descending"
    )
    grid_density: int = Field(default=64, ge=4, description="Search points per 1/kappa")
    taper: float = Field(default=0.25, ge=0, lt=1, description="Window fraction tapered to 0")
    quadrature: QuadratureConfig = Field(
        default_factory=lambda: QuadratureConfig(abs_tol=1e-8, rel_tol=1e-6, max_subdivisions=2000)
    )

    @model_validator(mode="after")
    def validate_schedule(self) -> OracleConfig:
        """Regulators must be positive, distinct and descending."""
        eps = self.epsilon_values
        if any(e <= 0 for e in eps):
            raise ValueError("epsilon_values must be positive")
        if any(b >= a for a, b in zip(eps, eps[1:], strict=False)):
            raise ValueError("epsilon_values must be strictly descending")
        return self

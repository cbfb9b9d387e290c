"""Run configuration for the unruh-pairs command line.

A run is described by one YAML file with nested sections, optionally
patched by ``--set a.b.c=value`` overrides whose values follow YAML scalar
rules. Scan axes are dotted paths into the same structure.
"""

from __future__ import annotations

import copy
import itertools
import math
from enum import StrEnum
from pathlib import Path
from typing import Any

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.checks import CHECK_NAMES
from src.errors import ConfigError
from src.geometry import rescale_scenario
from src.models import (
    AntiParallelTransverse,
    Detector,
    OracleConfig,
    QuadratureConfig,
    Scenario,
)

LOG_LEVEL_ENV = "UNRUH_PAIRS_LOG_LEVEL"

# Scan-axis shorthand that sets both detectors' ratio.
BOTH_RATIOS = "x"


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class DetectorSpec(_Section):
    """One detector given by its ratio x or its gap delta_e."""

    x: float | None = Field(default=None, gt=0, description="Ratio delta_e / kappa")
    delta_e: float | None = Field(default=None, gt=0, description="Energy gap")
    kappa: float | None = Field(default=None, gt=0, description="Defaults to the worldline's")
    m_squared: float = Field(default=1.0, ge=0)

    @model_validator(mode="after")
    def validate_gap(self) -> DetectorSpec:
        """Exactly one of x and delta_e must be given."""
        if (self.x is None) == (self.delta_e is None):
            raise ValueError("give exactly one of x and delta_e")
        return self

    def build(self, kappa: float, scale: float = 1.0) -> Detector:
        """Detector on a worldline of acceleration ``kappa`` after rescaling by ``scale``."""
        if self.kappa is not None and not math.isclose(self.kappa, kappa, rel_tol=1e-12):
            raise ConfigError(
                f"detector kappa {self.kappa!r} disagrees with the worldline's {kappa!r}"
            )
        k = kappa * scale
        if self.x is not None:
            return Detector.from_ratio(self.x, k, m_squared=self.m_squared)
        return Detector(delta_e=self.delta_e * scale, kappa=k, m_squared=self.m_squared)


class DetectorPair(_Section):
    alice: DetectorSpec = Field(default_factory=lambda: DetectorSpec(x=1.0))
    bob: DetectorSpec = Field(default_factory=lambda: DetectorSpec(x=1.0))


class Spacing(StrEnum):
    LINEAR = "linear"
    LOG = "log"


class ScanAxis(_Section):
    """One scanned parameter."""

    parameter: str = Field(..., min_length=1, description="Dotted path or 'x'")
    min: float
    max: float
    steps: int = Field(..., ge=1)
    spacing: Spacing = Spacing.LINEAR

    @model_validator(mode="after")
    def validate_range(self) -> ScanAxis:
        if self.spacing is Spacing.LOG and not (self.min > 0 and self.max > 0):
            raise ValueError("log spacing needs positive min and max")
        return self

    def values(self) -> list[float]:
        """Grid values from min to max inclusive."""
        if self.steps == 1:
            return [self.min]
        if self.spacing is Spacing.LOG:
            return [float(v) for v in np.geomspace(self.min, self.max, self.steps)]
        return [float(v) for v in np.linspace(self.min, self.max, self.steps)]


class ScanConfig(_Section):
    axes: list[ScanAxis] = Field(default_factory=list)


class Figure5Config(_Section):
    """Grid of the Xi / (e^{2 pi x} - 1) table."""

    x_min: float = Field(default=0.05, gt=0)
    x_max: float = Field(default=3.0, gt=0)
    steps: int = Field(default=60, ge=1)
    sigmas: list[float] = Field(
        default_factory=lambda: [0.0, 0.5 * math.pi, math.pi], min_length=1
    )

    @model_validator(mode="after")
    def validate_grid(self) -> Figure5Config:
        if self.x_max < self.x_min:
            raise ValueError("x_max must not be smaller than x_min")
        if any(s < 0 for s in self.sigmas):
            raise ValueError("sigmas must be non-negative")
        return self

    def xs(self) -> list[float]:
        if self.steps == 1:
            return [self.x_min]
        return [float(v) for v in np.linspace(self.x_min, self.x_max, self.steps)]


class ReportConfig(_Section):
    with_oracle: bool = False


def _default_scenario() -> Scenario:
    return AntiParallelTransverse(kappa_a=1.0, kappa_b=1.0, rho0=0.0)


class RunConfig(_Section):
    """Everything one CLI invocation needs."""

    scenario: Scenario = Field(default_factory=_default_scenario)
    detectors: DetectorPair = Field(default_factory=DetectorPair)
    coupling: float = Field(default=1.0, ge=0, description="Coupling constant c")
    kappa_scale: float = Field(default=1.0, gt=0, description="Joint rescaling of kappa and dE")
    quadrature: QuadratureConfig = Field(default_factory=QuadratureConfig)
    oracle: OracleConfig = Field(default_factory=OracleConfig)
    scan: ScanConfig = Field(default_factory=ScanConfig)
    figure5: Figure5Config = Field(default_factory=Figure5Config)
    report: ReportConfig = Field(default_factory=ReportConfig)
    checks: list[str] = Field(default_factory=lambda: list(CHECK_NAMES))
    output: str | None = None

    @model_validator(mode="after")
    def validate_references(self) -> RunConfig:
        """Checks must exist and scan axes must name existing parameters."""
        unknown = [c for c in self.checks if c not in CHECK_NAMES]
        if unknown:
            raise ValueError(f"unknown checks {unknown}; valid: {', '.join(CHECK_NAMES)}")
        data = self.model_dump()
        for axis in self.scan.axes:
            if axis.parameter != BOTH_RATIOS and not _path_exists(data, axis.parameter):
                raise ValueError(f"scan axis {axis.parameter!r} is not a configuration parameter")
        return self

    def build(self) -> tuple[Scenario, Detector, Detector]:
        """The rescaled scenario with both detectors on it.

        Raises:
            ConfigError: If a detector's kappa contradicts the scenario.
        """
        base = self.scenario
        scenario = rescale_scenario(base, self.kappa_scale) if self.kappa_scale != 1.0 else base
        det_a = self.detectors.alice.build(base.kappa_a, self.kappa_scale)
        det_b = self.detectors.bob.build(base.kappa_b, self.kappa_scale)
        return scenario, det_a, det_b


def _path_exists(data: dict[str, Any], path: str) -> bool:
    node: Any = data
    keys = path.split(".")
    for key in keys[:-1]:
        if not isinstance(node, dict) or key not in node:
            return False
        node = node[key]
    if not isinstance(node, dict):
        return False
    if keys[-1] == "v" and node.get("kind") == "boosted_pair":
        return True
    return keys[-1] in node


def _assign(data: dict[str, Any], path: str, value: Any) -> None:
    keys = path.split(".")
    node = data
    for key in keys[:-1]:
        child = node.setdefault(key, {})
        if not isinstance(child, dict):
            raise ConfigError(f"cannot set {path!r}: {key!r} is not a section")
        node = child
    leaf = keys[-1]
    node[leaf] = value
    # Setting one way of giving a detector gap or a rapidity clears the other.
    for first, second in (("x", "delta_e"), ("alpha", "v")):
        if leaf == first:
            node.pop(second, None)
        elif leaf == second:
            node.pop(first, None)


def apply_override(data: dict[str, Any], override: str) -> None:
    """Apply one ``dotted.path=value`` override in place.

    Raises:
        ConfigError: If the override has no '=' or walks through a scalar.
    """
    path, sep, raw = override.partition("=")
    path = path.strip()
    if not sep or not path:
        raise ConfigError(f"override {override!r} must look like key.path=value")
    try:
        value = yaml.safe_load(raw)
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse value of {path!r}: {exc}") from exc
    _assign(data, path, value)


def load_config(path: str | Path | None = None, overrides: list[str] | None = None) -> RunConfig:
    """Read a YAML run file, apply overrides and validate.

    Raises:
        FileNotFoundError: If ``path`` does not exist.
        ConfigError: For unreadable YAML or malformed overrides.
        pydantic.ValidationError: For values outside their domains.
    """
    data: dict[str, Any] = {}
    if path is not None:
        file = Path(path)
        if not file.exists():
            raise FileNotFoundError(f"config file not found: {path}")
        try:
            with open(file) as f:
                loaded = yaml.safe_load(f)
        except yaml.YAMLError as exc:
            raise ConfigError(f"invalid YAML in {path}: {exc}") from exc
        if loaded is not None and not isinstance(loaded, dict):
            raise ConfigError(f"{path} must contain a mapping at the top level")
        data = loaded or {}
    for override in overrides or []:
        apply_override(data, override)
    return RunConfig.model_validate(data)


def expand_scan(cfg: RunConfig) -> list[tuple[dict[str, float], RunConfig]]:
    """All grid points of the scan, first axis slowest.

    Raises:
        ConfigError: If no axis is configured.
    """
    if not cfg.scan.axes:
        raise ConfigError("scan needs at least one axis under scan.axes")
    base = cfg.model_dump()
    names = [axis.parameter for axis in cfg.scan.axes]
    points = []
    for combo in itertools.product(*(axis.values() for axis in cfg.scan.axes)):
        data = copy.deepcopy(base)
        for name, value in zip(names, combo, strict=True):
            if name == BOTH_RATIOS:
                _assign(data, "detectors.alice.x", value)
                _assign(data, "detectors.bob.x", value)
            else:
                _assign(data, name, value)
        points.append((dict(zip(names, combo, strict=True)), RunConfig.model_validate(data)))
    return points

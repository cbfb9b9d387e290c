"""Tests for the worldline catalog and interval geometry."""

import cmath
import math

import numpy as np
import pytest
from src.errors import BranchBoundaryError, DomainError
from src.geometry import (
    Event,
    abcd,
    branch_boundaries,
    d_growth,
    eta_roots,
    interval_decomposition,
    interval_squared,
    k_constant,
    mirror_scenario,
    poles_upper_half,
    rescale_scenario,
    worldline_coordinates,
    worldline_position,
)
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
)

ALL_SCENARIOS = [
    ParallelTransverse(kappa=1.3, rho0=0.7),
    ParallelDifferentAcceleration(kappa_a=2.0, kappa_b=0.8),
    ParallelLongitudinal(kappa=1.0, x0=2.0),
    AntiParallelTransverse(kappa_a=1.5, kappa_b=0.6, rho0=0.4),
    AntiParallelLongitudinal(kappa=1.0, x1=-1.0),
    AntiParallelLongitudinal(kappa=1.0, x1=0.5),
    Oriented(kappa=0.9, phi=1.1),
    BoostedPair(kappa=1.0, alpha=0.5, rho0=1.0),
    BoostedPair(kappa=1.0, alpha=-0.5, rho0=1.0),
]

GROWING = [
    ParallelLongitudinal(kappa=1.0, x0=2.0),
    AntiParallelLongitudinal(kappa=1.0, x1=-1.0),
    AntiParallelLongitudinal(kappa=1.0, x1=0.5),
    Oriented(kappa=1.0, phi=1.1),
    BoostedPair(kappa=1.0, alpha=0.5, rho0=1.0),
    BoostedPair(kappa=1.0, alpha=-0.5, rho0=1.0),
]

SAMPLE_TIMES = [(-1.2, 0.3), (0.0, 0.0), (0.4, -2.1), (2.5, 1.7)]


def _ids(scenarios: list) -> list[str]:
    return [s.kind for s in scenarios]


# ── Worldlines ────────────────────────────────────────────────


class TestWorldlines:
    """Test suite for worldline positions."""

    def test_alice_at_origin_time(self) -> None:
        """Alice starts at (0, 1/kappa)."""
        event = worldline_position(ParallelTransverse(kappa=2.0, rho0=1.0), Role.ALICE, 0.0)
        assert event == Event(0.0, 0.5, 0.0, 0.0)

    def test_boosted_alice_passes_origin(self) -> None:
        """In the boosted pair both detectors pass through the origin at tau = 0."""
        scenario = BoostedPair(kappa=1.0, alpha=0.5, rho0=1.0)
        alice = worldline_position(scenario, Role.ALICE, 0.0)
        bob = worldline_position(scenario, Role.BOB, 0.0)
        assert (alice.t, alice.x) == (0.0, 0.0)
        assert (bob.t, bob.x) == pytest.approx((0.0, 0.0))
        assert bob.y == 1.0

    def test_longitudinal_bob_shift(self) -> None:
        """Bob's hyperbola is shifted by x0 along x."""
        event = worldline_position(ParallelLongitudinal(kappa=1.0, x0=2.0), Role.BOB, 0.0)
        assert event == Event(0.0, 3.0, 0.0, 0.0)

    @pytest.mark.parametrize("scenario", ALL_SCENARIOS, ids=_ids(ALL_SCENARIOS))
    def test_proper_time_parametrisation(self, scenario) -> None:
        """Both worldlines have unit four-velocity."""
        h = 1e-5
        for role in Role:
            for tau in (-1.0, 0.3, 2.0):
                ahead = worldline_position(scenario, role, tau + h)
                behind = worldline_position(scenario, role, tau - h)
                assert interval_squared(ahead, behind) / (2 * h) ** 2 == pytest.approx(1.0, rel=1e-6)

    @pytest.mark.parametrize("scenario", ALL_SCENARIOS, ids=_ids(ALL_SCENARIOS))
    def test_vectorised_matches_scalar(self, scenario) -> None:
        """worldline_coordinates agrees with worldline_position row by row."""
        taus = np.linspace(-2.0, 2.0, 5)
        rows = worldline_coordinates(scenario, Role.BOB, taus)
        assert rows.shape == (5, 4)
        for tau, row in zip(taus, rows, strict=True):
            event = worldline_position(scenario, Role.BOB, tau)
            assert list(row) == pytest.approx([event.t, event.x, event.y, event.z])


# ── Decomposition ─────────────────────────────────────────────


class TestIntervalDecomposition:
    """Test suite for the A, B, C, D, K representation."""

    @pytest.mark.parametrize("scenario", ALL_SCENARIOS, ids=_ids(ALL_SCENARIOS))
    def test_reproduces_interval(self, scenario) -> None:
        """K [A e^{k tau_A} - 2B + C e^{-k tau_A}] is the squared interval."""
        decomposition = interval_decomposition(scenario)
        for tau_a, tau_b in SAMPLE_TIMES:
            direct = interval_squared(
                worldline_position(scenario, Role.ALICE, tau_a),
                worldline_position(scenario, Role.BOB, tau_b),
            )
            assert decomposition.interval(tau_a, tau_b) == pytest.approx(direct, rel=1e-9, abs=1e-9)

    @pytest.mark.parametrize("scenario", ALL_SCENARIOS, ids=_ids(ALL_SCENARIOS))
    def test_d_squared_identity(self, scenario) -> None:
        """D^2 = B^2 - A C."""
        for tau_b in (-1.5, 0.0, 0.8, 3.0):
            a, b, c, d = abcd(scenario, tau_b)
            assert d * d == pytest.approx(b * b - a * c, rel=1e-9, abs=1e-12)

    def test_k_constant_signs(self) -> None:
        """K is negative exactly for the anti-parallel pairs."""
        assert k_constant(ParallelDifferentAcceleration(kappa_a=2.0, kappa_b=1.0)) == 0.5
        assert k_constant(AntiParallelTransverse(kappa_a=2.0, kappa_b=1.0)) == -0.5
        assert k_constant(AntiParallelLongitudinal(kappa=2.0, x1=0.5)) == -0.25
        assert k_constant(Oriented(kappa=2.0, phi=1.0)) == 0.25

    @pytest.mark.parametrize("scenario", GROWING, ids=_ids(GROWING))
    def test_d_growth_bound(self, scenario) -> None:
        """|D| dominates d_inf e^{k|tau_b|} beyond t0."""
        d_inf, t0 = d_growth(scenario)
        assert d_inf > 0
        for tau in np.linspace(t0, t0 + 8.0, 33):
            for t in (tau, -tau):
                assert abs(abcd(scenario, t)[3]) >= d_inf * math.exp(scenario.kappa_b * abs(t))

    def test_constant_d_has_no_growth(self) -> None:
        """Scenarios with constant D reject d_growth."""
        with pytest.raises(DomainError):
            d_growth(ParallelTransverse(kappa=1.0, rho0=1.0))


# ── Roots and poles ───────────────────────────────────────────


class TestPoles:
    """Test suite for eta roots, branch boundaries and pole towers."""

    def test_eta_roots_solve_quadratic(self) -> None:
        """Both roots satisfy A eta^2 - 2B eta + C = 0."""
        a, b, c, d = abcd(Oriented(kappa=1.0, phi=1.0), 0.3)
        for eta in eta_roots(a, b, c, d):
            assert a * eta * eta - 2 * b * eta + c == pytest.approx(0.0, abs=1e-12)

    def test_eta_roots_reject_vanishing_a(self) -> None:
        """A = 0 sends a root to infinity."""
        with pytest.raises(BranchBoundaryError):
            eta_roots(0.0, 1.0, 1.0, 1.0)

    def test_oriented_boundaries(self) -> None:
        """A or C vanishes at tau_B = +-ln cot(phi/2) / kappa."""
        scenario = Oriented(kappa=1.0, phi=math.pi / 3)
        boundaries = branch_boundaries(scenario)
        assert boundaries == pytest.approx((-math.atanh(0.5), math.atanh(0.5)))
        for p in boundaries:
            a, _, c, _ = abcd(scenario, p)
            assert min(abs(a), abs(c)) < 1e-12

    def test_perpendicular_oriented_boundaries_merge(self) -> None:
        """At phi = pi/2 the two boundaries coincide at zero."""
        assert branch_boundaries(Oriented(kappa=1.0, phi=math.pi / 2)) == pytest.approx((0.0,))

    def test_boundaries_absent_without_sign_change(self) -> None:
        """Parallel longitudinal and x1 < 0 pairs have no boundaries."""
        assert branch_boundaries(ParallelLongitudinal(kappa=1.0, x0=2.0)) == ()
        assert branch_boundaries(AntiParallelLongitudinal(kappa=1.0, x1=-1.0)) == ()

    def test_positive_x1_boundaries(self) -> None:
        """Boundaries sit at +-ln(kappa x1) / kappa."""
        boundaries = branch_boundaries(AntiParallelLongitudinal(kappa=1.0, x1=0.5))
        assert boundaries == pytest.approx((math.log(0.5), -math.log(0.5)))

    def test_pole_towers_are_zeros_of_interval(self) -> None:
        """Every enumerated pole makes the interval vanish."""
        scenario = ParallelLongitudinal(kappa=1.0, x0=2.0)
        a, b, c, _ = abcd(scenario, 0.4)
        for branch in poles_upper_half(scenario, 0.4, n_max=2):
            for z in branch.poles:
                assert z.imag >= 0
                value = a * cmath.exp(z) - 2 * b + c * cmath.exp(-z)
                scale = abs(a) * abs(branch.eta) + 2 * abs(b) + abs(c) / abs(branch.eta)
                assert abs(value) <= 1e-10 * scale

    def test_longitudinal_classification(self) -> None:
        """Both roots are positive; only one tower keeps its real-axis pole."""
        branches = poles_upper_half(ParallelLongitudinal(kappa=1.0, x0=2.0), 0.0)
        assert [b.imag_offset_class for b in branches] == [ImagOffsetClass.EVEN_PI] * 2
        assert sorted(b.first_index for b in branches) == [0, 1]
        assert all(b.validity_region == (-math.inf, math.inf) for b in branches)

    @pytest.mark.parametrize("scenario", GROWING, ids=_ids(GROWING))
    def test_first_index_labels_lowest_pole(self, scenario) -> None:
        """The first pole of each tower sits at (2 n0 + odd) pi / k_A with n0 = first_index."""
        ka = scenario.kappa_a
        for branch in poles_upper_half(scenario, 0.4, n_max=2):
            odd = 1 if branch.imag_offset_class is ImagOffsetClass.ODD_PI else 0
            lowest = branch.poles[0].imag * ka / math.pi
            assert lowest == pytest.approx(2 * branch.first_index + odd)
            assert len(branch.poles) == 3 - branch.first_index

    def test_odd_towers_for_negative_root(self) -> None:
        """Anti-parallel transverse roots are negative: odd multiples of pi."""
        branches = poles_upper_half(AntiParallelTransverse(kappa_a=1.0, kappa_b=1.0, rho0=0.5), 0.2)
        for branch in branches:
            assert branch.eta < 0
            assert branch.imag_offset_class is ImagOffsetClass.ODD_PI
            assert branch.poles[0].imag == pytest.approx(math.pi)

    def test_poles_on_boundary_raise(self) -> None:
        """kappa x1 = 1 puts the boundary at tau_B = 0."""
        scenario = AntiParallelLongitudinal(kappa=1.0, x1=1.0)
        with pytest.raises(BranchBoundaryError) as info:
            poles_upper_half(scenario, 0.0)
        assert info.value.boundaries == (0.0,)

    def test_negative_n_max_rejected(self) -> None:
        """n_max must be non-negative."""
        with pytest.raises(DomainError):
            poles_upper_half(Oriented(kappa=1.0, phi=1.0), 0.0, n_max=-1)


# ── Transformations ───────────────────────────────────────────


class TestTransformations:
    """Test suite for mirror_scenario and rescale_scenario."""

    def test_mirror_anti_parallel_transverse(self) -> None:
        """Exchanging roles swaps the accelerations."""
        mirrored = mirror_scenario(AntiParallelTransverse(kappa_a=2.0, kappa_b=1.0, rho0=0.3))
        assert (mirrored.kappa_a, mirrored.kappa_b, mirrored.rho0) == (1.0, 2.0, 0.3)

    def test_mirror_boosted_reverses_rapidity(self) -> None:
        """The boosted pair mirrors to -alpha."""
        assert mirror_scenario(BoostedPair(kappa=1.0, alpha=0.4, rho0=1.0)).alpha == -0.4

    def test_self_mirrored(self) -> None:
        """Oriented and anti-parallel longitudinal pairs map to themselves."""
        for scenario in (Oriented(kappa=1.0, phi=1.0), AntiParallelLongitudinal(kappa=1.0, x1=0.5)):
            assert mirror_scenario(scenario) == scenario

    def test_mirror_outside_catalog(self) -> None:
        """The parallel longitudinal mirror has x0 < 0."""
        with pytest.raises(DomainError, match="not in the scenario catalog"):
            mirror_scenario(ParallelLongitudinal(kappa=1.0, x0=1.0))

    def test_rescale(self) -> None:
        """Accelerations scale up, lengths down, angles stay."""
        assert rescale_scenario(ParallelLongitudinal(kappa=1.0, x0=2.0), 2.0) == ParallelLongitudinal(
            kappa=2.0, x0=1.0
        )
        assert rescale_scenario(Oriented(kappa=1.0, phi=1.0), 3.0).phi == 1.0

    def test_rescale_keeps_dimensionless_interval(self) -> None:
        """kappa^2 sigma^2 is invariant at fixed kappa tau."""
        scenario = AntiParallelTransverse(kappa_a=1.5, kappa_b=0.6, rho0=0.4)
        scaled = rescale_scenario(scenario, 4.0)
        before = interval_decomposition(scenario).interval(0.3, -0.7)
        after = interval_decomposition(scaled).interval(0.3 / 4.0, -0.7 / 4.0)
        assert after * 16.0 == pytest.approx(before)

    def test_rescale_rejects_non_positive(self) -> None:
        """The factor must be positive."""
        with pytest.raises(DomainError):
            rescale_scenario(Oriented(kappa=1.0, phi=1.0), 0.0)


# ── Limits ────────────────────────────────────────────────────


class TestLimits:
    """Test suite for the degenerate and inertial limits of the catalog."""

    @pytest.mark.parametrize(("tau_a", "tau_b"), SAMPLE_TIMES)
    def test_vanishing_transverse_shift(self, tau_a: float, tau_b: float) -> None:
        """At rho0 = 1e-8 the parallel pair has the interval of one hyperbola."""
        kappa = 1.3
        scenario = ParallelTransverse(kappa=kappa, rho0=1e-8)
        coincident = -4.0 * math.sinh(0.5 * kappa * (tau_a - tau_b)) ** 2 / kappa**2
        direct = interval_squared(
            worldline_position(scenario, Role.ALICE, tau_a),
            worldline_position(scenario, Role.BOB, tau_b),
        )
        assert direct == pytest.approx(coincident, abs=1e-12)
        assert interval_decomposition(scenario).interval(tau_a, tau_b) == pytest.approx(
            coincident, abs=1e-12
        )

    @pytest.mark.parametrize(("tau_a", "tau_b"), SAMPLE_TIMES)
    def test_boosted_pair_becomes_inertial(self, tau_a: float, tau_b: float) -> None:
        """At kappa = 1e-6 the boosted pair is two inertial observers at relative speed v."""
        v, rho0 = 0.6, 1.0
        gamma = 1.0 / math.sqrt(1.0 - v * v)
        scenario = BoostedPair(kappa=1e-6, alpha=math.atanh(v), rho0=rho0)
        inertial = (tau_a - gamma * tau_b) ** 2 - (gamma * v * tau_b) ** 2 - rho0**2
        direct = interval_squared(
            worldline_position(scenario, Role.ALICE, tau_a),
            worldline_position(scenario, Role.BOB, tau_b),
        )
        assert direct == pytest.approx(inertial, rel=1e-4)

"""Tests for report, table and CSV generation."""

import math
from pathlib import Path

import pandas as pd
import pytest
from src.checks import CheckResult
from src.entanglement import verdict
from src.models import AntiParallelTransverse, Detector, ParallelTransverse
from src.report_generator import POINT_COLUMNS, PointResult, ReportGenerator

GOLDEN_DIR = Path(__file__).parent / "golden"

# ── Fixtures ──────────────────────────────────────────────────


@pytest.fixture
def resonant_row() -> PointResult:
    """Anti-parallel pair at sigma = 0, x = 1."""
    scenario = AntiParallelTransverse(kappa_a=1.0, kappa_b=1.0, rho0=0.0)
    det = Detector.from_ratio(1.0, 1.0)
    return PointResult.from_report(verdict(scenario, det, det, coupling=0.01), scenario, det, det)


@pytest.fixture
def off_resonance_row() -> PointResult:
    """Parallel pair, whose delta argument never vanishes."""
    scenario = ParallelTransverse(kappa=1.0, rho0=1.0)
    det = Detector.from_ratio(1.0, 1.0)
    return PointResult.from_report(verdict(scenario, det, det), scenario, det, det)


class TestPointResult:
    """Test suite for flattening verdicts into rows."""

    def test_resonant_fields(self, resonant_row: PointResult) -> None:
        """The resonant pair is a delta term at zero argument."""
        assert resonant_row.scenario == "anti_parallel_transverse"
        assert resonant_row.classification == "delta"
        assert resonant_row.delta_omega == 0.0
        assert resonant_row.verdict == "entangled"
        assert resonant_row.xi == pytest.approx(math.expm1(math.pi))
        assert resonant_row.sigma == pytest.approx(0.0)
        assert resonant_row.status == "ok"
        assert resonant_row.concurrence_rate > 0

    def test_delta_coefficient_columns(self, resonant_row: PointResult) -> None:
        """The coefficient -1/(2 sinh pi) lands in the cross-term columns."""
        assert resonant_row.cross_term_re == pytest.approx(-0.5 / math.sinh(math.pi), rel=1e-10)
        assert resonant_row.cross_term_im == pytest.approx(0.0, abs=1e-14)

    def test_row_columns(self, resonant_row: PointResult) -> None:
        """as_row exposes exactly the table columns in order."""
        assert tuple(resonant_row.as_row()) == POINT_COLUMNS

    def test_failed_row(self) -> None:
        """A failed point keeps its coordinates and records the operation."""
        scenario = ParallelTransverse(kappa=1.0, rho0=1.0)
        det = Detector.from_ratio(2.0, 1.0)
        row = PointResult.failed(scenario, det, det, "cross_term")
        assert row.status == "failed: cross_term"
        assert row.x_a == pytest.approx(2.0)
        assert row.verdict == ""


class TestPointReport:
    """Test suite for the single-point text report."""

    def test_resonant_report(self, resonant_row: PointResult) -> None:
        """Labels and key values appear in the text."""
        text = ReportGenerator.point_report(resonant_row)
        assert "verdict" in text
        assert "entangled" in text
        assert "22.1407" in text
        assert "delta coefficient" in text
        assert text.endswith("\n")

    def test_off_resonance_report(self, off_resonance_row: PointResult) -> None:
        """A delta away from zero is reported as a vanishing I_E."""
        text = ReportGenerator.point_report(off_resonance_row)
        assert "0 (delta supported away from zero)" in text
        assert "not_entangled_delta" in text
        assert off_resonance_row.notes in text

    def test_missing_values_render_as_dash(self) -> None:
        """Absent numbers print as '-'."""
        text = ReportGenerator.point_report(PointResult(scenario="oriented", x_a=1.0, x_b=1.0))
        assert "Xi" in text
        assert any(line.split()[-1] == "-" for line in text.splitlines() if line.startswith("Xi"))


class TestTables:
    """Test suite for frames and CSV output."""

    def test_scan_header_matches_golden(self, resonant_row: PointResult) -> None:
        """The scan CSV header is stable."""
        frame = ReportGenerator.scan_frame(["x"], [({"x": 1.0}, resonant_row)])
        header = ReportGenerator.to_csv(frame).splitlines(keepends=True)[0]
        assert header == (GOLDEN_DIR / "scan_header.csv").read_text()

    def test_figure5_columns(self) -> None:
        """One column per sigma, labelled to six digits."""
        frame = ReportGenerator.figure5_frame([0.5, 1.0], [0.0, 0.5 * math.pi, math.pi])
        assert list(frame.columns) == [
            "x",
            "xi_planck_sigma_0",
            "xi_planck_sigma_1.5708",
            "xi_planck_sigma_3.14159",
        ]

    def test_figure5_values(self) -> None:
        """Xi / (e^{2 pi x} - 1) is negative at sigma = pi, x = 1."""
        frame = ReportGenerator.figure5_frame([1.0], [0.0, math.pi])
        assert frame["xi_planck_sigma_3.14159"].iloc[0] == pytest.approx(-1.871e-3, rel=1e-3)
        assert frame["xi_planck_sigma_0"].iloc[0] > 0

    def test_csv_is_deterministic(self) -> None:
        """Same frame, same bytes, '\\n' line endings."""
        first = ReportGenerator.to_csv(ReportGenerator.figure5_frame([0.1, 0.2], [0.0]))
        second = ReportGenerator.to_csv(ReportGenerator.figure5_frame([0.1, 0.2], [0.0]))
        assert first == second
        assert "\r" not in first
        assert first.count("\n") == 3

    def test_csv_float_format(self) -> None:
        """Floats carry twelve significant digits."""
        text = ReportGenerator.to_csv(ReportGenerator.figure5_frame([1.0 / 3.0], [0.0]))
        assert text.splitlines()[1].startswith("0.333333333333,")

    def test_check_table(self) -> None:
        """PASS and FAIL rows and the summary line."""
        results = [
            CheckResult("good", 1.0 + 0j, 1.0 + 0j, 0.0, 1e-6, True, True),
            CheckResult("bad", 2.0 + 0j, 1.0 + 0j, 1.0, 1e-6, True, False, "too far"),
        ]
        text = ReportGenerator.check_table(results)
        assert "PASS" in text
        assert "FAIL" in text
        assert "1/2 checks passed" in text
        assert "bad: too far" in text


# ── Figure 5 shape ────────────────────────────────────────────

SIGMA_0 = "xi_planck_sigma_0"
SIGMA_HALF_PI = "xi_planck_sigma_1.5708"
SIGMA_PI = "xi_planck_sigma_3.14159"


@pytest.fixture(scope="module")
def figure5() -> pd.DataFrame:
    """x = 0.05 ... 7 in steps of 0.05 for sigma = 0, pi/2, pi, indexed by x."""
    xs = [k / 20 for k in range(1, 141)]
    frame = ReportGenerator.figure5_frame(xs, [0.0, 0.5 * math.pi, math.pi])
    return frame.set_index("x")


class TestFigure5Structure:
    """Test suite for the qualitative shape of the three Xi / (e^{2 pi x} - 1) curves."""

    def test_resonant_curve_positive(self, figure5: pd.DataFrame) -> None:
        """sigma = 0 is strictly positive everywhere."""
        assert (figure5[SIGMA_0] > 0).all()

    def test_resonant_curve_peaks_at_small_x(self, figure5: pd.DataFrame) -> None:
        """sigma = 0 peaks below x = 1 and falls monotonically after."""
        assert figure5[SIGMA_0].idxmax() < 1.0
        tail = figure5.loc[figure5.index >= 1.0, SIGMA_0]
        assert tail.is_monotonic_decreasing

    def test_antipodal_curve_changes_sign(self, figure5: pd.DataFrame) -> None:
        """sigma = pi starts negative, vanishes at integer x and turns positive between."""
        column = figure5[SIGMA_PI]
        assert column.loc[0.05] < 0
        assert column.loc[1.0] < 0
        assert column.loc[1.5] > 0
        assert (column < 0).any() and (column > 0).any()

    def test_half_pi_curve_dips_at_even_x(self, figure5: pd.DataFrame) -> None:
        """sigma = pi/2 is negative at even x and positive at odd x."""
        column = figure5[SIGMA_HALF_PI]
        for even in (2.0, 4.0, 6.0):
            assert column.loc[even] < 0
            window = column.loc[(column.index > even - 1.0) & (column.index < even + 1.0)]
            assert window.idxmin() == pytest.approx(even, abs=0.5)
        for odd in (1.0, 3.0, 5.0):
            assert column.loc[odd] > 0

    @pytest.mark.parametrize("name", [SIGMA_0, SIGMA_HALF_PI, SIGMA_PI])
    def test_curves_decay(self, name: str, figure5: pd.DataFrame) -> None:
        """Each curve's envelope shrinks over successive blocks of width 2 and ends below 1e-6."""
        column = figure5[name].abs()
        envelopes = [
            column.loc[(column.index >= lo) & (column.index < lo + 2.0)].max()
            for lo in (1.0, 3.0, 5.0)
        ]
        assert envelopes[0] > envelopes[1] > envelopes[2]
        assert column.loc[column.index >= 5.0].max() < 1e-6

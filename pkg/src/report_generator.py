"""Report generation for unruh-pairs.

Turns entanglement reports, scan grids, the Xi table and oracle checks into
aligned plain text and into pandas frames written as CSV with a fixed float
format, so identical runs produce byte-identical files.
"""

from __future__ import annotations

import io
from dataclasses import asdict, dataclass

import pandas as pd

from src.checks import CheckResult
from src.crossterm import BoundedOnly, DeltaTerm, FiniteValue
from src.entanglement import EntanglementReport, xi_planck_ratio
from src.models import Detector, Scenario

CSV_FLOAT_FORMAT = "%.12g"

POINT_COLUMNS = (
    "scenario",
    "x_a",
    "x_b",
    "sigma",
    "classification",
    "cross_term_re",
    "cross_term_im",
    "delta_omega",
    "bound",
    "xi",
    "verdict",
    "response_rate_a",
    "response_rate_b",
    "concurrence_rate",
    "negativity_rate",
    "reduced_concurrence_rate",
    "reduced_negativity_rate",
    "status",
)


@dataclass
class PointResult:
    """One evaluated parameter point, flattened for tables."""

    scenario: str
    x_a: float
    x_b: float
    sigma: float | None = None
    classification: str = ""
    cross_term_re: float | None = None
    cross_term_im: float | None = None
    delta_omega: float | None = None
    bound: float | None = None
    xi: float | None = None
    verdict: str = ""
    response_rate_a: float | None = None
    response_rate_b: float | None = None
    concurrence_rate: float | None = None
    negativity_rate: float | None = None
    reduced_concurrence_rate: float | None = None
    reduced_negativity_rate: float | None = None
    status: str = "ok"
    notes: str = ""
    oracle_cross_term: complex | None = None
    oracle_relative_error: float | None = None

    @classmethod
    def from_report(
        cls, report: EntanglementReport, scenario: Scenario, det_a: Detector, det_b: Detector
    ) -> PointResult:
        """Flatten a verdict into one row."""
        row = cls(
            scenario=scenario.kind,
            x_a=det_a.x,
            x_b=det_b.x,
            sigma=report.sigma,
            verdict=report.verdict.value,
            bound=report.bound,
            xi=report.xi,
            response_rate_a=report.response_rates[0].per_proper_time,
            response_rate_b=report.response_rates[1].per_proper_time,
            concurrence_rate=report.concurrence_rate,
            negativity_rate=report.negativity_rate,
            reduced_concurrence_rate=report.reduced_concurrence_rate,
            reduced_negativity_rate=report.reduced_negativity_rate,
            notes=report.notes,
        )
        term = report.cross_term
        value: complex | None = None
        match term:
            case DeltaTerm():
                row.classification = "delta"
                row.delta_omega = term.omega
                value = term.coefficient
            case BoundedOnly():
                row.classification = "bounded"
                value = term.numeric_value.value if term.numeric_value else None
            case FiniteValue():
                row.classification = "finite"
                value = term.value
        if value is not None:
            row.cross_term_re, row.cross_term_im = value.real, value.imag
        return row

    @classmethod
    def failed(cls, scenario: Scenario, det_a: Detector, det_b: Detector, reason: str) -> PointResult:
        """Placeholder row for a point whose evaluation did not converge."""
        return cls(scenario=scenario.kind, x_a=det_a.x, x_b=det_b.x, status=f"failed: {reason}")

    def as_row(self) -> dict[str, object]:
        data = asdict(self)
        return {name: data[name] for name in POINT_COLUMNS}


def _fmt(value: float | complex | None, spec: str = ".6g") -> str:
    if value is None:
        return "-"
    if isinstance(value, complex):
        return f"{value.real:{spec}} {value.imag:+{spec}}i"
    return f"{value:{spec}}"


def _to_csv(frame: pd.DataFrame) -> str:
    buffer = io.StringIO()
    frame.to_csv(buffer, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
    return buffer.getvalue()


class ReportGenerator:
    """Formats evaluated points, scans and checks."""

    @staticmethod
    def point_report(row: PointResult) -> str:
        """Aligned two-column text report for one parameter point."""
        cross = None
        if row.cross_term_re is not None and row.cross_term_im is not None:
            cross = complex(row.cross_term_re, row.cross_term_im)
        entries = [
            ("scenario", row.scenario),
            ("x_A", _fmt(row.x_a)),
            ("x_B", _fmt(row.x_b)),
            ("sigma", _fmt(row.sigma)),
            ("cross term", row.classification or "-"),
        ]
        if row.classification == "delta":
            entries.append(("delta coefficient", _fmt(cross)))
            entries.append(("delta argument", _fmt(row.delta_omega)))
            if row.delta_omega:
                entries.append(("I_E", "0 (delta supported away from zero)"))
        else:
            entries.append(("I_E", _fmt(cross)))
        entries += [
            ("bound on |I_E|", _fmt(row.bound)),
            ("response rate A", _fmt(row.response_rate_a)),
            ("response rate B", _fmt(row.response_rate_b)),
            ("Xi", _fmt(row.xi)),
            ("verdict", row.verdict or "-"),
            ("concurrence rate", _fmt(row.concurrence_rate)),
            ("negativity rate", _fmt(row.negativity_rate)),
            ("reduced concurrence rate", _fmt(row.reduced_concurrence_rate)),
            ("reduced negativity rate", _fmt(row.reduced_negativity_rate)),
        ]
        if row.oracle_cross_term is not None:
            entries.append(("oracle I_E", _fmt(row.oracle_cross_term)))
            entries.append(("oracle relative error", _fmt(row.oracle_relative_error, ".3g")))
        width = max(len(label) for label, _ in entries) + 2
        lines = [f"{label:<{width}}{value}" for label, value in entries]
        if row.notes:
            lines += ["", row.notes]
        return "\n".join(lines) + "\n"

    @staticmethod
    def scan_frame(axes: list[str], points: list[tuple[dict[str, float], PointResult]]) -> pd.DataFrame:
        """One row per grid point: axis values first, then the point columns."""
        records = [{**values, **row.as_row()} for values, row in points]
        return pd.DataFrame.from_records(records, columns=[*axes, *POINT_COLUMNS])

    @staticmethod
    def figure5_frame(xs: list[float], sigmas: list[float]) -> pd.DataFrame:
        """Xi / (e^{2 pi x} - 1) against x for each sigma."""
        columns = {"x": xs}
        for sigma in sigmas:
            columns[f"xi_planck_sigma_{sigma:.6g}"] = [xi_planck_ratio(x, sigma) for x in xs]
        return pd.DataFrame(columns)

    @staticmethod
    def to_csv(frame: pd.DataFrame) -> str:
        """CSV text with 12 significant digits and '\\n' line endings."""
        return _to_csv(frame)

    @staticmethod
    def check_table(results: list[CheckResult]) -> str:
        """Aligned pass/fail table of the oracle checks."""
        header = ("check", "measured", "expected", "error", "tolerance", "result")
        body = [
            (
                r.name,
                _fmt(r.measured if r.measured.imag else r.measured.real, ".8g"),
                _fmt(r.expected if r.expected.imag else r.expected.real, ".8g"),
                _fmt(r.error, ".3g") + (" (rel)" if r.relative else " (abs)"),
                _fmt(r.tolerance, ".3g"),
                "PASS" if r.passed else "FAIL",
            )
            for r in results
        ]
        widths = [max(len(row[i]) for row in [header, *body]) for i in range(len(header))]
        lines = ["  ".join(cell.ljust(w) for cell, w in zip(header, widths, strict=True)).rstrip()]
        lines.append("  ".join("-" * w for w in widths))
        for row in body:
            lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths, strict=True)).rstrip())
        passed = sum(r.passed for r in results)
        lines += ["", f"{passed}/{len(results)} checks passed"]
        lines += [f"  {r.name}: {r.detail}" for r in results if not r.passed and r.detail]
        return "\n".join(lines) + "\n"

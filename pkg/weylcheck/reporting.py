#!/usr/bin/env python3
"""
Verdict reports, the tolerance policy and report rendering.

A check evaluates a residual and a scale at every accepted sample point. It
passes when the largest residual is below ``tol * (1 + scale)``, where scale
is the largest norm of the compared quantities. Theorem reports carry named
sub-verdicts (``checks``) and consistency ``flags``; their own verdict is the
conjunction of the flags.

Author: weylcheck maintainers
Date: 2025
Version: 1.0.0
"""

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import __version__
from .config import DEFAULT_TOL


logger = logging.getLogger(__name__)

PASS = "pass"
FAIL = "fail"
REPORT_ONLY = "report-only"
SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Measurement:
    """Residual and scale of one check at one point."""

    residual: float
    scale: float = 0.0
    value: Any = None


@dataclass(frozen=True)
class CheckResult:
    """Aggregate of one residual check over all points."""

    name: str
    max_residual: float
    scale: float
    tolerance: float
    passed: bool

    @property
    def verdict(self) -> str:
        return PASS if self.passed else FAIL


@dataclass
class VerdictReport:
    task: str
    accepted: int
    rejected: int
    max_residual: float
    scale: float
    tolerance: float
    verdict: str
    checks: Dict[str, str] = field(default_factory=dict)
    flags: Dict[str, bool] = field(default_factory=dict)
    values: Dict[str, Any] = field(default_factory=dict)
    details: List[Dict[str, Any]] = field(default_factory=list)
    engine_version: str = __version__
    config: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    @property
    def failed(self) -> bool:
        return self.verdict == FAIL

    def check(self, name: str) -> bool:
        """Whether the named sub-verdict passed."""
        return self.checks.get(name) == PASS

    def to_dict(self, include_details: bool = False) -> Dict[str, Any]:
        data = asdict(self)
        if not include_details:
            data.pop("details")
        return _plain(data)


def _plain(value):
    """Convert numpy scalars and arrays into JSON-friendly builtins."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        number = float(value)
        return number if np.isfinite(number) else str(number)
    if isinstance(value, complex):
        return [value.real, value.imag]
    return value


def aggregate(name: str, measurements: Sequence[Measurement], tol: float = DEFAULT_TOL) -> CheckResult:
    """Apply the tolerance policy to per-point measurements."""
    if not measurements:
        return CheckResult(name, 0.0, 0.0, tol, True)
    residual = max(float(m.residual) for m in measurements)
    scale = max(float(m.scale) for m in measurements)
    passed = bool(np.isfinite(residual)) and residual < tol * (1.0 + scale)
    return CheckResult(name, residual, scale, tol, passed)


def sample_counts(points) -> Tuple[int, int]:
    accepted = getattr(points, "accepted", None)
    if accepted is None:
        return len(points), 0
    return accepted, points.rejected


def point_list(points) -> Sequence[np.ndarray]:
    return getattr(points, "points", points)


def build_report(task: str, points, primary: Optional[CheckResult] = None,
                 checks: Sequence[CheckResult] = (), flags: Optional[Dict[str, bool]] = None,
                 values: Optional[Dict[str, Any]] = None, details: Optional[List[Dict[str, Any]]] = None,
                 report_only: bool = False) -> VerdictReport:
    """
    Assemble a VerdictReport.

    The verdict is taken from ``primary`` when given, otherwise from the
    conjunction of ``flags``. ``report_only`` forces the report-only verdict.

    Args:
        task (str): Task name.
        points: SampleSet or plain point sequence (for the accepted/rejected counts).
        primary (Optional[CheckResult]): The check that decides the verdict.
        checks (Sequence[CheckResult]): Named sub-verdicts.
        flags (Optional[Dict[str, bool]]): Theorem consistency flags.
        values (Optional[Dict[str, Any]]): Reported quantities.
        details (Optional[List[Dict[str, Any]]]): Per-point detail rows.
        report_only (bool): Never pass or fail.

    Returns:
        VerdictReport: The report.
    """
    accepted, rejected = sample_counts(points)
    flags = dict(flags or {})
    headline = primary if primary is not None else (max(checks, key=lambda c: c.max_residual) if checks else None)
    if report_only:
        verdict = REPORT_ONLY
    elif primary is not None:
        verdict = PASS if primary.passed else FAIL
    else:
        verdict = PASS if all(flags.values()) else FAIL
    return VerdictReport(
        task=task,
        accepted=accepted,
        rejected=rejected,
        max_residual=headline.max_residual if headline else 0.0,
        scale=headline.scale if headline else 0.0,
        tolerance=headline.tolerance if headline else DEFAULT_TOL,
        verdict=verdict,
        checks={c.name: c.verdict for c in checks},
        flags=flags,
        values=dict(values or {}),
        details=list(details or []),
    )


def map_points(fn: Callable[[np.ndarray], Any], points, workers: int = 1) -> List[Any]:
    """
    Evaluate ``fn`` at every point, serially or on a thread pool.

    Results are returned in point order either way, so reports do not depend
    on the worker count.
    """
    pts = list(point_list(points))
    if workers <= 1 or len(pts) < 2:
        return [fn(x) for x in pts]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(fn, pts))


def detail_rows(points, measurements: Sequence[Measurement]) -> List[Dict[str, Any]]:
    return [
        {"point": np.asarray(x).tolist(), "residual": float(m.residual), "scale": float(m.scale)}
        for x, m in zip(point_list(points), measurements)
    ]


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

def render_json(reports: Sequence[VerdictReport], source: str = "", include_details: bool = False,
                timestamp: Optional[str] = None) -> str:
    """Machine-readable report; ``generated_at`` is the only run-dependent field."""
    payload = {
        "schema": SCHEMA_VERSION,
        "engine_version": __version__,
        "source": source,
        "generated_at": timestamp or datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "reports": [r.to_dict(include_details) for r in reports],
    }
    return json.dumps(payload, indent=2, sort_keys=True)


_VERDICT_ICONS = {PASS: "✅", FAIL: "❌", REPORT_ONLY: "📊"}


def render_table(reports: Sequence[VerdictReport]) -> str:
    """Fixed-width text table, one row per report plus its sub-verdicts and flags."""
    header = f"{'task':<28} {'verdict':<12} {'points':>9} {'max residual':>14} {'scale':>10}"
    lines = [header, "-" * len(header)]
    for r in reports:
        icon = _VERDICT_ICONS.get(r.verdict, "")
        lines.append(
            f"{r.task:<28} {icon} {r.verdict:<10} {r.accepted:>4}/{r.accepted + r.rejected:<4} "
            f"{r.max_residual:>14.3e} {r.scale:>10.3g}"
        )
        for name, verdict in r.checks.items():
            lines.append(f"  {'·':<2}{name:<24} {verdict}")
        for name, ok in r.flags.items():
            lines.append(f"  {'⚑':<2}{name:<24} {'holds' if ok else 'VIOLATED'}")
    return "\n".join(lines)


def _generate_summary(reports: Sequence[VerdictReport]) -> Dict[str, Any]:
    """Counts of pass/fail/report-only and the flag violations."""
    total = len(reports)
    passed = sum(1 for r in reports if r.verdict == PASS)
    failed = sum(1 for r in reports if r.verdict == FAIL)
    return {
        "total_tasks": total,
        "passed": passed,
        "failed": failed,
        "report_only": total - passed - failed,
        "pass_rate": round(passed / (passed + failed) * 100, 1) if passed + failed else 100.0,
        "violated_flags": [f"{r.task}:{name}" for r in reports for name, ok in r.flags.items() if not ok],
    }


def _generate_recommendations(reports: Sequence[VerdictReport]) -> List[str]:
    recommendations = []
    summary = _generate_summary(reports)
    if summary["violated_flags"]:
        recommendations.append(
            f"⚠️  {len(summary['violated_flags'])} theorem consistency flag(s) violated: "
            "check tolerances, then the geometry declaration"
        )
    near_misses = [r.task for r in reports if r.failed and r.max_residual < 100 * r.tolerance * (1 + r.scale)]
    if near_misses:
        recommendations.append(f"🔍 Near-miss failures ({', '.join(near_misses)}): try more points or a looser --tol")
    heavy_rejection = [r.task for r in reports if r.rejected > r.accepted / 4]
    if heavy_rejection:
        recommendations.append(
            f"📐 Many sample points rejected in {', '.join(heavy_rejection)}: shrink the sample box away from "
            "degenerate or critical points"
        )
    if not recommendations:
        recommendations.append("🎉 All verdicts consistent; no issues found.")
    return recommendations


def generate_markdown_report(reports: Sequence[VerdictReport], source: str = "") -> str:
    """Human-readable markdown summary with recommendations."""
    summary = _generate_summary(reports)
    report = f"""# Weyl Geometry Verification Report

**Source**: {source or 'n/a'}
**Engine version**: {__version__}

## 📊 Overall Results
- **Tasks run**: {summary['total_tasks']}
- **Passed**: {summary['passed']}
- **Failed**: {summary['failed']}
- **Report only**: {summary['report_only']}
- **Pass rate**: {summary['pass_rate']}%

## 🔍 Task Details

| Task | Verdict | Points | Max residual | Scale |
|------|---------|--------|--------------|-------|
"""
    for r in reports:
        report += (f"| {r.task} | {_VERDICT_ICONS.get(r.verdict, '')} {r.verdict} | "
                   f"{r.accepted}/{r.accepted + r.rejected} | {r.max_residual:.3e} | {r.scale:.3g} |\n")

    flagged = [r for r in reports if r.checks or r.flags]
    if flagged:
        report += "\n## ⚑ Sub-verdicts and Flags\n\n"
        for r in flagged:
            report += f"**{r.task}**:\n"
            for name, verdict in r.checks.items():
                report += f"  - {name}: {verdict}\n"
            for name, ok in r.flags.items():
                report += f"  - flag {name}: {'holds' if ok else 'VIOLATED'}\n"
            report += "\n"

    report += "\n## 🎯 Recommendations\n\n"
    for recommendation in _generate_recommendations(reports):
        report += f"- {recommendation}\n"
    return report

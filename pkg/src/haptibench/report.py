"""Assemble per-tablet metrics into a cross-device comparison report with
the statistical tests, and render it as JSON or markdown.

The report never declares a winner: each summary metric carries a direction
flag (lower/higher is better) and the per-metric delta, nothing more.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, asdict
from typing import Mapping, Optional

from .analysis import PhysicalAnalysis
from .errors import MissingMetric
from .fitts import PointingMetrics
from .stats import (
    AnovaResult,
    FTestResult,
    TTestResult,
    f_test_variance,
    one_way_anova,
    two_sample_t_test,
)

SCHEMA_VERSION = 1

DIRECTIONS = ("lower_better", "higher_better", "informational")


@dataclass(frozen=True)
class MetricDescriptor:
    """One reported metric value for one tablet: mean, spread, sample count,
    and whether lower or higher values indicate a better device."""

    name: str
    value: float
    std: Optional[float]
    n: int
    direction: str

    def __post_init__(self):
        if self.direction not in DIRECTIONS:
            raise ValueError(f"direction must be one of {DIRECTIONS}")
        if self.n < 1:
            raise ValueError("n must be at least 1")


@dataclass(frozen=True)
class LevelRow:
    mean: float
    inter_participant_std: float
    intra_trial_std: float
    n_swipes: int
    n_participants: int


@dataclass(frozen=True)
class RangeRow:
    mean: float
    inter_participant_std: float
    relative_range: Optional[float]
    friction_contrast: Optional[float]
    n_pairs: int
    n_participants: int


@dataclass(frozen=True)
class LatencyRow:
    mean_s: float
    std_s: float
    n: int


@dataclass(frozen=True)
class PointingRow:
    slope_mean: float
    slope_std: float
    mt_hardest_mean: float
    mt_hardest_std: float
    hardest_id: float
    error_rate: float
    n_trials: int
    n_hardest: int
    n_participants: int


@dataclass(frozen=True)
class TabletProfile:
    tablet_id: str
    mu_high: LevelRow
    mu_low: LevelRow
    friction_range: RangeRow
    latency: LatencyRow
    pointing_no_haptic: PointingRow
    pointing_haptic: PointingRow


@dataclass(frozen=True)
class SummaryRow:
    name: str
    direction: str
    a: MetricDescriptor
    b: MetricDescriptor
    delta: float  # b - a


@dataclass(frozen=True)
class ComparisonReport:
    tablet_a: str
    tablet_b: str
    profile_a: TabletProfile
    profile_b: TabletProfile
    range_t_test: TTestResult
    range_f_test: FTestResult
    mt_anova: AnovaResult
    summary: list[SummaryRow]
    warnings: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class RawComparisonSamples:
    """Per-trial samples behind the statistical tests: paired friction-range
    values, and raw movement times at the hardest difficulty for the four
    tablet x haptic conditions."""

    delta_mu_a: list[float]
    delta_mu_b: list[float]
    mt_a_no_haptic: list[float]
    mt_a_haptic: list[float]
    mt_b_no_haptic: list[float]
    mt_b_haptic: list[float]


def build_tablet_profile(
    physical: PhysicalAnalysis,
    pointing: Mapping[bool, PointingMetrics],
) -> TabletProfile:
    """Fuse one tablet's physical analysis with its pointing metrics.

    Raises MissingMetric when a required piece was never computed.
    """
    if physical is None:
        raise MissingMetric("physical")
    if physical.latency is None:
        raise MissingMetric("latency")
    for flag, label in ((False, "pointing.no_haptic"), (True, "pointing.haptic")):
        if flag not in pointing:
            raise MissingMetric(label)

    def level_row(st) -> LevelRow:
        return LevelRow(
            mean=float(st.mean_mu),
            inter_participant_std=float(st.inter_participant_std_sigma),
            intra_trial_std=float(st.intra_trial_std_delta),
            n_swipes=int(st.n_swipes),
            n_participants=int(st.n_participants),
        )

    def pointing_row(pm: PointingMetrics) -> PointingRow:
        return PointingRow(
            slope_mean=float(pm.slope_mean),
            slope_std=float(pm.slope_std),
            mt_hardest_mean=float(pm.mt_hardest_mean),
            mt_hardest_std=float(pm.mt_hardest_std),
            hardest_id=float(pm.hardest_id),
            error_rate=float(pm.error_rate),
            n_trials=int(pm.n_trials),
            n_hardest=len(pm.mt_hardest_samples),
            n_participants=int(pm.n_participants),
        )

    fr = physical.frange
    return TabletProfile(
        tablet_id=physical.tablet_id,
        mu_high=level_row(physical.mu_high),
        mu_low=level_row(physical.mu_low),
        friction_range=RangeRow(
            mean=float(fr.delta_mu),
            inter_participant_std=float(fr.inter_participant_std),
            relative_range=None if fr.relative_range is None else float(fr.relative_range),
            friction_contrast=None if fr.friction_contrast is None else float(fr.friction_contrast),
            n_pairs=int(fr.n_pairs),
            n_participants=int(fr.n_participants),
        ),
        latency=LatencyRow(
            mean_s=float(physical.latency.mean_dt),
            std_s=float(physical.latency.std_dt),
            n=int(physical.latency.n),
        ),
        pointing_no_haptic=pointing_row(pointing[False]),
        pointing_haptic=pointing_row(pointing[True]),
    )


def _summary_rows(a: TabletProfile, b: TabletProfile) -> list[SummaryRow]:
    def row(name, direction, va, sa, na, vb, sb, nb):
        return SummaryRow(
            name=name,
            direction=direction,
            a=MetricDescriptor(name=name, value=float(va), std=sa, n=na, direction=direction),
            b=MetricDescriptor(name=name, value=float(vb), std=sb, n=nb, direction=direction),
            delta=float(vb) - float(va),
        )

    rows = [
        row("lowest friction intra-trial SD", "lower_better",
            a.mu_low.intra_trial_std, None, a.mu_low.n_swipes,
            b.mu_low.intra_trial_std, None, b.mu_low.n_swipes),
        row("highest friction intra-trial SD", "lower_better",
            a.mu_high.intra_trial_std, None, a.mu_high.n_swipes,
            b.mu_high.intra_trial_std, None, b.mu_high.n_swipes),
        row("lowest friction mean", "informational",
            a.mu_low.mean, a.mu_low.inter_participant_std, a.mu_low.n_swipes,
            b.mu_low.mean, b.mu_low.inter_participant_std, b.mu_low.n_swipes),
        row("highest friction mean", "informational",
            a.mu_high.mean, a.mu_high.inter_participant_std, a.mu_high.n_swipes,
            b.mu_high.mean, b.mu_high.inter_participant_std, b.mu_high.n_swipes),
        row("friction range mean", "higher_better",
            a.friction_range.mean, a.friction_range.inter_participant_std,
            a.friction_range.n_pairs,
            b.friction_range.mean, b.friction_range.inter_participant_std,
            b.friction_range.n_pairs),
        row("friction range inter-participant SD", "lower_better",
            a.friction_range.inter_participant_std, None, a.friction_range.n_participants,
            b.friction_range.inter_participant_std, None, b.friction_range.n_participants),
        row("latency mean", "lower_better",
            a.latency.mean_s, a.latency.std_s, a.latency.n,
            b.latency.mean_s, b.latency.std_s, b.latency.n),
    ]
    for label, attr in (("without haptic", "pointing_no_haptic"),
                        ("with haptic", "pointing_haptic")):
        pa: PointingRow = getattr(a, attr)
        pb: PointingRow = getattr(b, attr)
        rows.append(row(f"movement time @ hardest ID {label}", "lower_better",
                        pa.mt_hardest_mean, pa.mt_hardest_std, pa.n_hardest,
                        pb.mt_hardest_mean, pb.mt_hardest_std, pb.n_hardest))
        rows.append(row(f"movement time SD @ hardest ID {label}", "lower_better",
                        pa.mt_hardest_std, None, pa.n_hardest,
                        pb.mt_hardest_std, None, pb.n_hardest))
        rows.append(row(f"error rate {label}", "lower_better",
                        pa.error_rate, None, pa.n_trials,
                        pb.error_rate, None, pb.n_trials))
    return rows


def compare_tablets(
    profile_a: TabletProfile,
    profile_b: TabletProfile,
    raw: RawComparisonSamples,
) -> ComparisonReport:
    """Cross-device statistics plus the ordered summary section.

    Friction range: pooled two-sample t-test on the per-repetition range
    values and an F-test on their variances. Movement time at the hardest
    difficulty: one-way ANOVA over the four tablet x haptic conditions.
    Sample-size mismatches are reported as warnings, never as failures.
    """
    warnings = []
    if len(raw.delta_mu_a) != len(raw.delta_mu_b):
        warnings.append(
            f"friction-range sample sizes differ: {len(raw.delta_mu_a)} vs {len(raw.delta_mu_b)}"
        )
    mt_sizes = {
        len(raw.mt_a_no_haptic), len(raw.mt_a_haptic),
        len(raw.mt_b_no_haptic), len(raw.mt_b_haptic),
    }
    if len(mt_sizes) > 1:
        warnings.append(f"movement-time group sizes differ: {sorted(mt_sizes)}")
    t_res = two_sample_t_test(raw.delta_mu_a, raw.delta_mu_b, pooled=True)
    f_res = f_test_variance(raw.delta_mu_a, raw.delta_mu_b)
    anova = one_way_anova(
        [raw.mt_a_no_haptic, raw.mt_a_haptic, raw.mt_b_no_haptic, raw.mt_b_haptic]
    )
    return ComparisonReport(
        tablet_a=profile_a.tablet_id,
        tablet_b=profile_b.tablet_id,
        profile_a=profile_a,
        profile_b=profile_b,
        range_t_test=t_res,
        range_f_test=f_res,
        mt_anova=anova,
        summary=_summary_rows(profile_a, profile_b),
        warnings=warnings,
    )


# ---- rendering ----


def report_to_dict(report: ComparisonReport) -> dict:
    d = asdict(report)
    d["schema_version"] = SCHEMA_VERSION
    return d


def report_from_dict(d: dict) -> ComparisonReport:
    if d.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {d.get('schema_version')!r}")

    def profile(p: dict) -> TabletProfile:
        return TabletProfile(
            tablet_id=p["tablet_id"],
            mu_high=LevelRow(**p["mu_high"]),
            mu_low=LevelRow(**p["mu_low"]),
            friction_range=RangeRow(**p["friction_range"]),
            latency=LatencyRow(**p["latency"]),
            pointing_no_haptic=PointingRow(**p["pointing_no_haptic"]),
            pointing_haptic=PointingRow(**p["pointing_haptic"]),
        )

    summary = [
        SummaryRow(
            name=r["name"],
            direction=r["direction"],
            a=MetricDescriptor(**r["a"]),
            b=MetricDescriptor(**r["b"]),
            delta=r["delta"],
        )
        for r in d["summary"]
    ]
    return ComparisonReport(
        tablet_a=d["tablet_a"],
        tablet_b=d["tablet_b"],
        profile_a=profile(d["profile_a"]),
        profile_b=profile(d["profile_b"]),
        range_t_test=TTestResult(**d["range_t_test"]),
        range_f_test=FTestResult(**d["range_f_test"]),
        mt_anova=AnovaResult(**d["mt_anova"]),
        summary=summary,
        warnings=list(d["warnings"]),
    )


def _fmt(x: Optional[float], digits: int = 4) -> str:
    if x is None:
        return "-"
    return f"{x:.{digits}g}"


def _fmt_p(p: float) -> str:
    return f"{p:.3g}"


def render_report(report: ComparisonReport, format: str = "json") -> bytes:
    """Serialize the report; output is a pure function of the report value."""
    if format == "json":
        return (json.dumps(report_to_dict(report), indent=2, sort_keys=True) + "\n").encode(
            "utf-8"
        )
    if format != "markdown":
        raise ValueError(f"unknown format {format!r}")
    a, b = report.profile_a, report.profile_b
    lines = [
        f"# Haptic tablet comparison: {report.tablet_a} vs {report.tablet_b}",
        "",
        "## Physical",
        "",
        f"| Metric | | {report.tablet_a} | {report.tablet_b} |",
        "|---|---|---|---|",
    ]
    for label, ra, rb in (("Highest friction", a.mu_high, b.mu_high),
                          ("Lowest friction", a.mu_low, b.mu_low)):
        lines += [
            f"| {label} | Mean | {_fmt(ra.mean)} | {_fmt(rb.mean)} |",
            f"| | Inter-part. std | {_fmt(ra.inter_participant_std)} | {_fmt(rb.inter_participant_std)} |",
            f"| | Intra-trial std | {_fmt(ra.intra_trial_std)} | {_fmt(rb.intra_trial_std)} |",
        ]
    lines += [
        f"| Friction range | Mean | {_fmt(a.friction_range.mean)} | {_fmt(b.friction_range.mean)} |",
        f"| | Inter-part. std | {_fmt(a.friction_range.inter_participant_std)} | {_fmt(b.friction_range.inter_participant_std)} |",
        f"| | Relative range | {_fmt(a.friction_range.relative_range)} | {_fmt(b.friction_range.relative_range)} |",
        f"| | Friction contrast | {_fmt(a.friction_range.friction_contrast)} | {_fmt(b.friction_range.friction_contrast)} |",
        f"| Latency | Mean +/- std (ms) | {_fmt(a.latency.mean_s * 1e3, 3)} +/- {_fmt(a.latency.std_s * 1e3, 2)} | {_fmt(b.latency.mean_s * 1e3, 3)} +/- {_fmt(b.latency.std_s * 1e3, 2)} |",
        "",
        "## Pointing",
        "",
        f"| Metric | Condition | {report.tablet_a} | {report.tablet_b} |",
        "|---|---|---|---|",
    ]
    for label, attr in (("Without haptic", "pointing_no_haptic"), ("With haptic", "pointing_haptic")):
        pa: PointingRow = getattr(a, attr)
        pb: PointingRow = getattr(b, attr)
        lines += [
            f"| Slope b (ms/bit) | {label} | {_fmt(pa.slope_mean)} (s={_fmt(pa.slope_std)}, n={pa.n_participants}) | {_fmt(pb.slope_mean)} (s={_fmt(pb.slope_std)}, n={pb.n_participants}) |",
            f"| MT @ ID {_fmt(pa.hardest_id, 2)} (ms) | {label} | {_fmt(pa.mt_hardest_mean)} (s={_fmt(pa.mt_hardest_std)}, n={pa.n_hardest}) | {_fmt(pb.mt_hardest_mean)} (s={_fmt(pb.mt_hardest_std)}, n={pb.n_hardest}) |",
            f"| Error rate | {label} | {_fmt(pa.error_rate * 100, 3)} % | {_fmt(pb.error_rate * 100, 3)} % |",
        ]
    t, f, an = report.range_t_test, report.range_f_test, report.mt_anova
    lines += [
        "",
        "## Statistical tests",
        "",
        f"- Friction range t-test: T_{int(t.df)} = {_fmt(t.t_stat)}, p = {_fmt_p(t.p_value)}",
        f"- Friction range variance F-test: F_{f.df1},{f.df2} = {_fmt(f.f_stat)}, p = {_fmt_p(f.p_value)}",
        f"- Movement time ANOVA: F_{an.df_between} = {_fmt(an.f_stat)}, p = {_fmt_p(an.p_value)}",
        "",
        "## Summary",
        "",
        f"| Metric | Better | {report.tablet_a} | {report.tablet_b} | Delta (B-A) |",
        "|---|---|---|---|---|",
    ]
    mark = {"lower_better": "(-)", "higher_better": "(+)", "informational": "(.)"}
    for r in report.summary:
        va = _fmt(r.a.value) + ("" if r.a.std is None else f" +/- {_fmt(r.a.std)}") + f" (n={r.a.n})"
        vb = _fmt(r.b.value) + ("" if r.b.std is None else f" +/- {_fmt(r.b.std)}") + f" (n={r.b.n})"
        lines.append(f"| {r.name} | {mark[r.direction]} | {va} | {vb} | {_fmt(r.delta)} |")
    if report.warnings:
        lines += ["", "## Warnings", ""]
        lines += [f"- {w}" for w in report.warnings]
    return ("\n".join(lines) + "\n").encode("utf-8")


def report_from_json(data: bytes) -> ComparisonReport:
    return report_from_dict(json.loads(data.decode("utf-8")))

"""Profile assembly, cross-tablet statistics, and report rendering."""

import numpy as np
import pytest

from haptibench.analysis import PhysicalAnalysis, QualitySummary
from haptibench.errors import MissingMetric
from haptibench.fitts import PointingMetrics
from haptibench.friction import FrictionLevelStats, FrictionRangeStats
from haptibench.latency import CrossingEstimate, LatencyEstimate
from haptibench.report import (
    RawComparisonSamples,
    build_tablet_profile,
    compare_tablets,
    render_report,
    report_from_json,
)
from haptibench.swipes import TrendModel


def level_stats(mean, sigma=0.1, delta=0.02, n_sw=108, n_p=6):
    return FrictionLevelStats(
        mean_mu=mean, intra_trial_std_delta=delta, inter_participant_std_sigma=sigma,
        n_swipes=n_sw, n_participants=n_p,
        per_participant_means={f"p{i}": mean for i in range(n_p)},
        per_participant_swipe_means={f"p{i}": [mean] * (n_sw // n_p) for i in range(n_p)},
    )


def range_stats(delta, samples):
    hi, lo = 0.45 + delta, 0.45
    return FrictionRangeStats(
        delta_mu=delta, relative_range=hi / lo, friction_contrast=1 - lo / hi,
        inter_participant_std=0.12, per_trial_samples=list(samples),
        n_pairs=len(samples), n_participants=6,
    )


def latency_estimate(mean_s=0.033, std_s=0.003, n=12):
    per = [CrossingEstimate("ltr", 1.0, 1.0 + mean_s, mean_s, 51.0, 2.0)] * n
    return LatencyEstimate(per_crossing=per, mean_dt=mean_s, std_dt=std_s, n=n,
                           per_direction={"ltr": (mean_s, std_s, n)})


def physical_analysis(tablet="tab", delta=0.301, latency=0.033, rng_seed=0):
    rng = np.random.default_rng(rng_seed)
    samples = list(delta + rng.normal(0, 0.12, 108))
    return PhysicalAnalysis(
        tablet_id=tablet,
        mu_high=level_stats(0.45 + delta),
        mu_low=level_stats(0.45),
        frange=range_stats(delta, samples),
        latency=latency_estimate(latency),
        trend=TrendModel(slope_a=0.0036),
        high_condition="constant_max",
        quality=QualitySummary(216, 216, 216, {}, []),
    )


def pointing(slope=187.0, mt=1491.0, err=0.104, rng_seed=1):
    rng = np.random.default_rng(rng_seed)
    samples = list(mt + rng.normal(0, 300.0, 60))
    return PointingMetrics(
        per_participant_slopes=[slope] * 10, slope_mean=slope, slope_std=20.0,
        mt_hardest_mean=float(np.mean(samples)), mt_hardest_std=float(np.std(samples, ddof=1)),
        mt_hardest_samples=samples, hardest_id=6.3399, error_rate=err,
        n_trials=480, n_participants=10,
    )


def profile(tablet="tab", delta=0.301, seed=0):
    return build_tablet_profile(
        physical_analysis(tablet, delta, rng_seed=seed),
        {False: pointing(293.0, 1815.0, 0.109, rng_seed=seed + 10),
         True: pointing(187.0, 1491.0, 0.104, rng_seed=seed + 20)},
    )


def raw_from(pa_seed=0, pb_seed=1, delta_a=0.301, delta_b=0.151):
    rng_a = np.random.default_rng(pa_seed)
    rng_b = np.random.default_rng(pb_seed)
    return RawComparisonSamples(
        delta_mu_a=list(delta_a + rng_a.normal(0, 0.12, 108)),
        delta_mu_b=list(delta_b + rng_b.normal(0, 0.12, 108)),
        mt_a_no_haptic=list(1800 + rng_a.normal(0, 300, 60)),
        mt_a_haptic=list(1500 + rng_a.normal(0, 300, 60)),
        mt_b_no_haptic=list(1560 + rng_b.normal(0, 300, 60)),
        mt_b_haptic=list(1440 + rng_b.normal(0, 300, 60)),
    )


def test_build_profile_happy_path():
    p = profile()
    assert p.friction_range.mean == pytest.approx(0.301)
    assert p.latency.mean_s == pytest.approx(0.033)
    assert p.pointing_haptic.slope_mean == 187.0


def test_build_profile_missing_latency():
    analysis = physical_analysis()
    analysis = PhysicalAnalysis(**{**analysis.__dict__, "latency": None})
    with pytest.raises(MissingMetric) as exc:
        build_tablet_profile(analysis, {False: pointing(), True: pointing()})
    assert exc.value.name == "latency"


def test_build_profile_missing_pointing_condition():
    with pytest.raises(MissingMetric):
        build_tablet_profile(physical_analysis(), {False: pointing()})


def test_compare_self_null():
    p = profile("a")
    raw = raw_from(0, 0, 0.301, 0.301)  # same seed: identical samples
    rep = compare_tablets(p, p, raw)
    assert rep.range_t_test.t_stat == 0.0
    assert rep.range_t_test.p_value == 1.0
    assert rep.range_f_test.f_stat == pytest.approx(1.0)


def test_compare_distinct_ranges_significant():
    rep = compare_tablets(profile("a", 0.301, 0), profile("b", 0.151, 1),
                          raw_from(0, 1, 0.301, 0.151))
    assert rep.range_t_test.df == 214
    assert rep.range_t_test.p_value < 1e-6
    assert (rep.range_f_test.df1, rep.range_f_test.df2) == (107, 107)
    assert rep.mt_anova.df_between == 3


def test_compare_warns_on_size_mismatch():
    raw = raw_from()
    raw = RawComparisonSamples(
        delta_mu_a=raw.delta_mu_a[:100], delta_mu_b=raw.delta_mu_b,
        mt_a_no_haptic=raw.mt_a_no_haptic, mt_a_haptic=raw.mt_a_haptic,
        mt_b_no_haptic=raw.mt_b_no_haptic, mt_b_haptic=raw.mt_b_haptic,
    )
    rep = compare_tablets(profile("a"), profile("b", seed=1), raw)
    assert any("sample sizes differ" in w for w in rep.warnings)


def test_summary_direction_flags():
    rep = compare_tablets(profile("a"), profile("b", seed=1), raw_from())
    by_name = {r.name: r for r in rep.summary}
    assert by_name["friction range mean"].direction == "higher_better"
    assert by_name["latency mean"].direction == "lower_better"
    assert by_name["lowest friction intra-trial SD"].direction == "lower_better"
    assert by_name["friction range inter-participant SD"].direction == "lower_better"
    assert by_name["error rate with haptic"].direction == "lower_better"
    assert by_name["movement time @ hardest ID with haptic"].direction == "lower_better"
    assert by_name["movement time SD @ hardest ID with haptic"].direction == "lower_better"
    assert by_name["lowest friction mean"].direction == "informational"


def test_summary_every_metric_carries_n():
    rep = compare_tablets(profile("a"), profile("b", seed=1), raw_from())
    assert len(rep.summary) >= 12
    for row in rep.summary:
        assert row.a.n >= 1 and row.b.n >= 1
        assert np.isfinite(row.a.value) and np.isfinite(row.b.value)


def test_render_deterministic():
    rep = compare_tablets(profile("a"), profile("b", seed=1), raw_from())
    assert render_report(rep, "json") == render_report(rep, "json")
    assert render_report(rep, "markdown") == render_report(rep, "markdown")


def test_render_markdown_sections():
    rep = compare_tablets(profile("a"), profile("b", seed=1), raw_from())
    md = render_report(rep, "markdown").decode()
    for section in ("## Physical", "## Pointing", "## Summary", "## Statistical tests"):
        assert section in md
    assert "T_214" in md


def test_json_roundtrip_equality():
    rep = compare_tablets(profile("a"), profile("b", seed=1), raw_from())
    again = report_from_json(render_report(rep, "json"))
    assert again == rep


def test_render_unknown_format():
    rep = compare_tablets(profile("a"), profile("b", seed=1), raw_from())
    with pytest.raises(ValueError):
        render_report(rep, "yaml")

"""Friction computation, swipe segmentation, trend correction, quality gate."""

import numpy as np
import pytest

from haptibench.errors import (
    AllSamplesInvalid,
    AlreadyCorrected,
    InsufficientData,
    NoSwipesFound,
)
from haptibench.io import Recording, RecordingMeta
from haptibench.swipes import (
    Swipe,
    TrendModel,
    compute_friction,
    correct_trend,
    estimate_trend_slope,
    quality_gate,
    segment_swipes,
)
from haptibench.synth import SimSwipeParams, SimTabletSpec, simulate_swipe_recording

RATE = 10_000.0


def make_rec(t, fn, ft, x, screen_length=100.0):
    meta = RecordingMeta(
        participant_id="p00",
        tablet_id="tab",
        actuation="off",
        nominal_speed=100.0,
        nominal_force_window=(0.5, 1.5),
        screen_length=screen_length,
        sample_rate=RATE,
    )
    return Recording(meta=meta, t=np.asarray(t, float), fn=np.asarray(fn, float),
                     ft=np.asarray(ft, float), x=np.asarray(x, float))


def triangle_recording(mu=0.6, n_legs=6, duration=10.0, noise=0.0, seed=0):
    spec = SimTabletSpec(technology="electroadhesion", mu_base=mu,
                         mu_actuated_mean=mu + 0.2, noise_std=noise)
    params = SimSwipeParams(speed=100.0, duration=duration, n_swipes=n_legs, seed=seed)
    rec, log = simulate_swipe_recording(spec, params, actuation="off")
    return rec, log


def swipe_from(mu, x=None, t=None, direction="ltr", **kw):
    mu = np.asarray(mu, float)
    n = mu.size
    if x is None:
        x = np.linspace(10.0, 90.0, n)
    if t is None:
        t = np.arange(n) / RATE
    kw.setdefault("mean_speed", 100.0)
    return Swipe(direction=direction, x=np.asarray(x, float), mu=mu,
                 t=np.asarray(t, float), **kw)


# ---- compute_friction ----

def test_mu_is_force_ratio():
    rec = make_rec([0, 1e-4, 2e-4], [1.0, 1.0, 1.0], [0.6, 0.6, 0.6], [1, 2, 3])
    fs = compute_friction(rec)
    np.testing.assert_allclose(fs.mu, 0.6)
    assert fs.valid_mask.all()


def test_mu_below_contact_threshold_is_invalid():
    rec = make_rec([0, 1e-4], [1.0, 0.05], [0.6, 0.3], [1, 2])
    fs = compute_friction(rec)
    assert fs.valid_mask[0]
    assert not fs.valid_mask[1]
    assert np.isnan(fs.mu[1])


def test_mu_sign_convention_uses_magnitude():
    rec = make_rec([0, 1e-4], [1.0, 1.0], [0.6, -0.6], [1, 2])
    fs = compute_friction(rec)
    np.testing.assert_allclose(fs.mu, 0.6)


def test_mu_out_of_window_contact_still_computed():
    rec = make_rec([0, 1e-4], [2.0, 1.0], [1.2, 0.6], [1, 2])
    fs = compute_friction(rec)
    assert fs.mu[0] == pytest.approx(0.6)
    assert not fs.valid_mask[0]  # in contact but outside the force window


def test_mu_all_invalid_raises():
    rec = make_rec([0, 1e-4], [0.01, 0.02], [0.0, 0.0], [1, 2])
    with pytest.raises(AllSamplesInvalid):
        compute_friction(rec)


def test_mu_constant_recovered_exactly_from_simulator():
    spec = SimTabletSpec(technology="electroadhesion", mu_base=0.443,
                         mu_actuated_mean=0.744, noise_std=0.0)
    rec, _ = simulate_swipe_recording(spec, SimSwipeParams(seed=1), actuation="off")
    fs = compute_friction(rec)
    swipes = segment_swipes(fs)
    for s in swipes:
        np.testing.assert_allclose(s.mu, 0.443, atol=1e-9)


# ---- segment_swipes ----

def test_triangle_six_legs_six_swipes():
    rec, _ = triangle_recording(n_legs=6)
    swipes = segment_swipes(compute_friction(rec))
    assert len(swipes) == 6
    assert [s.direction for s in swipes] == ["ltr", "rtl"] * 3
    for s in swipes:
        assert np.all(np.diff(s.x) > 0)
        assert s.mean_speed > 0


def test_monotone_motion_single_swipe():
    n = 5000
    t = np.arange(n) / RATE
    x = np.linspace(0, 50, n)
    rec = make_rec(t, np.ones(n), np.full(n, 0.6), x)
    swipes = segment_swipes(compute_friction(rec))
    assert len(swipes) == 1
    assert swipes[0].direction == "ltr"


def test_segment_boundaries_match_event_log():
    rec, log = triangle_recording(n_legs=6, seed=3)
    swipes = segment_swipes(compute_friction(rec))
    assert len(swipes) == len(log.leg_windows)
    for s, (t0, t1, direction) in zip(swipes, log.leg_windows):
        lo, hi = min(s.t[0], s.t[-1]), max(s.t[0], s.t[-1])
        assert abs(lo - t0) < 0.020
        assert abs(hi - t1) < 0.020
        assert s.direction == direction


def test_mid_swipe_contact_loss_dropped():
    # a 100 ms finger lift mid-swipe must not break the swipe: off-contact
    # samples are dropped and the remainder stays strictly monotone
    n = 10_000
    t = np.arange(n) / RATE
    x = np.linspace(0, 100, n)
    fn = np.full(n, 1.0)
    fn[4000:5000] = 0.02
    rec = make_rec(t, fn, 0.6 * fn, x)
    swipes = segment_swipes(compute_friction(rec))
    assert len(swipes) == 1
    s = swipes[0]
    assert len(s) == 9000
    assert np.all(np.diff(s.x) > 0)
    assert np.isfinite(s.mu).all()


def test_no_motion_raises():
    n = 2000
    rec = make_rec(np.arange(n) / RATE, np.ones(n), np.full(n, 0.6), np.full(n, 50.0))
    with pytest.raises(NoSwipesFound):
        segment_swipes(compute_friction(rec))


def test_flip_roundtrip_mirrored_recording():
    # mirroring positions then reflecting the canonical swipes back must
    # reproduce the originals exactly: flipping loses nothing
    rec, _ = triangle_recording(n_legs=6, noise=0.01, seed=9)
    L = rec.meta.screen_length
    mirrored = Recording(meta=rec.meta, t=rec.t.copy(), fn=rec.fn.copy(),
                         ft=rec.ft.copy(), x=L - rec.x)
    sw = segment_swipes(compute_friction(rec))
    sw_m = segment_swipes(compute_friction(mirrored))
    assert len(sw) == len(sw_m)
    for a, b in zip(sw, sw_m):
        assert a.direction != b.direction
        # reflect the mirrored swipe back onto the original axis
        x_back = (L - b.x)[::-1]
        mu_back = b.mu[::-1]
        np.testing.assert_allclose(x_back, a.x, atol=1e-9)
        np.testing.assert_allclose(mu_back, a.mu, atol=1e-9)


def test_segments_cover_moving_samples():
    rec, _ = triangle_recording(n_legs=6)
    fs = compute_friction(rec)
    swipes = segment_swipes(fs)
    v = np.gradient(fs.x, fs.t)
    moving = np.abs(v) >= 0.5 * np.median(np.abs(v)[np.abs(v) > 1.0])
    covered = 0
    for s in swipes:
        lo, hi = min(s.t[0], s.t[-1]), max(s.t[0], s.t[-1])
        covered += int(np.sum(moving & (fs.t >= lo) & (fs.t <= hi)))
    assert covered / moving.sum() >= 0.6


def test_segments_do_not_overlap():
    rec, _ = triangle_recording(n_legs=6, seed=5)
    swipes = segment_swipes(compute_friction(rec))
    spans = sorted((min(s.t[0], s.t[-1]), max(s.t[0], s.t[-1])) for s in swipes)
    for (a0, a1), (b0, b1) in zip(spans, spans[1:]):
        assert a1 < b0


# ---- trend ----

def test_trend_exact_linear_slope():
    swipes = [swipe_from(0.6 + 0.0036 * (np.linspace(10, 90, 2000) - 50.0))
              for _ in range(3)]
    m = estimate_trend_slope(swipes)
    assert m.slope_a == pytest.approx(0.0036, abs=1e-12)
    assert m.pivot == 50.0


def test_trend_constant_mu_zero_slope():
    m = estimate_trend_slope([swipe_from(np.full(1000, 0.6))])
    assert m.slope_a == pytest.approx(0.0, abs=1e-15)


def test_trend_mean_of_two_slopes():
    x = np.linspace(10, 90, 2000)
    swipes = [swipe_from(0.6 + 0.002 * (x - 50)), swipe_from(0.6 + 0.004 * (x - 50))]
    m = estimate_trend_slope(swipes)
    assert m.slope_a == pytest.approx(0.003, abs=1e-12)


def test_trend_insufficient_data():
    with pytest.raises(InsufficientData):
        estimate_trend_slope([swipe_from(np.full(5, 0.6), x=np.linspace(10, 12, 5))])


def test_correct_trend_cancels_affine_exactly():
    x = np.linspace(10, 90, 3000)
    s = swipe_from(0.6 + 0.0036 * (x - 50))
    m = estimate_trend_slope([s])
    out = correct_trend(s, m)
    np.testing.assert_allclose(out.mu, 0.6, atol=1e-12)
    assert out.trend_corrected
    # residual slope below 1e-9 per mm
    import dataclasses
    res = estimate_trend_slope([dataclasses.replace(out, trend_corrected=False)])
    assert abs(res.slope_a) < 1e-9


def test_correct_trend_pivot_point_unchanged():
    s = swipe_from(np.full(100, 0.7), x=np.linspace(49.999, 50.001, 100))
    out = correct_trend(s, TrendModel(slope_a=0.01))
    assert out.mu[50] == pytest.approx(0.7, abs=1e-5)


def test_correct_trend_zero_slope_identity():
    s = swipe_from(np.linspace(0.5, 0.7, 100))
    out = correct_trend(s, TrendModel(slope_a=0.0))
    np.testing.assert_array_equal(out.mu, s.mu)


def test_correct_trend_twice_raises():
    s = swipe_from(np.full(100, 0.6))
    out = correct_trend(s, TrendModel(slope_a=0.001))
    with pytest.raises(AlreadyCorrected):
        correct_trend(out, TrendModel(slope_a=0.001))


# ---- quality gate ----

def test_gate_constant_mu_accepted():
    rep = quality_gate([swipe_from(np.full(1000, 0.6), trend_corrected=True)])[0]
    assert rep.accepted
    assert rep.cv == pytest.approx(0.0, abs=1e-12)


def test_gate_too_short():
    rep = quality_gate([swipe_from(np.full(5, 0.6), x=np.linspace(10, 11, 5),
                                   trend_corrected=True)])[0]
    assert not rep.accepted
    assert rep.reject_reason == "too_short"


def test_gate_force_out_of_window():
    rep = quality_gate([swipe_from(np.full(1000, 0.6), trend_corrected=True,
                                   out_of_window_fraction=0.8)])[0]
    assert rep.reject_reason == "force_out_of_window"


def test_gate_high_cv_rejected():
    rng = np.random.default_rng(2)
    mu = np.abs(0.6 + rng.normal(0, 0.3, 2000))
    rep = quality_gate([swipe_from(mu, trend_corrected=True)])[0]
    assert rep.reject_reason == "stick_slip"


def test_gate_sawtooth_slips_rejected():
    # 50% instantaneous drops every 100 ms, linear recovery
    t = np.arange(10_000) / RATE
    phase = np.mod(t, 0.1) / 0.1
    mult = np.where(phase < 0.35, 1.0 - 0.5 * (1.0 - phase / 0.35), 1.0)
    s = swipe_from(0.6 * mult, trend_corrected=True)
    rep = quality_gate([s])[0]
    assert not rep.accepted
    assert rep.reject_reason == "stick_slip"
    assert rep.slip_event_count > 3


def test_dump_swipes_csv(tmp_path):
    from haptibench.swipes import dump_swipes
    rec, _ = triangle_recording(n_legs=2, duration=4.0)
    swipes = segment_swipes(compute_friction(rec))
    paths = dump_swipes(swipes, tmp_path / "dbg")
    assert len(paths) == 2
    lines = paths[0].read_text().splitlines()
    assert lines[0] == "x,mu,t"
    assert len(lines) == len(swipes[0]) + 1
    x0 = float(lines[1].split(",")[0])
    assert x0 == pytest.approx(float(swipes[0].x[0]), rel=1e-8)


def test_gate_accepts_flipped_and_unflipped_alike():
    t = np.arange(10_000) / RATE
    phase = np.mod(t, 0.1) / 0.1
    mult = np.where(phase < 0.35, 1.0 - 0.5 * (1.0 - phase / 0.35), 1.0)
    mu = 0.6 * mult
    fwd = swipe_from(mu, trend_corrected=True)
    rev = swipe_from(mu[::-1], t=t[::-1].copy(), direction="rtl", trend_corrected=True)
    r_fwd, r_rev = quality_gate([fwd, rev])
    assert r_fwd.reject_reason == r_rev.reject_reason == "stick_slip"

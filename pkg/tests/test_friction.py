"""Friction level statistics and the friction range with its variants."""

import math

import numpy as np
import pytest

from haptibench.errors import NoAcceptedSwipes, ParticipantSetMismatch
from haptibench.friction import friction_level_stats, friction_range
from haptibench.swipes import Swipe

RATE = 10_000.0


def flat_swipe(mu_value, n=2000, noise=0.0, seed=0):
    rng = np.random.default_rng(seed)
    mu = np.full(n, float(mu_value))
    if noise:
        mu = mu + rng.normal(0, noise, n)
    return Swipe(direction="ltr", x=np.linspace(10, 90, n), mu=mu,
                 t=np.arange(n) / RATE, mean_speed=100.0, trend_corrected=True)


def sinusoid_swipe(base, amplitude, wavelength=25.0, n=10_000):
    x = np.linspace(0.0, 100.0, n)
    mu = base + amplitude * np.cos(2 * np.pi * x / wavelength)
    return Swipe(direction="ltr", x=x, mu=mu, t=np.arange(n) / RATE,
                 mean_speed=100.0, trend_corrected=True)


def test_single_participant_constant():
    st = friction_level_stats({"p00": [flat_swipe(0.744)]})
    assert st.mean_mu == pytest.approx(0.744, abs=1e-12)
    assert st.intra_trial_std_delta == pytest.approx(0.0, abs=1e-12)
    assert st.inter_participant_std_sigma == 0.0
    assert st.n_swipes == 1
    assert st.n_participants == 1


def test_two_participants_sigma():
    st = friction_level_stats({"a": [flat_swipe(0.6)], "b": [flat_swipe(0.8)]})
    assert st.mean_mu == pytest.approx(0.7, abs=1e-12)
    # frozen: sample std of {0.6, 0.8}
    assert st.inter_participant_std_sigma == pytest.approx(0.14142135623730956, abs=1e-9)


def test_delta_is_rms_of_sinusoid():
    # amplitude chosen so that amplitude/sqrt(2) = 0.088
    amp = 0.088 * math.sqrt(2.0)
    st = friction_level_stats({"p": [sinusoid_swipe(0.55, amp) for _ in range(6)]})
    assert st.intra_trial_std_delta == pytest.approx(0.088, rel=0.05)


def test_mean_of_swipe_means_not_pooled():
    # one participant with many swipes must not dominate the grand mean
    st = friction_level_stats({
        "a": [flat_swipe(0.6)] * 10,
        "b": [flat_swipe(0.8)],
    })
    assert st.mean_mu == pytest.approx(0.7, abs=1e-12)
    assert st.n_swipes == 11


def test_delta_invariant_under_swipe_reordering():
    swipes = [flat_swipe(0.6, noise=0.02, seed=s) for s in range(5)]
    st1 = friction_level_stats({"p": swipes})
    st2 = friction_level_stats({"p": swipes[::-1]})
    assert st1.intra_trial_std_delta == st2.intra_trial_std_delta


def test_no_swipes_raises():
    with pytest.raises(NoAcceptedSwipes):
        friction_level_stats({"p": []})


# ---- friction range ----

def levels(high_by_pid, low_by_pid):
    high = friction_level_stats({p: [flat_swipe(v) for v in vals]
                                 for p, vals in high_by_pid.items()})
    low = friction_level_stats({p: [flat_swipe(v) for v in vals]
                                for p, vals in low_by_pid.items()})
    return high, low


def test_range_ultrasonic_reference_means():
    high, low = levels({"p": [0.771]}, {"p": [0.620]})
    fr = friction_range(high, low)
    assert fr.delta_mu == pytest.approx(0.151, abs=1e-12)


def test_range_electroadhesion_reference_means():
    high, low = levels({"p": [0.744]}, {"p": [0.443]})
    fr = friction_range(high, low)
    assert fr.delta_mu == pytest.approx(0.301, abs=1e-12)
    assert fr.relative_range == pytest.approx(1.6795, abs=1e-3)
    assert fr.friction_contrast == pytest.approx(0.4046, abs=1e-3)


def test_range_degenerate_equal_levels():
    high, low = levels({"p": [0.6]}, {"p": [0.6]})
    fr = friction_range(high, low)
    assert fr.delta_mu == pytest.approx(0.0, abs=1e-15)
    assert fr.relative_range == pytest.approx(1.0, abs=1e-12)
    assert fr.friction_contrast == pytest.approx(0.0, abs=1e-12)


def test_range_contrast_identity():
    high, low = levels({"p": [0.75]}, {"p": [0.45]})
    fr = friction_range(high, low)
    assert fr.friction_contrast == pytest.approx(1.0 - 1.0 / fr.relative_range, abs=1e-12)


def test_range_pairing_by_repetition_index():
    high, low = levels({"p": [0.70, 0.80]}, {"p": [0.40, 0.60]})
    fr = friction_range(high, low)
    assert fr.per_trial_samples == pytest.approx([0.30, 0.20])
    assert fr.n_pairs == 2


def test_range_pairing_truncates_to_shorter():
    high, low = levels({"p": [0.7, 0.8, 0.9]}, {"p": [0.4]})
    fr = friction_range(high, low)
    assert fr.n_pairs == 1


def test_range_explicit_pairing_map():
    high, low = levels({"p": [0.70, 0.80]}, {"p": [0.40, 0.60]})
    fr = friction_range(high, low, pairing={"p": [(0, 1), (1, 0)]})
    assert fr.per_trial_samples == pytest.approx([0.10, 0.40])


def test_range_participant_mismatch():
    high, low = levels({"a": [0.7]}, {"b": [0.4]})
    with pytest.raises(ParticipantSetMismatch):
        friction_range(high, low)


def test_range_zero_low_flags_relative():
    # zero-friction level cannot happen physically, but the flagging path
    # must not blow up; build the stats objects directly
    from haptibench.friction import FrictionLevelStats
    high = FrictionLevelStats(0.5, 0.0, 0.0, 1, 1, {"p": 0.5}, {"p": [0.5]})
    low = FrictionLevelStats(0.0, 0.0, 0.0, 1, 1, {"p": 0.0}, {"p": [0.0]})
    fr = friction_range(high, low)
    assert fr.relative_range is None
    assert fr.friction_contrast == pytest.approx(1.0)


def test_scale_covariance():
    k = 3.7
    high1, low1 = levels({"a": [0.7, 0.72], "b": [0.8]}, {"a": [0.4, 0.45], "b": [0.5]})
    high2, low2 = levels(
        {"a": [k * 0.7, k * 0.72], "b": [k * 0.8]},
        {"a": [k * 0.4, k * 0.45], "b": [k * 0.5]},
    )
    fr1 = friction_range(high1, low1)
    fr2 = friction_range(high2, low2)
    assert high2.mean_mu == pytest.approx(k * high1.mean_mu, rel=1e-12)
    assert high2.inter_participant_std_sigma == pytest.approx(
        k * high1.inter_participant_std_sigma, rel=1e-12
    )
    assert fr2.delta_mu == pytest.approx(k * fr1.delta_mu, rel=1e-12)
    assert fr2.relative_range == pytest.approx(fr1.relative_range, abs=1e-12)
    assert fr2.friction_contrast == pytest.approx(fr1.friction_contrast, abs=1e-12)


def test_fc_bounded():
    rng = np.random.default_rng(8)
    for _ in range(20):
        lo = float(rng.uniform(0.1, 0.9))
        hi = lo + float(rng.uniform(0.0, 0.5))
        high, low = levels({"p": [hi]}, {"p": [lo]})
        fr = friction_range(high, low)
        assert 0.0 <= fr.friction_contrast < 1.0


def test_sigma_zero_iff_equal_means():
    st = friction_level_stats({"a": [flat_swipe(0.6)], "b": [flat_swipe(0.6)]})
    assert st.inter_participant_std_sigma == 0.0
    st2 = friction_level_stats({"a": [flat_swipe(0.6)], "b": [flat_swipe(0.601)]})
    assert st2.inter_participant_std_sigma > 0.0

import numpy as np
import pytest

from lte_video_sim import (
    AirlinkConfig,
    awgn_profile,
    epa_profile,
    make_block_channel,
    noise_variance,
    preset,
)
from lte_video_sim.channel import ChannelProfile

from _oracles import qpsk_ber_theory


def _link(modulation="qpsk", profile=None, noise_var=0.0, ofdm="n128"):
    cfg = preset(ofdm)
    if profile is None:
        profile = awgn_profile()
    return AirlinkConfig(modulation, cfg, profile, noise_var)


@pytest.mark.parametrize("modulation", ["qpsk", "16qam", "64qam"])
def test_noiseless_llr_signs_reproduce_the_bits(modulation):
    rng = np.random.default_rng(31)
    link = _link(modulation, epa_profile(1.92e6), noise_var=0.0)
    channel = make_block_channel(link, rng)
    bits = rng.integers(0, 2, 4321, dtype=np.uint8)
    llrs = channel(bits)
    assert llrs.size == bits.size
    assert np.array_equal((llrs < 0).astype(np.uint8), bits)


def test_noiseless_llrs_survive_multipath_phase():
    # two equal taps put deep (but not exact) fades inside the band; perfect
    # CSI equalization must still get every sign right
    rng = np.random.default_rng(32)
    profile = ChannelProfile((0, 2), (0.5, 0.5))
    channel = make_block_channel(_link("16qam", profile), rng)
    bits = rng.integers(0, 2, 2000, dtype=np.uint8)
    assert np.array_equal((channel(bits) < 0).astype(np.uint8), bits)


def test_uncoded_qpsk_ber_matches_theory_on_awgn():
    esn0_db = 4.0
    rng = np.random.default_rng(33)
    link = _link("qpsk", noise_var=10 ** (-esn0_db / 10))
    channel = make_block_channel(link, rng)
    n = 400_000
    bits = rng.integers(0, 2, n, dtype=np.uint8)
    ber = np.mean((channel(bits) < 0).astype(np.uint8) != bits)
    assert ber == pytest.approx(qpsk_ber_theory(esn0_db), rel=0.1)


def test_retransmissions_share_fading_gains():
    profile = epa_profile(1.92e6, fading="rayleigh_block")
    link = _link("qpsk", profile)
    bits = np.random.default_rng(34).integers(0, 2, 500, dtype=np.uint8)

    channel = make_block_channel(link, np.random.default_rng(35))
    first, second = channel(bits), channel(bits)
    assert np.allclose(first, second)  # same gains, no noise

    other = make_block_channel(link, np.random.default_rng(36))
    assert not np.allclose(first, other(bits))


def test_noise_changes_between_transmissions():
    link = _link("qpsk", noise_var=0.1)
    channel = make_block_channel(link, np.random.default_rng(37))
    bits = np.zeros(300, dtype=np.uint8)
    assert not np.allclose(channel(bits), channel(bits))


def test_cp_shorter_than_delay_spread_is_rejected():
    profile = ChannelProfile((0, 50), (0.9, 0.1))  # n128 CP is 9..10 samples
    with pytest.raises(ValueError, match="delay spread"):
        _link("qpsk", profile)


def test_invalid_modulation_and_noise():
    with pytest.raises(ValueError):
        _link("bpsk")
    with pytest.raises(ValueError):
        _link("qpsk", noise_var=-1.0)


def test_zero_noise_floors_the_demapper_variance():
    # noise_var = 0 must not divide by zero; the floor makes noiseless
    # LLRs finite and enormous
    bits = np.zeros(100, dtype=np.uint8)
    channel = make_block_channel(_link("qpsk", noise_var=0.0), np.random.default_rng(38))
    llrs = channel(bits)
    assert np.isfinite(llrs).all()
    assert (llrs > 1e10).all()

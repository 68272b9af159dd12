"""The per-transport-block airlink.

Coded bits are QAM-mapped, laid onto an OFDM resource grid frequency-first,
sent through the tapped-delay-line channel with AWGN, equalized with perfect
channel knowledge and soft-demapped back to LLRs. make_block_channel packages
this as the bits -> LLRs callable run_harq consumes; tap gains are drawn once
per transport block, so every retransmission of that block sees the same
fading state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from lte_video_sim.channel import (
    ChannelProfile,
    apply_channel,
    draw_tap_gains,
    freq_response,
)
from lte_video_sim.modulation import bits_per_symbol, demap_llr, map_symbols
from lte_video_sim.ofdm import OfdmConfig, ofdm_demodulate, ofdm_modulate

# keeps zero noise variance finite for the demapper; LLRs just saturate
_NOISE_FLOOR = 1e-30


@dataclass(frozen=True)
class AirlinkConfig:
    modulation: str
    ofdm: OfdmConfig
    profile: ChannelProfile
    noise_var: float

    def __post_init__(self) -> None:
        bits_per_symbol(self.modulation)  # validates the scheme name
        if self.noise_var < 0:
            raise ValueError("noise_var must be non-negative")
        if self.profile.max_delay > min(self.ofdm.cp_lengths):
            raise ValueError(
                f"channel delay spread {self.profile.max_delay} samples exceeds "
                f"the shortest cyclic prefix {min(self.ofdm.cp_lengths)}"
            )


def send_bits(
    bits: np.ndarray,
    link: AirlinkConfig,
    gains: np.ndarray,
    h_sc: np.ndarray,
    rng: np.random.Generator,
) -> np.ndarray:
    """One pass of coded bits over the air; returns one LLR per input bit."""
    bits = np.asarray(bits, dtype=np.uint8).reshape(-1)
    qm = bits_per_symbol(link.modulation)
    n_sym = -(-bits.size // qm)
    padded = np.zeros(n_sym * qm, dtype=np.uint8)
    padded[: bits.size] = bits
    symbols = map_symbols(padded, link.modulation)

    n_sc = link.ofdm.n_subcarriers
    n_ofdm = -(-n_sym // n_sc)
    grid = np.zeros(n_ofdm * n_sc, dtype=np.complex128)
    grid[:n_sym] = symbols
    grid = grid.reshape(n_ofdm, n_sc).T  # frequency-first fill

    tx = ofdm_modulate(grid, link.ofdm)
    rx, _ = apply_channel(tx, link.profile, link.noise_var, rng, gains=gains)
    rx_grid = ofdm_demodulate(rx, link.ofdm, n_ofdm)

    # perfect-CSI single-tap equalizer; an exactly-null subcarrier (possible
    # only for contrived tap sets) carries no information -> LLR 0
    dead = h_sc == 0
    safe = np.where(dead, 1.0, h_sc)
    eq = rx_grid / safe[:, None]
    nv = np.maximum(link.noise_var, _NOISE_FLOOR) / np.abs(safe) ** 2

    sym_eq = eq.T.reshape(-1)[:n_sym]
    nv_sym = np.tile(nv, n_ofdm)[:n_sym]
    llrs = demap_llr(sym_eq, link.modulation, nv_sym)
    if dead.any():
        dead_sym = np.tile(dead, n_ofdm)[:n_sym]
        llrs.reshape(-1, qm)[dead_sym] = 0.0
    return llrs[: bits.size]


def make_block_channel(link: AirlinkConfig, rng: np.random.Generator):
    """Channel callable for one transport block's HARQ process.

    Fading gains are drawn here, once; retransmissions share them and only
    the additive noise is fresh per transmission.
    """
    gains = draw_tap_gains(link.profile, rng)
    h_sc = freq_response(link.profile, gains, link.ofdm)

    def channel(bits: np.ndarray) -> np.ndarray:
        return send_bits(bits, link, gains, h_sc, rng)

    return channel

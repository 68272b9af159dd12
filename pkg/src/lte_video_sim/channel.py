"""Tapped-delay-line channel, AWGN, and the perfect-CSI equalizer.

Profiles hold tap delays in samples with linear powers normalized to sum 1.
Static fading uses deterministic sqrt(power) gains; rayleigh_block draws one
complex Gaussian gain per tap (variance = tap power) for a whole transport
block. apply_channel returns the drawn gains so the receiver can form the
exact per-subcarrier response (genie CSI).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from lte_video_sim.ofdm import OfdmConfig, subcarrier_bins

FADING_MODES = ("static", "rayleigh_block")

# delay_ns, power_db pairs of the standard low-delay-spread pedestrian profile
EPA_TAPS = (
    (0.0, 0.0),
    (30.0, -1.0),
    (70.0, -2.0),
    (90.0, -3.0),
    (110.0, -8.0),
    (190.0, -17.2),
    (410.0, -20.8),
)


class DeepNullError(ValueError):
    """Raised when a subcarrier response is exactly zero (uninvertible)."""


@dataclass(frozen=True)
class ChannelProfile:
    delays: tuple[int, ...]  # samples, strictly increasing, first >= 0
    powers: tuple[float, ...]  # linear, sum 1
    fading: str = "static"

    def __post_init__(self) -> None:
        if len(self.delays) != len(self.powers) or not self.delays:
            raise ValueError("delays and powers must be equal-length and non-empty")
        if self.delays[0] < 0 or any(b <= a for a, b in zip(self.delays, self.delays[1:])):
            raise ValueError("delays must be non-negative and strictly increasing")
        if any(p <= 0 for p in self.powers) or abs(sum(self.powers) - 1.0) > 1e-9:
            raise ValueError("powers must be positive and sum to 1")
        if self.fading not in FADING_MODES:
            raise ValueError(f"fading must be one of {FADING_MODES}")

    @property
    def max_delay(self) -> int:
        return self.delays[-1]


def awgn_profile() -> ChannelProfile:
    """Single zero-delay unit tap: AWGN only."""
    return ChannelProfile((0,), (1.0,), "static")


def profile_from_taps(
    taps_ns_db: tuple[tuple[float, float], ...],
    sample_rate: float,
    fading: str = "static",
) -> ChannelProfile:
    """Quantize (delay_ns, power_db) taps to samples.

    Taps that land on the same sample are merged by power sum; powers are
    then renormalized to 1 so the profile never changes the average energy.
    """
    merged: dict[int, float] = {}
    for delay_ns, power_db in taps_ns_db:
        d = round(delay_ns * 1e-9 * sample_rate)
        merged[d] = merged.get(d, 0.0) + 10 ** (power_db / 10)
    total = sum(merged.values())
    delays = tuple(sorted(merged))
    powers = tuple(merged[d] / total for d in delays)
    return ChannelProfile(delays, powers, fading)


def epa_profile(sample_rate: float, fading: str = "static") -> ChannelProfile:
    return profile_from_taps(EPA_TAPS, sample_rate, fading)


def noise_variance(ebno_db: float, code_rate: float, bits_per_symbol: int) -> float:
    """Total complex noise variance per unit-energy symbol for a target Eb/N0.

    Es = code_rate * bits_per_symbol * Eb, so sigma^2 = N0 =
    1 / (R * Qm * 10^(EbNo/10)).
    """
    if code_rate <= 0 or bits_per_symbol <= 0:
        raise ValueError("code_rate and bits_per_symbol must be positive")
    return 1.0 / (code_rate * bits_per_symbol * 10 ** (ebno_db / 10))


def draw_tap_gains(profile: ChannelProfile, rng: np.random.Generator) -> np.ndarray:
    """Complex tap gains for one transport block."""
    p = np.asarray(profile.powers)
    if profile.fading == "static":
        return np.sqrt(p).astype(np.complex128)
    re = rng.normal(size=p.size)
    im = rng.normal(size=p.size)
    return (re + 1j * im) * np.sqrt(p / 2)


def apply_channel(
    samples: np.ndarray,
    profile: ChannelProfile,
    noise_var: float,
    rng: np.random.Generator,
    gains: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Convolve with the tap line and add circular complex AWGN.

    Output is truncated to the input length (the convolution tail falls past
    the end). Tap gains are drawn here unless supplied; they are returned
    either way so the receiver can equalize with perfect knowledge.
    """
    samples = np.asarray(samples, dtype=np.complex128)
    if gains is None:
        gains = draw_tap_gains(profile, rng)
    h = np.zeros(profile.max_delay + 1, dtype=np.complex128)
    h[list(profile.delays)] = gains
    rx = np.convolve(samples, h)[: samples.size]
    if noise_var > 0:
        scale = np.sqrt(noise_var / 2)
        rx = rx + scale * (rng.normal(size=rx.size) + 1j * rng.normal(size=rx.size))
    return rx, gains


def freq_response(profile: ChannelProfile, gains: np.ndarray, cfg: OfdmConfig) -> np.ndarray:
    """Per-subcarrier channel response for the grid row ordering."""
    bins = subcarrier_bins(cfg)
    delays = np.asarray(profile.delays)
    phase = np.exp(-2j * np.pi * np.outer(bins, delays) / cfg.fft_size)
    return phase @ np.asarray(gains, dtype=np.complex128)


def equalize(
    grid: np.ndarray, h_sc: np.ndarray, noise_var: float
) -> tuple[np.ndarray, np.ndarray]:
    """Single-tap zero-forcing: divide each subcarrier by its response.

    Returns the equalized grid and the effective per-subcarrier noise
    variance noise_var / |H_k|^2 (feed to the demapper). Raises
    DeepNullError when any H_k is exactly zero; callers may treat those
    subcarriers as erasures (LLR 0) instead.
    """
    h_sc = np.asarray(h_sc, dtype=np.complex128)
    if np.any(h_sc == 0):
        raise DeepNullError("channel response is exactly zero on a subcarrier")
    grid_eq = np.asarray(grid, dtype=np.complex128) / h_sc[:, None]
    sigma2 = noise_var / np.abs(h_sc) ** 2
    return grid_eq, sigma2

"""CP-OFDM modulation over a centered block of 15 kHz subcarriers.

The resource grid is (n_subcarriers, n_symbols); subcarrier row 0 is the most
negative frequency and the DC bin is never used. The DFT pair is unitary
(ifft * sqrt(N) / fft / sqrt(N)), so demod(mod(grid)) is the identity and
per-subcarrier noise variance after demodulation equals the time-domain
per-sample variance. Cyclic prefixes follow the normal-CP pattern, one long
symbol then six short per 7-symbol slot, scaled from {160, 144} at N=2048.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

SUBCARRIER_HZ = 15_000
SLOT_SYMBOLS = 7


@dataclass(frozen=True)
class OfdmConfig:
    fft_size: int
    n_subcarriers: int
    cp_lengths: tuple[int, ...]  # per symbol position within a slot

    def __post_init__(self) -> None:
        if self.n_subcarriers % 2 or not 0 < self.n_subcarriers < self.fft_size:
            raise ValueError("n_subcarriers must be even and smaller than fft_size")
        if len(self.cp_lengths) != SLOT_SYMBOLS:
            raise ValueError(f"need {SLOT_SYMBOLS} CP lengths, one per slot symbol")

    @property
    def sample_rate(self) -> float:
        return self.fft_size * SUBCARRIER_HZ

    def cp_for(self, symbol_index: int) -> int:
        return self.cp_lengths[symbol_index % SLOT_SYMBOLS]


def _scaled(fft_size: int, n_subcarriers: int) -> OfdmConfig:
    scale = fft_size / 2048
    cps = (round(160 * scale),) + (round(144 * scale),) * 6
    return OfdmConfig(fft_size, n_subcarriers, cps)


# standard bandwidth ladder; n128 = 1.4 MHz numerology, the desk-scale default
PRESETS = {
    "n128": _scaled(128, 72),
    "n256": _scaled(256, 180),
    "n512": _scaled(512, 300),
    "n1024": _scaled(1024, 600),
    "n2048": _scaled(2048, 1200),
}


def preset(name: str) -> OfdmConfig:
    if name not in PRESETS:
        raise ValueError(f"unknown OFDM preset {name!r}; expected one of {sorted(PRESETS)}")
    return PRESETS[name]


@lru_cache(maxsize=None)
def subcarrier_bins(cfg: OfdmConfig) -> np.ndarray:
    """FFT bin index per grid row: [-Nsc/2..-1, +1..+Nsc/2], DC skipped."""
    half = cfg.n_subcarriers // 2
    neg = np.arange(cfg.fft_size - half, cfg.fft_size)
    pos = np.arange(1, half + 1)
    return np.concatenate([neg, pos])


def ofdm_modulate(grid: np.ndarray, cfg: OfdmConfig) -> np.ndarray:
    """Serialize a resource grid to time samples, CP prepended per symbol."""
    grid = np.asarray(grid, dtype=np.complex128)
    if grid.ndim != 2 or grid.shape[0] != cfg.n_subcarriers:
        raise ValueError(f"grid must be ({cfg.n_subcarriers}, n_symbols)")
    bins = subcarrier_bins(cfg)
    spectrum = np.zeros((cfg.fft_size, grid.shape[1]), dtype=np.complex128)
    spectrum[bins] = grid
    time = np.fft.ifft(spectrum, axis=0) * np.sqrt(cfg.fft_size)
    parts = []
    for t in range(grid.shape[1]):
        cp = cfg.cp_for(t)
        parts.append(time[-cp:, t])
        parts.append(time[:, t])
    return np.concatenate(parts)


def ofdm_demodulate(samples: np.ndarray, cfg: OfdmConfig, n_symbols: int) -> np.ndarray:
    """Recover the resource grid from time samples (CP discarded)."""
    samples = np.asarray(samples, dtype=np.complex128)
    needed = symbol_span(cfg, n_symbols)
    if samples.size < needed:
        raise ValueError(f"need {needed} samples for {n_symbols} symbols, got {samples.size}")
    grid = np.empty((cfg.n_subcarriers, n_symbols), dtype=np.complex128)
    bins = subcarrier_bins(cfg)
    pos = 0
    for t in range(n_symbols):
        pos += cfg.cp_for(t)
        spectrum = np.fft.fft(samples[pos : pos + cfg.fft_size]) / np.sqrt(cfg.fft_size)
        grid[:, t] = spectrum[bins]
        pos += cfg.fft_size
    return grid


def symbol_span(cfg: OfdmConfig, n_symbols: int) -> int:
    """Total samples occupied by the first n_symbols symbols."""
    return sum(cfg.cp_for(t) + cfg.fft_size for t in range(n_symbols))

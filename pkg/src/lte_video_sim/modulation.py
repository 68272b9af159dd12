"""Gray-mapped QAM constellations and max-log soft demapping.

Schemes: qpsk (2 bits/symbol), 16qam (4), 64qam (6). All constellations have
unit average energy (scalings 1/sqrt(2), 1/sqrt(10), 1/sqrt(42)); per-axis
labeling is Gray, with even-indexed bits on I and odd-indexed on Q, so bits
00 map to (1+j)/sqrt(2) for qpsk. LLR sign convention: positive means bit 0.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

SCHEMES = ("qpsk", "16qam", "64qam")

_BITS_PER_SYMBOL = {"qpsk": 2, "16qam": 4, "64qam": 6}


def bits_per_symbol(scheme: str) -> int:
    if scheme not in _BITS_PER_SYMBOL:
        raise ValueError(f"unknown modulation {scheme!r}; expected one of {SCHEMES}")
    return _BITS_PER_SYMBOL[scheme]


def _axis(levels: np.ndarray) -> np.ndarray:
    # per-axis amplitude from the Gray-labeled level bits: 1 bit for 16qam
    # (amplitudes 1/3), 2 for 64qam (1/3/5/7), none for qpsk. Earlier bits
    # sit outermost in the nesting: amp = 4 - s(b_first)*(2 - s(b_last)).
    amp = np.ones(levels.shape[0])
    n = levels.shape[1]
    for depth in range(n):
        col = n - 1 - depth
        amp = (2 << depth) - np.where(levels[:, col] == 0, 1, -1) * amp
    return amp


@lru_cache(maxsize=None)
def constellation(scheme: str) -> np.ndarray:
    """Complex points indexed by the symbol label (bits MSB first)."""
    qm = bits_per_symbol(scheme)
    labels = np.arange(2 ** qm)
    bits = (labels[:, None] >> np.arange(qm - 1, -1, -1)) & 1
    sign_i = 1 - 2 * bits[:, 0]
    sign_q = 1 - 2 * bits[:, 1]
    amp_i = _axis(bits[:, 2::2])
    amp_q = _axis(bits[:, 3::2])
    pts = sign_i * amp_i + 1j * sign_q * amp_q
    return pts / np.sqrt(np.mean(np.abs(pts) ** 2))


def map_symbols(bits: np.ndarray, scheme: str) -> np.ndarray:
    """Map a bit vector (length a multiple of Qm) to complex symbols."""
    qm = bits_per_symbol(scheme)
    bits = np.asarray(bits, dtype=np.int64)
    if bits.size % qm:
        raise ValueError(f"{bits.size} bits do not fill a whole number of {scheme} symbols")
    weights = 1 << np.arange(qm - 1, -1, -1)
    idx = bits.reshape(-1, qm) @ weights
    return constellation(scheme)[idx]


@lru_cache(maxsize=None)
def _bit_masks(scheme: str) -> tuple[np.ndarray, np.ndarray]:
    qm = bits_per_symbol(scheme)
    labels = np.arange(2 ** qm)
    bit = (labels[:, None] >> np.arange(qm - 1, -1, -1)) & 1
    return bit.T == 0, bit.T == 1  # (qm, 2^qm) membership masks


def demap_llr(symbols: np.ndarray, scheme: str, noise_var: float | np.ndarray) -> np.ndarray:
    """Max-log LLRs for each bit of each received symbol.

    LLR(b) = (min over points with b=1 of |y-s|^2
              - min over points with b=0 of |y-s|^2) / noise_var,
    where noise_var is the total complex noise variance per symbol (scalar or
    per-symbol array). Output is flat, Qm LLRs per symbol, transmit order.
    """
    qm = bits_per_symbol(scheme)
    symbols = np.asarray(symbols, dtype=np.complex128).ravel()
    nv = np.broadcast_to(np.asarray(noise_var, dtype=np.float64).ravel(), symbols.shape)
    if np.any(nv <= 0):
        raise ValueError("noise_var must be positive")
    pts = constellation(scheme)
    d2 = np.abs(symbols[:, None] - pts[None, :]) ** 2
    zeros, ones = _bit_masks(scheme)
    llr = np.empty((symbols.size, qm))
    big = np.inf
    for j in range(qm):
        m0 = np.min(np.where(zeros[j], d2, big), axis=1)
        m1 = np.min(np.where(ones[j], d2, big), axis=1)
        llr[:, j] = (m1 - m0) / nv
    return llr.ravel()

"""Incremental-redundancy HARQ with soft combining.

A HARQ process owns one transport block (payload plus its 24-bit CRC, K bits
total). Transmission t sends rate-matched bits at redundancy version
rv_sequence[(t-1) mod len]; the receiver accumulates LLRs into a soft buffer,
re-runs the turbo decoder on everything received so far, and ACKs on CRC
pass. The channel is abstracted as a callable mapping transmitted bits to
received LLRs so the same loop runs over bit-level test channels and the
full OFDM airlink.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from lte_video_sim.crc import crc24a_check
from lte_video_sim.rate_match import SoftBuffer, rate_match, rate_recover
from lte_video_sim.turbo import turbo_decode, turbo_encode

DEFAULT_RV_SEQUENCE = (0, 2, 3, 1)


@dataclass
class HarqOutcome:
    """Result of one HARQ process.

    ack_at_tx is the 1-based transmission index of the first CRC pass, or
    None if the budget ran out; decoded always holds the final K-bit decision
    so residual errors can be counted even on failure.
    """

    ack_at_tx: int | None
    n_tx: int
    decoded: np.ndarray

    @property
    def ack(self) -> bool:
        return self.ack_at_tx is not None


def run_harq(
    info: np.ndarray,
    channel: Callable[[np.ndarray], np.ndarray],
    e_bits: int,
    max_tx: int = 1,
    rv_sequence: tuple[int, ...] = DEFAULT_RV_SEQUENCE,
    n_iter: int = 8,
) -> HarqOutcome:
    """Run one transport block through up to ``max_tx`` transmissions.

    Parameters
    ----------
    info : K-bit block, CRC already attached (K a valid turbo size).
    channel : maps E transmitted bits to E received LLRs (positive -> 0).
    e_bits : rate-matched bits per transmission.
    max_tx : transmission budget, 1..len(rv_sequence) typical.
    """
    info = np.asarray(info, dtype=np.uint8)
    if max_tx < 1:
        raise ValueError("max_tx must be at least 1")
    if not rv_sequence:
        raise ValueError("rv_sequence must be non-empty")
    coded = turbo_encode(info)
    buffer = SoftBuffer(info.size)
    decoded = np.zeros_like(info)  # overwritten by the first decode
    for t in range(1, max_tx + 1):
        rv = rv_sequence[(t - 1) % len(rv_sequence)]
        tx_bits = rate_match(coded, rv, e_bits)
        llrs = channel(tx_bits)
        if len(llrs) != e_bits:
            raise ValueError(f"channel returned {len(llrs)} LLRs for {e_bits} bits")
        rate_recover(llrs, rv, buffer)
        decoded, _ = turbo_decode(buffer.to_streams(), n_iter)
        if crc24a_check(decoded):
            return HarqOutcome(t, t, decoded)
    return HarqOutcome(None, max_tx, decoded)

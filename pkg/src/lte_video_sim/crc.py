"""24-bit CRC attachment and checking for transport blocks.

Generator 0x1864CFB (x^24 + x^23 + x^18 + x^17 + x^14 + x^11 + x^10 + x^7 +
x^6 + x^5 + x^4 + x^3 + x + 1), processed MSB first, zero initial register,
no final XOR. Bits are uint8 arrays of 0/1 values.
"""

from __future__ import annotations

import numpy as np

GEN24A = 0x1864CFB
CRC24_LEN = 24

_POLY = GEN24A & 0xFFFFFF  # low 24 bits; the x^24 term is implicit
_MASK = 0xFFFFFF


def _build_table(poly: int) -> list[int]:
    table = []
    for byte in range(256):
        reg = byte << 16
        for _ in range(8):
            if reg & 0x800000:
                reg = ((reg << 1) ^ poly) & _MASK
            else:
                reg = (reg << 1) & _MASK
        table.append(reg)
    return table


_TABLE = _build_table(_POLY)


def crc24a(bits: np.ndarray) -> int:
    """Remainder of bits(x) * x^24 modulo the generator, as a 24-bit integer.

    Whole bytes go through a table; any trailing bits are folded in one at a
    time, so the input length need not be a multiple of 8.
    """
    bits = np.asarray(bits, dtype=np.uint8)
    n_bytes = bits.size // 8
    reg = 0
    if n_bytes:
        for byte in np.packbits(bits[: n_bytes * 8]):
            reg = ((reg << 8) ^ _TABLE[((reg >> 16) ^ int(byte)) & 0xFF]) & _MASK
    for bit in bits[n_bytes * 8 :]:
        reg ^= int(bit) << 23
        if reg & 0x800000:
            reg = ((reg << 1) ^ _POLY) & _MASK
        else:
            reg = (reg << 1) & _MASK
    return reg


def crc24a_attach(payload: np.ndarray) -> np.ndarray:
    """Append the 24 parity bits to ``payload`` (MSB of the remainder first)."""
    payload = np.asarray(payload, dtype=np.uint8)
    rem = crc24a(payload)
    parity = (rem >> np.arange(23, -1, -1)) & 1
    return np.concatenate([payload, parity.astype(np.uint8)])


def crc24a_check(frame: np.ndarray) -> bool:
    """True iff ``frame`` (payload plus appended parity) leaves zero remainder."""
    frame = np.asarray(frame, dtype=np.uint8)
    if frame.size < CRC24_LEN:
        raise ValueError(f"frame of {frame.size} bits is shorter than the 24-bit CRC")
    return crc24a(frame) == 0

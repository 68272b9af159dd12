"""Sub-block interleaving, circular-buffer rate matching and soft combining.

Each of the three coded streams is written row-wise into a 32-column matrix
(padded at the front with NULLs to fill it), the columns are permuted, and
the matrix is read out column-wise; the third stream uses the shifted variant
of the same permutation. The interleaved streams fill a circular buffer of
Kw = 3 * K_pi positions (systematic first, then parity-1/parity-2 bit by
bit). A transmission of E bits walks the buffer from the redundancy-version
start offset, skipping NULLs and wrapping as needed; the receiver adds LLRs
back along the identical walk, which makes recovery the exact adjoint of
selection and lets retransmissions combine by addition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import TextIO

import numpy as np

# inter-column permutation for the 32-column sub-block interleaver
PERM_COL = np.array([
    0, 16, 8, 24, 4, 20, 12, 28, 2, 18, 10, 26, 6, 22, 14, 30,
    1, 17, 9, 25, 5, 21, 13, 29, 3, 19, 11, 27, 7, 23, 15, 31,
], dtype=np.int64)

N_COLS = 32
NULL = -1


@lru_cache(maxsize=None)
def _geometry(k_size: int) -> tuple[int, int, int, int]:
    """(D, R, K_pi, n_dummy) for stream length D = K + 4."""
    d_len = k_size + 4
    n_rows = -(-d_len // N_COLS)
    k_pi = N_COLS * n_rows
    return d_len, n_rows, k_pi, k_pi - d_len


@lru_cache(maxsize=None)
def buffer_source(k_size: int) -> np.ndarray:
    """Map each circular-buffer position to its origin coded bit.

    Returns an int64 array of length Kw = 3*K_pi holding
    ``stream * (K+4) + index`` for real bits and -1 for NULL padding. Every
    coded bit appears exactly once.
    """
    d_len, n_rows, k_pi, n_dummy = _geometry(k_size)
    j = np.arange(k_pi, dtype=np.int64)
    # column-major read of the row-written, column-permuted matrix
    perm01 = (j % n_rows) * N_COLS + PERM_COL[j // n_rows]
    perm2 = (PERM_COL[j // n_rows] + N_COLS * (j % n_rows) + 1) % k_pi

    src = np.empty(3 * k_pi, dtype=np.int64)
    v0 = perm01 - n_dummy
    v2 = perm2 - n_dummy
    src[:k_pi] = np.where(v0 >= 0, v0, NULL)
    src[k_pi + 2 * j] = np.where(v0 >= 0, d_len + v0, NULL)
    src[k_pi + 2 * j + 1] = np.where(v2 >= 0, 2 * d_len + v2, NULL)
    return src


def buffer_length(k_size: int) -> int:
    return 3 * _geometry(k_size)[2]


def start_offset(k_size: int, rv_idx: int) -> int:
    """Circular-buffer start position for a redundancy version."""
    if rv_idx not in (0, 1, 2, 3):
        raise ValueError(f"rv_idx must be 0..3, got {rv_idx}")
    _, n_rows, k_pi, _ = _geometry(k_size)
    n_cb = 3 * k_pi
    return n_rows * (2 * (-(-n_cb // (8 * n_rows))) * rv_idx + 2)


@lru_cache(maxsize=None)
def _selection_indices(k_size: int, rv_idx: int, e_bits: int) -> np.ndarray:
    """Buffer positions visited by an E-bit transmission, NULLs skipped."""
    src = buffer_source(k_size)
    non_null = np.nonzero(src >= 0)[0]
    k0 = start_offset(k_size, rv_idx)
    first = int(np.searchsorted(non_null, k0))
    if first == non_null.size:
        first = 0
    order = np.roll(non_null, -first)
    reps = -(-e_bits // order.size)
    return np.tile(order, reps)[:e_bits]


def rate_match(coded: np.ndarray, rv_idx: int, e_bits: int) -> np.ndarray:
    """Select E transmitted bits from the coded streams.

    Parameters
    ----------
    coded : (3, K+4) uint8 array from ``turbo_encode``.
    rv_idx : redundancy version, 0..3.
    e_bits : number of bits to emit; wraps circularly if it exceeds the
        number of real buffer positions (repetition).
    """
    coded = np.asarray(coded)
    if coded.ndim != 2 or coded.shape[0] != 3:
        raise ValueError("expected a (3, K+4) coded array")
    if e_bits <= 0:
        raise ValueError(f"e_bits must be positive, got {e_bits}")
    k_size = coded.shape[1] - 4
    src = buffer_source(k_size)
    flat = coded.reshape(-1)
    buf = flat[np.maximum(src, 0)]
    idx = _selection_indices(k_size, rv_idx, e_bits)
    return buf[idx].astype(np.uint8)


@dataclass
class SoftBuffer:
    """Per-position LLR accumulator sized to the circular buffer."""

    k_size: int
    llrs: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        self.llrs = np.zeros(buffer_length(self.k_size))

    def reset(self) -> None:
        self.llrs[:] = 0.0

    def to_streams(self) -> np.ndarray:
        """De-interleave into (3, K+4) stream LLRs; untransmitted bits are 0."""
        d_len = self.k_size + 4
        src = buffer_source(self.k_size)
        valid = src >= 0
        out = np.zeros(3 * d_len)
        out[src[valid]] = self.llrs[valid]
        return out.reshape(3, d_len)


def rate_recover(llrs: np.ndarray, rv_idx: int, buffer: SoftBuffer) -> None:
    """Accumulate received LLRs into ``buffer`` along the transmit walk.

    Exact adjoint of ``rate_match``: LLR i lands on the buffer position that
    emitted bit i, including repetition wraps (those positions accumulate
    more than once within a single call).
    """
    llrs = np.asarray(llrs, dtype=np.float64)
    idx = _selection_indices(buffer.k_size, rv_idx, llrs.size)
    np.add.at(buffer.llrs, idx, llrs)


def dump_circular_buffer(source: np.ndarray | SoftBuffer, fp: TextIO) -> None:
    """Write one ``index,null,value`` line per buffer position.

    Accepts either a (3, K+4) coded bit array (values written as 0/1) or a
    SoftBuffer (values written as LLR floats). NULL positions leave the value
    column empty. Intended for cross-checks against reference walks.
    """
    if isinstance(source, SoftBuffer):
        src = buffer_source(source.k_size)
        values = source.llrs
        fmt = lambda v: repr(float(v))
    else:
        arr = np.asarray(source)
        src = buffer_source(arr.shape[1] - 4)
        values = arr.reshape(-1)[np.maximum(src, 0)]
        fmt = lambda v: str(int(v))
    for i, s in enumerate(src):
        if s < 0:
            fp.write(f"{i},1,\n")
        else:
            fp.write(f"{i},0,{fmt(values[i])}\n")

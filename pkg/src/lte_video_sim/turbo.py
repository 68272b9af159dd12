"""Rate-1/3 parallel concatenated turbo code with QPP interleaving.

Two identical 8-state recursive systematic encoders (feedback 1 + D^2 + D^3,
feedforward 1 + D + D^3), the second fed through the quadratic permutation
polynomial interleaver pi(i) = (f1*i + f2*i^2) mod K. Both trellises are
terminated; the 12 tail bits are redistributed into three output streams of
K + 4 bits each. Decoding is iterative max-log-MAP with extrinsic exchange
and no extrinsic scaling.

LLR sign convention throughout: positive means bit 0.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from numba import njit

# (f1, f2) per valid block size K. 40..512 step 8, 528..1024 step 16,
# 1056..2048 step 32, 2112..6144 step 64: 188 sizes.
_QPP_PARAMS = {
    40: (3, 10), 48: (7, 12), 56: (19, 42), 64: (7, 16),
    72: (7, 18), 80: (11, 20), 88: (5, 22), 96: (11, 24),
    104: (7, 26), 112: (41, 84), 120: (103, 90), 128: (15, 32),
    136: (9, 34), 144: (17, 108), 152: (9, 38), 160: (21, 120),
    168: (101, 84), 176: (21, 44), 184: (57, 46), 192: (23, 48),
    200: (13, 50), 208: (27, 52), 216: (11, 36), 224: (27, 56),
    232: (85, 58), 240: (29, 60), 248: (33, 62), 256: (15, 32),
    264: (17, 198), 272: (33, 68), 280: (103, 210), 288: (19, 36),
    296: (19, 74), 304: (37, 76), 312: (19, 78), 320: (21, 120),
    328: (21, 82), 336: (115, 84), 344: (193, 86), 352: (21, 44),
    360: (133, 90), 368: (81, 46), 376: (45, 94), 384: (23, 48),
    392: (243, 98), 400: (151, 40), 408: (155, 102), 416: (25, 52),
    424: (51, 106), 432: (47, 72), 440: (91, 110), 448: (29, 168),
    456: (29, 114), 464: (247, 58), 472: (29, 118), 480: (89, 180),
    488: (91, 122), 496: (157, 62), 504: (55, 84), 512: (31, 64),
    528: (17, 66), 544: (35, 68), 560: (227, 420), 576: (65, 96),
    592: (19, 74), 608: (37, 76), 624: (41, 234), 640: (39, 80),
    656: (185, 82), 672: (43, 252), 688: (21, 86), 704: (155, 44),
    720: (79, 120), 736: (139, 92), 752: (23, 94), 768: (217, 48),
    784: (25, 98), 800: (17, 80), 816: (127, 102), 832: (25, 52),
    848: (239, 106), 864: (17, 48), 880: (137, 110), 896: (215, 112),
    912: (29, 114), 928: (15, 58), 944: (147, 118), 960: (29, 60),
    976: (59, 122), 992: (65, 124), 1008: (55, 84), 1024: (31, 64),
    1056: (17, 66), 1088: (171, 204), 1120: (67, 140), 1152: (35, 72),
    1184: (19, 74), 1216: (39, 76), 1248: (19, 78), 1280: (199, 240),
    1312: (21, 82), 1344: (211, 252), 1376: (21, 86), 1408: (43, 88),
    1440: (149, 60), 1472: (45, 92), 1504: (49, 846), 1536: (71, 48),
    1568: (13, 28), 1600: (17, 80), 1632: (25, 102), 1664: (183, 104),
    1696: (55, 954), 1728: (127, 96), 1760: (27, 110), 1792: (29, 112),
    1824: (29, 114), 1856: (57, 116), 1888: (45, 354), 1920: (31, 120),
    1952: (59, 610), 1984: (185, 124), 2016: (113, 420), 2048: (31, 64),
    2112: (17, 66), 2176: (171, 136), 2240: (209, 420), 2304: (253, 216),
    2368: (367, 444), 2432: (265, 456), 2496: (181, 468), 2560: (39, 80),
    2624: (27, 164), 2688: (127, 504), 2752: (143, 172), 2816: (43, 88),
    2880: (29, 300), 2944: (45, 92), 3008: (157, 188), 3072: (47, 96),
    3136: (13, 28), 3200: (111, 240), 3264: (443, 204), 3328: (51, 104),
    3392: (51, 212), 3456: (451, 192), 3520: (257, 220), 3584: (57, 336),
    3648: (313, 228), 3712: (271, 232), 3776: (179, 236), 3840: (331, 120),
    3904: (363, 244), 3968: (375, 248), 4032: (127, 168), 4096: (31, 64),
    4160: (33, 130), 4224: (43, 264), 4288: (33, 134), 4352: (477, 408),
    4416: (35, 138), 4480: (233, 280), 4544: (357, 142), 4608: (337, 480),
    4672: (37, 146), 4736: (71, 444), 4800: (71, 120), 4864: (37, 152),
    4928: (39, 462), 4992: (127, 234), 5056: (39, 158), 5120: (39, 80),
    5184: (31, 96), 5248: (113, 902), 5312: (41, 166), 5376: (251, 336),
    5440: (43, 170), 5504: (21, 86), 5568: (43, 174), 5632: (45, 176),
    5696: (45, 178), 5760: (161, 120), 5824: (89, 182), 5888: (323, 184),
    5952: (47, 186), 6016: (23, 94), 6080: (47, 190), 6144: (263, 480),
}

N_TAIL = 3  # trellis termination steps per constituent encoder


def valid_block_sizes() -> tuple[int, ...]:
    """All block sizes K the interleaver is defined for, ascending."""
    return tuple(sorted(_QPP_PARAMS))


@lru_cache(maxsize=None)
def qpp_permutation(k_size: int) -> np.ndarray:
    """Interleaver read addresses: output i comes from input pi(i).

    pi(i) = (f1*i + f2*i^2) mod K, a bijection on 0..K-1 for every valid K.
    """
    if k_size not in _QPP_PARAMS:
        raise ValueError(f"{k_size} is not a valid turbo block size")
    f1, f2 = _QPP_PARAMS[k_size]
    i = np.arange(k_size, dtype=np.int64)
    return (f1 * i + f2 * i * i) % k_size


def _build_trellis() -> tuple[np.ndarray, np.ndarray]:
    # state s = (s0<<2)|(s1<<1)|s2 where s0 is the newest register
    nxt = np.zeros((8, 2), dtype=np.int64)
    par = np.zeros((8, 2), dtype=np.int64)
    for s in range(8):
        s0, s1, s2 = (s >> 2) & 1, (s >> 1) & 1, s & 1
        for u in (0, 1):
            w = u ^ s1 ^ s2
            par[s, u] = w ^ s0 ^ s2
            nxt[s, u] = (w << 2) | (s0 << 1) | s1
    return nxt, par


_NEXT, _PAR = _build_trellis()


@njit(cache=True)
def _rsc_encode(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """One terminated constituent encode: (systematic, parity), each K+3."""
    k_size = x.shape[0]
    sys_out = np.empty(k_size + 3, np.uint8)
    par_out = np.empty(k_size + 3, np.uint8)
    s0 = s1 = s2 = np.uint8(0)
    for k in range(k_size):
        u = x[k]
        w = u ^ s1 ^ s2
        sys_out[k] = u
        par_out[k] = w ^ s0 ^ s2
        s2 = s1
        s1 = s0
        s0 = w
    for k in range(k_size, k_size + 3):
        # feed back s1^s2 so the register drains to zero
        sys_out[k] = s1 ^ s2
        par_out[k] = s0 ^ s2
        s2 = s1
        s1 = s0
        s0 = np.uint8(0)
    return sys_out, par_out


def turbo_encode(info: np.ndarray) -> np.ndarray:
    """Encode K info bits into three streams of K + 4 bits.

    Parameters
    ----------
    info : uint8 array of a valid block size K.

    Returns
    -------
    (3, K+4) uint8 array: rows are systematic, parity-1, parity-2. Positions
    0..K-1 of row 0 equal ``info``; the trailing 4 positions of each row hold
    the 12 termination bits of the two encoders, interleaved across the rows
    so that each stream has the same length.
    """
    info = np.ascontiguousarray(info, dtype=np.uint8)
    k_size = info.size
    perm = qpp_permutation(k_size)
    sys1, par1 = _rsc_encode(info)
    sys2, par2 = _rsc_encode(np.ascontiguousarray(info[perm]))
    d = np.empty((3, k_size + 4), dtype=np.uint8)
    k = k_size
    d[0, :k] = info
    d[0, k:] = (sys1[k], par1[k + 1], sys2[k], par2[k + 1])
    d[1, :k] = par1[:k]
    d[1, k:] = (par1[k], sys1[k + 2], par2[k], sys2[k + 2])
    d[2, :k] = par2[:k]
    d[2, k:] = (sys1[k + 1], par1[k + 2], sys2[k + 1], par2[k + 2])
    return d


@njit(cache=True)
def _max_log_map(ls: np.ndarray, lp: np.ndarray, la: np.ndarray,
                 nxt: np.ndarray, par: np.ndarray) -> np.ndarray:
    """A posteriori LLRs for one constituent code, max-log approximation.

    ls, lp: systematic/parity channel LLRs over K+3 trellis steps; la:
    a-priori LLRs over the K info steps. Trellis starts and ends in state 0.
    """
    n_steps = ls.shape[0]
    k_size = la.shape[0]
    neg = -1.0e300

    alpha = np.full((n_steps + 1, 8), neg)
    alpha[0, 0] = 0.0
    for k in range(n_steps):
        la_k = la[k] if k < k_size else 0.0
        half_s = 0.5 * (ls[k] + la_k)
        half_p = 0.5 * lp[k]
        for s in range(8):
            a = alpha[k, s]
            if a <= neg:
                continue
            for u in range(2):
                g = half_s * (1.0 - 2.0 * u) + half_p * (1.0 - 2.0 * par[s, u])
                ns = nxt[s, u]
                cand = a + g
                if cand > alpha[k + 1, ns]:
                    alpha[k + 1, ns] = cand
        m = alpha[k + 1, 0]
        for s in range(1, 8):
            if alpha[k + 1, s] > m:
                m = alpha[k + 1, s]
        for s in range(8):
            alpha[k + 1, s] -= m

    lapp = np.empty(k_size)
    beta = np.full(8, neg)
    beta[0] = 0.0
    for k in range(n_steps - 1, -1, -1):
        la_k = la[k] if k < k_size else 0.0
        half_s = 0.5 * (ls[k] + la_k)
        half_p = 0.5 * lp[k]
        m0 = neg
        m1 = neg
        new_beta = np.full(8, neg)
        for s in range(8):
            for u in range(2):
                g = half_s * (1.0 - 2.0 * u) + half_p * (1.0 - 2.0 * par[s, u])
                ns = nxt[s, u]
                b = g + beta[ns]
                if b > new_beta[s]:
                    new_beta[s] = b
                cand = alpha[k, s] + b
                if u == 0:
                    if cand > m0:
                        m0 = cand
                else:
                    if cand > m1:
                        m1 = cand
        if k < k_size:
            lapp[k] = m0 - m1
        m = new_beta[0]
        for s in range(1, 8):
            if new_beta[s] > m:
                m = new_beta[s]
        for s in range(8):
            beta[s] = new_beta[s] - m
    return lapp


def turbo_decode(stream_llrs: np.ndarray, n_iter: int = 8) -> tuple[np.ndarray, bool]:
    """Iteratively decode three LLR streams back to K info bits.

    Parameters
    ----------
    stream_llrs : (3, K+4) float array, same layout as ``turbo_encode``
        output. Positions never transmitted must hold LLR 0.
    n_iter : number of full decoder iterations; always run to completion.

    Returns
    -------
    (bits, success_hint): hard decisions (positive LLR -> 0) and a cheap
    convergence flag (the two constituent decoders agree on every bit). The
    flag is advisory; callers gate on an outer CRC.
    """
    llrs = np.asarray(stream_llrs, dtype=np.float64)
    if llrs.ndim != 2 or llrs.shape[0] != 3:
        raise ValueError("expected a (3, K+4) LLR array")
    k_size = llrs.shape[1] - 4
    if k_size not in _QPP_PARAMS:
        raise ValueError(f"{k_size} is not a valid turbo block size")
    if n_iter < 1:
        raise ValueError("n_iter must be at least 1")
    perm = qpp_permutation(k_size)
    l0, l1, l2 = llrs
    k = k_size

    ls1 = np.concatenate([l0[:k], (l0[k], l2[k], l1[k + 1])])
    lp1 = np.concatenate([l1[:k], (l1[k], l0[k + 1], l2[k + 1])])
    ls2 = np.concatenate([l0[perm], (l0[k + 2], l2[k + 2], l1[k + 3])])
    lp2 = np.concatenate([l2[:k], (l1[k + 2], l0[k + 3], l2[k + 3])])

    la1 = np.zeros(k)
    la1_new = np.empty(k)
    for _ in range(n_iter):
        lapp1 = _max_log_map(ls1, lp1, la1, _NEXT, _PAR)
        le1 = lapp1 - ls1[:k] - la1
        la2 = le1[perm]
        lapp2 = _max_log_map(ls2, lp2, la2, _NEXT, _PAR)
        le2 = lapp2 - ls2[:k] - la2
        la1_new[perm] = le2
        la1, la1_new = la1_new, la1

    lapp = np.empty(k)
    lapp[perm] = lapp2
    bits = (lapp < 0).astype(np.uint8)
    hint = bool(np.array_equal(bits, (lapp1 < 0).astype(np.uint8)))
    return bits, hint

"""Image and sequence quality metrics.

blocking_score: no-reference spectral measure of 8-periodic block edges.
The image's difference signals are modeled as a smooth background plus a
periodic blocky component. Block edges concentrate difference energy at
every 8th sample regardless of jump sign, so the rectified difference
magnitude carries the periodicity; averaged periodograms expose it as peaks
at multiples of 1/8, and the score is the mean peak power above a
median-smoothed baseline.

blur_score: DCT-occurrence measure. A frequency position is active when its
coefficient is non-negligible in enough 8x8 blocks; blur is the weighted
fraction of (non-lowest-frequency) positions that are globally inactive.

psnr / ssim: standard full-reference measures on the luma plane.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.fft
import scipy.ndimage
import scipy.signal

from lte_video_sim.video import (
    BlockCodecConfig,
    VideoSequence,
    _to_blocks,
    frame_bits,
    frame_luma_coeffs,
)

BLOCKING_WINDOW = 256
BLOCKING_MEDIAN_WIDTH = 9
BLOCKING_PEAK_NEIGHBORHOOD = 1
BLUR_COEFF_THRESHOLD = 1.0
BLUR_OCCURRENCE_FRACTION = 0.01
SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
LOG_BLOCKING_FLOOR = 1e-12


def metric_params() -> dict[str, float]:
    """Constants that pin down the scores, echoed into result headers."""
    return {
        "blocking_window": BLOCKING_WINDOW,
        "blocking_median_width": BLOCKING_MEDIAN_WIDTH,
        "blocking_peak_neighborhood": BLOCKING_PEAK_NEIGHBORHOOD,
        "blur_coeff_threshold": BLUR_COEFF_THRESHOLD,
        "blur_occurrence_fraction": BLUR_OCCURRENCE_FRACTION,
        "ssim_window": SSIM_WINDOW,
        "ssim_sigma": SSIM_SIGMA,
        "log_blocking_floor": LOG_BLOCKING_FLOOR,
    }


def _averaged_periodogram(rows: np.ndarray, window: int) -> np.ndarray:
    """Half-overlap periodograms pooled over rows and segments.

    Segments are rectangular: the window length is a multiple of the block
    period, so a periodic edge train lands in single DFT bins that a 9-bin
    median can reject, where a tapered window would smear them across it.
    """
    length = rows.shape[1]
    hop = window // 2
    starts = list(range(0, length - window + 1, hop))
    if starts[-1] != length - window:
        starts.append(length - window)  # flush the tail
    segs = np.stack([rows[:, s : s + window] for s in starts], axis=1)
    spec = np.abs(np.fft.rfft(segs, axis=-1)) ** 2 / window
    return spec.reshape(-1, spec.shape[-1]).mean(axis=0)


def _difference_blockiness(diff: np.ndarray, block_period: int) -> float:
    length = diff.shape[1]
    window = BLOCKING_WINDOW
    while window > length:
        window //= 2
    psd = _averaged_periodogram(diff, window)
    logp = np.log10(np.maximum(psd, 1e-300))
    baseline = 10.0 ** scipy.ndimage.median_filter(
        logp, size=BLOCKING_MEDIAN_WIDTH, mode="nearest"
    )
    nyquist = window // 2
    excesses = []
    for i in range(1, block_period // 2 + 1):
        center = round(i * window / block_period)
        lo = max(center - BLOCKING_PEAK_NEIGHBORHOOD, 0)
        hi = min(center + BLOCKING_PEAK_NEIGHBORHOOD, nyquist)
        j = lo + int(np.argmax(psd[lo : hi + 1]))
        excess = max(psd[j] - baseline[j], 0.0)
        # the Nyquist harmonic appears once in the spectrum, not twice
        excesses.append(0.5 * excess if center == nyquist else excess)
    return float(sum(excesses) / (block_period / 2 - 0.5))


def blocking_score(img: np.ndarray, block_period: int = 8) -> float:
    """Mean spectral power excess at block-edge harmonics, >= 0."""
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 2:
        raise ValueError("expected a 2-D luma array")
    if min(img.shape) < 2 * block_period:
        raise ValueError(f"image sides must be at least {2 * block_period}")
    # rectify: edge energy is 8-periodic whichever way each jump points
    dh = np.abs(np.diff(img, axis=1))
    dv = np.abs(np.diff(img, axis=0)).T
    if not (dh.any() or dv.any()):
        return 0.0
    return 0.5 * (
        _difference_blockiness(dh, block_period) + _difference_blockiness(dv, block_period)
    )


def _blur_from_coeffs(coeffs: np.ndarray, threshold: float, occurrence: float) -> float:
    """Score the (n_blocks, 8, 8) coefficient occurrence histogram."""
    counts = np.sum(np.abs(coeffs) > threshold, axis=0)
    min_count = max(1, math.ceil(occurrence * coeffs.shape[0]))
    active = counts >= min_count
    u, v = np.mgrid[0:8, 0:8]
    considered = u + v >= 2  # DC and the two lowest AC positions carry no blur cue
    weights = (15 - (u + v)) * considered
    return float(np.sum(weights * ~active) / np.sum(weights))


def blur_score(
    img: np.ndarray,
    threshold: float = BLUR_COEFF_THRESHOLD,
    occurrence: float = BLUR_OCCURRENCE_FRACTION,
) -> float:
    """Weighted fraction of globally inactive DCT frequencies, in [0, 1]."""
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 2 or min(img.shape) < 8:
        raise ValueError("expected a 2-D luma array at least 8x8")
    blocks = _to_blocks(img)
    coeffs = scipy.fft.dctn(blocks, type=2, norm="ortho", axes=(1, 2))
    return _blur_from_coeffs(coeffs, threshold, occurrence)


def blur_score_payload(
    bits: np.ndarray,
    codec: BlockCodecConfig,
    width: int,
    height: int,
    threshold: float = BLUR_COEFF_THRESHOLD,
    occurrence: float = BLUR_OCCURRENCE_FRACTION,
) -> float:
    """Blur of one coded frame judged from its received DCT coefficients.

    The occurrence histogram is read straight off the (possibly corrupted)
    quantized coefficient stream, the compressed-domain view: corruption
    changes coefficient values but cannot move energy outside the codec's
    frequency support, which is what this metric measures.
    """
    coeffs = frame_luma_coeffs(bits, codec, width, height).reshape(-1, 8, 8)
    return _blur_from_coeffs(coeffs, threshold, occurrence)


def psnr(ref: np.ndarray, test: np.ndarray) -> float:
    ref = np.asarray(ref, dtype=np.float64)
    test = np.asarray(test, dtype=np.float64)
    if ref.shape != test.shape:
        raise ValueError("images must share dimensions")
    mse = float(np.mean((ref - test) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(255.0**2 / mse)


def _ssim_kernel() -> np.ndarray:
    half = SSIM_WINDOW // 2
    g = np.exp(-np.arange(-half, half + 1) ** 2 / (2 * SSIM_SIGMA**2))
    g /= g.sum()
    return np.outer(g, g)

_SSIM_KERNEL = _ssim_kernel()


def ssim(ref: np.ndarray, test: np.ndarray) -> float:
    """Mean structural similarity over the valid (unpadded) window region."""
    ref = np.asarray(ref, dtype=np.float64)
    test = np.asarray(test, dtype=np.float64)
    if ref.shape != test.shape:
        raise ValueError("images must share dimensions")
    if min(ref.shape) < SSIM_WINDOW:
        raise ValueError(f"images must be at least {SSIM_WINDOW} per side")
    c1 = (0.01 * 255) ** 2
    c2 = (0.03 * 255) ** 2

    def smooth(x):
        return scipy.signal.convolve2d(x, _SSIM_KERNEL, mode="valid")

    mu1, mu2 = smooth(ref), smooth(test)
    s11 = smooth(ref * ref) - mu1 * mu1
    s22 = smooth(test * test) - mu2 * mu2
    s12 = smooth(ref * test) - mu1 * mu2
    num = (2 * mu1 * mu2 + c1) * (2 * s12 + c2)
    den = (mu1**2 + mu2**2 + c1) * (s11 + s22 + c2)
    return float(np.mean(num / den))


@dataclass(frozen=True)
class QualityReport:
    """Per-frame luma scores plus mean/median aggregates."""

    blocking: tuple[float, ...]
    blocking_log10: tuple[float, ...]
    blur: tuple[float, ...]
    psnr_db: tuple[float, ...]
    ssim: tuple[float, ...]

    _METRICS = ("blocking", "blocking_log10", "blur", "psnr_db", "ssim")

    def mean(self, metric: str) -> float:
        return float(np.mean(self._values(metric)))

    def median(self, metric: str) -> float:
        return float(np.median(self._values(metric)))

    def _values(self, metric: str) -> tuple[float, ...]:
        if metric not in self._METRICS:
            raise ValueError(f"metric must be one of {self._METRICS}")
        return getattr(self, metric)


def score_sequence(
    ref_seq: VideoSequence,
    test_seq: VideoSequence,
    block_period: int = 8,
    payload_bits: np.ndarray | None = None,
    codec: BlockCodecConfig | None = None,
) -> QualityReport:
    """Score a received sequence against its source, luma plane only.

    When the received coded payload and codec are supplied, blur is judged
    in the compressed domain (blur_score_payload); otherwise from pixels.
    """
    if len(ref_seq) != len(test_seq):
        raise ValueError("sequences must have the same frame count")
    if (ref_seq.width, ref_seq.height) != (test_seq.width, test_seq.height):
        raise ValueError("sequences must share dimensions")
    w, h = test_seq.width, test_seq.height
    from_payload = payload_bits is not None and codec is not None and codec.mode == "dct"
    if from_payload:
        per = frame_bits(codec, w, h)
        payload_bits = np.asarray(payload_bits).reshape(-1)
        if payload_bits.size != per * len(test_seq):
            raise ValueError("payload length does not match the sequence")
    blocking, blur, psnrs, ssims = [], [], [], []
    for i, (rf, tf) in enumerate(zip(ref_seq.frames, test_seq.frames)):
        blocking.append(blocking_score(tf.y, block_period))
        if from_payload:
            blur.append(blur_score_payload(payload_bits[i * per : (i + 1) * per], codec, w, h))
        else:
            blur.append(blur_score(tf.y))
        psnrs.append(psnr(rf.y, tf.y))
        ssims.append(ssim(rf.y, tf.y))
    logs = tuple(math.log10(max(b, LOG_BLOCKING_FLOOR)) for b in blocking)
    return QualityReport(tuple(blocking), logs, tuple(blur), tuple(psnrs), tuple(ssims))

import math

import numpy as np
import pytest
from scipy.ndimage import gaussian_filter

from lte_video_sim import (
    BlockCodecConfig,
    QualityReport,
    blocking_score,
    blur_score,
    blur_score_payload,
    make_sequence,
    psnr,
    score_sequence,
    ssim,
)
from lte_video_sim.metrics import LOG_BLOCKING_FLOOR, metric_params
from lte_video_sim.video import encode_frame, encode_sequence


def _blocky(rng, h=128, w=128, period=8):
    tiles = rng.integers(40, 216, (h // period, w // period))
    return np.kron(tiles, np.ones((period, period))).astype(np.float64)


def test_blocking_zero_for_flat_images():
    assert blocking_score(np.full((64, 64), 7.0)) == 0.0


def test_blocking_fires_on_8_periodic_tiles_only():
    rng = np.random.default_rng(50)
    img = _blocky(rng)
    on_grid = blocking_score(img, block_period=8)
    assert on_grid > 0
    # the same tiling scored against a 7-pixel grid has no harmonic lineup
    off_grid = blocking_score(img, block_period=7)
    assert on_grid > 10 * off_grid


def test_blocking_is_transpose_invariant():
    rng = np.random.default_rng(51)
    img = _blocky(rng) + rng.normal(0, 2, (128, 128))
    assert blocking_score(img) == pytest.approx(blocking_score(img.T), rel=1e-12)


def test_blocking_grows_with_edge_strength():
    rng = np.random.default_rng(52)
    base = rng.normal(0, 1, (128, 128)) + 100
    weak = base.copy()
    strong = base.copy()
    for edge in range(8, 128, 8):
        weak[:, edge:] += 3
        strong[:, edge:] += 30
    assert blocking_score(strong) > blocking_score(weak) > blocking_score(base)


def test_blocking_rejects_small_or_non_2d_input():
    with pytest.raises(ValueError):
        blocking_score(np.zeros((8, 64)))
    with pytest.raises(ValueError):
        blocking_score(np.zeros(64))


def test_blur_bounds_and_flat_extreme():
    rng = np.random.default_rng(53)
    sharp = rng.integers(0, 256, (96, 96)).astype(np.float64)
    assert 0.0 <= blur_score(sharp) < 0.2
    assert blur_score(np.full((64, 64), 128.0)) == 1.0


def test_blur_increases_under_smoothing():
    rng = np.random.default_rng(54)
    img = rng.integers(0, 256, (128, 128)).astype(np.float64)
    assert blur_score(gaussian_filter(img, 2.0)) > blur_score(img)


def test_payload_blur_of_an_active_stream_is_the_codec_floor():
    # with every kept coefficient active the score is exactly the weight
    # share of the frequencies the codec never transmits
    rng = np.random.default_rng(55)
    cfg = BlockCodecConfig()
    bits = rng.integers(0, 2, 23040, dtype=np.uint8)
    assert blur_score_payload(bits, cfg, 96, 80) == pytest.approx(317 / 469, abs=1e-12)


def test_payload_blur_agrees_with_pixel_blur_on_what_it_measures():
    frame = make_sequence("desk", 96, 80, 1).frames[0]
    cfg = BlockCodecConfig()
    score = blur_score_payload(encode_frame(frame, cfg), cfg, 96, 80)
    assert 317 / 469 <= score <= 1.0


def test_psnr_closed_forms():
    zeros = np.zeros((16, 16))
    assert psnr(zeros, zeros) == math.inf
    assert psnr(zeros, np.full((16, 16), 255.0)) == 0.0
    assert psnr(zeros, np.ones((16, 16))) == 10 * math.log10(255.0**2)


def test_psnr_shape_mismatch():
    with pytest.raises(ValueError):
        psnr(np.zeros((4, 4)), np.zeros((4, 5)))


def test_ssim_identity_and_symmetry():
    rng = np.random.default_rng(56)
    a = rng.integers(0, 256, (32, 32)).astype(np.float64)
    b = a + rng.normal(0, 12, a.shape)
    assert ssim(a, a) == pytest.approx(1.0, abs=1e-12)
    assert ssim(a, b) == pytest.approx(ssim(b, a), rel=1e-12)
    assert ssim(a, b) < 1.0


def test_ssim_needs_a_full_window():
    with pytest.raises(ValueError):
        ssim(np.zeros((10, 10)), np.zeros((10, 10)))


def test_score_sequence_aggregates_per_frame():
    seq = make_sequence("ripple", 96, 80, 3)
    report = score_sequence(seq, seq)
    assert len(report.blocking) == 3
    assert report.ssim == (1.0, 1.0, 1.0)
    assert all(p == math.inf for p in report.psnr_db)
    assert report.mean("ssim") == 1.0
    assert report.median("blocking") == pytest.approx(sorted(report.blocking)[1])
    for b, lb in zip(report.blocking, report.blocking_log10):
        assert lb == pytest.approx(math.log10(max(b, LOG_BLOCKING_FLOOR)))
    with pytest.raises(ValueError):
        report.mean("sharpness")


def test_score_sequence_payload_blur_path():
    cfg = BlockCodecConfig()
    seq = make_sequence("desk", 96, 80, 2)
    bits = encode_sequence(seq, cfg)
    report = score_sequence(seq, seq, payload_bits=bits, codec=cfg)
    direct = blur_score_payload(bits[:23040], cfg, 96, 80)
    assert report.blur[0] == pytest.approx(direct, rel=1e-12)
    with pytest.raises(ValueError):
        score_sequence(seq, seq, payload_bits=bits[:-1], codec=cfg)


def test_score_sequence_shape_checks():
    a = make_sequence("desk", 96, 80, 2)
    b = make_sequence("desk", 96, 80, 3)
    with pytest.raises(ValueError):
        score_sequence(a, b)
    c = make_sequence("desk", 48, 48, 2)
    with pytest.raises(ValueError):
        score_sequence(a, c)


def test_metric_params_exports_the_knobs():
    params = metric_params()
    assert params["blocking_window"] == 256
    assert params["ssim_window"] == 11
    assert all(isinstance(v, (int, float)) for v in params.values())

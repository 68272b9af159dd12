import numpy as np
import pytest

from lte_video_sim import (
    BlockCodecConfig,
    Frame,
    VideoSequence,
    decode_sequence,
    encode_sequence,
    make_sequence,
    psnr,
    read_yuv,
    reassemble,
    segment,
    write_yuv,
)
from lte_video_sim.video import (
    ZIGZAG,
    decode_frame,
    encode_frame,
    frame_bits,
    locate_bit,
)


def _seq(kind="desk", w=96, h=80, n=2):
    return make_sequence(kind, w, h, n)


def test_zigzag_is_the_standard_scan():
    assert ZIGZAG.size == 64
    assert np.array_equal(np.sort(ZIGZAG), np.arange(64))
    assert list(ZIGZAG[:10]) == [0, 1, 8, 16, 9, 2, 3, 10, 17, 24]
    assert ZIGZAG[-1] == 63


def test_frame_geometry_validation():
    y = np.zeros((16, 16), dtype=np.uint8)
    c = np.zeros((8, 8), dtype=np.uint8)
    Frame(y, c, c)
    with pytest.raises(ValueError):
        Frame(np.zeros((15, 16), dtype=np.uint8), c, c)
    with pytest.raises(ValueError):
        Frame(y, c, np.zeros((4, 4), dtype=np.uint8))


def test_yuv_roundtrip_through_bytes_and_files(tmp_path):
    seq = _seq()
    data = write_yuv(seq)
    assert len(data) == 96 * 80 * 3 // 2 * len(seq)
    back = read_yuv(data, 96, 80)
    assert len(back) == len(seq)
    for a, b in zip(seq.frames, back.frames):
        for pa, pb in zip(a.planes(), b.planes()):
            assert np.array_equal(pa, pb)
    path = tmp_path / "clip.yuv"
    write_yuv(seq, path)
    assert write_yuv(read_yuv(path, 96, 80)) == data


def test_read_yuv_rejects_truncated_streams():
    seq = _seq(n=1)
    data = write_yuv(seq)
    with pytest.raises(ValueError, match="trailing"):
        read_yuv(data[:-10], 96, 80)
    with pytest.raises(ValueError):
        read_yuv(b"", 96, 80)


def test_frame_bits_formula():
    cfg = BlockCodecConfig()
    # CIF: 1584 luma + 2*396 chroma blocks, 16 coeffs * 8 bits each
    assert frame_bits(cfg, 352, 288) == 304128
    assert frame_bits(cfg, 96, 80) == (120 + 30 + 30) * 128
    assert frame_bits(BlockCodecConfig(mode="raw"), 96, 80) == 96 * 80 * 12


def test_encode_is_fixed_rate_and_deterministic():
    cfg = BlockCodecConfig()
    seq = _seq()
    bits = encode_sequence(seq, cfg)
    assert bits.size == frame_bits(cfg, 96, 80) * len(seq)
    assert set(np.unique(bits)) <= {0, 1}
    assert np.array_equal(bits, encode_sequence(seq, cfg))


def test_codec_roundtrip_quality():
    cfg = BlockCodecConfig()
    seq = _seq("ripple")
    out = decode_sequence(encode_sequence(seq, cfg), cfg, 96, 80, len(seq))
    for a, b in zip(seq.frames, out.frames):
        assert psnr(a.y, b.y) > 30.0


def test_coarser_quantization_costs_fidelity():
    frame = _seq("desk", n=1).frames[0]
    scores = []
    for step in (4.0, 16.0, 64.0):
        cfg = BlockCodecConfig(quant_step=step)
        scores.append(psnr(frame.y, decode_frame(encode_frame(frame, cfg), cfg, 96, 80).y))
    assert scores[0] > scores[1] > scores[2]


def test_raw_mode_is_lossless():
    cfg = BlockCodecConfig(mode="raw")
    seq = _seq(n=1)
    out = decode_sequence(encode_sequence(seq, cfg), cfg, 96, 80, 1)
    for pa, pb in zip(seq.frames[0].planes(), out.frames[0].planes()):
        assert np.array_equal(pa, pb)


def test_decode_rejects_wrong_payload_size():
    cfg = BlockCodecConfig()
    with pytest.raises(ValueError):
        decode_frame(np.zeros(100, dtype=np.uint8), cfg, 96, 80)


def test_bit_corruption_stays_in_its_block():
    cfg = BlockCodecConfig()
    frame = _seq("desk", n=1).frames[0]
    bits = encode_frame(frame, cfg)
    clean = decode_frame(bits, cfg, 96, 80)

    bit = 5 * 128 + 3  # inside luma block number 5
    corrupted = bits.copy()
    corrupted[bit] ^= 1
    dirty = decode_frame(corrupted, cfg, 96, 80)

    _, plane, row, col = locate_bit(cfg, 96, 80, bit)
    assert plane == "y" and (row, col) == (0, 5)
    diff = clean.y.astype(int) != dirty.y.astype(int)
    ys, xs = np.nonzero(diff)
    assert diff.any()
    assert ys.min() >= row * 8 and ys.max() < row * 8 + 8
    assert xs.min() >= col * 8 and xs.max() < col * 8 + 8
    assert np.array_equal(clean.u, dirty.u) and np.array_equal(clean.v, dirty.v)


def test_locate_bit_walks_the_planes():
    cfg = BlockCodecConfig()
    per = frame_bits(cfg, 96, 80)
    assert locate_bit(cfg, 96, 80, 0) == (0, "y", 0, 0)
    assert locate_bit(cfg, 96, 80, 120 * 128) == (0, "u", 0, 0)
    assert locate_bit(cfg, 96, 80, per) == (1, "y", 0, 0)
    assert locate_bit(cfg, 96, 80, per - 1) == (0, "v", 4, 5)


def test_segment_reassemble_roundtrip():
    rng = np.random.default_rng(40)
    bits = rng.integers(0, 2, 10_000, dtype=np.uint8)
    payloads, pmap = segment(bits, 1000)
    assert pmap.n_payloads == 10 and pmap.filler_bits == 0
    assert np.array_equal(reassemble(payloads, pmap), bits)

    payloads, pmap = segment(bits[:9_500], 1000)
    assert pmap.n_payloads == 10 and pmap.filler_bits == 500
    assert not payloads[-1][500:].any()
    assert pmap.bit_range(9) == (9_000, 9_500)
    assert np.array_equal(reassemble(payloads, pmap), bits[:9_500])


def test_reassemble_validation():
    bits = np.ones(100, dtype=np.uint8)
    payloads, pmap = segment(bits, 30)
    with pytest.raises(ValueError):
        reassemble(payloads[:-1], pmap)
    with pytest.raises(ValueError):
        reassemble([p[:-1] for p in payloads], pmap)


def test_sequence_requires_consistent_frames():
    a = _seq(n=1).frames[0]
    b = _seq(w=48, h=48, n=1).frames[0]
    with pytest.raises(ValueError):
        VideoSequence((a, b))
    with pytest.raises(ValueError):
        VideoSequence(())

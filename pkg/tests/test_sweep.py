import math

import numpy as np
import pytest

from lte_video_sim import (
    emit_csv,
    emit_phy_csv,
    parse_config,
    run_phy_sweep,
    run_sweep,
    score_sequence,
)
from lte_video_sim.config import VideoEntry
from lte_video_sim.sweep import (
    PHY_FIELDS,
    RECORD_FIELDS,
    _load_source,
    clean_baseline,
    score_point,
    sweep_points,
)

CFG = """\
ebno_db = 30
harq = 1
modulation = 16qam
code_rate = 2/3
ofdm = n128
channel = epa
fading = static
block_size = 1024
master_seed = 7

[video]
name = clip
path = {path}
width = 96
height = 80
frames = 2
"""


@pytest.fixture(scope="module")
def small_cfg(test_videos):
    return parse_config(CFG.format(path=test_videos / "ripple_small.yuv"))


def test_sweep_points_enumerate_the_product():
    cfg = parse_config(
        "ebno_db = 0, 2\nharq = 1, 2\nmodulation = qpsk, 16qam\n"
        "[video]\npath = a.yuv\nwidth = 96\nheight = 80\n"
        "[video]\npath = b.yuv\nwidth = 96\nheight = 80\n"
    )
    points = sweep_points(cfg)
    assert len(points) == 16
    assert [p.index for p in points] == list(range(16))
    assert points[0].video.name == "a" and points[0].modulation == "qpsk"
    assert points[0].ebno_db == 0.0 and points[1].ebno_db == 2.0
    assert points[-1].video.name == "b" and points[-1].modulation == "16qam"
    phy = sweep_points(cfg, with_video=False)
    assert len(phy) == 8 and all(p.video is None for p in phy)


def test_load_source_trims_and_validates(test_videos):
    entry = VideoEntry("c", str(test_videos / "ripple_small.yuv"), 96, 80, 1)
    assert len(_load_source(entry)) == 1
    entry_all = VideoEntry("c", str(test_videos / "ripple_small.yuv"), 96, 80, 0)
    assert len(_load_source(entry_all)) == 2
    too_many = VideoEntry("c", str(test_videos / "ripple_small.yuv"), 96, 80, 9)
    with pytest.raises(ValueError, match="frames"):
        _load_source(too_many)


def test_clean_channel_point_is_transparent(small_cfg):
    record, report = score_point(small_cfg, sweep_points(small_cfg)[0])
    assert record.blocks_total == 47  # ceil(2 * 23040 / 1000)
    assert record.blocks_failed == 0
    assert record.residual_ber == 0.0
    assert record.ssim_mean == 1.0
    assert math.isinf(record.psnr_mean_db)
    assert record.wall_time_s == 0.0
    assert record.code_rate == "2/3" and record.seed == 7

    entry = small_cfg.videos[0]
    _, reference = clean_baseline(entry, small_cfg.codec)
    base = score_sequence(reference, reference)
    assert record.blocking_mean == pytest.approx(base.mean("blocking"), abs=1e-12)
    assert report.median("blocking_log10") == pytest.approx(
        base.median("blocking_log10"), abs=1e-12
    )


def test_identical_reruns_are_bit_identical(small_cfg):
    first = run_sweep(small_cfg)
    second = run_sweep(small_cfg)
    assert first == second


def test_thread_pool_matches_sequential(small_cfg):
    assert run_sweep(small_cfg, threads=2) == run_sweep(small_cfg)


def test_run_sweep_requires_videos():
    cfg = parse_config("ebno_db = 1\n")
    with pytest.raises(ValueError, match="video"):
        run_sweep(cfg)


def test_phy_sweep_counts_failures(small_cfg):
    import dataclasses

    cfg = dataclasses.replace(small_cfg, ebno_db_list=(30.0, -10.0), phy_blocks=8)
    records = run_phy_sweep(cfg)
    assert len(records) == 2
    clean, jammed = records
    assert clean.blocks_total == 8 and clean.blocks_failed == 0
    assert clean.bler == 0.0 and clean.residual_ber == 0.0
    assert jammed.blocks_failed == 8 and jammed.bler == 1.0
    assert jammed.residual_ber > 0.1
    assert run_phy_sweep(cfg) == records


def test_csv_format(small_cfg, tmp_path):
    records = run_sweep(small_cfg)
    out = tmp_path / "r.csv"
    emit_csv(records, out, small_cfg)
    text = out.read_text()
    lines = text.splitlines()
    header = [l for l in lines if l.startswith("#")]
    body = [l for l in lines if not l.startswith("#")]
    assert header[0] == "# config:"
    assert any("master_seed = 7" in l for l in header)
    assert any(l.startswith("# metrics:") for l in header)
    assert body[0] == ",".join(RECORD_FIELDS)
    assert len(body) == 1 + len(records)
    row = body[1].split(",")
    assert row[0] == "clip"
    assert row[RECORD_FIELDS.index("psnr_mean_db")] == "inf"
    assert row[RECORD_FIELDS.index("ssim_mean")] == "1"
    # floats carry six significant digits
    idx = RECORD_FIELDS.index("blocking_mean")
    assert row[idx] == f"{records[0].blocking_mean:.6g}"


def test_phy_csv_format(small_cfg, tmp_path):
    records = run_phy_sweep(small_cfg)
    out = tmp_path / "p.csv"
    emit_phy_csv(records, out, small_cfg)
    body = [l for l in out.read_text().splitlines() if not l.startswith("#")]
    assert body[0] == ",".join(PHY_FIELDS)
    assert len(body) == 2


def test_emit_csv_overwrites_atomically(small_cfg, tmp_path):
    records = run_sweep(small_cfg)
    out = tmp_path / "r.csv"
    emit_csv(records, out, small_cfg)
    first = out.read_bytes()
    emit_csv(records, out, small_cfg)
    assert out.read_bytes() == first
    assert not list(tmp_path.glob("*.tmp*"))

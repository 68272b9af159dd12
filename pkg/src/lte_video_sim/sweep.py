"""Deterministic Monte-Carlo sweeps over (video x modulation x HARQ x EbNo).

Every (sweep point, transport block) pair gets its own RNG stream derived
from the master seed, so results are byte-identical however the points are
scheduled: sequentially, or across a process pool.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from lte_video_sim.channel import (
    awgn_profile,
    epa_profile,
    noise_variance,
    profile_from_taps,
)
from lte_video_sim.config import ExperimentConfig, VideoEntry
from lte_video_sim.crc import crc24a_attach
from lte_video_sim.harq import run_harq
from lte_video_sim.link import AirlinkConfig, make_block_channel
from lte_video_sim.metrics import metric_params, score_sequence
from lte_video_sim.modulation import bits_per_symbol
from lte_video_sim.ofdm import preset
from lte_video_sim.video import (
    VideoSequence,
    decode_sequence,
    encode_sequence,
    frame_bits,
    read_yuv,
    reassemble,
    segment,
    write_yuv,
)

RECORD_FIELDS = (
    "video",
    "ebno_db",
    "harq_max",
    "modulation",
    "code_rate",
    "seed",
    "blocks_total",
    "blocks_failed",
    "residual_ber",
    "blocking_mean",
    "blocking_log10_mean",
    "blur_mean",
    "psnr_mean_db",
    "ssim_mean",
    "wall_time_s",
)

PHY_FIELDS = (
    "ebno_db",
    "harq_max",
    "modulation",
    "code_rate",
    "seed",
    "blocks_total",
    "blocks_failed",
    "bler",
    "residual_ber",
)


@dataclass(frozen=True)
class RunRecord:
    video: str
    ebno_db: float
    harq_max: int
    modulation: str
    code_rate: str
    seed: int
    blocks_total: int
    blocks_failed: int
    residual_ber: float
    blocking_mean: float
    blocking_log10_mean: float
    blur_mean: float
    psnr_mean_db: float
    ssim_mean: float
    wall_time_s: float


@dataclass(frozen=True)
class PhyRecord:
    ebno_db: float
    harq_max: int
    modulation: str
    code_rate: str
    seed: int
    blocks_total: int
    blocks_failed: int
    bler: float
    residual_ber: float


@dataclass(frozen=True)
class SweepPoint:
    index: int
    video: VideoEntry | None
    modulation: str
    harq_max: int
    ebno_db: float


def sweep_points(cfg: ExperimentConfig, with_video: bool = True) -> list[SweepPoint]:
    """Cartesian product of the sweep axes in emission order."""
    points = []
    videos: tuple = cfg.videos if with_video else (None,)
    for video in videos:
        for mod in cfg.modulation_list:
            for harq in cfg.harq_list:
                for ebno in cfg.ebno_db_list:
                    points.append(SweepPoint(len(points), video, mod, harq, ebno))
    return points


def build_profile(cfg: ExperimentConfig):
    rate = preset(cfg.ofdm_preset).sample_rate
    if cfg.channel == "awgn":
        return awgn_profile()
    if cfg.channel == "epa":
        return epa_profile(rate, cfg.fading)
    return profile_from_taps(cfg.channel_taps, rate, cfg.fading)


def _block_rng(master_seed: int, point: int, block: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(point, block)))


def _point_link(cfg: ExperimentConfig, pt: SweepPoint) -> AirlinkConfig:
    nv = noise_variance(pt.ebno_db, float(cfg.code_rate), bits_per_symbol(pt.modulation))
    return AirlinkConfig(pt.modulation, preset(cfg.ofdm_preset), build_profile(cfg), nv)


def _deliver_blocks(
    cfg: ExperimentConfig, pt: SweepPoint, payloads: list[np.ndarray]
) -> tuple[list[np.ndarray], int]:
    """Run each payload block through HARQ; return delivered bits and failures."""
    link = _point_link(cfg, pt)
    e_bits = round(cfg.block_size / cfg.code_rate)
    delivered = []
    failed = 0
    for b, payload in enumerate(payloads):
        rng = _block_rng(cfg.master_seed, pt.index, b)
        info = crc24a_attach(payload)
        channel = make_block_channel(link, rng)
        outcome = run_harq(
            info,
            channel,
            e_bits,
            max_tx=pt.harq_max,
            rv_sequence=cfg.rv_sequence,
            n_iter=cfg.iterations,
        )
        if not outcome.ack:
            failed += 1
        delivered.append(outcome.decoded[: payload.size])
    return delivered, failed


def _load_source(entry: VideoEntry) -> VideoSequence:
    seq = read_yuv(entry.path, entry.width, entry.height)
    if entry.frames:
        if entry.frames > len(seq):
            raise ValueError(
                f"{entry.path} holds {len(seq)} frames, config wants {entry.frames}"
            )
        seq = VideoSequence(seq.frames[: entry.frames])
    return seq


def score_point(
    cfg: ExperimentConfig, pt: SweepPoint, timing: bool = False, dump_dir: str | None = None
):
    """Send one video through one sweep point; return (RunRecord, QualityReport)."""
    t0 = time.perf_counter()
    source = _load_source(pt.video)
    w, h = source.width, source.height
    bits = encode_sequence(source, cfg.codec)
    reference = decode_sequence(bits, cfg.codec, w, h, len(source))

    payloads, pmap = segment(bits, cfg.block_size - 24)
    delivered, failed = _deliver_blocks(cfg, pt, payloads)
    received_bits = reassemble(delivered, pmap)
    residual_ber = float(np.mean(received_bits != bits))
    received = decode_sequence(received_bits, cfg.codec, w, h, len(source))
    report = score_sequence(reference, received, payload_bits=received_bits, codec=cfg.codec)

    if dump_dir is not None:
        name = f"{pt.video.name}_{pt.modulation}_harq{pt.harq_max}_ebno{pt.ebno_db:g}.yuv"
        _atomic_write(Path(dump_dir) / name, write_yuv(received))

    record = RunRecord(
        video=pt.video.name,
        ebno_db=pt.ebno_db,
        harq_max=pt.harq_max,
        modulation=pt.modulation,
        code_rate=str(cfg.code_rate),
        seed=cfg.master_seed,
        blocks_total=len(payloads),
        blocks_failed=failed,
        residual_ber=residual_ber,
        blocking_mean=report.mean("blocking"),
        blocking_log10_mean=report.mean("blocking_log10"),
        blur_mean=report.mean("blur"),
        psnr_mean_db=report.mean("psnr_db"),
        ssim_mean=report.mean("ssim"),
        wall_time_s=time.perf_counter() - t0 if timing else 0.0,
    )
    return record, report


def run_point(
    cfg: ExperimentConfig, pt: SweepPoint, timing: bool = False, dump_dir: str | None = None
) -> RunRecord:
    return score_point(cfg, pt, timing, dump_dir)[0]


def run_phy_point(cfg: ExperimentConfig, pt: SweepPoint) -> PhyRecord:
    """Random-payload diagnostic: BLER/BER per point, no video involved."""
    link = _point_link(cfg, pt)
    e_bits = round(cfg.block_size / cfg.code_rate)
    k_payload = cfg.block_size - 24
    failed = 0
    bit_errors = 0
    for b in range(cfg.phy_blocks):
        rng = _block_rng(cfg.master_seed, pt.index, b)
        payload = rng.integers(0, 2, size=k_payload, dtype=np.int64).astype(np.uint8)
        info = crc24a_attach(payload)
        channel = make_block_channel(link, rng)
        outcome = run_harq(
            info, channel, e_bits,
            max_tx=pt.harq_max, rv_sequence=cfg.rv_sequence, n_iter=cfg.iterations,
        )
        if not outcome.ack:
            failed += 1
        bit_errors += int(np.sum(outcome.decoded[:k_payload] != payload))
    return PhyRecord(
        ebno_db=pt.ebno_db,
        harq_max=pt.harq_max,
        modulation=pt.modulation,
        code_rate=str(cfg.code_rate),
        seed=cfg.master_seed,
        blocks_total=cfg.phy_blocks,
        blocks_failed=failed,
        bler=failed / cfg.phy_blocks,
        residual_ber=bit_errors / (cfg.phy_blocks * k_payload),
    )


def _run_point_task(args):
    cfg, pt, timing, dump_dir = args
    return run_point(cfg, pt, timing, dump_dir)


def _run_phy_task(args):
    cfg, pt = args
    return run_phy_point(cfg, pt)


def run_sweep(
    cfg: ExperimentConfig,
    threads: int = 0,
    timing: bool = False,
    dump_dir: str | None = None,
) -> list[RunRecord]:
    """All sweep points, optionally across a process pool (threads = workers)."""
    if not cfg.videos:
        raise ValueError("config defines no [video] sections")
    for entry in cfg.videos:
        _load_source(entry)  # fail fast on unreadable input
    points = sweep_points(cfg)
    if dump_dir is not None:
        Path(dump_dir).mkdir(parents=True, exist_ok=True)
    tasks = [(cfg, pt, timing, dump_dir) for pt in points]
    if threads <= 0:
        return [_run_point_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_run_point_task, tasks))


def run_phy_sweep(cfg: ExperimentConfig, threads: int = 0) -> list[PhyRecord]:
    points = sweep_points(cfg, with_video=False)
    tasks = [(cfg, pt) for pt in points]
    if threads <= 0:
        return [_run_phy_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_run_phy_task, tasks))


def clean_baseline(entry: VideoEntry, codec) -> tuple[VideoSequence, VideoSequence]:
    """Source sequence and its channel-free encode -> decode reference."""
    source = _load_source(entry)
    bits = encode_sequence(source, codec)
    return source, decode_sequence(bits, codec, source.width, source.height, len(source))


def _format_value(value) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def _atomic_write(path: Path, data: bytes | str) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    if isinstance(data, str):
        tmp.write_text(data)
    else:
        tmp.write_bytes(data)
    os.replace(tmp, path)


def _emit_table(records, fields, path, header_lines) -> None:
    if not records:
        raise ValueError("no records to write")
    lines = [f"# {line}" for line in header_lines]
    lines.append(",".join(fields))
    for rec in records:
        lines.append(",".join(_format_value(getattr(rec, f)) for f in fields))
    _atomic_write(Path(path), "\n".join(lines) + "\n")


def _header_lines(cfg: ExperimentConfig) -> list[str]:
    params = ", ".join(f"{k}={v:g}" for k, v in metric_params().items())
    return ["config:", *("  " + line for line in cfg.echo()), f"metrics: {params}"]


def emit_csv(records: list[RunRecord], path, cfg: ExperimentConfig) -> None:
    """CSV table with a # comment header echoing config and metric params."""
    _emit_table(records, RECORD_FIELDS, path, _header_lines(cfg))


def emit_phy_csv(records: list[PhyRecord], path, cfg: ExperimentConfig) -> None:
    _emit_table(records, PHY_FIELDS, path, _header_lines(cfg))

"""Command-line front end.

Subcommands: `run` executes a config-driven sweep and writes CSV plus SVG
charts, `metrics` scores two raw YUV files against each other, `phy-ber`
measures BLER/BER with random payloads (no video). Exit codes: 0 success,
2 config or usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace
from pathlib import Path

from lte_video_sim.config import ConfigError, ExperimentConfig, load_config
from lte_video_sim.metrics import QualityReport, score_sequence
from lte_video_sim.plotting import X_LABELS, emit_plot
from lte_video_sim.sweep import (
    PHY_FIELDS,
    emit_csv,
    emit_phy_csv,
    run_phy_sweep,
    run_sweep,
)
from lte_video_sim.video import read_yuv

# (csv column, short name used in the svg filename)
_PLOT_METRICS = (("blocking_log10_mean", "blocking"), ("blur_mean", "blur"))


def _fail(message: str) -> None:
    print(f"error: {message}", file=sys.stderr)


def _fmt(value) -> str:
    if isinstance(value, float):
        return str(round(value, 6)) if math.isfinite(value) else str(value)
    return str(value)


def _print_table(header: list[str], rows: list[list[str]]) -> None:
    widths = [max(len(h), *(len(r[i]) for r in rows)) for i, h in enumerate(header)]
    for line in [header] + rows:
        print("  ".join(cell.ljust(w) for cell, w in zip(line, widths)).rstrip())


def _apply_overrides(cfg: ExperimentConfig, args) -> ExperimentConfig:
    if args.seed is not None:
        cfg = replace(cfg, master_seed=args.seed)
    if args.out is not None:
        cfg = replace(cfg, output_dir=args.out)
    return cfg


def _pick_axis(cfg: ExperimentConfig) -> str:
    if len(cfg.ebno_db_list) > 1:
        return "ebno"
    if len(cfg.harq_list) > 1:
        return "harq"
    if len(cfg.modulation_list) > 1:
        return "modulation"
    return "ebno"


def _partitions(cfg: ExperimentConfig, records, x_axis: str):
    """Split records so each chart varies along x_axis only."""
    extra = []
    if x_axis != "ebno" and len(cfg.ebno_db_list) > 1:
        extra.append(("ebno_db", lambda v: f"ebno{v:g}"))
    if x_axis != "harq" and len(cfg.harq_list) > 1:
        extra.append(("harq_max", lambda v: f"harq{v}"))
    if x_axis != "modulation" and len(cfg.modulation_list) > 1:
        extra.append(("modulation", str))
    if not extra:
        return [("", records)]
    groups: dict[tuple, list] = {}
    for rec in records:
        groups.setdefault(tuple(getattr(rec, f) for f, _ in extra), []).append(rec)
    return [
        ("_" + "_".join(fmt(v) for (_, fmt), v in zip(extra, key)), recs)
        for key, recs in groups.items()
    ]


def _cmd_run(args) -> int:
    try:
        cfg = _apply_overrides(load_config(args.config), args)
    except ConfigError as exc:
        _fail(str(exc))
        return 2
    except OSError as exc:
        _fail(str(exc))
        return 3
    if not cfg.videos:
        _fail("config defines no [video] sections")
        return 2
    out_dir = Path(cfg.output_dir)
    stem = Path(args.config).stem
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        records = run_sweep(
            cfg,
            threads=args.threads,
            timing=args.timing,
            dump_dir=str(out_dir) if args.dump_video else None,
        )
        csv_path = out_dir / f"{stem}.csv"
        emit_csv(records, csv_path, cfg)
        written = [csv_path]
        x_axis = _pick_axis(cfg)
        for suffix, group in _partitions(cfg, records, x_axis):
            for metric, short in _PLOT_METRICS:
                svg_path = out_dir / f"{stem}_{short}{suffix}.svg"
                title = f"{metric} vs {X_LABELS[x_axis]}"
                if suffix:
                    title += f" ({suffix[1:]})"
                emit_plot(group, x_axis, metric, svg_path, title=title)
                written.append(svg_path)
    except (OSError, ValueError) as exc:
        _fail(str(exc))
        return 3
    for path in written:
        print(f"wrote {path}")
    return 0


def _report_rows(report: QualityReport) -> tuple[list[str], list[list[str]]]:
    header = ["frame", "blocking", "blocking_log10", "blur", "psnr_db", "ssim"]
    rows = []
    for i in range(len(report.blocking)):
        rows.append(
            [str(i)] + [_fmt(getattr(report, m)[i]) for m in report._METRICS]
        )
    rows.append(["mean"] + [_fmt(report.mean(m)) for m in report._METRICS])
    rows.append(["median"] + [_fmt(report.median(m)) for m in report._METRICS])
    return header, rows


def _cmd_metrics(args) -> int:
    try:
        ref = read_yuv(args.reference, args.width, args.height)
        test = read_yuv(args.test, args.width, args.height)
    except (OSError, ValueError) as exc:
        _fail(str(exc))
        return 3
    try:
        report = score_sequence(ref, test)
    except ValueError as exc:
        _fail(str(exc))
        return 2
    header, rows = _report_rows(report)
    _print_table(header, rows)
    return 0


def _cmd_phy_ber(args) -> int:
    try:
        cfg = _apply_overrides(load_config(args.config), args)
    except ConfigError as exc:
        _fail(str(exc))
        return 2
    except OSError as exc:
        _fail(str(exc))
        return 3
    records = run_phy_sweep(cfg, threads=args.threads)
    out_dir = Path(cfg.output_dir)
    csv_path = out_dir / f"{Path(args.config).stem}_phy.csv"
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        emit_phy_csv(records, csv_path, cfg)
    except OSError as exc:
        _fail(str(exc))
        return 3
    shown = [f for f in PHY_FIELDS if f not in ("code_rate", "seed")]
    print(f"code_rate = {cfg.code_rate}, seed = {cfg.master_seed}")
    _print_table(
        list(shown), [[_fmt(getattr(r, f)) for f in shown] for r in records]
    )
    print(f"wrote {csv_path}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lte-video-sim",
        description="Simulate video transport over a turbo-coded OFDM downlink.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a sweep config, write CSV and SVG charts")
    p_run.add_argument("config", help="experiment config file")
    p_run.add_argument("--seed", type=int, default=None, help="override master_seed")
    p_run.add_argument("--out", default=None, help="override output_dir")
    p_run.add_argument("--threads", type=int, default=0,
                       help="worker processes, 0 runs sequentially")
    p_run.add_argument("--timing", action="store_true",
                       help="record wall time per point (breaks byte reproducibility)")
    p_run.add_argument("--dump-video", action="store_true",
                       help="write each received sequence as raw I420")
    p_run.set_defaults(func=_cmd_run)

    p_met = sub.add_parser("metrics", help="score a test YUV file against a reference")
    p_met.add_argument("reference", help="reference .yuv (raw I420)")
    p_met.add_argument("test", help="test .yuv (raw I420)")
    p_met.add_argument("--width", type=int, required=True)
    p_met.add_argument("--height", type=int, required=True)
    p_met.set_defaults(func=_cmd_metrics)

    p_phy = sub.add_parser("phy-ber", help="BLER/BER sweep with random payloads")
    p_phy.add_argument("config", help="experiment config file")
    p_phy.add_argument("--seed", type=int, default=None, help="override master_seed")
    p_phy.add_argument("--out", default=None, help="override output_dir")
    p_phy.add_argument("--threads", type=int, default=0,
                       help="worker processes, 0 runs sequentially")
    p_phy.set_defaults(func=_cmd_phy_ber)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

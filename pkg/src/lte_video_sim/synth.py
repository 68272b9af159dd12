"""Deterministic synthetic YUV test sequences.

Three content classes with different spatial statistics:

- "desk": head-and-shoulders style scene, large smooth regions, tiny motion
- "ripple": water-like animated texture, dense high-frequency detail
- "pan": detailed static pattern under a constant global pan

All generators are closed-form functions of pixel coordinates and frame
index, so the same (kind, size, frames) always yields identical bytes.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from lte_video_sim.video import Frame, VideoSequence, write_yuv

SEQUENCE_KINDS = ("desk", "ripple", "pan")


def _grids(width: int, height: int) -> tuple[np.ndarray, np.ndarray]:
    y, x = np.mgrid[0:height, 0:width]
    return x.astype(np.float64), y.astype(np.float64)


def _quantize(plane: np.ndarray) -> np.ndarray:
    return np.clip(np.round(plane), 0, 255).astype(np.uint8)


def _desk_luma(width: int, height: int, t: int) -> np.ndarray:
    x, y = _grids(width, height)
    img = 60.0 + 60.0 * y / height  # soft vertical gradient backdrop
    desk = y > 0.72 * height
    img[desk] = 150.0
    # shoulders and head, swaying a couple of pixels over the sequence
    cx = width / 2 + 2.0 * np.sin(2 * np.pi * t / 24)
    cy = height * 0.52
    shoulders = ((x - cx) / (0.30 * width)) ** 2 + ((y - height) / (0.62 * height)) ** 2 < 1
    img[shoulders] = 95.0
    head = ((x - cx) / (0.11 * width)) ** 2 + ((y - cy) / (0.17 * height)) ** 2 < 1
    img[head] = 190.0
    img += 8.0 * np.exp(-(((x - 0.2 * width) ** 2 + (y - 0.25 * height) ** 2) / (0.08 * width * height)))
    return img


def _ripple_luma(width: int, height: int, t: int) -> np.ndarray:
    x, y = _grids(width, height)
    r = np.hypot(x - width / 2, y - height / 2)
    img = (
        128.0
        + 38.0 * np.sin(2 * np.pi * (7.0 * x / width) + 0.31 * t)
        * np.cos(2 * np.pi * (5.0 * y / height) - 0.23 * t)
        + 24.0 * np.sin(2 * np.pi * r / 23.0 - 0.47 * t)
        + 11.0 * np.sin(2 * np.pi * x / 3.1) * np.sin(2 * np.pi * y / 2.7)
    )
    return img


def _pan_luma(width: int, height: int, t: int) -> np.ndarray:
    # static pattern sampled through a drifting viewport; all detail rides on
    # diagonal, raster-incommensurate periods so the content itself carries
    # no energy at the 1/8 block-edge harmonics
    x, y = _grids(width, height)
    xs = x + 2.0 * t
    ys = y + 1.0 * t
    return (
        118.0
        + 42.0 * np.sin(2 * np.pi * (xs + 1.7 * ys) / 23.0)
        + 22.0 * np.sin(2 * np.pi * (1.3 * xs - ys) / 9.7)
        + 26.0 * np.sin(2 * np.pi * xs / 57.0) * np.cos(2 * np.pi * ys / 41.0)
        + 14.0 * np.sin(2 * np.pi * xs * ys / (width * 13.0))
    )


_LUMA = {"desk": _desk_luma, "ripple": _ripple_luma, "pan": _pan_luma}


def make_frame(kind: str, width: int, height: int, t: int) -> Frame:
    if kind not in SEQUENCE_KINDS:
        raise ValueError(f"kind must be one of {SEQUENCE_KINDS}")
    luma = _quantize(_LUMA[kind](width, height, t))
    cw, ch = width // 2, height // 2
    cx, cy = _grids(cw, ch)
    if kind == "desk":
        u = 118.0 + 14.0 * (cy > 0.72 * ch)
        v = 132.0 - 10.0 * (cy > 0.72 * ch)
    elif kind == "ripple":
        u = 140.0 + 12.0 * np.sin(2 * np.pi * cx / cw + 0.2 * t)
        v = 116.0 + 9.0 * np.cos(2 * np.pi * cy / ch - 0.2 * t)
    else:
        u = 120.0 + 16.0 * np.sin(2 * np.pi * (cx + 2.0 * t) / 31.0)
        v = 128.0 + 12.0 * np.cos(2 * np.pi * (cy + 1.0 * t) / 37.0)
    return Frame(luma, _quantize(u), _quantize(v))


def make_sequence(kind: str, width: int, height: int, n_frames: int) -> VideoSequence:
    if width % 2 or height % 2 or width < 16 or height < 16:
        raise ValueError("dimensions must be even and at least 16")
    if n_frames < 1:
        raise ValueError("need at least one frame")
    return VideoSequence(tuple(make_frame(kind, width, height, t) for t in range(n_frames)))


def write_synthetic_video(
    path: str | Path, kind: str, width: int, height: int, n_frames: int
) -> VideoSequence:
    """Generate a sequence and store it as a raw I420 file."""
    seq = make_sequence(kind, width, height, n_frames)
    write_yuv(seq, path)
    return seq

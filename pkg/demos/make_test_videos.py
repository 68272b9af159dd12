"""Generate the raw YUV clips referenced by the shipped configs.

The clips are deterministic closed-form synthetics (no RNG), so regenerating
them always produces byte-identical files. Run from anywhere:

    python demos/make_test_videos.py
"""

from pathlib import Path

from lte_video_sim.synth import write_synthetic_video

CLIPS = (
    ("desk_cif.yuv", "desk", 352, 288, 11),
    ("ripple_cif.yuv", "ripple", 352, 288, 11),
    ("pan_cif.yuv", "pan", 352, 288, 11),
    ("ripple_small.yuv", "ripple", 96, 80, 2),
)


def main() -> None:
    out_dir = Path(__file__).resolve().parent.parent / "videos"
    out_dir.mkdir(exist_ok=True)
    for name, kind, width, height, frames in CLIPS:
        path = out_dir / name
        write_synthetic_video(path, kind, width, height, frames)
        size = path.stat().st_size
        print(f"{path}  {kind} {width}x{height} x{frames} frames  ({size} bytes)")


if __name__ == "__main__":
    main()

from __future__ import annotations

from pathlib import Path

import pytest

from lte_video_sim import write_synthetic_video

REPO_ROOT = Path(__file__).resolve().parent.parent

CLIPS = (
    ("desk_cif.yuv", "desk", 352, 288, 11),
    ("ripple_cif.yuv", "ripple", 352, 288, 11),
    ("pan_cif.yuv", "pan", 352, 288, 11),
    ("ripple_small.yuv", "ripple", 96, 80, 2),
)


@pytest.fixture(scope="session")
def repo_root() -> Path:
    return REPO_ROOT


@pytest.fixture(scope="session", autouse=True)
def test_videos(repo_root: Path) -> Path:
    """The shipped configs reference videos/; synthesize any missing clip."""
    videos = repo_root / "videos"
    videos.mkdir(exist_ok=True)
    for filename, kind, width, height, frames in CLIPS:
        path = videos / filename
        if not path.exists():
            write_synthetic_video(path, kind, width, height, frames)
    return videos


@pytest.fixture(scope="session")
def configs_dir(repo_root: Path) -> Path:
    return repo_root / "configs"

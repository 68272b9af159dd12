"""Plain-text experiment configuration.

Format: `key = value` lines, `#` comments, comma-separated lists, and one
`[video]` section per video entry. Unknown and duplicate keys are errors,
reported with their line number.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from lte_video_sim.channel import FADING_MODES
from lte_video_sim.modulation import SCHEMES
from lte_video_sim.ofdm import PRESETS
from lte_video_sim.turbo import valid_block_sizes
from lte_video_sim.video import CODEC_MODES, BlockCodecConfig

DEFAULTS = {
    "harq": "1",
    "modulation": "16qam",
    "code_rate": "2/3",
    "rv_sequence": "0,2,3,1",
    "ofdm": "n128",
    "channel": "epa",
    "fading": "static",
    "iterations": "8",
    "block_size": "6144",
    "master_seed": "1",
    "output_dir": "results",
    "phy_blocks": "200",
    "quant_step": "8",
    "coeffs_kept": "16",
    "bits_per_coeff": "8",
    "codec_mode": "dct",
}

_GLOBAL_KEYS = frozenset(DEFAULTS) | {"ebno_db", "channel_taps"}
_VIDEO_KEYS = frozenset({"name", "path", "width", "height", "frames"})


class ConfigError(ValueError):
    """Configuration problem, carrying a line number when one applies."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


@dataclass(frozen=True)
class VideoEntry:
    name: str
    path: str
    width: int
    height: int
    frames: int = 0  # 0 = every complete frame in the file


@dataclass(frozen=True)
class ExperimentConfig:
    ebno_db_list: tuple[float, ...]
    harq_list: tuple[int, ...]
    modulation_list: tuple[str, ...]
    code_rate: Fraction
    rv_sequence: tuple[int, ...]
    ofdm_preset: str
    channel: str
    fading: str
    channel_taps: tuple[tuple[float, float], ...] | None
    iterations: int
    block_size: int
    master_seed: int
    output_dir: str
    phy_blocks: int
    codec: BlockCodecConfig
    videos: tuple[VideoEntry, ...] = field(default_factory=tuple)

    def echo(self) -> list[str]:
        """Canonical key = value lines (used in result-file headers)."""

        def num(x) -> str:
            return f"{x:g}"

        lines = [
            "ebno_db = " + ", ".join(num(e) for e in self.ebno_db_list),
            "harq = " + ", ".join(str(h) for h in self.harq_list),
            "modulation = " + ", ".join(self.modulation_list),
            f"code_rate = {self.code_rate}",
            "rv_sequence = " + ", ".join(str(r) for r in self.rv_sequence),
            f"ofdm = {self.ofdm_preset}",
            f"channel = {self.channel}",
            f"fading = {self.fading}",
            f"iterations = {self.iterations}",
            f"block_size = {self.block_size}",
            f"master_seed = {self.master_seed}",
            f"output_dir = {self.output_dir}",
            f"phy_blocks = {self.phy_blocks}",
            f"quant_step = {num(self.codec.quant_step)}",
            f"coeffs_kept = {self.codec.coeffs_kept}",
            f"bits_per_coeff = {self.codec.bits_per_coeff}",
            f"codec_mode = {self.codec.mode}",
        ]
        if self.channel_taps is not None:
            lines.insert(
                7,
                "channel_taps = "
                + ", ".join(f"{num(d)}:{num(p)}" for d, p in self.channel_taps),
            )
        for v in self.videos:
            lines.append(
                f"video = name={v.name} path={v.path} width={v.width} "
                f"height={v.height} frames={v.frames}"
            )
        return lines


def _strip(line: str) -> str:
    """Drop comments: a # at line start or preceded by whitespace."""
    if line.lstrip().startswith("#"):
        return ""
    for i, ch in enumerate(line):
        if ch == "#" and (i == 0 or line[i - 1] in " \t"):
            return line[:i].strip()
    return line.strip()


def _parse_int(raw: str, key: str, line: int) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{key}: {raw!r} is not an integer", line) from None


def _parse_float(raw: str, key: str, line: int) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"{key}: {raw!r} is not a number", line) from None


def _split_list(raw: str) -> list[str]:
    return [part.strip() for part in raw.split(",") if part.strip()]


def parse_config(text: str) -> ExperimentConfig:
    raw: dict[str, tuple[str, int]] = {}
    videos: list[dict[str, tuple[str, int]]] = []
    section: dict[str, tuple[str, int]] | None = None

    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = _strip(line)
        if not stripped:
            continue
        if stripped == "[video]":
            section = {}
            videos.append(section)
            continue
        if stripped.startswith("["):
            raise ConfigError(f"unknown section {stripped!r}", lineno)
        if "=" not in stripped:
            raise ConfigError(f"expected key = value, got {stripped!r}", lineno)
        key, _, value = stripped.partition("=")
        key, value = key.strip(), value.strip()
        if not value:
            raise ConfigError(f"{key}: empty value", lineno)
        target, allowed = (raw, _GLOBAL_KEYS) if section is None else (section, _VIDEO_KEYS)
        if key not in allowed:
            where = "video section" if section is not None else "config"
            raise ConfigError(f"unknown {where} key {key!r}", lineno)
        if key in target:
            raise ConfigError(f"duplicate key {key!r}", lineno)
        target[key] = (value, lineno)

    def take(key: str) -> tuple[str, int]:
        if key in raw:
            return raw[key]
        return DEFAULTS[key], 0

    if "ebno_db" not in raw:
        raise ConfigError("missing required key 'ebno_db'")
    val, ln = raw["ebno_db"]
    ebno = tuple(_parse_float(s, "ebno_db", ln) for s in _split_list(val))
    if not ebno:
        raise ConfigError("ebno_db: empty list", ln)

    val, ln = take("harq")
    harq = tuple(_parse_int(s, "harq", ln) for s in _split_list(val))
    if not harq or any(h < 1 or h > 4 for h in harq):
        raise ConfigError("harq: entries must be integers in 1..4", ln)

    val, ln = take("modulation")
    modulation = tuple(s.lower() for s in _split_list(val))
    if not modulation or any(m not in SCHEMES for m in modulation):
        raise ConfigError(f"modulation: entries must be from {SCHEMES}", ln)

    val, ln = take("code_rate")
    try:
        rate = Fraction(val)
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"code_rate: {val!r} is not a rational", ln) from None
    if not 0 < rate <= 1:
        raise ConfigError("code_rate must be in (0, 1]", ln)

    val, ln = take("rv_sequence")
    rv = tuple(_parse_int(s, "rv_sequence", ln) for s in _split_list(val))
    if not rv or any(r not in (0, 1, 2, 3) for r in rv):
        raise ConfigError("rv_sequence: entries must be in 0..3", ln)

    val, ln = take("ofdm")
    if val not in PRESETS:
        raise ConfigError(f"ofdm: unknown preset {val!r}, have {tuple(PRESETS)}", ln)
    ofdm_preset = val

    val, ln = take("channel")
    channel = val.lower()
    if channel not in ("awgn", "epa", "custom"):
        raise ConfigError("channel must be awgn, epa, or custom", ln)

    taps = None
    if "channel_taps" in raw:
        val, ln = raw["channel_taps"]
        if channel != "custom":
            raise ConfigError("channel_taps only applies to channel = custom", ln)
        parsed = []
        for part in _split_list(val):
            if ":" not in part:
                raise ConfigError(f"channel_taps: {part!r} is not delay_ns:power_db", ln)
            d, _, p = part.partition(":")
            parsed.append((_parse_float(d, "channel_taps", ln), _parse_float(p, "channel_taps", ln)))
        if not parsed:
            raise ConfigError("channel_taps: empty list", ln)
        taps = tuple(parsed)
    elif channel == "custom":
        raise ConfigError("channel = custom requires channel_taps")

    val, ln = take("fading")
    fading = val.lower()
    if fading not in FADING_MODES:
        raise ConfigError(f"fading must be one of {FADING_MODES}", ln)

    val, ln = take("iterations")
    iterations = _parse_int(val, "iterations", ln)
    if iterations < 1:
        raise ConfigError("iterations must be at least 1", ln)

    val, ln = take("block_size")
    block_size = _parse_int(val, "block_size", ln)
    if block_size not in valid_block_sizes():
        raise ConfigError(f"block_size: {block_size} is not a supported size", ln)
    if block_size <= 24:
        raise ConfigError("block_size must exceed the 24-bit CRC", ln)

    val, ln = take("master_seed")
    master_seed = _parse_int(val, "master_seed", ln)
    if not 0 <= master_seed < 2**64:
        raise ConfigError("master_seed must fit in 64 bits", ln)

    output_dir = take("output_dir")[0]

    val, ln = take("phy_blocks")
    phy_blocks = _parse_int(val, "phy_blocks", ln)
    if phy_blocks < 1:
        raise ConfigError("phy_blocks must be at least 1", ln)

    qs_val, qs_ln = take("quant_step")
    ck_val, ck_ln = take("coeffs_kept")
    bc_val, bc_ln = take("bits_per_coeff")
    try:
        codec = BlockCodecConfig(
            quant_step=_parse_float(qs_val, "quant_step", qs_ln),
            coeffs_kept=_parse_int(ck_val, "coeffs_kept", ck_ln),
            bits_per_coeff=_parse_int(bc_val, "bits_per_coeff", bc_ln),
            mode=take("codec_mode")[0].lower(),
        )
    except ValueError as e:
        raise ConfigError(f"codec: {e}") from None

    entries = []
    for section in videos:
        for req in ("path", "width", "height"):
            if req not in section:
                raise ConfigError(f"[video] section missing required key {req!r}")
        path = section["path"][0]
        width = _parse_int(section["width"][0], "width", section["width"][1])
        height = _parse_int(section["height"][0], "height", section["height"][1])
        if width % 2 or height % 2 or width < 16 or height < 16:
            raise ConfigError(
                "video dimensions must be even and at least 16", section["width"][1]
            )
        frames = 0
        if "frames" in section:
            frames = _parse_int(section["frames"][0], "frames", section["frames"][1])
            if frames < 0:
                raise ConfigError("frames must be non-negative", section["frames"][1])
        name = section["name"][0] if "name" in section else Path(path).stem
        entries.append(VideoEntry(name, path, width, height, frames))
    if len({v.name for v in entries}) != len(entries):
        raise ConfigError("video names must be unique")

    return ExperimentConfig(
        ebno_db_list=ebno,
        harq_list=harq,
        modulation_list=modulation,
        code_rate=rate,
        rv_sequence=rv,
        ofdm_preset=ofdm_preset,
        channel=channel,
        fading=fading,
        channel_taps=taps,
        iterations=iterations,
        block_size=block_size,
        master_seed=master_seed,
        output_dir=output_dir,
        phy_blocks=phy_blocks,
        codec=codec,
        videos=tuple(entries),
    )


def load_config(path: str | Path) -> ExperimentConfig:
    """Parse a config file, resolving video paths relative to its directory."""
    path = Path(path)
    cfg = parse_config(path.read_text())
    base = path.parent
    resolved = tuple(
        VideoEntry(v.name, str((base / v.path).resolve()), v.width, v.height, v.frames)
        if not Path(v.path).is_absolute()
        else v
        for v in cfg.videos
    )
    return ExperimentConfig(**{**cfg.__dict__, "videos": resolved})

"""Raw YUV 4:2:0 video I/O, a fixed-rate 8x8 block-DCT intra codec, and
segmentation of codec bitstreams into transport-block payloads.

The codec has no entropy coding: every 8x8 block of every plane encodes to
exactly coeffs_kept * bits_per_coeff bits, so a bit error corrupts the one
coefficient it lands in and stays confined to that block. decode_frame is a
total function; any bit pattern yields a valid frame.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.fft

CODEC_MODES = ("dct", "raw")


def _zigzag_order() -> np.ndarray:
    """Flat row-major indices of the 8x8 zigzag scan."""
    coords = sorted(
        ((r, c) for r in range(8) for c in range(8)),
        key=lambda rc: (rc[0] + rc[1], rc[0] if (rc[0] + rc[1]) % 2 else rc[1]),
    )
    return np.array([r * 8 + c for r, c in coords])

ZIGZAG = _zigzag_order()


@dataclass(frozen=True, eq=False)
class Frame:
    y: np.ndarray
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self) -> None:
        h, w = self.y.shape
        if h % 2 or w % 2:
            raise ValueError("luma dimensions must be even")
        if self.u.shape != (h // 2, w // 2) or self.v.shape != (h // 2, w // 2):
            raise ValueError("chroma planes must be half the luma size")

    @property
    def width(self) -> int:
        return self.y.shape[1]

    @property
    def height(self) -> int:
        return self.y.shape[0]

    def planes(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.y, self.u, self.v


@dataclass(frozen=True, eq=False)
class VideoSequence:
    frames: tuple[Frame, ...]

    def __post_init__(self) -> None:
        if not self.frames:
            raise ValueError("sequence must contain at least one frame")
        w, h = self.frames[0].width, self.frames[0].height
        if any(f.width != w or f.height != h for f in self.frames):
            raise ValueError("all frames must share dimensions")

    @property
    def width(self) -> int:
        return self.frames[0].width

    @property
    def height(self) -> int:
        return self.frames[0].height

    def __len__(self) -> int:
        return len(self.frames)


def read_yuv(source: str | Path | bytes, width: int, height: int) -> VideoSequence:
    """Load a raw planar I420 stream (Y then quarter-size U, V per frame)."""
    data = Path(source).read_bytes() if isinstance(source, (str, Path)) else bytes(source)
    frame_size = width * height * 3 // 2
    if len(data) % frame_size:
        raise ValueError(
            f"truncated stream: {len(data) % frame_size} trailing bytes after "
            f"{len(data) // frame_size} complete {width}x{height} frames"
        )
    n = len(data) // frame_size
    if n == 0:
        raise ValueError("stream holds no complete frame")
    buf = np.frombuffer(data, dtype=np.uint8).reshape(n, frame_size)
    ysz = width * height
    csz = ysz // 4
    frames = []
    for row in buf:
        y = row[:ysz].reshape(height, width)
        u = row[ysz : ysz + csz].reshape(height // 2, width // 2)
        v = row[ysz + csz :].reshape(height // 2, width // 2)
        frames.append(Frame(y, u, v))
    return VideoSequence(tuple(frames))


def write_yuv(seq: VideoSequence, dest: str | Path | None = None) -> bytes:
    out = io.BytesIO()
    for f in seq.frames:
        for plane in f.planes():
            out.write(np.ascontiguousarray(plane, dtype=np.uint8).tobytes())
    data = out.getvalue()
    if dest is not None:
        Path(dest).write_bytes(data)
    return data


@dataclass(frozen=True)
class BlockCodecConfig:
    quant_step: float = 8.0
    coeffs_kept: int = 16
    bits_per_coeff: int = 8
    mode: str = "dct"

    def __post_init__(self) -> None:
        if self.quant_step <= 0:
            raise ValueError("quant_step must be positive")
        if not 1 <= self.coeffs_kept <= 64:
            raise ValueError("coeffs_kept must be in [1, 64]")
        if not 2 <= self.bits_per_coeff <= 16:
            raise ValueError("bits_per_coeff must be in [2, 16]")
        if self.mode not in CODEC_MODES:
            raise ValueError(f"mode must be one of {CODEC_MODES}")


def _plane_dims(width: int, height: int) -> tuple[tuple[int, int], ...]:
    return ((height, width), (height // 2, width // 2), (height // 2, width // 2))


def _n_blocks(h: int, w: int) -> int:
    return -(-h // 8) * -(-w // 8)


def frame_bits(cfg: BlockCodecConfig, width: int, height: int) -> int:
    """Exact encoded size of one frame in bits."""
    if cfg.mode == "raw":
        return width * height * 3 // 2 * 8
    blocks = sum(_n_blocks(h, w) for h, w in _plane_dims(width, height))
    return blocks * cfg.coeffs_kept * cfg.bits_per_coeff


def _to_blocks(plane: np.ndarray) -> np.ndarray:
    """Split into raster-order 8x8 blocks, edge-padding to multiples of 8."""
    h, w = plane.shape
    ph, pw = -(-h // 8) * 8, -(-w // 8) * 8
    if (ph, pw) != (h, w):
        plane = np.pad(plane, ((0, ph - h), (0, pw - w)), mode="edge")
    return (
        plane.reshape(ph // 8, 8, pw // 8, 8).transpose(0, 2, 1, 3).reshape(-1, 8, 8)
    )


def _from_blocks(blocks: np.ndarray, h: int, w: int) -> np.ndarray:
    ph, pw = -(-h // 8) * 8, -(-w // 8) * 8
    plane = (
        blocks.reshape(ph // 8, pw // 8, 8, 8).transpose(0, 2, 1, 3).reshape(ph, pw)
    )
    return plane[:h, :w]


def encode_frame(frame: Frame, cfg: BlockCodecConfig) -> np.ndarray:
    """Encode one frame to its fixed-rate bit sequence (uint8 0/1 array)."""
    if cfg.mode == "raw":
        raw = np.concatenate([p.reshape(-1) for p in frame.planes()])
        return np.unpackbits(raw.astype(np.uint8))
    nbits = cfg.bits_per_coeff
    lo, hi = -(1 << (nbits - 1)), (1 << (nbits - 1)) - 1
    shifts = np.arange(nbits - 1, -1, -1)
    out = []
    for plane in frame.planes():
        blocks = _to_blocks(plane.astype(np.float64) - 128.0)
        coeffs = scipy.fft.dctn(blocks, type=2, norm="ortho", axes=(1, 2))
        zz = coeffs.reshape(-1, 64)[:, ZIGZAG[: cfg.coeffs_kept]]
        q = np.clip(np.round(zz / cfg.quant_step).astype(np.int64), lo, hi)
        codes = q & ((1 << nbits) - 1)  # two's complement
        out.append(((codes[:, :, None] >> shifts) & 1).astype(np.uint8).reshape(-1))
    return np.concatenate(out)


def decode_frame(bits: np.ndarray, cfg: BlockCodecConfig, width: int, height: int) -> Frame:
    """Decode any bit pattern of the right length; errors stay in their block."""
    bits = np.asarray(bits, dtype=np.uint8).reshape(-1)
    want = frame_bits(cfg, width, height)
    if bits.size != want:
        raise ValueError(f"frame payload is {bits.size} bits, expected {want}")
    if cfg.mode == "raw":
        samples = np.packbits(bits)
        planes = []
        pos = 0
        for h, w in _plane_dims(width, height):
            planes.append(samples[pos : pos + h * w].reshape(h, w))
            pos += h * w
        return Frame(*planes)
    nbits = cfg.bits_per_coeff
    weights = 1 << np.arange(nbits - 1, -1, -1)
    sign_bit = 1 << (nbits - 1)
    planes = []
    pos = 0
    for h, w in _plane_dims(width, height):
        nb = _n_blocks(h, w)
        span = nb * cfg.coeffs_kept * nbits
        codes = bits[pos : pos + span].reshape(nb, cfg.coeffs_kept, nbits) @ weights
        pos += span
        q = codes - ((codes & sign_bit) << 1)  # sign-extend
        zz = np.zeros((nb, 64))
        zz[:, ZIGZAG[: cfg.coeffs_kept]] = q * cfg.quant_step
        pix = scipy.fft.idctn(zz.reshape(nb, 8, 8), type=2, norm="ortho", axes=(1, 2))
        pix = np.clip(np.round(pix + 128.0), 0, 255).astype(np.uint8)
        planes.append(_from_blocks(pix, h, w))
    return Frame(*planes)


def frame_luma_coeffs(bits: np.ndarray, cfg: BlockCodecConfig, width: int, height: int) -> np.ndarray:
    """Dequantized luma DCT coefficients carried by one frame's payload.

    Returns an (n_blocks, 64) array in zigzag-inverse (row-major frequency)
    layout with the untransmitted positions zero. Only meaningful in dct
    mode; raw payloads carry no transform coefficients.
    """
    if cfg.mode != "dct":
        raise ValueError("raw payloads carry no DCT coefficients")
    bits = np.asarray(bits, dtype=np.uint8).reshape(-1)
    want = frame_bits(cfg, width, height)
    if bits.size != want:
        raise ValueError(f"frame payload is {bits.size} bits, expected {want}")
    nbits = cfg.bits_per_coeff
    weights = 1 << np.arange(nbits - 1, -1, -1)
    nb = _n_blocks(height, width)
    span = nb * cfg.coeffs_kept * nbits
    codes = bits[:span].reshape(nb, cfg.coeffs_kept, nbits) @ weights
    q = codes - ((codes & (1 << (nbits - 1))) << 1)
    out = np.zeros((nb, 64))
    out[:, ZIGZAG[: cfg.coeffs_kept]] = q * cfg.quant_step
    return out


def encode_sequence(seq: VideoSequence, cfg: BlockCodecConfig) -> np.ndarray:
    return np.concatenate([encode_frame(f, cfg) for f in seq.frames])


def decode_sequence(
    bits: np.ndarray, cfg: BlockCodecConfig, width: int, height: int, n_frames: int
) -> VideoSequence:
    per = frame_bits(cfg, width, height)
    bits = np.asarray(bits).reshape(-1)
    if bits.size != per * n_frames:
        raise ValueError(f"sequence payload is {bits.size} bits, expected {per * n_frames}")
    return VideoSequence(
        tuple(decode_frame(bits[i * per : (i + 1) * per], cfg, width, height) for i in range(n_frames))
    )


def locate_bit(cfg: BlockCodecConfig, width: int, height: int, bit: int) -> tuple[int, str, int, int]:
    """Map a sequence bit offset to (frame, plane name, block row, block col)."""
    per = frame_bits(cfg, width, height)
    frame, offset = divmod(bit, per)
    if cfg.mode == "raw":
        sizes = [h * w * 8 for h, w in _plane_dims(width, height)]
    else:
        sizes = [
            _n_blocks(h, w) * cfg.coeffs_kept * cfg.bits_per_coeff
            for h, w in _plane_dims(width, height)
        ]
    for name, (h, w), size in zip("yuv", _plane_dims(width, height), sizes):
        if offset < size:
            if cfg.mode == "raw":
                pixel = offset // 8
                return frame, name, (pixel // w) // 8, (pixel % w) // 8
            block = offset // (cfg.coeffs_kept * cfg.bits_per_coeff)
            per_row = -(-w // 8)
            return frame, name, block // per_row, block % per_row
        offset -= size
    raise ValueError("bit offset past end of sequence")


@dataclass(frozen=True)
class PayloadMap:
    """Bookkeeping for splitting a bitstream into fixed-size payloads."""

    k_payload: int
    n_payloads: int
    n_bits: int

    @property
    def filler_bits(self) -> int:
        return self.n_payloads * self.k_payload - self.n_bits

    def bit_range(self, i: int) -> tuple[int, int]:
        """Source bit span carried by payload i (last one may be short)."""
        if not 0 <= i < self.n_payloads:
            raise ValueError("payload index out of range")
        start = i * self.k_payload
        return start, min(start + self.k_payload, self.n_bits)


def segment(bits: np.ndarray, k_payload: int) -> tuple[list[np.ndarray], PayloadMap]:
    """Chop a bitstream into K_payload-size chunks, zero-padding the last."""
    if k_payload <= 0:
        raise ValueError("k_payload must be positive")
    bits = np.asarray(bits, dtype=np.uint8).reshape(-1)
    if bits.size == 0:
        raise ValueError("cannot segment an empty bitstream")
    n = -(-bits.size // k_payload)
    padded = np.zeros(n * k_payload, dtype=np.uint8)
    padded[: bits.size] = bits
    payloads = [padded[i * k_payload : (i + 1) * k_payload] for i in range(n)]
    return payloads, PayloadMap(k_payload, n, bits.size)


def reassemble(payloads: list[np.ndarray], pmap: PayloadMap) -> np.ndarray:
    """Concatenate received payloads and strip the filler span."""
    if len(payloads) != pmap.n_payloads:
        raise ValueError(f"got {len(payloads)} payloads, map expects {pmap.n_payloads}")
    if any(np.asarray(p).size != pmap.k_payload for p in payloads):
        raise ValueError(f"every payload must be {pmap.k_payload} bits")
    full = np.concatenate([np.asarray(p, dtype=np.uint8).reshape(-1) for p in payloads])
    return full[: pmap.n_bits]

"""Link-level simulator of an LTE downlink carrying block-coded video.

The transmit path is CRC attachment, rate-1/3 turbo coding, circular-buffer
rate matching with incremental-redundancy HARQ, QAM mapping and CP-OFDM over
a tapped-delay-line channel. The receive path mirrors it with a perfect-CSI
single-tap equalizer, max-log soft demapping and iterative turbo decoding.
Decoded payloads are reassembled into video frames and scored with blocking,
blur, PSNR and SSIM metrics; a sweep harness reproduces quality-vs-channel
experiments and writes CSV tables and SVG plots.
"""

from lte_video_sim.crc import crc24a_attach, crc24a_check
from lte_video_sim.turbo import turbo_encode, turbo_decode, qpp_permutation, valid_block_sizes
from lte_video_sim.rate_match import SoftBuffer, rate_match, rate_recover
from lte_video_sim.harq import HarqOutcome, run_harq
from lte_video_sim.modulation import bits_per_symbol, constellation, map_symbols, demap_llr
from lte_video_sim.ofdm import OfdmConfig, preset, ofdm_modulate, ofdm_demodulate
from lte_video_sim.channel import (
    ChannelProfile,
    DeepNullError,
    apply_channel,
    awgn_profile,
    epa_profile,
    equalize,
    freq_response,
    noise_variance,
)
from lte_video_sim.video import (
    BlockCodecConfig,
    Frame,
    VideoSequence,
    decode_sequence,
    encode_sequence,
    read_yuv,
    reassemble,
    segment,
    write_yuv,
)
from lte_video_sim.synth import make_sequence, write_synthetic_video
from lte_video_sim.metrics import (
    QualityReport,
    blocking_score,
    blur_score,
    blur_score_payload,
    psnr,
    score_sequence,
    ssim,
)
from lte_video_sim.link import AirlinkConfig, make_block_channel, send_bits
from lte_video_sim.config import ConfigError, ExperimentConfig, load_config, parse_config
from lte_video_sim.sweep import (
    PhyRecord,
    RunRecord,
    emit_csv,
    emit_phy_csv,
    run_phy_sweep,
    run_sweep,
)
from lte_video_sim.plotting import emit_plot

__version__ = "0.1.0"

import io

import numpy as np
import pytest

from lte_video_sim import SoftBuffer, rate_match, rate_recover, turbo_encode
from lte_video_sim.rate_match import (
    buffer_length,
    buffer_source,
    dump_circular_buffer,
    start_offset,
)

from _oracles import (
    rate_match_reference,
    rate_recover_reference,
    start_offset_reference,
)


def _coded(k_size, seed=0):
    rng = np.random.default_rng(seed)
    return turbo_encode(rng.integers(0, 2, k_size, dtype=np.uint8))


def test_buffer_source_is_a_permutation_with_null_padding():
    for k_size in (40, 512, 1000):
        src = buffer_source(k_size)
        assert src.size == buffer_length(k_size)
        real = src[src >= 0]
        assert np.array_equal(np.sort(real), np.arange(3 * (k_size + 4)))


def test_start_offset_spot_values():
    # K=40: R=2 rows, Ncb=192 -> k0 = 2*(2*12*rv + 2)
    assert [start_offset(40, rv) for rv in range(4)] == [4, 52, 100, 148]
    assert [start_offset(40, rv) for rv in range(4)] == [
        start_offset_reference(40, rv) for rv in range(4)
    ]


def test_start_offset_matches_reference_everywhere():
    for k_size in (40, 512, 1024, 6144):
        for rv in range(4):
            assert start_offset(k_size, rv) == start_offset_reference(k_size, rv)
    with pytest.raises(ValueError):
        start_offset(40, 4)


@pytest.mark.parametrize("k_size", [40, 512])
@pytest.mark.parametrize("rv", [0, 1, 2, 3])
def test_rate_match_matches_matrix_reference(k_size, rv):
    coded = _coded(k_size)
    for e_bits in (k_size // 2, k_size + 4, 3 * k_size + 12, 4 * k_size):
        assert np.array_equal(
            rate_match(coded, rv, e_bits), rate_match_reference(coded, rv, e_bits)
        )


def test_repetition_wrap_covers_every_position_evenly():
    k_size = 40
    n_real = 3 * (k_size + 4)
    buf = SoftBuffer(k_size)
    rate_recover(np.ones(2 * n_real), 0, buf)
    src = buffer_source(k_size)
    assert np.array_equal(buf.llrs[src >= 0], np.full(n_real, 2.0))
    assert not buf.llrs[src < 0].any()


def test_rate_recover_is_the_adjoint_of_rate_match():
    rng = np.random.default_rng(5)
    k_size, rv, e_bits = 512, 2, 700
    llrs = rng.normal(size=e_bits)
    buf = SoftBuffer(k_size)
    rate_recover(llrs, rv, buf)
    assert np.array_equal(buf.llrs, rate_recover_reference(llrs, rv, k_size))


def test_recover_accumulates_across_redundancy_versions():
    rng = np.random.default_rng(6)
    k_size = 40
    buf = SoftBuffer(k_size)
    acc = np.zeros(buffer_length(k_size))
    for rv in (0, 2, 3, 1):
        llrs = rng.normal(size=60)
        rate_recover(llrs, rv, buf)
        acc += rate_recover_reference(llrs, rv, k_size)
    assert np.allclose(buf.llrs, acc, rtol=0, atol=0)


def test_to_streams_inverts_the_interleaver():
    # matched-filter identity: recover(match(coded)) at rate 1/3 lands every
    # coded bit's sign back in its stream position
    k_size = 512
    coded = _coded(k_size, seed=9)
    tx = rate_match(coded, 0, 3 * (k_size + 4))
    buf = SoftBuffer(k_size)
    rate_recover(1.0 - 2.0 * tx.astype(np.float64), 0, buf)
    streams = buf.to_streams()
    assert streams.shape == (3, k_size + 4)
    assert np.array_equal((streams < 0).astype(np.uint8), coded)
    assert not (streams == 0).any()


def test_soft_buffer_reset():
    buf = SoftBuffer(40)
    rate_recover(np.ones(10), 0, buf)
    assert buf.llrs.any()
    buf.reset()
    assert not buf.llrs.any()


def test_rate_match_input_validation():
    coded = _coded(40)
    with pytest.raises(ValueError):
        rate_match(coded, 0, 0)
    with pytest.raises(ValueError):
        rate_match(coded[0], 0, 10)
    with pytest.raises(ValueError):
        rate_match(coded, 5, 10)


def test_dump_circular_buffer_lines():
    fp = io.StringIO()
    dump_circular_buffer(buffer_source(40), fp)
    lines = fp.getvalue().strip().splitlines()
    assert len(lines) == buffer_length(40)
    assert all(line.count(",") == 2 for line in lines)

import numpy as np
import pytest

from lte_video_sim import qpp_permutation, turbo_decode, turbo_encode, valid_block_sizes

from _oracles import turbo_encode_reference

# (K, f1, f2) rows of the interleaver table, spot-checked against the
# standard parameter list
QPP_SPOT = {40: (3, 10), 512: (31, 64), 1024: (31, 64), 6144: (263, 480)}


def test_block_size_table():
    sizes = valid_block_sizes()
    assert len(sizes) == 188
    assert sizes[0] == 40 and sizes[-1] == 6144
    diffs = np.diff(sizes)
    assert all(d > 0 for d in diffs)
    # the four arithmetic segments of the size table
    expected = (
        list(range(40, 513, 8))
        + list(range(528, 1025, 16))
        + list(range(1056, 2049, 32))
        + list(range(2112, 6145, 64))
    )
    assert list(sizes) == expected


@pytest.mark.parametrize("k_size", sorted(QPP_SPOT))
def test_qpp_closed_form(k_size):
    f1, f2 = QPP_SPOT[k_size]
    i = np.arange(k_size, dtype=np.int64)
    expected = (f1 * i + f2 * i * i) % k_size
    assert np.array_equal(qpp_permutation(k_size), expected)


def test_qpp_is_a_permutation():
    for k_size in (40, 136, 512, 1024, 2112, 6144):
        perm = qpp_permutation(k_size)
        assert np.array_equal(np.sort(perm), np.arange(k_size))


def test_invalid_block_size_rejected():
    with pytest.raises(ValueError):
        qpp_permutation(41)
    with pytest.raises(ValueError):
        turbo_encode(np.zeros(100, dtype=np.uint8))


def test_encode_shape_and_systematic_part():
    rng = np.random.default_rng(3)
    info = rng.integers(0, 2, 512, dtype=np.uint8)
    coded = turbo_encode(info)
    assert coded.shape == (3, 516)
    assert coded.dtype == np.uint8
    assert np.array_equal(coded[0, :512], info)


def test_all_zero_input_encodes_to_all_zero():
    coded = turbo_encode(np.zeros(40, dtype=np.uint8))
    assert not coded.any()


@pytest.mark.parametrize("k_size", [40, 512])
def test_encode_matches_bit_level_reference(k_size):
    rng = np.random.default_rng(k_size)
    info = rng.integers(0, 2, k_size, dtype=np.uint8)
    f1, f2 = QPP_SPOT[k_size]
    assert np.array_equal(turbo_encode(info), turbo_encode_reference(info, f1, f2))


def _noiseless_llrs(coded, scale=8.0):
    return scale * (1.0 - 2.0 * coded.astype(np.float64))


@pytest.mark.parametrize("k_size", [40, 512, 6144])
def test_decode_inverts_encode_noiselessly(k_size):
    rng = np.random.default_rng(k_size + 1)
    info = rng.integers(0, 2, k_size, dtype=np.uint8)
    decoded, converged = turbo_decode(_noiseless_llrs(turbo_encode(info)))
    assert np.array_equal(decoded, info)
    assert converged


def test_decode_sign_convention_positive_means_zero():
    # all systematic and parity LLRs positive -> the all-zero block
    llrs = np.full((3, 44), 5.0)
    decoded, _ = turbo_decode(llrs)
    assert not decoded.any()


def test_decode_survives_punctured_positions():
    # zeroed LLRs model untransmitted bits; half the parity missing is
    # well within what eight iterations recover without noise
    rng = np.random.default_rng(77)
    info = rng.integers(0, 2, 512, dtype=np.uint8)
    llrs = _noiseless_llrs(turbo_encode(info))
    llrs[1, ::2] = 0.0
    llrs[2, 1::2] = 0.0
    decoded, _ = turbo_decode(llrs)
    assert np.array_equal(decoded, info)


def test_decode_corrects_noisy_llrs():
    rng = np.random.default_rng(78)
    info = rng.integers(0, 2, 1024, dtype=np.uint8)
    llrs = _noiseless_llrs(turbo_encode(info), scale=2.0)
    llrs += rng.normal(0.0, 1.6, llrs.shape)  # a few percent raw bit errors
    decoded, _ = turbo_decode(llrs)
    assert np.array_equal(decoded, info)


def test_more_iterations_never_lose_a_noiseless_block():
    rng = np.random.default_rng(79)
    info = rng.integers(0, 2, 136, dtype=np.uint8)
    llrs = _noiseless_llrs(turbo_encode(info))
    for n_iter in (1, 2, 8):
        decoded, _ = turbo_decode(llrs, n_iter=n_iter)
        assert np.array_equal(decoded, info)

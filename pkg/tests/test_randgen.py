import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fdrelay.randgen import (
    PER_ELEMENT,
    PER_STREAM,
    ChannelRealization,
    RngStream,
    complex_gaussian_matrix,
    draw_channel,
    draw_channels,
    draw_codeword,
    relay_element_variance,
    table1_fixture,
)


@given(seed=st.integers(0, 2**64 - 1), stream=st.integers(0, 2**64 - 1))
def test_same_key_same_draw(seed, stream):
    a = complex_gaussian_matrix(3, 2, 1.0, RngStream(seed, stream))
    b = complex_gaussian_matrix(3, 2, 1.0, RngStream(seed, stream))
    assert np.array_equal(a, b)


def test_streams_and_children_are_distinct():
    base = RngStream(7)
    draws = [complex_gaussian_matrix(4, 4, 1.0, s) for s in (base, RngStream(7, 1), RngStream(8), base.child(0), base.child(1))]
    for i in range(len(draws)):
        for j in range(i + 1, len(draws)):
            assert not np.allclose(draws[i], draws[j])
    assert base.child(3) == RngStream(7).child(3)


def test_key_range_checked():
    with pytest.raises(ValueError):
        RngStream(-1)
    with pytest.raises(ValueError):
        RngStream(0, 2**64)


def test_complex_gaussian_moments():
    x = complex_gaussian_matrix(400_000, 1, 2.0, RngStream(3)).ravel()
    n = x.size
    # each part has variance 1; var of the sample variance is 2/n
    assert abs(np.var(x.real) - 1.0) < 5 * np.sqrt(2 / n)
    assert abs(np.var(x.imag) - 1.0) < 5 * np.sqrt(2 / n)
    assert abs(np.mean(x.real * x.imag)) < 5 / np.sqrt(n)
    with pytest.raises(ValueError):
        complex_gaussian_matrix(2, 2, 0.0, RngStream(3))


def test_variance_conventions():
    assert relay_element_variance(10.0, 4, PER_STREAM) == 2.5
    assert relay_element_variance(10.0, 4, PER_ELEMENT) == 10.0
    with pytest.raises(ValueError):
        relay_element_variance(10.0, 4, "other")
    cw = draw_codeword(200_000, 2, 10.0, RngStream(1))
    assert cw.n == 200_000 and cw.M == 2
    # total relay power per symbol is P_R under the per-stream convention
    assert abs(np.mean(np.sum(np.abs(cw.X) ** 2, axis=1)) - 10.0) < 0.1
    with pytest.raises(ValueError):
        draw_codeword(2, 2, 10.0, RngStream(1))


def test_channel_eigenvalues(rng):
    ch = draw_channel(3, 1.0, rng)
    ref = np.linalg.eigvalsh(ch.H_SR @ ch.H_SR.conj().T)
    assert np.allclose(ch.eta, ref)
    assert ch.M == 3
    H_SR, H_RD = draw_channels(2, 5, 1.0, rng)
    assert H_SR.shape == H_RD.shape == (5, 2, 2)


def test_table1_entries():
    slot1 = table1_fixture(1)
    assert slot1.H_SR[0, 1] == 0.8374 - 0.8441j
    assert slot1.H_RR[1, 1] == -0.7763 + 0.2951j
    assert table1_fixture(3).H_RD[1, 0] == -0.3835 + 0.5156j
    assert table1_fixture(2).H_SR[1, 1] == 0.0039 + 1.0534j
    for slot in (1, 2, 3):
        ch = table1_fixture(slot)
        assert np.all(ch.eta >= 0)
        assert np.allclose(ch.eta, np.linalg.eigvalsh(ch.H_SR @ ch.H_SR.conj().T))
    with pytest.raises(ValueError):
        table1_fixture(4)


def test_zero_channel_has_zero_eigenvalues():
    ch = ChannelRealization.from_matrices(np.zeros((2, 2)), np.eye(2))
    assert np.array_equal(ch.eta, [0.0, 0.0])

import numpy as np
import pytest

from ovtdm.codec import bcjr_decode, build_trellis, ovtdm_encode
from ovtdm.waveform import chebyshev_taps, load_taps, rect_taps

from conftest import brute_force_llr, convolution_matrix


def test_encode_k1_is_bpsk():
    taps = rect_taps(1)
    assert ovtdm_encode([1.0], taps).tolist() == [1.0]


def test_encode_hand_convolution():
    # pre-normalization [1, 1] convolved with [1, 1, -1] is [1, 2, 0, -1]
    taps = rect_taps(2)
    out = ovtdm_encode([1.0, 1.0, -1.0], taps)
    assert out == pytest.approx(np.array([1, 2, 0, -1]) * np.sqrt(0.5))


def test_encode_matches_double_loop_oracle(rng):
    taps = chebyshev_taps(6, 80)
    h = taps.as_array()
    x = 1.0 - 2.0 * rng.integers(0, 2, 64)
    out = ovtdm_encode(x, taps)
    ref = np.zeros(64 + 5)
    for t in range(ref.size):
        for i in range(64):
            if 0 <= t - i < 6:
                ref[t] += x[i] * h[t - i]
    assert out == pytest.approx(ref, abs=1e-12)
    assert out.size == 64 + taps.k - 1


def test_encode_rejects_bad_input():
    with pytest.raises(ValueError):
        ovtdm_encode([], rect_taps(2))
    with pytest.raises(ValueError):
        ovtdm_encode([1.0, 0.5], rect_taps(2))


def test_trellis_shapes():
    t1 = build_trellis(rect_taps(1))
    assert t1.n_states == 1
    assert t1.next_state.shape == (1, 2)
    assert sorted(t1.output[0].tolist()) == pytest.approx([-1.0, 1.0])

    t3 = build_trellis(rect_taps(3))
    assert t3.n_states == 4
    assert t3.next_state.size == 8  # 8 branches
    # 2 outgoing per state by construction; check 2 incoming per state
    counts = np.bincount(t3.next_state.reshape(-1), minlength=4)
    assert np.all(counts == 2)


def test_trellis_path_reproduces_encoder(rng):
    taps = chebyshev_taps(6, 80)
    trellis = build_trellis(taps)
    x = 1.0 - 2.0 * rng.integers(0, 2, 20)
    assert trellis.path_samples(x) == pytest.approx(ovtdm_encode(x, taps), abs=1e-12)


def test_bcjr_k1_closed_form(rng):
    taps = chebyshev_taps(1, 80)
    r = rng.normal(0, 1, 32)
    sigma2 = 0.7
    lam, ext = bcjr_decode(r, taps, np.zeros(32), sigma2)
    assert lam == pytest.approx(np.clip(2 * r / sigma2, -50, 50))
    assert ext == pytest.approx(lam)


def test_bcjr_matches_brute_force(rng):
    taps = load_taps(rng.normal(size=3))
    sigma2 = 0.6
    for _ in range(25):
        x = 1.0 - 2.0 * rng.integers(0, 2, 8)
        r = ovtdm_encode(x, taps) + rng.normal(0, np.sqrt(sigma2), 10)
        mu = rng.normal(0, 1, 8)
        lam, ext = bcjr_decode(r, taps, mu, sigma2)
        ref = brute_force_llr(r, taps, mu, sigma2)
        assert np.max(np.abs(lam - ref)) < 1e-6
        assert ext == pytest.approx(lam - mu, abs=1e-12)


def test_bcjr_prior_shift_identity(rng):
    # adding delta to one prior shifts that posterior LLR by exactly delta
    taps = load_taps(rng.normal(size=3))
    sigma2 = 0.8
    x = 1.0 - 2.0 * rng.integers(0, 2, 8)
    r = ovtdm_encode(x, taps) + rng.normal(0, np.sqrt(sigma2), 10)
    mu = rng.normal(0, 0.5, 8)
    lam0, _ = bcjr_decode(r, taps, mu, sigma2)
    delta = 0.731
    mu2 = mu.copy()
    mu2[3] += delta
    lam1, _ = bcjr_decode(r, taps, mu2, sigma2)
    assert lam1[3] - lam0[3] == pytest.approx(delta, abs=1e-6)


def test_bcjr_noiseless_recovery(rng):
    for k in (2, 4, 6):
        taps = chebyshev_taps(k, 80)
        x = 1.0 - 2.0 * rng.integers(0, 2, 32)
        r = ovtdm_encode(x, taps)  # zero noise added
        lam, _ = bcjr_decode(r, taps, np.zeros(32), 1e-4)
        assert np.all(np.sign(lam) == x)


def test_bcjr_tail_handling(rng):
    taps = chebyshev_taps(4, 80)
    x = 1.0 - 2.0 * rng.integers(0, 2, 16)
    r = ovtdm_encode(x, taps) + rng.normal(0, 0.5, 19)
    lam, _ = bcjr_decode(r, taps, np.zeros(16), 0.25)
    assert lam.size == 16
    # perturbing a tail sample must change late-bit LLRs
    r2 = r.copy()
    r2[-1] += 1.0
    lam2, _ = bcjr_decode(r2, taps, np.zeros(16), 0.25)
    assert not np.allclose(lam[-3:], lam2[-3:])


def test_bcjr_rejects_bad_input():
    taps = rect_taps(3)
    with pytest.raises(ValueError):
        bcjr_decode(np.zeros(9), taps, np.zeros(8), 1.0)
    with pytest.raises(ValueError):
        bcjr_decode(np.zeros(10), taps, np.zeros(8), 0.0)

"""Shared independent oracles for the test suite."""

import numpy as np
import pytest
from scipy.special import logsumexp


def convolution_matrix(taps: np.ndarray, length: int) -> np.ndarray:
    k = taps.size
    mat = np.zeros((length, length + k - 1))
    for i in range(length):
        mat[i, i:i + k] = taps
    return mat


def brute_force_llr(r, taps, mu, sigma2, clamp=50.0):
    """Posterior bit LLRs by exhaustive enumeration of all 2^L inputs."""
    h = taps.as_array()
    length = np.asarray(mu).size
    combos = (np.arange(2 ** length)[:, None] >> np.arange(length)[None, :]) & 1
    x = 1.0 - 2.0 * combos
    samples = x @ convolution_matrix(h, length)
    loglik = (-((np.asarray(r)[None, :] - samples) ** 2).sum(axis=1) / (2.0 * sigma2)
              + 0.5 * (x @ np.asarray(mu)))
    llr = np.empty(length)
    for t in range(length):
        llr[t] = logsumexp(loglik[x[:, t] > 0]) - logsumexp(loglik[x[:, t] < 0])
    return np.clip(llr, -clamp, clamp)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

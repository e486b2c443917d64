"""OvTDM encoding as tapped convolution and exact log-domain BCJR detection.

The encoder is a full convolution of the BPSK symbol sequence with the K
overlap taps; the detector runs forward/backward recursions over the
2^(K-1)-state history trellis with exact log-sum-exp combining (no
max-log approximation).  The encoder history starts at zero (no
pre-transmission symbols) and the K-1 input-free tail samples initialize
the backward recursion.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .waveform import TapVector

LLR_CLAMP = 50.0
_NEG = -1e300


def ovtdm_encode(x, taps: TapVector) -> np.ndarray:
    """Convolve a +-1 symbol sequence with the overlap taps (length L+K-1)."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("need a nonempty symbol sequence")
    if not np.all(np.abs(x) == 1.0):
        raise ValueError("symbols must be exactly +1 or -1")
    return np.convolve(x, taps.as_array())


@dataclass
class Trellis:
    """History trellis for K overlap taps: 2^(K-1) states, 2 branches each.

    State index encodes the previous K-1 input bits, most recent in the
    LSB, with bit 0 -> +1 and bit 1 -> -1.  ``output`` holds the
    steady-state branch outputs; early steps (t < K-1) and the tail are
    time-varying and evaluated by the traversal helpers.
    """

    k: int
    n_states: int
    next_state: np.ndarray  # (n_states, 2) successor for input bit 0/1
    output: np.ndarray      # (n_states, 2) steady-state branch output
    taps: TapVector

    def branch_output(self, t: int, state: int, bit: int) -> float:
        """Branch output at time t, masking history not yet transmitted."""
        h = self.taps.as_array()
        y = h[0] * (1.0 - 2.0 * bit)
        for j in range(1, min(t, self.k - 1) + 1):
            y += h[j] * (1.0 - 2.0 * ((state >> (j - 1)) & 1))
        return y

    def tail_output(self, state: int, m: int, length: int) -> float:
        """Input-free tail output m steps past the last input of a length-L frame."""
        h = self.taps.as_array()
        y = 0.0
        for j in range(m + 1, self.k):
            if length + m - j >= 0:
                y += h[j] * (1.0 - 2.0 * ((state >> (j - m - 1)) & 1))
        return y

    def path_samples(self, x) -> np.ndarray:
        """Drive the trellis with a +-1 sequence; reproduces ovtdm_encode."""
        x = np.asarray(x, dtype=float)
        length = x.size
        out = np.zeros(length + self.k - 1)
        state = 0
        for t in range(length):
            bit = 0 if x[t] > 0 else 1
            out[t] = self.branch_output(t, state, bit)
            state = ((state << 1) | bit) & (self.n_states - 1)
        for m in range(self.k - 1):
            out[length + m] = self.tail_output(state, m, length)
        return out


def build_trellis(taps: TapVector) -> Trellis:
    k = taps.k
    n_states = 1 << (k - 1)
    h = taps.as_array()
    next_state = np.empty((n_states, 2), dtype=np.int64)
    output = np.empty((n_states, 2), dtype=float)
    mask = n_states - 1
    for s in range(n_states):
        hist = sum(h[j] * (1.0 - 2.0 * ((s >> (j - 1)) & 1)) for j in range(1, k))
        for b in range(2):
            next_state[s, b] = ((s << 1) | b) & mask
            output[s, b] = h[0] * (1.0 - 2.0 * b) + hist
    return Trellis(k, n_states, next_state, output, taps)


@njit(cache=True)
def _lse2(a, b):
    if a < b:
        a, b = b, a
    if a - b > 36.0 or b <= _NEG:
        return a
    return a + np.log1p(np.exp(b - a))


@njit(cache=True)
def _bcjr_kernel(r, h, mu, sigma2, k):
    L = mu.shape[0]
    S = 1 << (k - 1)
    mask = S - 1
    inv = 1.0 / (2.0 * sigma2)

    ysteady = np.empty((S, 2))
    for s in range(S):
        hist = 0.0
        for j in range(1, k):
            hist += h[j] * (1.0 - 2.0 * ((s >> (j - 1)) & 1))
        for b in range(2):
            ysteady[s, b] = h[0] * (1.0 - 2.0 * b) + hist

    # branch metrics: prior term + Gaussian log-likelihood (constants cancel)
    g = np.empty((L, S, 2))
    for t in range(L):
        for s in range(S):
            for b in range(2):
                a_in = 1.0 - 2.0 * b
                if t >= k - 1:
                    y = ysteady[s, b]
                else:
                    y = h[0] * a_in
                    jmax = t if t < k - 1 else k - 1
                    for j in range(1, jmax + 1):
                        y += h[j] * (1.0 - 2.0 * ((s >> (j - 1)) & 1))
                d = r[t] - y
                g[t, s, b] = 0.5 * mu[t] * a_in - d * d * inv

    fwd = np.full((L, S), _NEG)
    fwd[0, 0] = 0.0
    for t in range(L - 1):
        nxt = np.full(S, _NEG)
        for s in range(S):
            a0 = fwd[t, s]
            if a0 <= _NEG:
                continue
            for b in range(2):
                ns = ((s << 1) | b) & mask
                nxt[ns] = _lse2(nxt[ns], a0 + g[t, s, b])
        mx = nxt[0]
        for s in range(1, S):
            if nxt[s] > mx:
                mx = nxt[s]
        for s in range(S):
            fwd[t + 1, s] = nxt[s] - mx if nxt[s] > _NEG else _NEG

    bwd = np.full((L, S), _NEG)
    for s in range(S):
        acc = 0.0
        for mm in range(k - 1):
            y = 0.0
            for j in range(mm + 1, k):
                if L + mm - j >= 0:
                    y += h[j] * (1.0 - 2.0 * ((s >> (j - mm - 1)) & 1))
            d = r[L + mm] - y
            acc += -d * d * inv
        bwd[L - 1, s] = acc
    for t in range(L - 1, 0, -1):
        for s in range(S):
            acc = _NEG
            for b in range(2):
                ns = ((s << 1) | b) & mask
                acc = _lse2(acc, g[t, s, b] + bwd[t, ns])
            bwd[t - 1, s] = acc
        mx = bwd[t - 1, 0]
        for s in range(1, S):
            if bwd[t - 1, s] > mx:
                mx = bwd[t - 1, s]
        for s in range(S):
            if bwd[t - 1, s] > _NEG:
                bwd[t - 1, s] -= mx

    lam = np.empty(L)
    for t in range(L):
        num = _NEG
        den = _NEG
        for s in range(S):
            a0 = fwd[t, s]
            if a0 <= _NEG:
                continue
            for b in range(2):
                ns = ((s << 1) | b) & mask
                v = a0 + g[t, s, b] + bwd[t, ns]
                if b == 0:
                    num = _lse2(num, v)
                else:
                    den = _lse2(den, v)
        lam[t] = num - den
    return lam


def bcjr_decode(r, taps: TapVector, mu, sigma2: float, clamp: float = LLR_CLAMP):
    """Exact per-bit posterior LLRs over the overlap trellis.

    Returns (lambda, extrinsic) where extrinsic = lambda - mu elementwise.
    ``r`` must hold L + K - 1 samples for L prior LLRs in ``mu``.
    """
    r = np.asarray(r, dtype=float)
    mu = np.asarray(mu, dtype=float)
    if sigma2 <= 0:
        raise ValueError("sigma2 must be positive")
    k = taps.k
    if r.size != mu.size + k - 1:
        raise ValueError("sample count must be L + K - 1")
    if k == 1:
        # memoryless AWGN BPSK: posterior = prior + channel LLR
        lam = mu + 2.0 * taps.as_array()[0] * r / sigma2
    else:
        lam = _bcjr_kernel(r, taps.as_array(), mu, float(sigma2), k)
    # clamp posterior and extrinsic independently so a saturated prior
    # cannot cancel the channel evidence out of the extrinsic
    ext = np.clip(lam - mu, -clamp, clamp)
    return np.clip(lam, -clamp, clamp), ext

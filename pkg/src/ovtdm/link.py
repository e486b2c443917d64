"""Turbo-structure OvTDM transmitter, iterative receivers, and QAM baseline.

The transmitter sends the same product-code block on both quadratures,
each through its own interleaver and OvTDM encoder.  Scheme A involves
the product-code decoder in every turbo iteration; Scheme B first
iterates the two OvTDM detectors alone and hands the combined soft
information to the product-code decoder exactly once.  Only extrinsics
cross module boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .bch import ComponentCode, extended_bch_64_57
from .codec import bcjr_decode, ovtdm_encode
from .tpc import FbbaConfig, tpc_decode, tpc_encode
from .waveform import TapVector


@dataclass(frozen=True)
class InterleaverPair:
    pi1: np.ndarray
    pi2: np.ndarray
    seed: int


def make_interleaver_pair(length: int, seed: int) -> InterleaverPair:
    """Two distinct deterministic pseudorandom permutations of the given length."""
    if length < 2:
        raise ValueError("length must be >= 2")
    ss = np.random.SeedSequence(seed)
    child1, child2 = ss.spawn(2)
    pi1 = np.random.default_rng(child1).permutation(length)
    pi2 = np.random.default_rng(child2).permutation(length)
    extra = 2
    while np.array_equal(pi1, pi2):
        pi2 = np.random.default_rng(ss.spawn(extra + 1)[extra]).permutation(length)
        extra += 1
    return InterleaverPair(pi1, pi2, seed)


def interleave(v: np.ndarray, pi: np.ndarray) -> np.ndarray:
    return v[pi]


def deinterleave(v: np.ndarray, pi: np.ndarray) -> np.ndarray:
    out = np.empty_like(v)
    out[pi] = v
    return out


def bpsk(bits) -> np.ndarray:
    """Bit 0 -> +1, bit 1 -> -1."""
    return 1.0 - 2.0 * np.asarray(bits, dtype=float)


@dataclass
class ReceiverConfig:
    scheme: str = "A"
    global_iterations: int = 6
    ovtdm_iterations: int = 5
    fbba: FbbaConfig = field(default_factory=FbbaConfig)
    llr_clamp: float = 50.0

    def __post_init__(self):
        if self.scheme not in ("A", "B"):
            raise ValueError("scheme must be 'A' or 'B'")
        if self.global_iterations < 1 or self.ovtdm_iterations < 1:
            raise ValueError("iteration counts must be >= 1")


@dataclass
class ReceiveResult:
    info_hard: np.ndarray          # k x k hard info decisions
    code_llr: np.ndarray           # final combined code-domain LLRs (n*n,)
    iter_info_ber: list            # per-iteration info BER when truth was given


def transmit(info, taps: TapVector, il: InterleaverPair,
             code: ComponentCode | None = None) -> np.ndarray:
    """Product-encode, interleave per branch, OvTDM-encode, combine to I + jQ."""
    code = code or extended_bch_64_57()
    c = tpc_encode(info, code).reshape(-1)
    if c.size != il.pi1.size:
        raise ValueError("interleaver length must match the code block size")
    branch_i = ovtdm_encode(bpsk(c[il.pi1]), taps)
    branch_q = ovtdm_encode(bpsk(c[il.pi2]), taps)
    return branch_i + 1j * branch_q


def _info_ber(total_llr: np.ndarray, true_info: np.ndarray, n: int, k: int) -> float:
    hard = (total_llr.reshape(n, n)[:k, :k] < 0).astype(np.uint8)
    return float(np.mean(hard != true_info))


def receive(rx, taps: TapVector, il: InterleaverPair, sigma2: float,
            cfg: ReceiverConfig, code: ComponentCode | None = None,
            true_info=None) -> ReceiveResult:
    """Iterative detection of one received frame (see module docstring)."""
    code = code or extended_bch_64_57()
    n, k = code.n, code.k
    n2 = n * n
    rx = np.asarray(rx)
    r_i, r_q = rx.real.astype(float), rx.imag.astype(float)
    clamp = cfg.llr_clamp
    if true_info is not None:
        true_info = np.asarray(true_info, dtype=np.uint8)

    e_i = np.zeros(n2)
    e_q = np.zeros(n2)
    e_t = np.zeros(n2)
    iter_ber = []

    if cfg.scheme == "A":
        fbba1 = replace(cfg.fbba, tpc_iterations=1)
        total = np.zeros(n2)
        for git in range(cfg.global_iterations):
            mu_i = np.clip(e_q + e_t, -clamp, clamp)[il.pi1]
            _, ex_i = bcjr_decode(r_i, taps, mu_i, sigma2, clamp)
            e_i = deinterleave(ex_i, il.pi1)
            mu_q = np.clip(e_i + e_t, -clamp, clamp)[il.pi2]
            _, ex_q = bcjr_decode(r_q, taps, mu_q, sigma2, clamp)
            e_q = deinterleave(ex_q, il.pi2)
            combined = e_i + e_q
            soft, _ = tpc_decode(combined.reshape(n, n), fbba1, code,
                                 half_iter_offset=2 * git)
            e_t = soft.reshape(-1) - combined
            total = combined + e_t
            if true_info is not None:
                iter_ber.append(_info_ber(total, true_info, n, k))
        info_hard = (total.reshape(n, n)[:k, :k] < 0).astype(np.uint8)
        return ReceiveResult(info_hard, total, iter_ber)

    # Scheme B: detector-only exchange first, one product-decode pass at the end
    for _ in range(cfg.ovtdm_iterations):
        mu_i = np.clip(e_q, -clamp, clamp)[il.pi1]
        _, ex_i = bcjr_decode(r_i, taps, mu_i, sigma2, clamp)
        e_i = deinterleave(ex_i, il.pi1)
        mu_q = np.clip(e_i, -clamp, clamp)[il.pi2]
        _, ex_q = bcjr_decode(r_q, taps, mu_q, sigma2, clamp)
        e_q = deinterleave(ex_q, il.pi2)
        if true_info is not None:
            iter_ber.append(_info_ber(e_i + e_q, true_info, n, k))
    combined = e_i + e_q
    if cfg.fbba.tpc_iterations == 0:
        total = combined
        info_hard = (total.reshape(n, n)[:k, :k] < 0).astype(np.uint8)
    else:
        soft, info_hard = tpc_decode(combined.reshape(n, n), cfg.fbba, code)
        total = soft.reshape(-1)
    if true_info is not None:
        iter_ber.append(_info_ber(total, true_info, n, k))
    return ReceiveResult(info_hard, total, iter_ber)


# ---------------------------------------------------------------------------
# Gray-mapped square QAM baseline


def _gray_levels(m_axis: int, delta: float):
    """Amplitude lookup by Gray label for one PAM axis."""
    idx = np.arange(m_axis)
    labels = idx ^ (idx >> 1)
    amp_by_label = np.empty(m_axis)
    amp_by_label[labels] = (2 * idx - (m_axis - 1)) * delta
    label_bits = ((labels[:, None] >> np.arange(int(np.log2(m_axis)))[::-1][None, :]) & 1)
    return amp_by_label, labels


def qam_map_bits(bits, m: int):
    """Map bits to unit-average-energy Gray square QAM; zero-pads to a full symbol.

    Per symbol the first half of the bits selects the I level and the
    second half the Q level, MSB first.  Returns (symbols, n_pad).
    """
    if m not in (4, 16, 64, 256):
        raise ValueError("unsupported QAM order")
    bits = np.asarray(bits, dtype=np.uint8).reshape(-1)
    bpsym = int(np.log2(m))
    half = bpsym // 2
    m_axis = 1 << half
    n_pad = (-bits.size) % bpsym
    if n_pad:
        bits = np.concatenate([bits, np.zeros(n_pad, dtype=np.uint8)])
    delta = np.sqrt(3.0 / (2.0 * (m - 1)))
    amp_by_label, _ = _gray_levels(m_axis, delta)
    groups = bits.reshape(-1, bpsym)
    weights = 1 << np.arange(half)[::-1]
    lab_i = groups[:, :half] @ weights
    lab_q = groups[:, half:] @ weights
    return amp_by_label[lab_i] + 1j * amp_by_label[lab_q], n_pad


def qam_demap_bits(received, m: int, sigma2: float, clamp: float = 50.0) -> np.ndarray:
    """Exact per-bit LLRs (log p(bit=0)/p(bit=1)) for Gray square QAM over AWGN."""
    if m not in (4, 16, 64, 256):
        raise ValueError("unsupported QAM order")
    if sigma2 <= 0:
        raise ValueError("sigma2 must be positive")
    received = np.asarray(received)
    bpsym = int(np.log2(m))
    half = bpsym // 2
    m_axis = 1 << half
    delta = np.sqrt(3.0 / (2.0 * (m - 1)))
    idx = np.arange(m_axis)
    labels = idx ^ (idx >> 1)
    amps = (2 * idx - (m_axis - 1)) * delta
    bit_of_level = ((labels[:, None] >> np.arange(half)[::-1][None, :]) & 1).astype(bool)

    def axis_llrs(vals):
        metric = -(vals[:, None] - amps[None, :]) ** 2 / (2.0 * sigma2)  # (nsym, m_axis)
        out = np.empty((vals.size, half))
        for b in range(half):
            sel = bit_of_level[:, b]
            num = _logsumexp_rows(metric[:, ~sel])
            den = _logsumexp_rows(metric[:, sel])
            out[:, b] = num - den
        return out

    llr_i = axis_llrs(received.real.astype(float))
    llr_q = axis_llrs(received.imag.astype(float))
    llrs = np.concatenate([llr_i, llr_q], axis=1).reshape(-1)
    return np.clip(llrs, -clamp, clamp)


def _logsumexp_rows(a: np.ndarray) -> np.ndarray:
    mx = a.max(axis=1)
    return mx + np.log(np.exp(a - mx[:, None]).sum(axis=1))


def qam_transmit(info, m: int, code: ComponentCode | None = None):
    """Product-encode and Gray-QAM-map one info block; returns (symbols, n_pad)."""
    code = code or extended_bch_64_57()
    c = tpc_encode(info, code).reshape(-1)
    return qam_map_bits(c, m)


def qam_demap(received, m: int, sigma2: float, n_code_bits: int | None = None,
              clamp: float = 50.0) -> np.ndarray:
    """Code-domain LLRs for a QAM frame; padded tail positions are pinned to +clamp."""
    llrs = qam_demap_bits(received, m, sigma2, clamp)
    if n_code_bits is not None:
        llrs[n_code_bits:] = clamp
    return llrs

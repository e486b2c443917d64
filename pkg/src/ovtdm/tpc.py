"""Squared turbo product code and the FBBA SISO component decoder.

The component decoder sorts positions by reliability, systematizes the
permuted check matrix by Gauss-Jordan elimination, re-encodes the hard
decision into a base codeword, and scores the 2^q re-encoded flip
candidates of the q least reliable information positions.  Soft outputs
come from the metric gap between the best candidate and the best
opposing candidate per position, with a configurable fallback magnitude
when no opposing candidate exists in the list.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bch import ComponentCode, extended_bch_64_57, gauss_jordan_systematize

DEFAULT_ALPHA = (0.5, 0.5, 0.6, 0.6, 0.7, 0.7, 0.8, 0.8)
DEFAULT_BETA = (0.2, 0.4, 0.6, 0.8, 1.0, 1.0, 1.0, 1.0)


@dataclass
class FbbaConfig:
    """Component-decoder settings; q least-reliable info bits give 2^q candidates."""

    q: int = 5
    tpc_iterations: int = 4
    alpha_schedule: tuple = DEFAULT_ALPHA
    beta_schedule: tuple = DEFAULT_BETA
    llr_clamp: float = 50.0

    def __post_init__(self):
        if not 1 <= self.q <= 8:
            raise ValueError("q must be in 1..8")
        if self.tpc_iterations < 0:
            raise ValueError("tpc_iterations must be >= 0")
        if len(self.alpha_schedule) < 2 or len(self.beta_schedule) < 2:
            raise ValueError("schedules need at least two entries")

    def alpha(self, half_iter_index: int) -> float:
        return self.alpha_schedule[min(half_iter_index, len(self.alpha_schedule) - 1)]

    def beta(self, half_iter_index: int) -> float:
        return self.beta_schedule[min(half_iter_index, len(self.beta_schedule) - 1)]


def tpc_encode(info, code: ComponentCode | None = None) -> np.ndarray:
    """Encode a k x k info matrix into an n x n product block (rows then columns)."""
    code = code or extended_bch_64_57()
    info = np.asarray(info, dtype=np.uint8)
    if info.shape != (code.k, code.k):
        raise ValueError(f"info must be {code.k}x{code.k}")
    rows = (info @ code.G) % 2                      # k x n
    block = (code.G.T @ rows) % 2                   # n x n, columns encoded
    return block.astype(np.uint8)


def _flip_masks(q: int) -> np.ndarray:
    idx = np.arange(2 ** q, dtype=np.uint32)
    return ((idx[:, None] >> np.arange(q)[None, :]) & 1).astype(np.uint8)


def fbba_component_decode(l, cfg: FbbaConfig, half_iter_index: int,
                          code: ComponentCode | None = None,
                          return_candidates: bool = False):
    """One SISO component decode: returns (scaled extrinsic, hard codeword bits).

    With ``return_candidates`` a third element is returned: a dict with the
    full candidate list in original bit order, sorted ascending by metric
    (``codewords``, ``z``), for inspection in tests.
    """
    code = code or extended_bch_64_57()
    n, k, r = code.n, code.k, code.r
    l = np.asarray(l, dtype=float)
    if l.size != n:
        raise ValueError(f"need {n} LLRs")

    perm = np.argsort(-np.abs(l), kind="stable")
    h_sys, perm_adj = gauss_jordan_systematize(code.H[:, perm], perm)
    lp = l[perm_adj]

    info0 = (lp[:k] < 0).astype(np.uint8)
    a_mat = h_sys[:, :k]
    par0 = (a_mat @ info0) % 2
    c0 = np.concatenate([info0, par0])
    s0 = 1.0 - 2.0 * c0
    w = lp * s0  # metric cost of flipping each position relative to the base

    q = min(cfg.q, k)
    flip_pos = np.arange(k - q, k)
    flips = _flip_masks(q)                                    # (2^q, q)
    parity = (par0[None, :] ^ ((flips @ a_mat[:, flip_pos].T) % 2)).astype(np.uint8)
    par_diff = parity ^ par0[None, :]
    z = flips @ w[flip_pos] + par_diff @ w[k:]                # (2^q,)

    best = int(np.argmin(z))  # first minimum: stable tie-break by generation index
    z_best = z[best]
    c_best = c0.copy()
    c_best[flip_pos] ^= flips[best]
    c_best[k:] = parity[best]
    s_best = 1.0 - 2.0 * c_best

    beta = cfg.beta(half_iter_index)
    ext = beta * s_best  # fallback where no opposing candidate exists
    # active positions: flip positions and parity positions can oppose the best
    cand_bits = np.concatenate([flips, parity], axis=1)       # (2^q, q + r)
    active = np.concatenate([flip_pos, np.arange(k, n)])
    opp = cand_bits != cand_bits[best][None, :]
    zin = np.where(opp, z[:, None], np.inf)
    z_opp = zin.min(axis=0)
    has_opp = np.isfinite(z_opp)
    rho = (z_opp - z_best) * s_best[active]
    ext[active] = np.where(has_opp, rho - lp[active], beta * s_best[active])

    ext = np.clip(cfg.alpha(half_iter_index) * ext, -cfg.llr_clamp, cfg.llr_clamp)

    out_ext = np.empty(n)
    out_hard = np.empty(n, dtype=np.uint8)
    out_ext[perm_adj] = ext
    out_hard[perm_adj] = c_best
    if not return_candidates:
        return out_ext, out_hard
    order = np.argsort(z, kind="stable")
    cands = np.tile(c0, (flips.shape[0], 1))
    cands[:, flip_pos] ^= flips
    cands[:, k:] = parity
    unperm = np.empty_like(cands)
    unperm[:, perm_adj] = cands
    return out_ext, out_hard, {
        "codewords": unperm[order],
        "z": z[order],
        "base_index": int(np.nonzero(order == 0)[0][0]),
        "base_z": float(z[0]),
    }


def tpc_decode(soft_in, cfg: FbbaConfig, code: ComponentCode | None = None,
               half_iter_offset: int = 0):
    """Iterative row/column FBBA decoding of an n x n LLR block.

    Returns (soft_out, info_hard): soft_out = channel LLR + final row and
    column extrinsics; info_hard holds the k x k systematic region's hard
    decisions (bit 0 <-> positive LLR).
    """
    code = code or extended_bch_64_57()
    n, k = code.n, code.k
    chan = np.asarray(soft_in, dtype=float)
    if chan.shape != (n, n):
        raise ValueError(f"soft_in must be {n}x{n}")
    ext_row = np.zeros((n, n))
    ext_col = np.zeros((n, n))
    for it in range(cfg.tpc_iterations):
        half = half_iter_offset + 2 * it
        for i in range(n):
            ext_row[i], _ = fbba_component_decode(chan[i] + ext_col[i], cfg, half, code)
        for j in range(n):
            ext_col[:, j], _ = fbba_component_decode(
                chan[:, j] + ext_row[:, j], cfg, half + 1, code)
    soft_out = chan + ext_row + ext_col
    info_hard = (soft_out[:k, :k] < 0).astype(np.uint8)
    return soft_out, info_hard

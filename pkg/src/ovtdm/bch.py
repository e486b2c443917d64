"""Extended BCH(64,57) component code and the GF(2) linear algebra for FBBA.

Systematic layout of a codeword: k message bits, then the cyclic parity
bits, then one overall even-parity bit.  The same construction with
g(x) = x^3 + x + 1 yields the extended Hamming (8,4) code used as a
small-scale decoding oracle.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

# x^6 + x + 1, degree-descending coefficients (primitive over GF(2))
GEN_POLY_BCH63 = (1, 0, 0, 0, 0, 1, 1)
# x^3 + x + 1 for the (7,4) Hamming base code
GEN_POLY_HAMMING7 = (1, 0, 1, 1)


def poly_order(gen) -> int:
    """Multiplicative order of x modulo gen(x) over GF(2)."""
    g = np.asarray(gen, dtype=np.uint8)
    deg = g.size - 1
    state = np.zeros(deg, dtype=np.uint8)
    state[-1] = 1  # the constant polynomial 1, degree-descending coefficients
    one = state.copy()
    for order in range(1, 2 ** deg):
        # multiply by x: shift up one degree, reduce by g on overflow
        carry = state[0]
        state = np.roll(state, -1)
        state[-1] = 0
        if carry:
            state ^= g[1:]
        if np.array_equal(state, one):
            return order
    raise ValueError("x is not invertible modulo gen")


def _cyclic_parity(msg: np.ndarray, gen: np.ndarray) -> np.ndarray:
    """Remainder of msg(x) * x^deg modulo gen(x); msg[0] is the leading coefficient."""
    deg = gen.size - 1
    buf = np.concatenate([msg, np.zeros(deg, dtype=np.uint8)])
    for i in range(msg.size):
        if buf[i]:
            buf[i:i + deg + 1] ^= gen
    return buf[msg.size:]


class ComponentCode:
    """Systematic extended cyclic code: (n, k) with one overall parity bit."""

    def __init__(self, n: int, k: int, gen_poly, name: str):
        gen = np.asarray(gen_poly, dtype=np.uint8)
        deg = gen.size - 1
        if n != k + deg + 1:
            raise ValueError("n must equal k + deg(g) + 1 (extended code)")
        self.n = n
        self.k = k
        self.r = n - k
        self.name = name
        self._gen = gen
        # parity part of the generator matrix, from encoding unit messages
        p = np.zeros((k, deg), dtype=np.uint8)
        for i in range(k):
            e = np.zeros(k, dtype=np.uint8)
            e[i] = 1
            p[i] = _cyclic_parity(e, gen)
        self._p = p
        self.G = np.concatenate(
            [np.eye(k, dtype=np.uint8), p, (p.sum(axis=1) + 1).astype(np.uint8).reshape(-1, 1) % 2],
            axis=1,
        )
        # H rows: cyclic parity checks [P^T | I | 0], plus overall even parity
        h = np.zeros((self.r, n), dtype=np.uint8)
        h[:deg, :k] = p.T
        h[:deg, k:k + deg] = np.eye(deg, dtype=np.uint8)
        h[deg, :] = 1
        self.H = h

    def encode(self, msg) -> np.ndarray:
        msg = np.asarray(msg, dtype=np.uint8)
        if msg.ndim != 1 or msg.size != self.k:
            raise ValueError(f"message must have length {self.k}")
        parity = _cyclic_parity(msg, self._gen)
        word = np.concatenate([msg, parity, np.zeros(1, dtype=np.uint8)])
        word[-1] = word.sum() % 2
        return word

    def syndrome(self, word) -> np.ndarray:
        word = np.asarray(word, dtype=np.uint8)
        return (self.H @ word) % 2


@lru_cache(maxsize=None)
def extended_bch_64_57() -> ComponentCode:
    return ComponentCode(64, 57, GEN_POLY_BCH63, "ebch(64,57)")


@lru_cache(maxsize=None)
def extended_hamming_8_4() -> ComponentCode:
    return ComponentCode(8, 4, GEN_POLY_HAMMING7, "ehamming(8,4)")


def ebch_encode(msg) -> np.ndarray:
    """Systematic extended BCH(64,57) encoding (minimum distance 4)."""
    return extended_bch_64_57().encode(msg)


def check_matrix() -> np.ndarray:
    """7x64 parity check matrix of the extended BCH(64,57) code."""
    return extended_bch_64_57().H.copy()


def gf2_rank(mat) -> int:
    m = np.array(mat, dtype=np.uint8) % 2
    rank = 0
    cols = m.shape[1]
    for c in range(cols):
        piv = np.nonzero(m[rank:, c])[0]
        if piv.size == 0:
            continue
        piv = piv[0] + rank
        m[[rank, piv]] = m[[piv, rank]]
        hit = np.nonzero(m[:, c])[0]
        for rr in hit:
            if rr != rank:
                m[rr] ^= m[rank]
        rank += 1
        if rank == m.shape[0]:
            break
    return rank


def gauss_jordan_systematize(h_permuted, perm):
    """Reduce a full-row-rank check matrix to identity on its last r columns.

    ``h_permuted`` is H with columns reordered by ``perm``.  When a pivot
    column is linearly dependent on the pivots chosen so far it is
    swapped with the nearest later independent column (falling back to
    the nearest earlier information column); the swaps are recorded in
    the returned adjusted permutation.
    """
    h = np.array(h_permuted, dtype=np.uint8) % 2
    perm = np.array(perm, dtype=np.int64).copy()
    r, n = h.shape
    k = n - r

    def pivot_row(col, row):
        hit = np.nonzero(h[row:, col])[0]
        return hit[0] + row if hit.size else -1

    for p in range(r):
        col = k + p
        piv = pivot_row(col, p)
        if piv < 0:
            swapped = False
            for c2 in list(range(col + 1, n)) + list(range(k - 1, -1, -1)):
                if pivot_row(c2, p) >= 0:
                    h[:, [col, c2]] = h[:, [c2, col]]
                    perm[[col, c2]] = perm[[c2, col]]
                    swapped = True
                    break
            if not swapped:
                raise ValueError("check matrix is rank deficient")
            piv = pivot_row(col, p)
        if piv != p:
            h[[p, piv]] = h[[piv, p]]
        hit = np.nonzero(h[:, col])[0]
        for rr in hit:
            if rr != p:
                h[rr] ^= h[p]
    return h, perm


def sys_reencode(info_bits, h_sys) -> np.ndarray:
    """Fill the parity positions of a systematic check matrix's codeword."""
    h_sys = np.asarray(h_sys, dtype=np.uint8)
    r, n = h_sys.shape
    k = n - r
    if not np.array_equal(h_sys[:, k:], np.eye(r, dtype=np.uint8)):
        raise ValueError("check matrix is not systematic on its last columns")
    info = np.asarray(info_bits, dtype=np.uint8)
    if info.size != k:
        raise ValueError(f"info must have length {k}")
    parity = (h_sys[:, :k] @ info) % 2
    return np.concatenate([info, parity])

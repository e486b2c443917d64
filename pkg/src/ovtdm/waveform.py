"""Discrete multiplexing waveforms (overlap taps) for the OvTDM encoder.

The continuous shaping waveform is represented by its K symbol-spaced
samples, one tap per shift of Ts/K, so each received sample superposes
exactly K weighted symbols.  All taps are normalized to unit energy so
that Eb accounting downstream is waveform-independent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import windows

ENERGY_TOL = 1e-12


@dataclass(frozen=True)
class TapVector:
    """K real overlap taps, unit energy, with the generating window's label."""

    taps: tuple
    k: int
    label: str

    def __post_init__(self):
        arr = np.asarray(self.taps, dtype=float)
        if self.k < 1 or arr.ndim != 1 or arr.size != self.k:
            raise ValueError("tap count must equal k and k must be >= 1")
        if not np.all(np.isfinite(arr)):
            raise ValueError("taps must be finite")
        energy = float(np.sum(arr * arr))
        if abs(energy - 1.0) > 1e-9:
            raise ValueError(f"taps must have unit energy, got {energy!r}")

    def as_array(self) -> np.ndarray:
        return np.asarray(self.taps, dtype=float)


def _normalized(values, label: str) -> TapVector:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("need a nonempty 1-D tap sequence")
    if not np.all(np.isfinite(arr)):
        raise ValueError("taps must be finite")
    energy = float(np.sum(arr * arr))
    if energy == 0.0:
        raise ValueError("taps must not be all zero")
    arr = arr / np.sqrt(energy)
    return TapVector(tuple(arr.tolist()), arr.size, label)


def chebyshev_taps(k: int, attenuation_db: float = 80.0) -> TapVector:
    """Dolph-Chebyshev window of length k with the given sidelobe attenuation."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if not np.isfinite(attenuation_db) or attenuation_db <= 0:
        raise ValueError("attenuation_db must be positive and finite")
    if k == 1:
        w = np.ones(1)
    else:
        w = windows.chebwin(k, attenuation_db)
    return _normalized(w, f"chebyshev{attenuation_db:g}")


def rect_taps(k: int) -> TapVector:
    """Rectangular (all-equal) reference waveform."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return _normalized(np.ones(k), "rect")


def load_taps(source) -> TapVector:
    """Normalize an arbitrary finite, not-all-zero tap sequence."""
    return _normalized(source, "custom")


def load_taps_file(path) -> TapVector:
    """Read taps from a text file: one decimal per line, '#' comments ignored."""
    values = []
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                values.append(float(line))
    return load_taps(values)

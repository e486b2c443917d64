"""Coded turbo-structure OvTDM link simulator."""

from .bch import (
    check_matrix,
    ebch_encode,
    extended_bch_64_57,
    extended_hamming_8_4,
    gauss_jordan_systematize,
    gf2_rank,
    sys_reencode,
)
from .codec import bcjr_decode, build_trellis, ovtdm_encode
from .harness import (
    BerRecord,
    SweepConfig,
    awgn_add,
    ebn0_to_sigma2,
    run_sweep,
    shannon_limit_ebn0,
    symbol_efficiency,
)
from .link import (
    InterleaverPair,
    ReceiverConfig,
    make_interleaver_pair,
    qam_demap,
    qam_transmit,
    receive,
    transmit,
)
from .tpc import FbbaConfig, fbba_component_decode, tpc_decode, tpc_encode
from .waveform import TapVector, chebyshev_taps, load_taps, load_taps_file, rect_taps

__all__ = [
    "BerRecord", "FbbaConfig", "InterleaverPair", "ReceiverConfig", "SweepConfig",
    "TapVector", "awgn_add", "bcjr_decode", "build_trellis", "check_matrix",
    "chebyshev_taps", "ebch_encode", "ebn0_to_sigma2", "extended_bch_64_57",
    "extended_hamming_8_4", "fbba_component_decode", "gauss_jordan_systematize",
    "gf2_rank", "load_taps", "load_taps_file", "make_interleaver_pair",
    "ovtdm_encode", "qam_demap", "qam_transmit", "receive", "rect_taps",
    "run_sweep", "shannon_limit_ebn0", "symbol_efficiency", "sys_reencode",
    "tpc_decode", "tpc_encode", "transmit",
]

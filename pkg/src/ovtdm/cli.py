"""Command-line front end for BER sweeps and the symbol-efficiency table."""

from __future__ import annotations

import argparse
import sys

from .harness import (
    SCHEMES,
    SweepConfig,
    efficiency_table,
    records_to_csv,
    run_sweep,
)
from .link import ReceiverConfig
from .tpc import FbbaConfig
from .waveform import chebyshev_taps, load_taps_file, rect_taps

_SCHEME_ALIASES = {
    "turbo-ovtdm-a": "turbo-ovtdm-a",
    "turbo-ovtdm-b": "turbo-ovtdm-b",
    "qam-tpc": "qam-tpc",
    "ovtdm-single": "ovtdm-single",
    "bpsk": "bpsk-uncoded",
}


def _parse_ebn0(text: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected start:stop:step")
    start, stop, step = (float(p) for p in parts)
    return start, stop, step


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ovtdm-sim",
                                description="Coded turbo-structure OvTDM link simulator")
    p.add_argument("--scheme", choices=sorted(_SCHEME_ALIASES), default="turbo-ovtdm-a")
    p.add_argument("--k", type=int, default=6, help="overlap coefficient")
    p.add_argument("--m", type=int, default=64, help="QAM order")
    p.add_argument("--ebn0", type=_parse_ebn0, default=(4.0, 7.0, 0.5),
                   metavar="START:STOP:STEP")
    p.add_argument("--frames", type=int, default=10_000, help="max frames per point")
    p.add_argument("--min-errors", type=int, default=200)
    p.add_argument("--global-iters", type=int, default=6)
    p.add_argument("--ovtdm-iters", type=int, default=5)
    p.add_argument("--tpc-iters", type=int, default=4)
    p.add_argument("--list-bits", type=int, default=5, help="FBBA flip positions q")
    p.add_argument("--waveform", default="chebyshev80")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", default=None, help="CSV output path (default stdout)")
    p.add_argument("--emit-efficiency-table", action="store_true")
    return p


def _taps_from_arg(arg: str, k: int):
    if arg == "chebyshev80":
        return chebyshev_taps(k, 80.0)
    if arg == "rect":
        return rect_taps(k)
    if arg.startswith("file:"):
        return load_taps_file(arg[5:])
    raise ValueError(f"unknown waveform {arg!r}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.emit_efficiency_table:
        sys.stdout.write(efficiency_table())
        return 0
    try:
        taps = _taps_from_arg(args.waveform, args.k)
        scheme = _SCHEME_ALIASES[args.scheme]
        fbba = FbbaConfig(q=args.list_bits, tpc_iterations=args.tpc_iters)
        receiver = ReceiverConfig(
            scheme="B" if scheme == "turbo-ovtdm-b" else "A",
            global_iterations=args.global_iters,
            ovtdm_iterations=args.ovtdm_iters,
            fbba=fbba,
        )
        start, stop, step = args.ebn0
        cfg = SweepConfig(
            scheme=scheme, k=args.k, m=args.m,
            ebn0_start=start, ebn0_stop=stop, ebn0_step=step,
            max_frames=args.frames, min_bit_errors=args.min_errors,
            seed=args.seed, receiver=receiver, taps=taps,
        )
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"configuration error: {exc}\n")
        return 2
    records = run_sweep(cfg)
    csv_text = records_to_csv(cfg, records)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(csv_text)
    else:
        sys.stdout.write(csv_text)
    return 0


if __name__ == "__main__":
    sys.exit(main())

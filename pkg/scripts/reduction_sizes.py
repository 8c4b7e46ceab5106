"""Tabulate group sizes produced by both reductions."""
import argparse
import math

from threesum_lab.butterfly import ButterflySpec
from threesum_lab.butterfly_reduction import ReductionError, ReductionLayout, suggested_degree
from threesum_lab.lsd_reduction import BlockParams, LSDParameterError, choose_ell


def butterfly_table(max_B, max_d):
    print(f"{'B':>3} {'d':>3} {'n':>8} {'cyclic m':>14} {'m/n^2':>7} {'xor bits':>9} {'2lg n+5':>8}")
    for B in range(2, max_B + 1):
        for d in range(1, max_d + 1):
            spec = ButterflySpec(B, d)
            n = spec.num_edges
            m = ReductionLayout(spec, "cyclic").group.cardinality
            try:
                width = str(ReductionLayout(spec, "xor").group.param)
            except ReductionError:
                width = "-"
            print(f"{B:3d} {d:3d} {n:8d} {m:14d} {m / n**2:7.3f} {width:>9} {2 * math.ceil(math.log2(n)) + 5:8d}")


def lsd_table(deltas, log_ns, Bs):
    print(f"{'lg n':>5} {'B':>3} {'delta':>6} {'ell':>4} {'N':>10} {'lg modulus':>11} {'(1+delta)lg n':>14}")
    for log_n in log_ns:
        for B in Bs:
            for delta in deltas:
                ell = choose_ell(2**log_n, B, delta)
                N = 2**log_n // B
                N -= N % ell
                try:
                    p = BlockParams.minimal(N, B, ell)
                except LSDParameterError as exc:
                    print(f"{log_n:5d} {B:3d} {delta:6.2f} {ell:4d}  rejected: {exc}")
                    continue
                print(f"{log_n:5d} {B:3d} {delta:6.2f} {ell:4d} {N:10d} {math.log2(p.delta):11.2f}"
                      f" {(1 + delta) * math.log2(p.n):14.2f}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-B", type=int, default=4)
    ap.add_argument("--max-d", type=int, default=4)
    ap.add_argument("--delta", type=float, nargs="+", default=[0.5, 0.75, 1.0])
    ap.add_argument("--log-n", type=int, nargs="+", default=[16, 24, 32])
    ap.add_argument("--lsd-B", type=int, nargs="+", default=[2, 4])
    args = ap.parse_args()
    butterfly_table(args.max_B, args.max_d)
    print()
    lsd_table(args.delta, args.log_n, args.lsd_B)
    print()
    print("suggested butterfly degree for S=2^20, w=32:",
          {n: suggested_degree(2**20, 32, n) for n in (2**16, 2**20, 2**24)})


if __name__ == "__main__":
    main()

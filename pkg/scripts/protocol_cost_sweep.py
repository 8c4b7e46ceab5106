"""Communication cost of the parallel-query protocol on random LSD instances."""
import argparse
import csv
import random
import sys

from threesum_lab.lsd_reduction import (
    BlockParams,
    LSDInstance,
    alice_bit_bound,
    brute_force_disjoint,
    build_instance,
    build_queries,
    simulate_protocol,
)
from threesum_lab.threesum_core import BitVectorStructure, SortedSumsetStructure

FIELDS = ["N", "B", "ell", "structure", "S", "w", "rounds", "alice_bits", "alice_bound", "bob_bits", "correct"]


def random_instance(N, B, density, rng):
    data = [(j, b) for j in range(N) for b in range(B) if rng.random() < density]
    return LSDInstance(N, B, data, [rng.randrange(B) for _ in range(N)])


def sweep(configs, trials, density, seed, structures):
    rng = random.Random(seed)
    for N, B, ell in configs:
        params = BlockParams.minimal(N, B, ell)
        for _ in range(trials):
            inst = random_instance(N, B, density, rng)
            ts = build_instance(inst, params)
            queries = build_queries(inst.query_vector, params)
            for kind in structures:
                if kind == "bitvector":
                    st = BitVectorStructure(ts)
                else:
                    st = SortedSumsetStructure(ts, w=params.delta.bit_length())
                tr = simulate_protocol(st, queries)
                yield {
                    "N": N, "B": B, "ell": ell, "structure": kind, "S": st.S, "w": st.w,
                    "rounds": tr.num_rounds, "alice_bits": tr.alice_bits,
                    "alice_bound": alice_bit_bound(st.S, params.num_blocks, tr.num_rounds),
                    "bob_bits": tr.bob_bits, "correct": tr.answer == brute_force_disjoint(inst),
                }


def parse_config(text):
    N, B, ell = (int(x) for x in text.split(","))
    return N, B, ell


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", type=parse_config, nargs="+", default=[(4, 2, 2), (6, 2, 2), (6, 2, 3), (8, 2, 2)],
                    help="N,B,ell triples")
    ap.add_argument("--structures", nargs="+", default=["bitvector", "sorted"], choices=["bitvector", "sorted"])
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--density", type=float, default=0.3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    writer = csv.DictWriter(sys.stdout, fieldnames=FIELDS)
    writer.writeheader()
    for row in sweep(args.config, args.trials, args.density, args.seed, args.structures):
        writer.writerow(row)


if __name__ == "__main__":
    main()

"""Run the refuter over seeded random 2-probe schemes and tally what it finds."""
import argparse
import json
import time
from collections import Counter

from threesum_lab.adversarial import GroupTooSmall
from threesum_lab.cli import parse_group
from threesum_lab.refuter import (
    AchievableSetFull,
    FunctionType,
    NoWeaknessFound,
    find_weakness,
    build_certificate,
    random_scheme,
    tables_of,
    verify_certificate,
)

FAMILIES = {
    "all": None,
    "and": tables_of(FunctionType.AND),
    "xor": tables_of(FunctionType.XOR),
    "and+xor": tables_of(FunctionType.AND, FunctionType.XOR),
    "copy+and": tables_of(FunctionType.COPY, FunctionType.AND),
}


def run_family(spec, S, tables, seeds):
    kinds, verified, cycle_lengths = Counter(), 0, []
    for seed in seeds:
        scheme = random_scheme(spec, S, seed, tables)
        try:
            w = find_weakness(scheme, spec)
            cert = build_certificate(scheme, spec, w, seed)
        except (NoWeaknessFound, AchievableSetFull, GroupTooSmall) as exc:
            kinds[type(exc).__name__] += 1
            continue
        name = type(w).__name__
        if name == "MonochromaticCycle":
            name += f"[{w.kind.value}]"
            cycle_lengths.append(len(w.queries))
        kinds[name] += 1
        verified += verify_certificate(scheme, spec, cert)
    return {"kinds": dict(kinds), "verified": verified, "cycle_lengths": cycle_lengths}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--group", default="cyclic:2048")
    ap.add_argument("--S", type=int, nargs="+", default=[64, 256, 1024])
    ap.add_argument("--families", nargs="+", default=list(FAMILIES), choices=list(FAMILIES))
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--out", default=None, help="write the summary as JSON")
    args = ap.parse_args()

    spec = parse_group(args.group)
    rows = []
    for fam in args.families:
        for S in args.S:
            t0 = time.perf_counter()
            res = run_family(spec, S, FAMILIES[fam], range(args.trials))
            res.update(family=fam, S=S, trials=args.trials, seconds=round(time.perf_counter() - t0, 3))
            rows.append(res)
            print(f"{fam:9s} S={S:5d} verified {res['verified']:3d}/{args.trials}  {res['kinds']}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump({"group": spec.to_json(), "rows": rows}, fh, indent=2)


if __name__ == "__main__":
    main()

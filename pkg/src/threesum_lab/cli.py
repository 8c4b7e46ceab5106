"""Command-line front end.

Exit codes: 0 success, 1 parse/parameter/I-O error, 2 no result, 3 failed
verification.  Every command prints a single JSON document (or writes it to
``--out``).
"""
from __future__ import annotations

import argparse
import itertools
import json
import random
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import adversarial, butterfly_reduction, lsd_reduction, refuter
from .butterfly import ButterflySpec, EdgeSet, random_edge_subset, reachable
from .group_core import GroupDomainError, GroupSpec
from .threesum_core import (
    BitVectorStructure,
    NonAdaptiveScheme,
    SortedSumsetStructure,
    brute_force_answer,
)

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_NO_RESULT = 2
EXIT_VERIFY_FAILED = 3

RNG_NAME = f"python-random-mt19937 (CPython {sys.version_info.major}.{sys.version_info.minor})"


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    command: str
    parameters: dict
    checks_passed: int = 0
    checks_failed: int = 0
    failures: list = field(default_factory=list)
    wall_time: float = 0.0
    rng: str = RNG_NAME

    def fail(self, record: dict) -> None:
        self.failures.append(record)
        self.checks_failed = len(self.failures)

    def to_json(self) -> dict:
        out = asdict(self)
        out["failures"] = sorted(self.failures, key=lambda r: json.dumps(r, sort_keys=True))
        return out

    @classmethod
    def from_json(cls, obj: dict) -> RunReport:
        return cls(**obj)


def cmd_butterfly_check(B: int, d: int, group_kind: str, trials: int, seed: int) -> RunReport:
    report = RunReport("butterfly-check", {"B": B, "d": d, "group": group_kind, "trials": trials, "seed": seed})
    start = time.perf_counter()
    spec = ButterflySpec(B, d)
    rng = random.Random(seed)
    edge_sets = [("full", EdgeSet.full(spec)), ("empty", EdgeSet.empty(spec))]
    for k in range(trials):
        p = rng.random()
        edge_sets.append((f"trial-{k}", random_edge_subset(spec, p, rng.getrandbits(64))))
    for label, E in edge_sets:
        inst, query, _ = butterfly_reduction.reduce(spec, E, group_kind)
        for s in range(spec.layer_size):
            for t in range(spec.layer_size):
                got = brute_force_answer(inst, query(s, t))
                if got == (not reachable(spec, E, s, t)):
                    report.checks_passed += 1
                else:
                    report.fail({"edge_set": label, "s": s, "t": t, "answer": got})
    report.wall_time = time.perf_counter() - start
    return report


def _all_lsd_instances(N: int, B: int):
    universe = [(j, b) for j in range(N) for b in range(B)]
    for mask in range(1 << len(universe)):
        data = [u for k, u in enumerate(universe) if mask >> k & 1]
        for qv in itertools.product(range(B), repeat=N):
            yield lsd_reduction.LSDInstance(N, B, data, qv)


def random_lsd_instance(N: int, B: int, rng: random.Random) -> lsd_reduction.LSDInstance:
    density = rng.random()
    data = [(j, b) for j in range(N) for b in range(B) if rng.random() < density]
    return lsd_reduction.LSDInstance(N, B, data, [rng.randrange(B) for _ in range(N)])


def cmd_lsd_check(N: int, B: int, ell: int, exhaustive: bool, trials: int = 100, seed: int = 0) -> RunReport:
    report = RunReport(
        "lsd-check",
        {"N": N, "B": B, "ell": ell, "mode": "exhaustive" if exhaustive else "sampled", "trials": trials, "seed": seed},
    )
    start = time.perf_counter()
    params = lsd_reduction.BlockParams.minimal(N, B, ell)
    report.parameters["delta"] = params.delta
    if exhaustive:
        cases = _all_lsd_instances(N, B)
    else:
        rng = random.Random(seed)
        cases = (random_lsd_instance(N, B, rng) for _ in range(trials))
    for inst in cases:
        got = lsd_reduction.disjoint_via_reduction(inst, params)
        if got == lsd_reduction.brute_force_disjoint(inst):
            report.checks_passed += 1
        else:
            report.fail({"data": sorted(inst.data_set), "query": list(inst.query_vector), "answer": got})
    report.wall_time = time.perf_counter() - start
    return report


def cmd_lsd_protocol(structure_kind: str, N: int, B: int, ell: int, inst: lsd_reduction.LSDInstance) -> dict:
    params = lsd_reduction.BlockParams.minimal(N, B, ell)
    ts = lsd_reduction.build_instance(inst, params)
    if structure_kind == "bitvector":
        structure = BitVectorStructure(ts)
    elif structure_kind == "sorted":
        structure = SortedSumsetStructure(ts, w=max(1, (params.delta - 1).bit_length()))
    else:
        raise UsageError(f"unknown structure {structure_kind!r}")
    queries = lsd_reduction.build_queries(inst.query_vector, params)
    transcript = lsd_reduction.simulate_protocol(structure, queries)
    out = transcript.to_json()
    out["expected"] = lsd_reduction.brute_force_disjoint(inst)
    out["alice_bound"] = lsd_reduction.alice_bit_bound(structure.S, len(queries), transcript.num_rounds)
    return out


def parse_group(text: str) -> GroupSpec:
    """Accept ``cyclic:M``, ``xor:K`` or the JSON form."""
    text = text.strip()
    try:
        if text.startswith("{"):
            return GroupSpec.from_json(json.loads(text))
        kind, _, value = text.partition(":")
        if kind == "cyclic":
            return GroupSpec.cyclic(int(value))
        if kind in ("xor", "xor_bits"):
            return GroupSpec.xor(int(value))
    except (ValueError, GroupDomainError) as exc:
        raise UsageError(f"cannot parse group {text!r}: {exc}") from exc
    raise UsageError(f"cannot parse group {text!r}")


def cmd_adversary_build(group: GroupSpec, Q: list[int], pattern: str, n: int, seed: int) -> dict:
    if len(pattern) != len(Q) or set(pattern) - {"0", "1"}:
        raise UsageError(f"pattern must be {len(Q)} characters of 0/1, got {pattern!r}")
    target = adversarial.PatternTarget.from_bits(Q, [int(c) for c in pattern])
    inst = adversarial.construct_input(group, target, n, seed)
    return inst.to_json()


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _load_scheme(path: str) -> NonAdaptiveScheme:
    try:
        return NonAdaptiveScheme.from_json(_load_json(path))
    except (KeyError, ValueError, IndexError, TypeError) as exc:
        raise UsageError(f"bad scheme file {path}: {exc}") from exc


def cmd_refute(scheme_path: str, group: GroupSpec, out_path: str | None, seed: int = 0) -> tuple[int, dict]:
    scheme = _load_scheme(scheme_path)
    try:
        weakness = refuter.find_weakness(scheme, group)
    except refuter.NoWeaknessFound as exc:
        return EXIT_NO_RESULT, {"result": "no-weakness", "detail": str(exc)}
    cert = refuter.build_certificate(scheme, group, weakness, seed)
    doc = cert.to_json()
    if out_path:
        Path(out_path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    return EXIT_OK, {"result": "refuted", "weakness": type(weakness).__name__, "certificate": doc}


def cmd_verify_cert(scheme_path: str, cert_path: str) -> tuple[int, dict]:
    scheme = _load_scheme(scheme_path)
    try:
        cert = refuter.RefutationCertificate.from_json(_load_json(cert_path))
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"bad certificate file {cert_path}: {exc}") from exc
    ok = refuter.verify_certificate(scheme, cert.group, cert)
    return (EXIT_OK if ok else EXIT_VERIFY_FAILED), {"verified": ok}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="threesum-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("butterfly-check", help="butterfly reduction vs. reachability")
    p.add_argument("--B", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--group", choices=["cyclic", "xor"], default="cyclic")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("lsd-check", help="LSD reduction vs. direct intersection")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--B", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("lsd-protocol", help="simulate the parallel-query protocol")
    p.add_argument("--structure", choices=["bitvector", "sorted"], required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--B", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--data", default=None, help="pairs j:b separated by commas; random when omitted")
    p.add_argument("--query", type=_int_list, default=None, help="b_0,...,b_{N-1}; random when omitted")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("adversary-build", help="input realising a membership pattern on Q")
    p.add_argument("--group", required=True, help="cyclic:M, xor:K or JSON")
    p.add_argument("--q", type=_int_list, required=True)
    p.add_argument("--pattern", required=True, help="one 0/1 character per element of --q")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("refute", help="certificate that a 2-probe scheme is wrong on some input")
    p.add_argument("--scheme", required=True)
    p.add_argument("--group", required=True, help="cyclic:M, xor:K or JSON")
    p.add_argument("--out", default=None)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("verify-cert", help="check a refutation certificate")
    p.add_argument("--scheme", required=True)
    p.add_argument("--cert", required=True)
    return parser


def _parse_data(text: str) -> list[tuple[int, int]]:
    try:
        out = []
        for item in text.split(","):
            if item.strip():
                j, b = item.split(":")
                out.append((int(j), int(b)))
        return out
    except ValueError as exc:
        raise UsageError(f"cannot parse data set {text!r}") from exc


def run(argv: list[str] | None = None) -> tuple[int, dict]:
    args = build_parser().parse_args(argv)
    if args.command == "butterfly-check":
        report = cmd_butterfly_check(args.B, args.d, args.group, args.trials, args.seed)
        return (EXIT_OK if not report.failures else EXIT_VERIFY_FAILED), report.to_json()
    if args.command == "lsd-check":
        report = cmd_lsd_check(args.N, args.B, args.ell, args.exhaustive, args.trials, args.seed)
        return (EXIT_OK if not report.failures else EXIT_VERIFY_FAILED), report.to_json()
    if args.command == "lsd-protocol":
        rng = random.Random(args.seed)
        inst = random_lsd_instance(args.N, args.B, rng)
        data = inst.data_set if args.data is None else _parse_data(args.data)
        query = inst.query_vector if args.query is None else args.query
        try:
            inst = lsd_reduction.LSDInstance(args.N, args.B, data, query)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        return EXIT_OK, cmd_lsd_protocol(args.structure, args.N, args.B, args.ell, inst)
    if args.command == "adversary-build":
        return EXIT_OK, cmd_adversary_build(parse_group(args.group), args.q, args.pattern, args.n, args.seed)
    if args.command == "refute":
        return cmd_refute(args.scheme, parse_group(args.group), args.out, args.seed)
    if args.command == "verify-cert":
        return cmd_verify_cert(args.scheme, args.cert)
    raise UsageError(f"unknown command {args.command}")


def main(argv: list[str] | None = None) -> int:
    try:
        code, doc = run(argv)
    except (UsageError, ValueError, GroupDomainError) as exc:
        # parameter errors from the library are ValueError subclasses
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return EXIT_PARSE
    print(json.dumps(doc, indent=2))
    return code


if __name__ == "__main__":
    sys.exit(main())

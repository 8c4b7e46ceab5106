"""Inputs whose sumset hits a prescribed pattern on a query set.

Given queries ``Q`` and a target ``P`` within ``Q``, :func:`construct_input`
greedily adds pairs ``(p - t, t)`` so that every ``p`` in ``P`` becomes a
pair sum while no pair sum ever lands in ``Q - P``.  Each step blocks at most
``|Q - P| * (|A1| + |A2|)`` choices of ``t`` plus ``|A1| + |A2|`` more to keep
the sets duplicate-free, so a group with more than ``2n^2 + 2n`` elements
always leaves a free choice.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .group_core import GroupSpec, add, subtract
from .threesum_core import ThreeSumInstance, sumset


class GroupTooSmall(ValueError):
    pass


class PatternInvalid(ValueError):
    pass


def min_group_size(n: int) -> int:
    """Smallest cardinality accepted for witnesses of size n."""
    return 2 * n * n + 2 * n + 1


@dataclass(frozen=True)
class PatternTarget:
    Q: tuple[int, ...]
    P: frozenset[int]

    def __init__(self, Q: Iterable[int], P: Iterable[int]):
        Q = tuple(Q)
        P = frozenset(P)
        if len(set(Q)) != len(Q):
            raise PatternInvalid("Q has duplicate elements")
        if not P <= set(Q):
            raise PatternInvalid("P is not a subset of Q")
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "P", P)

    @classmethod
    def from_bits(cls, Q: Sequence[int], bits: Sequence[int]) -> PatternTarget:
        if len(bits) != len(Q):
            raise PatternInvalid(f"pattern has {len(bits)} bits for {len(Q)} queries")
        return cls(Q, [q for q, b in zip(Q, bits) if b])


def construct_input(spec: GroupSpec, target: PatternTarget, n: int, seed: int = 0) -> ThreeSumInstance:
    for q in target.Q:
        spec.check(q)
    if len(target.Q) > n:
        raise PatternInvalid(f"|Q| = {len(target.Q)} exceeds n = {n}")
    size = spec.cardinality
    if size < min_group_size(n):
        raise GroupTooSmall(
            f"group {spec} has {size} elements; need more than 2n^2 + 2n = {2 * n * n + 2 * n}"
        )
    rng = random.Random(seed)
    forbidden = [q for q in target.Q if q not in target.P]
    forbidden_set = set(forbidden)
    a1: list[int] = []
    a2: list[int] = []
    a1_set: set[int] = set()
    a2_set: set[int] = set()
    covered: set[int] = set()

    def add_pair_summing_to(p: int) -> None:
        blocked = set(a2_set)
        blocked.update(subtract(spec, p, x) for x in a1_set)  # p - t must be new in A1
        for q in forbidden:
            blocked.update(subtract(spec, q, x) for x in a1)  # t + a1 = q
            blocked.update(add(spec, p, subtract(spec, y, q)) for y in a2)  # (p - t) + a2 = q
        start = rng.randrange(size)
        for off in range(size):
            t = (start + off) % size
            if t not in blocked:
                break
        else:
            raise GroupTooSmall("every choice of t is blocked")
        x = subtract(spec, p, t)
        for y in a2:
            s = add(spec, x, y)
            if s in target.P:
                covered.add(s)
        for y in a1:
            s = add(spec, y, t)
            if s in target.P:
                covered.add(s)
        a1.append(x)
        a2.append(t)
        a1_set.add(x)
        a2_set.add(t)
        if p in target.P:
            covered.add(p)

    for p in target.Q:
        if p in target.P and p not in covered:
            add_pair_summing_to(p)

    while len(a1) < n:
        r = rng.randrange(size)
        while r in forbidden_set:
            r = rng.randrange(size)
        add_pair_summing_to(r)

    return ThreeSumInstance(spec, a1, a2)


def verify_pattern(spec: GroupSpec, Q: Iterable[int], P: Iterable[int], a1: Iterable[int], a2: Iterable[int]) -> bool:
    Q, P = set(Q), set(P)
    ss = sumset(ThreeSumInstance(spec, a1, a2))
    return P <= ss and not (Q - P) & ss


def sample_distribution(spec: GroupSpec, Q: Sequence[int], n: int, seed: int) -> tuple[frozenset[int], ThreeSumInstance]:
    """Draw P uniformly from the subsets of Q and realise it."""
    rng = random.Random(seed)
    P = frozenset(q for q in Q if rng.getrandbits(1))
    inst = construct_input(spec, PatternTarget(Q, P), n, seed=rng.getrandbits(64))
    return P, inst


def cell_sampling_count(G_size: int, S: int, Delta: int, T: int) -> Fraction:
    """Average number of queries answered by a uniformly random Delta-subset of S cells.

    Every query probes T distinct cells, so this equals
    ``G * C(S - T, Delta - T) / C(S, Delta)`` and some subset attains at least it.
    """
    if not 0 <= T <= Delta <= S:
        raise ValueError(f"need 0 <= T <= Delta <= S, got T={T}, Delta={Delta}, S={S}")
    return Fraction(G_size * math.comb(S - T, Delta - T), math.comb(S, Delta))


def cell_sampling_product(G_size: int, S: int, Delta: int, T: int) -> Fraction:
    """Same quantity as the falling-factorial ratio."""
    out = Fraction(G_size)
    for i in range(T):
        out *= Fraction(Delta - i, S - i)
    return out


def best_cell_subset(probes: Sequence[Sequence[int]], S: int, Delta: int) -> tuple[tuple[int, ...], int]:
    """Exhaustively find a Delta-subset of cells answering the most queries."""
    best, best_count = (), -1
    probe_sets = [frozenset(p) for p in probes]
    for C in itertools.combinations(range(S), Delta):
        cs = set(C)
        count = sum(1 for p in probe_sets if p <= cs)
        if count > best_count:
            best, best_count = C, count
    return best, best_count

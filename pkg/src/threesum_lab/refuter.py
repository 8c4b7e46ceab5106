"""Refutation certificates for non-adaptive 2-bit-probe schemes.

A 2-probe scheme is a multigraph on its ``S`` cells: query ``g`` is an edge
``(u_g, v_g)`` labelled with the truth table ``f_g``.  Four local shapes
already make the scheme wrong on some input:

* a constant table (its answer ignores the input);
* three queries on the same two cells (8 answer patterns, at most 4 memories);
* two copy-type queries reading the same cell (4 patterns, 2 memories);
* a cycle of AND-type or XOR-type queries.

For such a shape we enumerate every assignment of its cells, pick an answer
pattern no assignment produces, and realise that pattern with an actual
input via :func:`construct_input`.  The resulting certificate is checkable
by brute force alone.
"""
from __future__ import annotations

import enum
import itertools
import random
from collections import defaultdict, deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .adversarial import GroupTooSmall, PatternTarget, construct_input, min_group_size
from .group_core import GroupSpec
from .threesum_core import NonAdaptiveScheme, ThreeSumInstance, brute_force_answer, table_lookup

MAX_CERT_CELLS = 24


class NoWeaknessFound(LookupError):
    pass


class AchievableSetFull(RuntimeError):
    pass


class FunctionType(enum.Enum):
    COPY = "copy"
    CONSTANT = "constant"
    AND = "and"
    XOR = "xor"


XOR_TABLE = 0b0110
XNOR_TABLE = 0b1001


def _depends_on(table: int, probe: int) -> bool:
    # probe 0 is the first (most significant) bit of the table index
    shift = 2 if probe == 0 else 1
    mask = 0b0011 if probe == 0 else 0b0101
    return (table & mask) != ((table >> shift) & mask)


def classify(table: int) -> FunctionType:
    if not 0 <= table < 16:
        raise ValueError(f"truth table {table} is not a 4-bit integer")
    first, second = _depends_on(table, 0), _depends_on(table, 1)
    if not first and not second:
        return FunctionType.CONSTANT
    if first != second:
        return FunctionType.COPY
    if table in (XOR_TABLE, XNOR_TABLE):
        return FunctionType.XOR
    return FunctionType.AND


def copy_reads(table: int) -> int:
    """Which probe (0 or 1) a copy-type table depends on."""
    return 0 if _depends_on(table, 0) else 1


class ProbeEdge(NamedTuple):
    g: int
    u: int
    v: int
    table: int


@dataclass(frozen=True)
class ProbeGraph:
    S: int
    edges: tuple[ProbeEdge, ...]


def check_two_probe(scheme: NonAdaptiveScheme) -> None:
    if scheme.T != 2:
        raise ValueError(f"expected a 2-probe scheme, got T = {scheme.T}")


def build_graph(scheme: NonAdaptiveScheme, spec: GroupSpec) -> ProbeGraph:
    check_two_probe(scheme)
    if scheme.num_queries != spec.cardinality:
        raise ValueError(f"scheme covers {scheme.num_queries} queries but {spec} has {spec.cardinality}")
    return ProbeGraph(
        scheme.S,
        tuple(ProbeEdge(g, u, v, t) for g, ((u, v), t) in enumerate(zip(scheme.probes, scheme.tables))),
    )


def shortest_cycle(S: int, edges: Sequence[ProbeEdge]) -> list[ProbeEdge] | None:
    """A shortest cycle (length >= 2) ignoring self-loops, as a traversal order.

    Breadth-first search from every node; a non-tree edge ``(x, y)`` closes a
    walk of length ``dist[x] + dist[y] + 1``.  The minimum over all roots is
    the girth, and any walk attaining it is a simple cycle.
    """
    adj: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for idx, e in enumerate(edges):
        if e.u != e.v:
            adj[e.u].append((e.v, idx))
            adj[e.v].append((e.u, idx))
    best: list[int] | None = None
    for root in sorted(adj):
        if best is not None and len(best) == 2:
            break
        dist = {root: 0}
        parent: dict[int, tuple[int, int]] = {}
        frontier = deque([root])
        closing = None
        closing_len = None
        while frontier:
            x = frontier.popleft()
            if closing_len is not None and 2 * dist[x] + 1 >= closing_len:
                break
            for y, idx in adj[x]:
                if x in parent and parent[x][1] == idx:
                    continue
                if y not in dist:
                    dist[y] = dist[x] + 1
                    parent[y] = (x, idx)
                    frontier.append(y)
                else:
                    length = dist[x] + dist[y] + 1
                    if closing_len is None or length < closing_len:
                        closing, closing_len = (x, y, idx), length
        if closing is None or (best is not None and closing_len >= len(best)):
            continue
        x, y, idx = closing

        def path_to_root(node: int) -> list[int]:
            out = []
            while node != root:
                node, e = parent[node]
                out.append(e)
            return out

        best = list(reversed(path_to_root(x))) + [idx] + path_to_root(y)
    return None if best is None else [edges[i] for i in best]


def girth(graph: ProbeGraph) -> float:
    """Shortest cycle length: 1 for a self-loop, 2 for parallel edges, inf for a forest."""
    if any(e.u == e.v for e in graph.edges):
        return 1
    cycle = shortest_cycle(graph.S, graph.edges)
    return float("inf") if cycle is None else len(cycle)


def girth_bound_check(nodes: int, avg_degree: float | Fraction, girth_value: float) -> bool:
    """Moore-type bound: nodes >= 2 (avg_degree - 2)^(girth/2 - 2).

    Evaluated exactly: squaring both sides turns the half-integer exponent
    into an integer one.  Pass ``Fraction(2 * edges, nodes)`` for the degree;
    the bound is tight for some small multigraphs, where float rounding
    flips the answer.
    """
    d = Fraction(avg_degree)
    if d <= 2:
        raise ValueError(f"average degree must exceed 2, got {avg_degree}")
    if girth_value == float("inf") or girth_value != int(girth_value):
        raise ValueError(f"girth must be a finite integer, got {girth_value}")
    return Fraction(nodes) ** 2 >= 4 * (d - 2) ** (int(girth_value) - 4)


# --- weaknesses --------------------------------------------------------------


@dataclass(frozen=True)
class ConstantEdge:
    g: int

    @property
    def queries(self) -> tuple[int, ...]:
        return (self.g,)


@dataclass(frozen=True)
class CopyFan:
    node: int
    g1: int
    g2: int

    @property
    def queries(self) -> tuple[int, ...]:
        return (self.g1, self.g2)


@dataclass(frozen=True)
class TripleParallel:
    g1: int
    g2: int
    g3: int

    @property
    def queries(self) -> tuple[int, ...]:
        return (self.g1, self.g2, self.g3)


@dataclass(frozen=True)
class MonochromaticCycle:
    kind: FunctionType
    edges: tuple[int, ...]  # queries y_1..y_t in traversal order

    @property
    def queries(self) -> tuple[int, ...]:
        return self.edges


Weakness = ConstantEdge | CopyFan | TripleParallel | MonochromaticCycle


def find_weakness(scheme: NonAdaptiveScheme, spec: GroupSpec) -> Weakness:
    graph = build_graph(scheme, spec)
    kinds = [classify(e.table) for e in graph.edges]

    for e, kind in zip(graph.edges, kinds):
        if kind is FunctionType.CONSTANT:
            return ConstantEdge(e.g)

    by_pair: dict[tuple[int, int], list[int]] = defaultdict(list)
    for e in graph.edges:
        bucket = by_pair[(min(e.u, e.v), max(e.u, e.v))]
        bucket.append(e.g)
        if len(bucket) == 3:
            return TripleParallel(*bucket)

    by_node: dict[int, list[int]] = defaultdict(list)
    for e, kind in zip(graph.edges, kinds):
        if kind is FunctionType.COPY:
            node = e.u if copy_reads(e.table) == 0 else e.v
            by_node[node].append(e.g)
            if len(by_node[node]) == 2:
                return CopyFan(node, *by_node[node])

    for wanted in (FunctionType.AND, FunctionType.XOR):
        sub = [e for e, kind in zip(graph.edges, kinds) if kind is wanted and e.u != e.v]
        cycle = shortest_cycle(graph.S, sub)
        if cycle is not None:
            return MonochromaticCycle(wanted, tuple(e.g for e in cycle))

    raise NoWeaknessFound("no constant edge, triple parallel edge, copy fan or monochromatic cycle")


# --- certificates ------------------------------------------------------------


def probed_cells(scheme: NonAdaptiveScheme, queries: Iterable[int]) -> list[int]:
    return sorted({c for q in queries for c in scheme.probes[q]})


def achievable_patterns(scheme: NonAdaptiveScheme, queries: Sequence[int], cells: Sequence[int]) -> set[tuple[int, ...]]:
    """Answer patterns on ``queries`` over all assignments of ``cells``."""
    pos = {c: k for k, c in enumerate(cells)}
    plans = [([pos[c] for c in scheme.probes[q]], scheme.tables[q]) for q in queries]
    out = set()
    for bits in itertools.product((0, 1), repeat=len(cells)):
        out.add(tuple(int(table_lookup(t, [bits[k] for k in ks])) for ks, t in plans))
    return out


@dataclass(frozen=True)
class RefutationCertificate:
    group: GroupSpec
    queries: tuple[int, ...]
    cells: tuple[int, ...]
    pattern: tuple[int, ...]
    witness: ThreeSumInstance
    n: int

    def to_json(self) -> dict:
        return {
            "group": self.group.to_json(),
            "queries": list(self.queries),
            "cells": list(self.cells),
            "pattern": list(self.pattern),
            "witness": {"a1": sorted(self.witness.a1), "a2": sorted(self.witness.a2)},
            "n": self.n,
        }

    @classmethod
    def from_json(cls, obj: dict) -> RefutationCertificate:
        group = GroupSpec.from_json(obj["group"])
        return cls(
            group=group,
            queries=tuple(obj["queries"]),
            cells=tuple(obj["cells"]),
            pattern=tuple(obj["pattern"]),
            witness=ThreeSumInstance(group, obj["witness"]["a1"], obj["witness"]["a2"]),
            n=int(obj["n"]),
        )


def build_certificate(
    scheme: NonAdaptiveScheme, spec: GroupSpec, weakness: Weakness, seed: int = 0
) -> RefutationCertificate:
    queries = tuple(weakness.queries)
    n_w = max(len(queries), 1)
    if spec.cardinality < min_group_size(n_w):
        raise GroupTooSmall(f"{spec} is too small for a witness of size {n_w}")
    cells = probed_cells(scheme, queries)
    if len(cells) > MAX_CERT_CELLS:
        raise ValueError(f"{len(cells)} cells is too many to enumerate")
    achievable = achievable_patterns(scheme, queries, cells)
    for pattern in itertools.product((0, 1), repeat=len(queries)):
        if pattern not in achievable:
            break
    else:
        raise AchievableSetFull(f"every answer pattern on {queries} is achievable")
    witness = construct_input(spec, PatternTarget.from_bits(queries, pattern), n_w, seed)
    return RefutationCertificate(spec, queries, tuple(cells), pattern, witness, n_w)


def verify_certificate(scheme: NonAdaptiveScheme, spec: GroupSpec, cert: RefutationCertificate) -> bool:
    """Brute-force check that no memory makes the scheme right on the witness.

    (i) every probe of every certificate query lies in ``cells``;
    (ii) the witness's true answers on the queries equal ``pattern``;
    (iii) no assignment of ``cells`` makes the scheme output ``pattern``.
    """
    try:
        if cert.group != spec or cert.witness.spec != spec:
            return False
        if scheme.num_queries != spec.cardinality:
            return False
        if len(cert.pattern) != len(cert.queries) or not cert.queries:
            return False
        if len(set(cert.queries)) != len(cert.queries):
            return False
        if cert.witness.n != cert.n:
            return False
        cells = sorted(set(cert.cells))
        if len(cells) > MAX_CERT_CELLS:
            return False
        cell_set = set(cells)
        for q in cert.queries:
            if not 0 <= q < scheme.num_queries:
                return False
            if any(c not in cell_set for c in scheme.probes[q]):
                return False
        for q, bit in zip(cert.queries, cert.pattern):
            if brute_force_answer(cert.witness, q) != bool(bit):
                return False
        target = tuple(int(b) for b in cert.pattern)
        return target not in achievable_patterns(scheme, cert.queries, cells)
    except (ValueError, IndexError, TypeError, KeyError):
        return False


def refute(scheme: NonAdaptiveScheme, spec: GroupSpec, seed: int = 0) -> RefutationCertificate:
    return build_certificate(scheme, spec, find_weakness(scheme, spec), seed)


def random_scheme(
    spec: GroupSpec, S: int, seed: int, tables: Sequence[int] | None = None
) -> NonAdaptiveScheme:
    """Uniform random probe pairs; tables drawn from ``tables`` (default: all 16)."""
    rng = random.Random(seed)
    choices = list(range(16)) if tables is None else list(tables)
    size = spec.cardinality
    return NonAdaptiveScheme(
        S=S,
        T=2,
        probes=[(rng.randrange(S), rng.randrange(S)) for _ in range(size)],
        tables=[rng.choice(choices) for _ in range(size)],
    )


def tables_of(*kinds: FunctionType) -> list[int]:
    return [t for t in range(16) if classify(t) in kinds]

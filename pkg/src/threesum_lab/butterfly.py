"""Butterfly graphs of degree B and depth d.

Node labels are ints whose base-B digits are extracted on demand; digit 0 is
the least significant.  An edge ``e_k(i, j)`` goes from node ``i`` on layer
``k`` to node ``j`` on layer ``k + 1`` and may change only digit ``k``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, NamedTuple

DEFAULT_SIZE_CAP = 1 << 22


@dataclass(frozen=True)
class ButterflySpec:
    B: int
    d: int

    def __post_init__(self):
        if self.B < 2:
            raise ValueError(f"degree B must be >= 2, got {self.B}")
        if self.d < 1:
            raise ValueError(f"depth d must be >= 1, got {self.d}")

    @property
    def layer_size(self) -> int:
        return self.B**self.d

    @property
    def num_edges(self) -> int:
        return self.d * self.B ** (self.d + 1)

    def digit(self, label: int, h: int) -> int:
        return (label // self.B**h) % self.B

    def with_digit(self, label: int, h: int, value: int) -> int:
        p = self.B**h
        return label + (value - self.digit(label, h)) * p

    def check_label(self, label: int) -> int:
        if not 0 <= label < self.layer_size:
            raise ValueError(f"label {label} outside [0, {self.layer_size})")
        return label


class ButterflyEdge(NamedTuple):
    k: int
    i: int
    j: int


def edge_index(spec: ButterflySpec, e: ButterflyEdge) -> int:
    return (e.k * spec.layer_size + e.i) * spec.B + spec.digit(e.j, e.k)


def edge_from_index(spec: ButterflySpec, idx: int) -> ButterflyEdge:
    rest, c = divmod(idx, spec.B)
    k, i = divmod(rest, spec.layer_size)
    return ButterflyEdge(k, i, spec.with_digit(i, k, c))


def is_valid_edge(spec: ButterflySpec, e: ButterflyEdge) -> bool:
    if not (0 <= e.k < spec.d and 0 <= e.i < spec.layer_size and 0 <= e.j < spec.layer_size):
        return False
    return all(spec.digit(e.i, h) == spec.digit(e.j, h) for h in range(spec.d) if h != e.k)


def all_edges(spec: ButterflySpec, size_cap: int = DEFAULT_SIZE_CAP) -> list[ButterflyEdge]:
    """Every edge, ordered by layer, then source label, then the new digit."""
    if spec.num_edges > size_cap:
        raise OverflowError(f"{spec} has {spec.num_edges} edges, above cap {size_cap}")
    return [edge_from_index(spec, idx) for idx in range(spec.num_edges)]


@dataclass(frozen=True)
class EdgeSet:
    spec: ButterflySpec
    indices: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "indices", frozenset(self.indices))
        bad = [x for x in self.indices if not 0 <= x < self.spec.num_edges]
        if bad:
            raise IndexError(f"edge indices out of range: {sorted(bad)[:5]}")

    @classmethod
    def full(cls, spec: ButterflySpec) -> EdgeSet:
        return cls(spec, frozenset(range(spec.num_edges)))

    @classmethod
    def empty(cls, spec: ButterflySpec) -> EdgeSet:
        return cls(spec, frozenset())

    @classmethod
    def from_edges(cls, spec: ButterflySpec, edges: Iterable[ButterflyEdge]) -> EdgeSet:
        return cls(spec, frozenset(edge_index(spec, e) for e in edges))

    def __contains__(self, e: ButterflyEdge) -> bool:
        return edge_index(self.spec, e) in self.indices

    def __len__(self) -> int:
        return len(self.indices)

    def without(self, *edges: ButterflyEdge) -> EdgeSet:
        drop = {edge_index(self.spec, e) for e in edges}
        return EdgeSet(self.spec, self.indices - drop)

    def to_json(self) -> dict:
        return {"B": self.spec.B, "d": self.spec.d, "edges": sorted(self.indices)}

    @classmethod
    def from_json(cls, obj: dict) -> EdgeSet:
        return cls(ButterflySpec(int(obj["B"]), int(obj["d"])), frozenset(obj["edges"]))


def path_edges(spec: ButterflySpec, s: int, t: int) -> list[ButterflyEdge]:
    """The unique source-to-sink path: edge k keeps s's high digits and t's low digits."""
    spec.check_label(s)
    spec.check_label(t)
    out = []
    node = s
    for k in range(spec.d):
        nxt = spec.with_digit(node, k, spec.digit(t, k))
        out.append(ButterflyEdge(k, node, nxt))
        node = nxt
    return out


def reachable(spec: ButterflySpec, E: EdgeSet, s: int, t: int) -> bool:
    return all(e in E for e in path_edges(spec, s, t))


def random_edge_subset(spec: ButterflySpec, keep_probability: float, seed: int) -> EdgeSet:
    if not 0.0 <= keep_probability <= 1.0:
        raise ValueError(f"keep_probability must lie in [0, 1], got {keep_probability}")
    rng = random.Random(seed)
    return EdgeSet(
        spec,
        frozenset(idx for idx in range(spec.num_edges) if rng.random() < keep_probability),
    )

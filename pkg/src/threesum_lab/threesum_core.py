"""3SUM-Indexing instances, the brute-force oracle and baseline structures.

Structures expose memory as a list of ``w``-bit cells plus a generator
``query_steps(z)`` that yields one cell address per probe and receives the
cell contents back via ``send``.  That split lets the same query code run
against local memory (:meth:`query`) or against a remote party in the
communication protocol simulation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Generator, Iterable, Sequence

from .group_core import GroupSpec, add, subtract

QuerySteps = Generator[int, int, bool]

DEFAULT_MEMORY_CAP = 1 << 24


class ProbeLimitExceeded(RuntimeError):
    pass


class MemoryCapExceeded(ValueError):
    pass


def _as_element_set(spec: GroupSpec, items: Iterable[int], name: str) -> frozenset[int]:
    items = list(items)
    for a in items:
        spec.check(a)
    out = frozenset(items)
    if len(out) != len(items):
        raise ValueError(f"{name} contains duplicate elements")
    return out


@dataclass(frozen=True)
class ThreeSumInstance:
    spec: GroupSpec
    a1: frozenset[int]
    a2: frozenset[int]

    def __init__(self, spec: GroupSpec, a1: Iterable[int], a2: Iterable[int]):
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "a1", _as_element_set(spec, a1, "A1"))
        object.__setattr__(self, "a2", _as_element_set(spec, a2, "A2"))
        if len(self.a1) != len(self.a2):
            raise ValueError(
                f"|A1| = {len(self.a1)} and |A2| = {len(self.a2)} must be equal"
            )

    @property
    def n(self) -> int:
        return len(self.a1)

    @cached_property
    def sumset(self) -> frozenset[int]:
        return sumset(self)

    def to_json(self) -> dict:
        return {
            "group": self.spec.to_json(),
            "a1": sorted(self.a1),
            "a2": sorted(self.a2),
        }

    @classmethod
    def from_json(cls, obj: dict) -> ThreeSumInstance:
        return cls(GroupSpec.from_json(obj["group"]), obj["a1"], obj["a2"])


def brute_force_answer(inst: ThreeSumInstance, z: int) -> bool:
    """True iff z = a1 + a2 for some a1 in A1, a2 in A2."""
    inst.spec.check(z)
    return any(subtract(inst.spec, z, a1) in inst.a2 for a1 in inst.a1)


def sumset(inst: ThreeSumInstance) -> frozenset[int]:
    return frozenset(add(inst.spec, x, y) for x in inst.a1 for y in inst.a2)


@dataclass
class ProbeBudget:
    S: int
    w: int
    cap: int | None = None
    probes_made: int = 0

    def probe(self) -> None:
        self.probes_made += 1
        if self.cap is not None and self.probes_made > self.cap:
            raise ProbeLimitExceeded(
                f"{self.probes_made} probes exceed the cap of {self.cap}"
            )


class CellProbeStructure:
    """Base class: ``cells`` of ``w`` bits, answered through ``query_steps``."""

    cells: list[int]
    w: int

    @property
    def S(self) -> int:
        return len(self.cells)

    def query_steps(self, z: int) -> QuerySteps:
        raise NotImplementedError

    def new_budget(self, cap: int | None = None) -> ProbeBudget:
        return ProbeBudget(self.S, self.w, cap)

    def query(self, z: int, budget: ProbeBudget | None = None) -> bool:
        if budget is None:
            budget = self.new_budget()
        steps = self.query_steps(z)
        try:
            addr = next(steps)
            while True:
                budget.probe()
                addr = steps.send(self.cells[addr])
        except StopIteration as stop:
            return stop.value


class BitVectorStructure(CellProbeStructure):
    """One bit per group element, set iff the element is in the sumset."""

    w = 1

    def __init__(self, inst: ThreeSumInstance, memory_cap: int = DEFAULT_MEMORY_CAP):
        size = inst.spec.cardinality
        if size > memory_cap:
            raise MemoryCapExceeded(
                f"group of size {size} exceeds the memory cap {memory_cap}"
            )
        self.spec = inst.spec
        self.cells = [0] * size
        for g in inst.sumset:
            self.cells[g] = 1

    def query_steps(self, z: int) -> QuerySteps:
        self.spec.check(z)
        bit = yield z
        return bit == 1


def bitvector_build(inst: ThreeSumInstance, memory_cap: int = DEFAULT_MEMORY_CAP) -> BitVectorStructure:
    return BitVectorStructure(inst, memory_cap)


def bitvector_query(memory: BitVectorStructure, z: int, budget: ProbeBudget | None = None) -> bool:
    return memory.query(z, budget)


class SortedSumsetStructure(CellProbeStructure):
    """Sorted sumset array searched by binary search; one element per cell."""

    def __init__(self, inst: ThreeSumInstance, w: int):
        need = max(1, (inst.spec.cardinality - 1).bit_length())
        if w < need:
            raise ValueError(f"w = {w} bits cannot hold an element of {inst.spec} ({need} bits)")
        self.spec = inst.spec
        self.w = w
        self.cells = sorted(inst.sumset)

    def query_steps(self, z: int) -> QuerySteps:
        self.spec.check(z)
        lo, hi = 0, len(self.cells)
        while lo < hi:
            mid = (lo + hi) // 2
            v = yield mid
            if v == z:
                return True
            if v < z:
                lo = mid + 1
            else:
                hi = mid
        return False


def sorted_sumset_build(inst: ThreeSumInstance, w: int) -> SortedSumsetStructure:
    return SortedSumsetStructure(inst, w)


def sorted_sumset_query(structure: SortedSumsetStructure, z: int, budget: ProbeBudget | None = None) -> bool:
    return structure.query(z, budget)


def table_lookup(table: int, bits: Sequence[int]) -> bool:
    """Evaluate a truth table on probed bits, first probe most significant."""
    index = 0
    for b in bits:
        index = (index << 1) | (b & 1)
    return (table >> index) & 1 == 1


@dataclass(frozen=True)
class NonAdaptiveScheme:
    """Probe addresses and decision tables fixed per query value.

    ``probes[g]`` lists the T cells read on query ``g``; ``tables[g]`` is a
    2**T-bit truth table indexed by those bits, first probe most significant.
    """

    S: int
    T: int
    probes: tuple[tuple[int, ...], ...]
    tables: tuple[int, ...] = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "probes", tuple(tuple(p) for p in self.probes))
        object.__setattr__(self, "tables", tuple(self.tables))
        if len(self.probes) != len(self.tables):
            raise ValueError("probes and tables must cover the same queries")
        for g, cells in enumerate(self.probes):
            if len(cells) != self.T:
                raise ValueError(f"query {g} has {len(cells)} probes, expected {self.T}")
            if any(not 0 <= c < self.S for c in cells):
                raise IndexError(f"query {g} probes a cell outside [0, {self.S})")
        top = 1 << (1 << self.T)
        if any(not 0 <= t < top for t in self.tables):
            raise ValueError(f"tables must be {1 << self.T}-bit integers")

    @property
    def num_queries(self) -> int:
        return len(self.probes)

    def to_json(self) -> dict:
        return {
            "s": self.S,
            "t": self.T,
            "probes": [list(p) for p in self.probes],
            "tables": list(self.tables),
        }

    @classmethod
    def from_json(cls, obj: dict) -> NonAdaptiveScheme:
        return cls(int(obj["s"]), int(obj["t"]), obj["probes"], obj["tables"])


def scheme_answer(scheme: NonAdaptiveScheme, memory: Sequence[int], z: int) -> bool:
    if len(memory) != scheme.S:
        raise ValueError(f"memory has {len(memory)} bits, scheme expects {scheme.S}")
    if not 0 <= z < scheme.num_queries:
        raise IndexError(f"query {z} outside the scheme's domain")
    return table_lookup(scheme.tables[z], [memory[c] for c in scheme.probes[z]])


def scheme_correct_on(scheme: NonAdaptiveScheme, memory: Sequence[int], inst: ThreeSumInstance) -> bool:
    if scheme.num_queries != inst.spec.cardinality:
        return False
    ss = inst.sumset
    return all(
        scheme_answer(scheme, memory, z) == (z in ss)
        for z in range(inst.spec.cardinality)
    )


COPY_FIRST = 0b1100


def bitvector_scheme(spec: GroupSpec) -> NonAdaptiveScheme:
    """The bit vector recast as a 2-probe scheme: both probes on the query's own cell."""
    size = spec.cardinality
    return NonAdaptiveScheme(
        S=size,
        T=2,
        probes=[(g, g) for g in range(size)],
        tables=[COPY_FIRST] * size,
    )

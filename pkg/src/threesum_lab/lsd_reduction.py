"""Blocked Lopsided Set Disjointness reduced to 3SUM-Indexing mod Delta.

The arbitrary set (``data_set``, pairs ``(j, b)`` in ``[N] x [B]``) becomes
``A1``; the structured set (one ``b_i`` per index) becomes one query per
block of ``ell`` consecutive indices.  All integers are written in base
``2B + 1``: digits ``0..ell-1`` carry the block contents, digit ``ell`` is a
dummy marker and the block index sits at ``base**(ell + 1)``.

Also here: a bit-exact simulation of the two-party protocol in which Alice
runs her queries against Bob's data structure round by round.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .group_core import GroupSpec
from .threesum_core import CellProbeStructure, ThreeSumInstance, brute_force_answer


class LSDParameterError(ValueError):
    pass


class ProtocolError(RuntimeError):
    pass


@dataclass(frozen=True)
class LSDInstance:
    N: int
    B: int
    data_set: frozenset[tuple[int, int]]
    query_vector: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "data_set", frozenset(tuple(x) for x in self.data_set))
        object.__setattr__(self, "query_vector", tuple(self.query_vector))
        if len(self.query_vector) != self.N:
            raise ValueError(f"need exactly one b_i per index, got {len(self.query_vector)} for N={self.N}")
        if any(not 0 <= b < self.B for b in self.query_vector):
            raise ValueError("query vector entries must lie in [0, B)")
        if any(not (0 <= j < self.N and 0 <= b < self.B) for j, b in self.data_set):
            raise ValueError("data set must be a subset of [N] x [B]")

    @property
    def n(self) -> int:
        return self.N * self.B


@dataclass(frozen=True)
class BlockParams:
    N: int
    B: int
    ell: int
    delta: int  # group modulus

    def __post_init__(self):
        if self.N < 1 or self.B < 1 or self.ell < 1:
            raise LSDParameterError("N, B and ell must be positive")
        if self.N % self.ell:
            raise LSDParameterError(f"ell = {self.ell} must divide N = {self.N}")
        if self.delta <= self.bound:
            raise LSDParameterError(
                f"modulus {self.delta} must exceed N*(2B+1)^(ell+2) = {self.bound}"
            )
        if self.a2_core_size > self.n:
            raise LSDParameterError(
                f"ell*B^(ell-1) = {self.a2_core_size} exceeds n = {self.n}; ell is too large"
            )

    @classmethod
    def minimal(cls, N: int, B: int, ell: int) -> BlockParams:
        return cls(N, B, ell, N * (2 * B + 1) ** (ell + 2) + 1)

    @property
    def base(self) -> int:
        return 2 * self.B + 1

    @property
    def bound(self) -> int:
        return self.N * self.base ** (self.ell + 2)

    @property
    def n(self) -> int:
        return self.N * self.B

    @property
    def num_blocks(self) -> int:
        return self.N // self.ell

    @property
    def a2_core_size(self) -> int:
        return self.ell * self.B ** (self.ell - 1)

    @property
    def group(self) -> GroupSpec:
        return GroupSpec.cyclic(self.delta)

    def block_weight(self) -> int:
        return self.base ** (self.ell + 1)


def _dummies(params: BlockParams, count: int) -> list[int]:
    # digit ell = 1 marks a dummy; real elements and queries have digit ell = 0
    w = params.block_weight()
    marker = params.base**params.ell
    return [c * w + marker for c in range(count)]


def data_element(params: BlockParams, j: int, b: int) -> int:
    i = j // params.ell
    return i * params.block_weight() + (b + 1) * params.base ** (j - i * params.ell)


def build_a1(data_set: Iterable[tuple[int, int]], params: BlockParams) -> list[int]:
    real = sorted(data_element(params, j, b) for j, b in data_set)
    return real + _dummies(params, params.n - len(real))


def a2_core(params: BlockParams) -> list[int]:
    out = []
    for zero_at in range(params.ell):
        others = [j for j in range(params.ell) if j != zero_at]
        for coeffs in itertools.product(range(1, params.B + 1), repeat=params.ell - 1):
            out.append(sum(c * params.base**j for c, j in zip(coeffs, others)))
    return sorted(out)


def build_a2(params: BlockParams) -> list[int]:
    core = a2_core(params)
    return core + _dummies(params, params.n - len(core))


def build_queries(query_vector: Sequence[int], params: BlockParams) -> list[int]:
    out = []
    for i in range(params.num_blocks):
        block = query_vector[i * params.ell : (i + 1) * params.ell]
        z = i * params.block_weight() + sum((b + 1) * params.base**j for j, b in enumerate(block))
        out.append(z)
    return out


def build_instance(inst: LSDInstance, params: BlockParams) -> ThreeSumInstance:
    if (inst.N, inst.B) != (params.N, params.B):
        raise LSDParameterError("instance and parameters disagree on N or B")
    return ThreeSumInstance(params.group, build_a1(inst.data_set, params), build_a2(params))


def disjoint_via_reduction(inst: LSDInstance, params: BlockParams) -> bool:
    ts = build_instance(inst, params)
    return not any(brute_force_answer(ts, z) for z in build_queries(inst.query_vector, params))


def brute_force_disjoint(inst: LSDInstance) -> bool:
    return not any((i, b) in inst.data_set for i, b in enumerate(inst.query_vector))


def choose_ell(n: int, B: int, delta: float) -> int:
    if n < 2 or B < 2 or not 0 < delta <= 1:
        raise ValueError("need n, B >= 2 and delta in (0, 1]")
    return max(1, math.floor(delta * math.log2(n) / math.log2(2 * B + 1)) - 2)


def base_digits(value: int, base: int, count: int) -> list[int]:
    """Least significant first."""
    out = []
    for _ in range(count):
        value, r = divmod(value, base)
        out.append(r)
    return out


def alignment_audit(inst: LSDInstance, params: BlockParams) -> list[dict]:
    """Audit every real pair hitting a query: block, zero-digit and value alignment, no carries."""
    ts_queries = build_queries(inst.query_vector, params)
    qset = {z: i for i, z in enumerate(ts_queries)}
    real_a1 = {data_element(params, j, b): (j, b) for j, b in inst.data_set}
    real_a2 = a2_core(params)
    base, ell = params.base, params.ell
    ndig = ell + 2
    violations = []
    for a1, (j, b) in real_a1.items():
        d1 = base_digits(a1, base, ndig)
        for a2 in real_a2:
            d2 = base_digits(a2, base, ndig)
            if any(x + y >= base for x, y in zip(d1[:ell + 1], d2[:ell + 1])):
                violations.append({"kind": "carry", "a1": a1, "a2": a2})
            z = (a1 + a2) % params.delta
            if z not in qset:
                continue
            i = qset[z]
            pos = j - i * ell
            nonzero = [h for h in range(ell) if d1[h]]
            ok = j // ell == i and nonzero == [pos] and d2[pos] == 0 and inst.query_vector[j] == b
            if not ok:
                violations.append({"kind": "alignment", "a1": a1, "a2": a2, "query": z})
    return violations


# --- communication protocol -------------------------------------------------


def ceil_log2(x: int) -> int:
    """Bits needed to distinguish x values."""
    if x < 1:
        raise ValueError("ceil_log2 needs x >= 1")
    return (x - 1).bit_length()


def rank_subset(cells: Sequence[int], S: int) -> int:
    """Lexicographic rank of a sorted q-subset of [S] among all q-subsets."""
    q = len(cells)
    rank = 0
    prev = -1
    for pos, c in enumerate(cells):
        for skipped in range(prev + 1, c):
            rank += math.comb(S - skipped - 1, q - pos - 1)
        prev = c
    return rank


def unrank_subset(rank: int, S: int, q: int) -> list[int]:
    out = []
    c = 0
    for pos in range(q):
        while True:
            block = math.comb(S - c - 1, q - pos - 1)
            if rank < block:
                break
            rank -= block
            c += 1
        out.append(c)
        c += 1
    return out


def _bits(value: int, width: int) -> str:
    return format(value, f"0{width}b") if width else ""


@dataclass
class RoundRecord:
    cells_requested: int
    alice_bits: int
    bob_bits: int


@dataclass
class ProtocolTranscript:
    w: int
    S: int
    rounds: list[RoundRecord] = field(default_factory=list)
    answer: bool = True
    alice_messages: list[str] = field(default_factory=list, repr=False)
    bob_messages: list[str] = field(default_factory=list, repr=False)

    @property
    def num_rounds(self) -> int:
        return len(self.rounds)

    @property
    def alice_bits(self) -> int:
        return sum(r.alice_bits for r in self.rounds)

    @property
    def bob_bits(self) -> int:
        return sum(r.bob_bits for r in self.rounds)

    def to_json(self) -> dict:
        return {
            "rounds": self.num_rounds,
            "alice_bits": self.alice_bits,
            "bob_bits": self.bob_bits,
            "answer": self.answer,
            "S": self.S,
            "w": self.w,
            "per_round": [vars(r) for r in self.rounds],
        }


class _Bob:
    """Holds the structure; decodes Alice's cell requests and replies with contents."""

    def __init__(self, structure: CellProbeStructure, prefix_width: int):
        self.structure = structure
        self.prefix_width = prefix_width

    def reply(self, message: str) -> str:
        S = self.structure.S
        q = int(message[: self.prefix_width], 2) if self.prefix_width else 0
        width = ceil_log2(math.comb(S, q))
        body = message[self.prefix_width :]
        if len(body) != width:
            raise ProtocolError("malformed cell request")
        cells = unrank_subset(int(body, 2) if width else 0, S, q)
        w = self.structure.w
        return "".join(_bits(self.structure.cells[c], w) for c in cells)


def simulate_protocol(
    structure: CellProbeStructure, queries: Sequence[int], T: int | None = None
) -> ProtocolTranscript:
    """Run all queries in parallel, one probe step per round.

    Alice sees only the messages from Bob.  Each round she sends the number
    of distinct requested cells in a fixed-width prefix followed by the
    lexicographic rank of the cell subset; Bob answers with ``w`` bits per
    cell in increasing address order.  The answer is True (disjoint) iff no
    query answers YES.
    """
    S, w = structure.S, structure.w
    prefix_width = ceil_log2(len(queries) + 1)
    bob = _Bob(structure, prefix_width)
    transcript = ProtocolTranscript(w=w, S=S)

    active = {}
    pending = {}
    answers = {}
    for idx, z in enumerate(queries):
        gen = structure.query_steps(z)
        try:
            pending[idx] = next(gen)
            active[idx] = gen
        except StopIteration as stop:
            answers[idx] = stop.value

    while active:
        if T is not None and transcript.num_rounds >= T:
            raise ProtocolError(f"structure needs more than T = {T} probes")
        cells = sorted(set(pending.values()))
        q = len(cells)
        body_width = ceil_log2(math.comb(S, q))
        msg = _bits(q, prefix_width) + _bits(rank_subset(cells, S), body_width)
        reply = bob.reply(msg)
        contents = {c: int(reply[k * w : (k + 1) * w], 2) for k, c in enumerate(cells)}
        transcript.alice_messages.append(msg)
        transcript.bob_messages.append(reply)
        transcript.rounds.append(RoundRecord(q, len(msg), len(reply)))
        for idx in list(active):
            try:
                pending[idx] = active[idx].send(contents[pending[idx]])
            except StopIteration as stop:
                answers[idx] = stop.value
                del active[idx], pending[idx]

    transcript.answer = not any(answers.values())
    return transcript


def alice_bit_bound(S: int, num_queries: int, T: int) -> int:
    return T * (ceil_log2(math.comb(S, num_queries)) + ceil_log2(num_queries + 1))

"""Encode butterfly reachability as 3SUM-Indexing.

Each element has ``2(d + 2)`` digits split into five blocks::

    (layer, presence, high digits of i | low wildcards, high wildcards | low digits of j, 0, 0)

A query ``z(s, t)`` is a YES instance of 3SUM-Indexing exactly when some
edge on the unique ``s -> t`` path is missing.  The cyclic group uses the
mixed-radix layout ``[4d, 3, B, ..., B]`` with modulus equal to the product of
the radices; the XOR group packs the same digits into binary fields (second
field one bit wide) and stores the leading field of the negated layer as the
layer itself, since ``k ^ k == 0``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .butterfly import ButterflyEdge, ButterflySpec, EdgeSet, all_edges
from .group_core import (
    GroupSpec,
    MixedRadixLayout,
    _is_power_of_two,
    decode_digits,
    encode_digits,
    field_widths,
    xor_pack,
    xor_unpack,
)
from .threesum_core import ThreeSumInstance


class ReductionError(ValueError):
    pass


@dataclass(frozen=True)
class ReductionLayout:
    spec: ButterflySpec
    kind: str  # "cyclic" or "xor"

    def __post_init__(self):
        if self.kind not in ("cyclic", "xor"):
            raise ReductionError(f"unknown group kind {self.kind!r}")
        if self.kind == "xor" and not _is_power_of_two(self.spec.B):
            raise ReductionError(f"the xor reduction needs B a power of two, got B={self.spec.B}")

    @property
    def num_digits(self) -> int:
        return 2 * (self.spec.d + 2)

    @property
    def radices(self) -> tuple[int, ...]:
        d, B = self.spec.d, self.spec.B
        second = 3 if self.kind == "cyclic" else 2
        return (4 * d, second) + (B,) * (2 * d + 2)

    @property
    def group(self) -> GroupSpec:
        if self.kind == "cyclic":
            return GroupSpec.cyclic(math.prod(self.radices))
        return GroupSpec.xor(sum(field_widths(self.radices)))

    def encode(self, digits: Sequence[int]) -> int:
        if self.kind == "cyclic":
            return encode_digits(MixedRadixLayout(self.radices), digits)
        return xor_pack(self.radices, digits)

    def decode(self, value: int) -> list[int]:
        if self.kind == "cyclic":
            return decode_digits(MixedRadixLayout(self.radices), value)
        return xor_unpack(self.radices, value)

    def negated_layer(self, k: int) -> int:
        if self.kind == "cyclic":
            return (4 * self.spec.d - k) % (4 * self.spec.d)
        return k

    def layer_of_a2_digit(self, lead: int) -> int:
        return self.negated_layer(lead)


def _label_digits_high_first(spec: ButterflySpec, label: int, hi: int, lo: int) -> list[int]:
    """Digits label[hi], label[hi-1], ..., label[lo]."""
    return [spec.digit(label, h) for h in range(hi, lo - 1, -1)]


def edge_digits(layout: ReductionLayout, edge: ButterflyEdge, present: bool) -> list[int]:
    sp = layout.spec
    d, k = sp.d, edge.k
    block3 = _label_digits_high_first(sp, edge.i, d - 1, k) + [0] * k
    block4 = [0] * (d - k - 1) + _label_digits_high_first(sp, edge.j, k, 0)
    return [k, 1 if present else 0] + block3 + block4 + [0, 0]


def encode_edge(layout: ReductionLayout, edge: ButterflyEdge, present: bool) -> int:
    return layout.encode(edge_digits(layout, edge, present))


def build_a1(layout: ReductionLayout, E: EdgeSet) -> list[int]:
    out = [encode_edge(layout, e, e in E) for e in all_edges(layout.spec)]
    if len(set(out)) != len(out):
        raise AssertionError("edge encodings collided")
    return out


def a2_digit_vectors(layout: ReductionLayout) -> list[list[int]]:
    """All wildcard expansions, layer by layer, wildcards in lexicographic order."""
    sp = layout.spec
    d, B = sp.d, sp.B
    out = []
    for k in range(d):
        for wild in itertools.product(range(B), repeat=d + 1):
            low3 = list(wild[:k])
            high4 = list(wild[k : d - 1])
            tail = list(wild[d - 1 :])
            block3 = [0] * (d - k) + low3
            block4 = high4 + [0] * (k + 1)
            out.append([layout.negated_layer(k), 0] + block3 + block4 + tail)
    return out


def build_a2(layout: ReductionLayout) -> list[int]:
    return [layout.encode(v) for v in a2_digit_vectors(layout)]


def query_digits(layout: ReductionLayout, s: int, t: int) -> list[int]:
    sp = layout.spec
    sp.check_label(s)
    sp.check_label(t)
    d = sp.d
    return (
        [0, 0]
        + _label_digits_high_first(sp, s, d - 1, 0)
        + _label_digits_high_first(sp, t, d - 1, 0)
        + [0, 0]
    )


def encode_query(layout: ReductionLayout, s: int, t: int) -> int:
    return layout.encode(query_digits(layout, s, t))


class Reduction(NamedTuple):
    instance: ThreeSumInstance
    query: Callable[[int, int], int]
    layout: ReductionLayout


def reduce(spec: ButterflySpec, E: EdgeSet, group_kind: str = "cyclic") -> Reduction:
    layout = ReductionLayout(spec, group_kind)
    inst = ThreeSumInstance(layout.group, build_a1(layout, E), build_a2(layout))

    def translate(s: int, t: int) -> int:
        return encode_query(layout, s, t)

    return Reduction(inst, translate, layout)


def suggested_degree(S: int, w: int, n: int) -> int:
    """Degree that balances the butterfly bound: ceil(S * w^2 / n), at least 2."""
    if S <= 0 or w <= 0 or n <= 0:
        raise ValueError("S, w and n must be positive")
    return max(2, -(-S * w * w // n))


def _digit_matrix(layout: ReductionLayout, values: Sequence[int]) -> np.ndarray:
    return np.array([layout.decode(v) for v in values], dtype=np.int64)


def digit_audit(layout: ReductionLayout, a1: Sequence[int], a2: Sequence[int]) -> list[dict]:
    """Check carry-freeness and top-digit matching over all pairs.

    A pair is *aligned* when the group sum has leading digit 0.  Violations:

    * ``top-digit``: aligned iff the layers of ``a1`` and ``a2`` match fails;
    * ``carry``: an aligned pair has a lower digit position where the digit
      sum reaches the radix (cyclic) or both fields are nonzero (xor).
    """
    radices = np.array(layout.radices, dtype=np.int64)
    lead_radix = int(radices[0])
    D1 = _digit_matrix(layout, a1)
    D2 = _digit_matrix(layout, a2)
    layer2 = np.array([layout.layer_of_a2_digit(int(x)) for x in D2[:, 0]], dtype=np.int64)
    violations = []
    for r, row in enumerate(D1):
        if layout.kind == "cyclic":
            lead_sum = row[0] + D2[:, 0]
            low = row[1:] + D2[:, 1:]
            # ripple carries up from the least significant digit
            carry_in = np.zeros(len(D2), dtype=bool)
            for pos in range(len(radices) - 1, 0, -1):
                carry_in = (low[:, pos - 1] + carry_in) >= radices[pos]
            aligned = (lead_sum + carry_in) % lead_radix == 0
            bad_low = (low >= radices[1:]).any(axis=1)
        else:
            aligned = (row[0] ^ D2[:, 0]) == 0
            bad_low = ((row[1:] != 0) & (D2[:, 1:] != 0)).any(axis=1)
        matched = layer2 == row[0]
        for c in np.nonzero(aligned != matched)[0]:
            violations.append({"kind": "top-digit", "a1": a1[r], "a2": a2[int(c)]})
        for c in np.nonzero(aligned & bad_low)[0]:
            violations.append({"kind": "carry", "a1": a1[r], "a2": a2[int(c)]})
    return violations

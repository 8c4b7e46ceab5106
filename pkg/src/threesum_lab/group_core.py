"""Abelian group arithmetic and mixed-radix digit encodings.

Group elements are plain non-negative ints; a :class:`GroupSpec` says how to
interpret them (residues mod ``m`` or ``k``-bit strings under XOR).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence


class GroupDomainError(ValueError):
    """An element or digit lies outside the domain of its group or layout."""


@dataclass(frozen=True)
class GroupSpec:
    kind: str  # "cyclic" or "xor"
    param: int  # modulus for cyclic, bit width for xor

    def __post_init__(self):
        if self.kind == "cyclic":
            if self.param < 2:
                raise GroupDomainError(f"cyclic modulus must be >= 2, got {self.param}")
        elif self.kind == "xor":
            if self.param < 1:
                raise GroupDomainError(f"xor bit width must be >= 1, got {self.param}")
        else:
            raise GroupDomainError(f"unknown group kind {self.kind!r}")

    @classmethod
    def cyclic(cls, modulus: int) -> GroupSpec:
        return cls("cyclic", modulus)

    @classmethod
    def xor(cls, bit_width: int) -> GroupSpec:
        return cls("xor", bit_width)

    @property
    def cardinality(self) -> int:
        return self.param if self.kind == "cyclic" else 1 << self.param

    def check(self, a: int) -> int:
        if not isinstance(a, int) or isinstance(a, bool) or not 0 <= a < self.cardinality:
            raise GroupDomainError(f"{a!r} is not an element of {self}")
        return a

    def to_json(self) -> dict:
        if self.kind == "cyclic":
            return {"cyclic": self.param}
        return {"xor_bits": self.param}

    @classmethod
    def from_json(cls, obj: dict) -> GroupSpec:
        if set(obj) == {"cyclic"}:
            return cls.cyclic(int(obj["cyclic"]))
        if set(obj) == {"xor_bits"}:
            return cls.xor(int(obj["xor_bits"]))
        raise GroupDomainError(f"cannot parse group spec {obj!r}")

    def __str__(self) -> str:
        if self.kind == "cyclic":
            return f"Z_{self.param}"
        return f"XOR^{self.param}"


def add(spec: GroupSpec, a: int, b: int) -> int:
    spec.check(a)
    spec.check(b)
    if spec.kind == "cyclic":
        return (a + b) % spec.param
    return a ^ b


def negate(spec: GroupSpec, a: int) -> int:
    spec.check(a)
    if spec.kind == "cyclic":
        return (spec.param - a) % spec.param
    return a


def subtract(spec: GroupSpec, a: int, b: int) -> int:
    return add(spec, a, negate(spec, b))


@dataclass(frozen=True)
class MixedRadixLayout:
    """Digit bases, most significant first."""

    radices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "radices", tuple(self.radices))
        if not self.radices:
            raise GroupDomainError("layout needs at least one digit")
        if any(r < 2 for r in self.radices):
            raise GroupDomainError(f"every radix must be >= 2, got {self.radices}")

    @property
    def modulus(self) -> int:
        return math.prod(self.radices)

    @property
    def group(self) -> GroupSpec:
        return GroupSpec.cyclic(self.modulus)

    def weights(self) -> tuple[int, ...]:
        """Positional weight of each digit (product of less significant radices)."""
        out = []
        w = 1
        for r in reversed(self.radices):
            out.append(w)
            w *= r
        return tuple(reversed(out))


def encode_digits(layout: MixedRadixLayout, digits: Sequence[int]) -> int:
    if len(digits) != len(layout.radices):
        raise GroupDomainError(
            f"expected {len(layout.radices)} digits, got {len(digits)}"
        )
    value = 0
    for dgt, r in zip(digits, layout.radices):
        if not 0 <= dgt < r:
            raise GroupDomainError(f"digit {dgt} out of range for radix {r}")
        value = value * r + dgt
    return value


def decode_digits(layout: MixedRadixLayout, v: int) -> list[int]:
    if not 0 <= v < layout.modulus:
        raise GroupDomainError(f"{v} out of range for layout {layout.radices}")
    digits = []
    for r in reversed(layout.radices):
        v, dgt = divmod(v, r)
        digits.append(dgt)
    return digits[::-1]


def _is_power_of_two(x: int) -> bool:
    return x >= 1 and x & (x - 1) == 0


def field_widths(radices: Sequence[int]) -> tuple[int, ...]:
    """Bit width of each field when packing digits of the given radices.

    Only the leading radix may be a non-power of two; it gets
    ``ceil(log2 radix)`` bits.
    """
    for pos, r in enumerate(radices):
        if pos > 0 and not _is_power_of_two(r):
            raise GroupDomainError(
                f"radix {r} at position {pos} is not a power of two"
            )
        if r < 2:
            raise GroupDomainError(f"radix {r} < 2")
    return tuple((r - 1).bit_length() for r in radices)


def xor_pack(radices: Sequence[int], digits: Sequence[int]) -> int:
    """Concatenate fixed-width binary fields, most significant first."""
    widths = field_widths(radices)
    if len(digits) != len(widths):
        raise GroupDomainError(f"expected {len(widths)} digits, got {len(digits)}")
    value = 0
    for dgt, r, w in zip(digits, radices, widths):
        if not 0 <= dgt < r:
            raise GroupDomainError(f"digit {dgt} out of range for radix {r}")
        value = (value << w) | dgt
    return value


def xor_unpack(radices: Sequence[int], value: int) -> list[int]:
    widths = field_widths(radices)
    if not 0 <= value < 1 << sum(widths):
        raise GroupDomainError(f"{value} does not fit in {sum(widths)} bits")
    digits = []
    for w in reversed(widths):
        digits.append(value & ((1 << w) - 1))
        value >>= w
    return digits[::-1]

"""Executable reductions, adversarial inputs and bit-probe refutation for 3SUM-Indexing."""
from .group_core import GroupSpec, MixedRadixLayout, add, negate
from .threesum_core import ThreeSumInstance, brute_force_answer, sumset

__all__ = [
    "GroupSpec",
    "MixedRadixLayout",
    "ThreeSumInstance",
    "add",
    "brute_force_answer",
    "negate",
    "sumset",
]

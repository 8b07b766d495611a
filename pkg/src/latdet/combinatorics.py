"""Subset-indexed binomial inversion.

If ``f(S) = sum_{T subset S} g(T)`` for every subset S of a ground set, then
``g(S) = sum_{T subset S} (-1)^{|S|-|T|} f(T)``.  Both tables carry the value 1
on the empty set.  Subsets are bitmasks; values may be ints, Fractions or
floats and stay in whatever type they came in.
"""
from __future__ import annotations

import itertools
from math import comb
from dataclasses import dataclass
from typing import Callable, Sequence

MAX_GROUND_SET = 20


class SubsetTableSizeError(ValueError):
    pass


@dataclass(frozen=True)
class SubsetTable:
    ground_set_size: int
    values: tuple

    def __post_init__(self):
        l = self.ground_set_size
        if not 0 <= l <= MAX_GROUND_SET:
            raise SubsetTableSizeError(f"ground set size must be in [0, {MAX_GROUND_SET}], got {l}")
        object.__setattr__(self, "values", tuple(self.values))
        if len(self.values) != 1 << l:
            raise ValueError(f"expected {1 << l} entries, got {len(self.values)}")
        if self.values[0] != 1:
            raise ValueError("the empty-set entry must be 1")

    @classmethod
    def from_function(cls, l: int, fn: Callable[[frozenset], object]):
        """Build from ``fn(subset)`` for non-empty subsets of ``{0, ..., l-1}``."""
        if not 0 <= l <= MAX_GROUND_SET:
            raise SubsetTableSizeError(f"ground set size must be in [0, {MAX_GROUND_SET}], got {l}")
        vals = [1]
        for mask in range(1, 1 << l):
            vals.append(fn(members(mask)))
        return cls(l, vals)

    def __getitem__(self, subset):
        if isinstance(subset, int):
            return self.values[subset]
        return self.values[mask_of(subset)]


def mask_of(subset) -> int:
    mask = 0
    for i in subset:
        mask |= 1 << i
    return mask


def members(mask: int) -> frozenset:
    return frozenset(i for i in range(mask.bit_length()) if mask >> i & 1)


def forward(g: SubsetTable) -> SubsetTable:
    """``f(S) = sum_{T subset S} g(T)``, with ``g(empty) = 1``."""
    vals = list(g.values)
    l = g.ground_set_size
    for i in range(l):
        bit = 1 << i
        for mask in range(1 << l):
            if mask & bit:
                vals[mask] = vals[mask] + vals[mask ^ bit]
    return SubsetTable(l, vals)


def invert(f: SubsetTable) -> SubsetTable:
    """``g(S) = sum_{T subset S} (-1)^{|S|-|T|} f(T)``; the inverse of :func:`forward`."""
    vals = list(f.values)
    l = f.ground_set_size
    for i in range(l):
        bit = 1 << i
        for mask in range(1 << l):
            if mask & bit:
                vals[mask] = vals[mask] - vals[mask ^ bit]
    return SubsetTable(l, vals)


def invert_by_levels(f: SubsetTable) -> SubsetTable:
    """Same result as :func:`invert`, summed level by level from the alternating formula.

    Costs O(3^l); kept as a slow reference.
    """
    l = f.ground_set_size
    out = [1]
    for mask in range(1, 1 << l):
        s = sorted(members(mask))
        total = 0
        for k in range(len(s) + 1):
            level = 0
            for sub in itertools.combinations(s, k):
                level = level + f.values[mask_of(sub)]
            total = total + (-1) ** (len(s) - k) * level
        out.append(total)
    return SubsetTable(l, out)


def binomial_forward(g_levels: Sequence) -> list:
    """Level-constant special case: ``f_l = sum_k C(l, k) g_k`` with ``g_0 = 1``."""
    return [sum(comb(l, k) * g_levels[k] for k in range(l + 1)) for l in range(len(g_levels))]


def binomial_invert(f_levels: Sequence) -> list:
    """``g_l = sum_k (-1)^{l-k} C(l, k) f_k``."""
    return [sum((-1) ** (l - k) * comb(l, k) * f_levels[k] for k in range(l + 1))
            for l in range(len(f_levels))]

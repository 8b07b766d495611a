"""Closed-form Laplacian spectra of grid lattices and discrete tori.

A grid ``L(n_1, ..., n_d)`` is the Cartesian product of paths; its
eigenvalues are ``sum_i 4 sin^2(pi k_i / (2 n_i))`` for ``0 <= k_i < n_i``.
The torus ``T(2n_1, ..., 2n_d)`` uses the same formula with
``0 <= k_i < 2 n_i``.  Note the torus is parametrised by the half sides.

All large sums go through :func:`math.fsum` chunk by chunk in lexicographic
index order, so results do not depend on chunking or thread count.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from latdet.specfun import DomainError

GRID = "grid"
TORUS = "torus"


@dataclass(frozen=True)
class LatticeSpec:
    kind: str
    sides: tuple

    def __post_init__(self):
        object.__setattr__(self, "sides", tuple(int(n) for n in self.sides))
        if self.kind not in (GRID, TORUS):
            raise ValueError(f"unknown lattice kind {self.kind!r}")
        if not self.sides:
            raise ValueError("a lattice needs at least one side")
        if any(n < 1 for n in self.sides):
            raise ValueError(f"sides must be positive, got {self.sides}")

    @classmethod
    def grid(cls, *sides):
        return cls(GRID, sides)

    @classmethod
    def torus(cls, *sides):
        return cls(TORUS, sides)

    @property
    def d(self):
        return len(self.sides)

    @property
    def index_ranges(self):
        factor = 2 if self.kind == TORUS else 1
        return tuple(factor * n for n in self.sides)

    @property
    def vertex_count(self):
        return math.prod(self.index_ranges)


@dataclass(frozen=True)
class OrthotopeSpec:
    """Side ratios ``alpha_i`` of the limiting orthotope ``K_d``."""

    alphas: tuple

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(self.alphas))
        if not self.alphas:
            raise ValueError("need at least one side ratio")
        for a in self.alphas:
            if int(a) != a or a < 1:
                raise ValueError(f"side ratios must be positive integers, got {self.alphas}")
        object.__setattr__(self, "alphas", tuple(int(a) for a in self.alphas))

    @property
    def d(self):
        return len(self.alphas)

    def volume(self):
        return math.prod(self.alphas)

    def grid(self, n):
        return LatticeSpec.grid(*(a * n for a in self.alphas))


def face_volume(o: OrthotopeSpec, m: int) -> float:
    """Total m-volume of the m-dimensional faces of the closed orthotope.

    ``V_m^d = 2^{d-m} sum_{i_1<...<i_m} prod alpha_{i_q}``.
    """
    d = o.d
    if not 1 <= m <= d:
        raise ValueError(f"face dimension must lie in [1, {d}], got {m}")
    total = sum(math.prod(c) for c in itertools.combinations(o.alphas, m))
    return float(2 ** (d - m) * total)


# 4 sin^2(pi x / 2) at the rational points where it is an integer (Niven)
_EXACT = {Fraction(0): 0.0, Fraction(1, 3): 1.0, Fraction(1, 2): 2.0, Fraction(2, 3): 3.0,
          Fraction(1): 4.0, Fraction(4, 3): 3.0, Fraction(3, 2): 2.0, Fraction(5, 3): 1.0}


def _axis_values(n_index, n_side):
    k = np.arange(n_index)
    vals = 4.0 * np.sin(np.pi * k / (2.0 * n_side)) ** 2
    for j in range(0, n_index, max(1, n_side // math.gcd(n_side, 6))):
        x = Fraction(j, n_side)
        if x in _EXACT:
            vals[j] = _EXACT[x]
    return vals


def _axes(spec: LatticeSpec):
    return [_axis_values(r, n) for r, n in zip(spec.index_ranges, spec.sides)]


def eigenvalue_blocks(spec: LatticeSpec) -> Iterator[np.ndarray]:
    """Eigenvalues in lexicographic multi-index order, one block per leading index.

    For d = 1 the whole spectrum is a single block.
    """
    axes = _axes(spec)
    if spec.d == 1:
        yield axes[0]
        return
    rest = axes[1]
    for ax in axes[2:]:
        rest = np.add.outer(rest, ax)
    rest = rest.ravel()
    for lead in axes[0]:
        yield lead + rest


def eigenvalues(spec: LatticeSpec) -> Iterator[tuple]:
    """Yield ``(k, lambda_k)`` for every multi-index ``k``, lexicographically."""
    values = itertools.chain.from_iterable(eigenvalue_blocks(spec))
    indices = itertools.product(*(range(r) for r in spec.index_ranges))
    for k, lam in zip(indices, values):
        yield k, float(lam)


def _nonzero_blocks(spec):
    # drop exactly one eigenvalue, the k = 0 one
    first = True
    for block in eigenvalue_blocks(spec):
        if first:
            block = block[1:]
            first = False
        yield block


def _fsum_blocks(blocks):
    return math.fsum(math.fsum(b) for b in blocks)


def theta(spec: LatticeSpec, t: float) -> float:
    """Heat trace ``sum_k e^{-lambda_k t}``."""
    if not t > 0:
        raise DomainError(f"theta needs t > 0, got {t!r}")
    return _fsum_blocks(np.exp(-t * b) for b in eigenvalue_blocks(spec))


def theta_star(sides: Sequence[int], t: float) -> float:
    """Heat trace over the interior indices ``1 <= k_i <= n_i - 1``.

    The empty side list gives 1.
    """
    if not t > 0:
        raise DomainError(f"theta_star needs t > 0, got {t!r}")
    if len(sides) == 0:
        return 1.0
    # factorises over the axes
    out = 1.0
    for n in sides:
        vals = _axis_values(n, n)[1:]
        out *= math.fsum(np.exp(-t * vals))
    return out


def _torus_theta(sides, t):
    if len(sides) == 0:
        return 1.0
    return theta(LatticeSpec.torus(*sides), t)


def check_theta_decomposition(sides: Sequence[int], t: float) -> tuple:
    """Absolute residuals of the grid theta function against its two decompositions.

    ``residual_star`` compares with the sum of interior traces over every
    subset of axes; ``residual_torus`` with
    ``2^{-d} sum_S (1 - e^{-4t})^{d-|S|} theta_{T(2 n_S)}(t)``.
    """
    sides = tuple(int(n) for n in sides)
    d = len(sides)
    theta_l = theta(LatticeSpec.grid(*sides), t)
    subsets = [c for m in range(d + 1) for c in itertools.combinations(range(d), m)]

    star = math.fsum(theta_star([sides[i] for i in s], t) for s in subsets)
    one_minus = -math.expm1(-4.0 * t)
    torus = math.fsum(
        one_minus ** (d - len(s)) * _torus_theta([sides[i] for i in s], t) for s in subsets
    ) / 2 ** d
    return abs(theta_l - star), abs(theta_l - torus)


def log_det_star(spec: LatticeSpec) -> float:
    """Log of the product of the non-zero eigenvalues (the k = 0 mode excluded)."""
    return _fsum_blocks(np.log(b) for b in _nonzero_blocks(spec))


def spectral_sum(spec: LatticeSpec, p: int) -> float:
    """``sum_{lambda != 0} lambda^{-p}`` for p in {1, 2}."""
    if p not in (1, 2):
        raise ValueError(f"p must be 1 or 2, got {p!r}")
    return _fsum_blocks(b ** (-float(p)) for b in _nonzero_blocks(spec))

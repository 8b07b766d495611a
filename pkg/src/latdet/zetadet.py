"""Spectral zeta functions at s = 0 and regularised determinants.

Domains: Dirichlet intervals and orthotopes, flat rectangular tori, and the
right isosceles unit triangle.  ``log det* = -zeta'(0)`` throughout.

Interval conventions.  ``STANDARD`` is the Dirichlet interval of length a,
eigenvalues ``(pi k / a)^2`` once each, so ``zeta(s) = (a/pi)^{2s} zeta_R(2s)``
and ``det* = 2a``.  ``DOUBLED`` carries an extra factor 2 in front
(``det* = (2a)^2``).  Only one-dimensional values and the triangle relation
depend on the choice; orthotopes of dimension >= 2 come out of the torus
relation, which fixes their faces to ``STANDARD``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import mpmath
import numpy as np
from scipy.special import exp1, gamma, gammaincc

from latdet.combinatorics import SubsetTable, invert, members
from latdet.specfun import dedekind_eta_imag

STANDARD = "standard"
DOUBLED = "doubled"
CONVENTIONS = (STANDARD, DOUBLED)

# Shells are kept while exp(-x) can still matter: exp(-45) ~ 3e-20.
_CUTOFF = 45.0


class DimensionError(ValueError):
    pass


class UnsupportedDomainError(ValueError):
    pass


def _check_convention(convention):
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}, got {convention!r}")


def _nonzero_box(bounds):
    pts = np.array(list(itertools.product(*(range(-b, b + 1) for b in bounds))), dtype=float)
    return pts[np.any(pts != 0, axis=1)]


def epstein_zeta_prime0(torus_periods: Sequence[float]) -> float:
    """``zeta'(0)`` of the flat torus ``R^m / diag(L_1, ..., L_m) Z^m``.

    Eigenvalues ``4 pi^2 sum (k_i / L_i)^2``.  Splits the Mellin integral of
    the heat trace at ``T`` and Poisson-sums the small-t half, leaving two
    exponentially convergent incomplete-gamma lattice sums::

        zeta'(0) = -gamma - log T - (2/m) V (4 pi T)^{-m/2}
                   + sum_{k != 0} E_1(T lambda_k)
                   + V (4 pi)^{-m/2} sum_{w != 0} (|w|^2/4)^{-m/2} Gamma(m/2, |w|^2 / 4T)
    """
    lengths = np.asarray(torus_periods, dtype=float)
    m = lengths.size
    if not 1 <= m <= 3:
        raise DimensionError(f"torus dimension must be 1, 2 or 3, got {m}")
    if np.any(lengths <= 0):
        raise ValueError("periods must be positive")
    vol = float(np.prod(lengths))
    t_split = vol ** (2.0 / m) / (4.0 * math.pi)
    half = 0.5 * m

    k_bounds = [int(math.ceil(L * math.sqrt(_CUTOFF / (4 * math.pi ** 2 * t_split)))) + 1
                for L in lengths]
    ks = _nonzero_box(k_bounds)
    lam = 4.0 * math.pi ** 2 * np.sum((ks / lengths) ** 2, axis=1)
    dual = math.fsum(exp1(t_split * lam))

    w_bounds = [int(math.ceil(math.sqrt(4 * _CUTOFF * t_split) / L)) + 1 for L in lengths]
    ws = _nonzero_box(w_bounds)
    w2 = np.sum((ws * lengths) ** 2, axis=1)
    primal = math.fsum((0.25 * w2) ** (-half) * gammaincc(half, w2 / (4 * t_split)))
    primal *= gamma(half) * vol * (4 * math.pi) ** (-half)

    volume_term = -vol * (4 * math.pi * t_split) ** (-half) / half
    return math.fsum([-np.euler_gamma, -math.log(t_split), volume_term, dual, primal])


def torus_zeta_prime0_eta(l1: float, l2: float) -> float:
    """2-torus ``zeta'(0)`` from the Kronecker limit formula:
    ``det* = L2^2 eta(i L2/L1)^4`` for the rectangle ``L1 x L2``."""
    tau = l2 / l1
    return -math.log(l2 * l2) - 4.0 * math.log(dedekind_eta_imag(tau))


def interval_zeta0(convention: str = STANDARD) -> float:
    _check_convention(convention)
    return -0.5 if convention == STANDARD else -1.0


def interval_zeta_prime0(alpha: float, convention: str = STANDARD) -> float:
    _check_convention(convention)
    base = -math.log(2.0 * alpha)
    return base if convention == STANDARD else 2.0 * base


def zeta_prime0_orthotope(alphas: Sequence[float], convention: str = STANDARD) -> float:
    """``zeta'(0)`` of the Dirichlet orthotope ``alpha_1 x ... x alpha_m``.

    Torus values over every sub-tuple, fed through the subset inversion:
    ``zeta_T(2 alpha_S) = sum_{empty != U subset S} 2^|U| zeta_{alpha_U}``.
    """
    alphas = [float(a) for a in alphas]
    m = len(alphas)
    if not 1 <= m <= 3:
        raise DimensionError(f"orthotope dimension must be 1, 2 or 3, got {m}")
    _check_convention(convention)
    if m == 1:
        return interval_zeta_prime0(alphas[0], convention)

    def shifted_torus(subset):
        return 1.0 + epstein_zeta_prime0([2.0 * alphas[i] for i in sorted(subset)])

    table = SubsetTable.from_function(m, shifted_torus)
    g = invert(table)
    full = (1 << m) - 1
    return g[full] / 2 ** m


def orthotope_faces_via_inversion(alphas: Sequence[float]) -> dict:
    """Every face ``zeta'(0)`` (STANDARD faces) from one inversion, keyed by index tuple."""
    alphas = [float(a) for a in alphas]
    m = len(alphas)
    table = SubsetTable.from_function(
        m, lambda s: 1.0 + epstein_zeta_prime0([2.0 * alphas[i] for i in sorted(s)]))
    g = invert(table)
    return {tuple(sorted(members(mask))): g[mask] / 2 ** bin(mask).count("1")
            for mask in range(1, 1 << m)}


def zeta_prime0_rectangle_eta(a1: float, a2: float) -> float:
    """Rectangle ``zeta'(0)`` from the eta closed form of the ``2a1 x 2a2`` torus."""
    torus = torus_zeta_prime0_eta(2.0 * a1, 2.0 * a2)
    return (torus - 2.0 * interval_zeta_prime0(a1) - 2.0 * interval_zeta_prime0(a2)) / 4.0


def zeta_prime0_triangle(convention: str = STANDARD) -> float:
    """``zeta'(0)`` of the right isosceles triangle with unit legs.

    Separating the diagonal of the unit square,
    ``zeta_square(s) = 2 zeta_tri(s) + 2^{-s} zeta_1(s)``, so
    ``zeta'_tri(0) = (zeta'_square(0) + log 2 * zeta_1(0) - zeta'_1(0)) / 2``
    with the interval values of ``convention``.  Under DOUBLED this is
    ``(zeta'_square(0) + log 2) / 2``.
    """
    _check_convention(convention)
    square = zeta_prime0_orthotope([1.0, 1.0], convention)
    return 0.5 * (square + math.log(2.0) * interval_zeta0(convention)
                  - interval_zeta_prime0(1.0, convention))


def zeta_triangle(s: float) -> float:
    """``pi^{-2s} sum_{1 <= k2 < k1} (k1^2 + k2^2)^{-s}`` for real s > 1, summed directly.

    Slow reference; the outer sum is extrapolated by :func:`mpmath.nsum`.
    """
    if not s > 1:
        raise ValueError("direct summation needs s > 1")
    s = mpmath.mpf(s)

    def row(k1):
        k1 = int(k1)
        return mpmath.fsum((k1 * k1 + k2 * k2) ** (-s) for k2 in range(1, k1))

    return float(mpmath.pi ** (-2 * s) * mpmath.nsum(row, [2, mpmath.inf]))


def zeta_interval(s: float, convention: str = STANDARD, alpha: float = 1.0) -> float:
    _check_convention(convention)
    factor = 1.0 if convention == STANDARD else 2.0
    return factor * float((mpmath.mpf(alpha) / mpmath.pi) ** (2 * s) * mpmath.zeta(2 * s))


def zeta_square(s: float) -> float:
    """Unit-square Dirichlet zeta, ``pi^{-2s} (zeta(s) beta(s) - zeta(2s))`` for s > 1."""
    beta = mpmath.dirichlet(s, [0, 1, 0, -1])
    return float(mpmath.pi ** (-2 * s) * (mpmath.zeta(s) * beta - mpmath.zeta(2 * s)))


@dataclass(frozen=True)
class DomainSpec:
    kind: str
    lengths: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "lengths", tuple(float(x) for x in self.lengths))
        if self.kind not in ("interval", "orthotope", "torus", "triangle"):
            raise UnsupportedDomainError(f"unsupported domain {self.kind!r}")
        if self.kind == "triangle":
            if self.lengths:
                raise ValueError("the triangle takes no parameters")
        elif not self.lengths or any(x <= 0 for x in self.lengths):
            raise ValueError("lengths must be positive")
        if self.kind == "interval" and len(self.lengths) != 1:
            raise ValueError("an interval has one length")


def zeta_prime0(domain: DomainSpec, convention: str = STANDARD) -> float:
    if domain.kind == "interval":
        return interval_zeta_prime0(domain.lengths[0], convention)
    if domain.kind == "orthotope":
        return zeta_prime0_orthotope(domain.lengths, convention)
    if domain.kind == "torus":
        return epstein_zeta_prime0(domain.lengths)
    if domain.kind == "triangle":
        return zeta_prime0_triangle(convention)
    raise UnsupportedDomainError(domain.kind)


def det_star(domain: DomainSpec, convention: str = STANDARD) -> float:
    """Regularised determinant ``exp(-zeta'(0))``."""
    return math.exp(-zeta_prime0(domain, convention))

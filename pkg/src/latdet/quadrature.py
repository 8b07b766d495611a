"""Adaptive Gauss-Kronrod quadrature on [0, inf) for Frullani-type integrals.

The integrals in this package all have the shape ``int_0^inf g(t) dt/t`` with
``g(t) = O(t)`` at the origin and only algebraic decay ``t^{-m/2}`` at
infinity (products of scaled Bessel functions).  The range is split at
``split_point``:

* ``(0, h]`` is integrated from the integrand's Taylor coefficients, so the
  cancellation inside ``g`` never meets the ``1/t`` weight;
* ``[h, split_point]`` by adaptive G7-K15 panels;
* ``[split_point, inf)`` after ``t = split_point / u**2``, which turns every
  ``t^{-m/2}`` tail into a polynomial in ``u`` on (0, 1].
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from latdet.specfun import bessel_i0e

# G7-K15 nodes and weights (QUADPACK qk15).
_XGK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KRONROD_W = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GAUSS_W = np.zeros(15)
_GAUSS_W[[1, 3, 5]] = _WG[:3]
_GAUSS_W[7] = _WG[3]
_GAUSS_W[[13, 11, 9]] = _WG[:3]

HOOK_MAX = 1e-3


class QuadratureError(RuntimeError):
    """Adaptive quadrature stopped before reaching its tolerance."""

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-10
    split_point: float = 1.0
    max_subdivisions: int = 4000

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if not self.split_point > 0:
            raise ValueError("split_point must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be a positive integer")

    def halved(self):
        return QuadratureSpec(self.abs_tol / 2, self.split_point, self.max_subdivisions)


@dataclass(frozen=True)
class Integrand:
    """``g`` in ``int_0^inf g(t) dt/t``.

    ``fn`` is vectorised over numpy arrays.  ``taylor[k]`` is the coefficient
    of ``t**k`` in the expansion of ``g`` at 0; ``taylor[0]`` must vanish and
    at least the ``t`` and ``t**2`` coefficients must be present.
    """

    fn: Callable[[np.ndarray], np.ndarray]
    taylor: tuple = field(default=(0.0, 0.0, 0.0))
    label: str = ""

    def __post_init__(self):
        if len(self.taylor) < 3:
            raise ValueError("small-t expansion must reach order t^2")
        if self.taylor[0] != 0:
            raise ValueError("g(0) must vanish for a Frullani integral")

    def __call__(self, t):
        return self.fn(t)

    def scaled(self, a):
        return Integrand(lambda t: a * self.fn(t), tuple(a * c for c in self.taylor),
                         f"{a}*{self.label}")

    def __add__(self, other):
        n = max(len(self.taylor), len(other.taylor))
        ta = tuple(self.taylor) + (0.0,) * (n - len(self.taylor))
        tb = tuple(other.taylor) + (0.0,) * (n - len(other.taylor))
        # a truncated expansion is only as long as the shorter one
        keep = min(len(self.taylor), len(other.taylor))
        taylor = tuple(x + y for x, y in zip(ta, tb))[:keep]
        f, g = self.fn, other.fn
        return Integrand(lambda t: f(t) + g(t), taylor, f"{self.label}+{other.label}")


ZERO = Integrand(lambda t: np.zeros_like(np.asarray(t, dtype=float)), (0.0, 0.0, 0.0), "0")


def _series_exp(a, order):
    # e^{-a t}
    return np.array([(-a) ** k / math.factorial(k) for k in range(order + 1)])


def _series_i0_power(b, m, order):
    # I0(b t)^m, truncated
    base = np.zeros(order + 1)
    for k in range(order // 2 + 1):
        base[2 * k] = (0.25 * b * b) ** k / math.factorial(k) ** 2
    out = np.zeros(order + 1)
    out[0] = 1.0
    for _ in range(m):
        out = np.convolve(out, base)[: order + 1]
    return out


def exp_bessel_taylor(a, b, m, order=8):
    """Taylor coefficients of ``e^{-a t} I0(b t)^m`` up to ``t**order``."""
    return np.convolve(_series_exp(a, order), _series_i0_power(b, m, order))[: order + 1]


def exp_bessel(t, a, b, m):
    """``e^{-a t} I0(b t)^m`` evaluated through the scaled Bessel function."""
    t = np.asarray(t, dtype=float)
    if m == 0:
        return np.exp(-a * t)
    return np.exp(-(a - m * b) * t) * bessel_i0e(b * t) ** m


def exp_bessel_integrand(terms: Sequence[tuple], label="", order=8, fn=None):
    """Integrand ``sum coef * e^{-a t} I0(b t)^m`` over ``terms = [(coef, a, b, m)]``.

    ``fn`` may supply a numerically better factored form of the same function;
    the Taylor data is always built from ``terms``.
    """
    terms = [tuple(tm) for tm in terms]
    taylor = np.zeros(order + 1)
    for coef, a, b, m in terms:
        taylor += coef * exp_bessel_taylor(a, b, m, order)
    if abs(taylor[0]) > 1e-12 * max(1.0, max(abs(c) for c, *_ in terms)):
        raise ValueError(f"terms do not cancel at t=0 (g(0)={taylor[0]})")
    taylor[0] = 0.0

    if fn is None:
        def fn(t):
            t = np.asarray(t, dtype=float)
            out = np.zeros_like(t)
            for coef, a, b, m in terms:
                out = out + coef * exp_bessel(t, a, b, m)
            return out

    return Integrand(fn, tuple(float(c) for c in taylor), label)


def _gk15(func, a, b):
    half = 0.5 * (b - a)
    center = 0.5 * (a + b)
    vals = np.asarray(func(center + half * _NODES), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise QuadratureError(f"non-finite integrand on [{a}, {b}]")
    k = half * float(np.dot(_KRONROD_W, vals))
    g = half * float(np.dot(_GAUSS_W, vals))
    return k, abs(k - g)


def adaptive_gk(func, a, b, tol, max_subdivisions=4000):
    """Globally adaptive G7-K15 on a finite interval; returns (value, error)."""
    value, err = _gk15(func, a, b)
    heap = [(-err, a, b, value, err)]
    total, total_err = value, err
    n = 1
    while total_err > tol:
        if n >= max_subdivisions:
            raise QuadratureError(
                f"no convergence after {n} subdivisions on [{a}, {b}] "
                f"(estimate {total!r}, error {total_err:.3g} > {tol:.3g})",
                estimate=total, error=total_err)
        _, lo, hi, v, e = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        v1, e1 = _gk15(func, lo, mid)
        v2, e2 = _gk15(func, mid, hi)
        heapq.heappush(heap, (-e1, lo, mid, v1, e1))
        heapq.heappush(heap, (-e2, mid, hi, v2, e2))
        n += 1
        # re-sum from the heap to keep drift out of long runs
        total = math.fsum(item[3] for item in heap)
        total_err = math.fsum(item[4] for item in heap)
    return total, total_err


def _hook_width(taylor, tol):
    # first dropped term ~ h^{K+1}; keep it two orders under tol
    order = len(taylor) - 1
    return min(HOOK_MAX, (0.01 * tol) ** (1.0 / (order + 1)))


def integrate_frullani(f: Integrand, spec: QuadratureSpec = QuadratureSpec(), full_output=False):
    """``int_0^inf g(t) dt/t`` for an :class:`Integrand` ``g``.

    Returns the value, or ``(value, error_estimate)`` with ``full_output``.
    Raises :class:`QuadratureError` if the subdivision budget runs out.
    """
    s = spec.split_point
    h = min(_hook_width(f.taylor, spec.abs_tol), 0.5 * s)
    hook = math.fsum(c * h ** k / k for k, c in enumerate(f.taylor) if k >= 1)
    hook_err = abs(f.taylor[-1]) * h ** (len(f.taylor) - 1)

    budget = 0.5 * spec.abs_tol
    body, body_err = adaptive_gk(lambda t: f(t) / t, h, s, budget, spec.max_subdivisions)

    def tail(u):
        return 2.0 * f(np.minimum(s / (u * u), 1e300)) / u

    tail_val, tail_err = adaptive_gk(tail, 0.0, 1.0, budget, spec.max_subdivisions)
    value = math.fsum([hook, body, tail_val])
    err = hook_err + body_err + tail_err
    return (value, err) if full_output else value


def integrate_semi_infinite(func, spec: QuadratureSpec = QuadratureSpec(), full_output=False):
    """``int_0^inf func(t) dt`` for integrable ``func`` bounded near 0."""
    s = spec.split_point
    budget = 0.5 * spec.abs_tol
    head, head_err = adaptive_gk(func, 0.0, s, budget, spec.max_subdivisions)

    def tail(u):
        return 2.0 * s * func(np.minimum(s / (u * u), 1e300)) / (u * u * u)

    tail_val, tail_err = adaptive_gk(tail, 0.0, 1.0, budget, spec.max_subdivisions)
    value = head + tail_val
    err = head_err + tail_err
    return (value, err) if full_output else value

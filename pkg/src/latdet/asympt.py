"""Lattice constants, theorem right-hand sides, and residual sweeps.

``log det* Delta_{L(alpha n)}`` is predicted as::

    c_d V_d n^d + sum_{m<d} I_m^d(0) V_m n^m + (2 - 2^{1-d}) log n + const

with ``I_m^d(0) = -4^{-(d-m)} int_0^inf (1-e^{-4t})^{d-m} e^{-2mt} I0(2t)^m dt/t``.
A sweep measures ``lhs - (everything but const)`` over growing n; its
limit is the constant, which is where the zeta-function conventions enter.
"""
from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from latdet import exact, spectra, zetadet
from latdet.quadrature import (
    QuadratureSpec,
    exp_bessel,
    exp_bessel_integrand,
    integrate_frullani,
    integrate_semi_infinite,
)
from latdet.specfun import catalan_constant
from latdet.spectra import OrthotopeSpec, face_volume

DEFAULT_SPEC = QuadratureSpec(abs_tol=1e-11)
LOG2 = math.log(2.0)


class DivergenceError(ValueError):
    """The requested lattice integral does not converge."""


# -- constants -------------------------------------------------------------

def bulk_integrand(d: int):
    return exp_bessel_integrand([(1.0, 1.0, 0.0, 0), (-1.0, 2.0 * d, 2.0, d)],
                                label=f"c_{d}")


@functools.lru_cache(maxsize=None)
def _c_d(d, spec):
    return integrate_frullani(bulk_integrand(d), spec, full_output=True)


def c_d(d: int, spec: QuadratureSpec = DEFAULT_SPEC, full_output=False):
    """``int_0^inf (e^{-t} - e^{-2dt} I0(2t)^d) dt/t``."""
    if not 1 <= d <= 6:
        raise ValueError(f"d must lie in [1, 6], got {d}")
    value, err = _c_d(d, spec)
    return (value, err) if full_output else value


def boundary_integrand(d: int, m: int):
    """``(1-e^{-4t})^{d-m} e^{-2mt} I0(2t)^m``, evaluated in factored form."""
    j = d - m
    terms = [(math.comb(j, k) * (-1) ** k, 2.0 * m + 4.0 * k, 2.0, m) for k in range(j + 1)]

    def fn(t):
        t = np.asarray(t, dtype=float)
        return (-np.expm1(-4.0 * t)) ** j * exp_bessel(t, 2.0 * m, 2.0, m)

    return exp_bessel_integrand(terms, label=f"I^{d}_{m}", fn=fn)


@functools.lru_cache(maxsize=None)
def _boundary(d, m, spec):
    value, err = integrate_frullani(boundary_integrand(d, m), spec, full_output=True)
    scale = 4.0 ** -(d - m)
    return -scale * value, scale * err


def boundary_coeff(d: int, m: int, spec: QuadratureSpec = DEFAULT_SPEC, full_output=False):
    """``I_m^d(0)``, the coefficient multiplying ``V_m^d n^m``."""
    if not 1 <= m < d <= 6:
        raise ValueError(f"need 1 <= m < d <= 6, got d={d}, m={m}")
    value, err = _boundary(d, m, spec)
    return (value, err) if full_output else value


def boundary_coeff_m1_closed(d: int) -> float:
    """``I_1^d(0) = 4^{-(d-1)} sum_{k=1}^{d-1} C(d-1,k) (-1)^k log(2k+1+2 sqrt(k^2+k))``."""
    return 4.0 ** -(d - 1) * math.fsum(
        math.comb(d - 1, k) * (-1) ** k * math.log(2 * k + 1 + 2 * math.sqrt(k * k + k))
        for k in range(1, d))


# Two candidate closed forms for I^3_1(0); the quadrature decides between them.
I31_CANDIDATES = {
    "(17+2*sqrt2)(5-2*sqrt6)/16":
        math.log((17 + 2 * math.sqrt(2)) * (5 - 2 * math.sqrt(6))) / 16,
    "(17+12*sqrt2)(5-2*sqrt6)/16":
        math.log((17 + 12 * math.sqrt(2)) * (5 - 2 * math.sqrt(6))) / 16,
}


def i31_verdict(tol: float = 1e-9, spec: QuadratureSpec = DEFAULT_SPEC) -> dict:
    """Compare quadrature ``I_1^3(0)`` with each candidate expression.

    A candidate counts as a match if it agrees up to an overall sign; the
    sign is reported separately, since ``I_1^3(0)`` is negative while both
    candidate expressions are positive.
    """
    value, err = boundary_coeff(3, 1, spec, full_output=True)
    rows = {}
    for name, cand in I31_CANDIDATES.items():
        rows[name] = {
            "value": cand,
            "abs_diff": abs(value - cand),
            "abs_diff_negated": abs(value + cand),
            "matches": min(abs(value - cand), abs(value + cand)) <= tol,
            "sign_flipped": abs(value + cand) <= tol,
        }
    return {"quadrature": value, "error": err, "tolerance": tol, "candidates": rows,
            "matching": [k for k, r in rows.items() if r["matches"]]}


def glasser_integrand(m: int, w: float):
    return exp_bessel_integrand([(1.0, 1.0, 0.0, 0), (-1.0, float(w), 1.0, m)],
                                label=f"J_{m}({w})")


def glasser_j(m: int, w: float, spec: QuadratureSpec = DEFAULT_SPEC, full_output=False):
    """``J_m(w) = int_0^inf (e^{-t} - e^{-wt} I0(t)^m) dt/t`` for ``w >= m``.

    Just above ``w = m`` the tail changes on the scale ``1/(w-m)``; offsets
    below about 1e-8 are not resolved and give the ``w = m`` value.
    """
    if m < 1 or w < m:
        raise ValueError(f"need m >= 1 and w >= m, got m={m}, w={w}")
    return integrate_frullani(glasser_integrand(m, w), spec, full_output=full_output)


def boundary_integral_via_glasser(d: int, m: int, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """``-int (1-e^{-4t})^{d-m} e^{-2mt} I0(2t)^m dt/t`` as ``sum_k C(d-m,k) (-1)^k J_m(2k+m)``."""
    j = d - m
    return math.fsum(math.comb(j, k) * (-1) ** k * glasser_j(m, 2 * k + m, spec)
                     for k in range(j + 1))


def mahler_measure(m: int, k: int, points: int = 256) -> float:
    """Mahler measure of ``4k + 2m + sum_j (x_j + 1/x_j)`` by the periodic trapezoid rule.

    Needs k >= 1 so the polynomial has no zeros on the torus.
    """
    if not 1 <= m <= 3:
        raise ValueError("m must be 1, 2 or 3")
    if k < 1:
        raise ValueError("k must be >= 1")
    theta = 2 * np.pi * np.arange(points) / points
    c = 2 * np.cos(theta)
    acc = np.full((points,) * m, 4.0 * k + 2.0 * m)
    for axis in range(m):
        shape = [1] * m
        shape[axis] = points
        acc = acc + c.reshape(shape)
    return float(np.mean(np.log(acc)))


def green(d: int, k: int, w: float, spec: QuadratureSpec = DEFAULT_SPEC, full_output=False):
    """``G_d(k, w) = Gamma(k)^{-1} int_0^inf t^{k-1} e^{-wt} I0(t)^d dt``."""
    if d < 1 or k < 1 or int(k) != k:
        raise ValueError(f"need d >= 1 and integer k >= 1, got d={d}, k={k}")
    if w < d:
        raise DivergenceError(f"w={w} < d={d}: the integrand grows like e^{{(d-w)t}}")
    if w == d and not 2 * k < d:
        raise DivergenceError(
            f"at w = d the integrand decays like t^{{k-1-d/2}}; need 2k < d, got k={k}, d={d}")
    norm = math.gamma(k)

    def f(t):
        return t ** (k - 1) * exp_bessel(t, float(w), 1.0, d)

    value, err = integrate_semi_infinite(f, spec, full_output=True)
    return (value / norm, err / norm) if full_output else value / norm


def watson(d: int, spec: QuadratureSpec = DEFAULT_SPEC, full_output=False):
    """``W_d = int_0^inf e^{-dt} I0(t)^d dt``; diverges for d <= 2."""
    if d <= 2:
        raise DivergenceError(f"the Watson integral diverges for d={d} (tail ~ t^(-d/2))")
    if d > 6:
        raise ValueError("d must be at most 6")
    return green(d, 1, float(d), spec, full_output=full_output)


def watson3_closed() -> float:
    """``(sqrt3 - 1) (Gamma(1/24) Gamma(11/24))^2 / (96 pi^3)``."""
    return (math.sqrt(3) - 1) * (math.gamma(1 / 24) * math.gamma(11 / 24)) ** 2 / (96 * math.pi ** 3)


def face_green_integral(d: int, m: int, k: int = 1, spec: QuadratureSpec = DEFAULT_SPEC):
    """``int_0^inf t^{k-1} (1-e^{-2t})^{d-m} e^{-mt} I0(t)^m dt``."""
    j = d - m

    def f(t):
        return t ** (k - 1) * (-np.expm1(-2.0 * t)) ** j * exp_bessel(t, float(m), 1.0, m)

    return integrate_semi_infinite(f, spec)


# -- theorem right-hand sides ----------------------------------------------

@dataclass(frozen=True)
class TheoremRHS:
    """Coefficients of an asymptotic expansion in n.

    ``partial(n)`` is everything except ``constant``.
    """

    d: int
    bulk: float
    boundary: dict
    log_coeff: float
    constant: float
    convention: str
    n: int | None = None
    constant_terms: dict = field(default_factory=dict, compare=False)

    def partial(self, n=None) -> float:
        n = self.n if n is None else n
        if n is None:
            raise ValueError("n is required")
        terms = [self.bulk * n ** self.d, self.log_coeff * math.log(n)]
        terms += [c * n ** m for m, c in self.boundary.items()]
        return math.fsum(terms)

    def value(self, n=None) -> float:
        return self.partial(n) + self.constant


def face_log_dets(alphas: Sequence[float], convention: str = zetadet.STANDARD) -> dict:
    """``log det*`` of every face orthotope, keyed by index tuple."""
    alphas = [float(a) for a in alphas]
    d = len(alphas)
    out = {}
    if d >= 2:
        multi = zetadet.orthotope_faces_via_inversion(alphas)
        for idx, zp in multi.items():
            if len(idx) >= 2:
                out[idx] = -zp
    for i, a in enumerate(alphas):
        out[(i,)] = -zetadet.interval_zeta_prime0(a, convention)
    return dict(sorted(out.items(), key=lambda kv: (len(kv[0]), kv[0])))


def combinatorial_constant(d: int) -> float:
    """``2^{-d} sum_{m=1}^d C(d,m) (-1)^m log(4m)``."""
    return math.fsum(math.comb(d, m) * (-1) ** m * math.log(4 * m) for m in range(1, d + 1)) / 2 ** d


def theorem1_rhs(alphas, n: int | None = None, convention: str = zetadet.STANDARD,
                 spec: QuadratureSpec = DEFAULT_SPEC) -> TheoremRHS:
    o = alphas if isinstance(alphas, OrthotopeSpec) else OrthotopeSpec(tuple(alphas))
    d = o.d
    if d > 3:
        raise ValueError("the determinant constant is available for d <= 3")
    bulk = c_d(d, spec) * o.volume()
    boundary = {m: boundary_coeff(d, m, spec) * face_volume(o, m) for m in range(1, d)}
    faces = face_log_dets(o.alphas, convention)
    comb_const = combinatorial_constant(d)
    constant = math.fsum(faces.values()) + comb_const
    return TheoremRHS(d, bulk, boundary, 2.0 - 2.0 ** (1 - d), constant, convention, n,
                      {"face_log_dets": faces, "combinatorial": comb_const})


def theorem3_rhs(n: int | None = None, convention: str = zetadet.STANDARD) -> TheoremRHS:
    """``(2G/pi) n^2 - log(2+sqrt2) n - (3/4) log n + log det* tri + (23/8) log 2``."""
    log_det_tri = -zetadet.zeta_prime0_triangle(convention)
    return TheoremRHS(2, 2.0 * catalan_constant() / math.pi,
                      {1: -math.log(2.0 + math.sqrt(2.0))}, -0.75,
                      log_det_tri + 23.0 / 8.0 * LOG2, convention, n,
                      {"log_det_triangle": log_det_tri, "log2_multiple": 23.0 / 8.0})


def qad_constant_from_grid(convention: str = zetadet.STANDARD) -> float:
    """QAD constant implied by the square-grid constant through the exact QAD identity.

    ``log tau(QAD_n) = (1/2) log det* L(n,n) - (n/2) log 2 - (3/2) log n + (1/2) log 2``.
    """
    return 0.5 * theorem1_rhs((1, 1), convention=convention).constant + 0.5 * LOG2


# -- forests ---------------------------------------------------------------

def forest_prediction(d: int, alphas, n: int, k: int, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Leading-order prediction of ``N_k / N_1`` on ``L(alpha n)``.

    d=3, k=2: ``(V_3/2) W_3 n^3``.  d=4, k=2: ``(V_4/2) W_4 n^4 - (V_3/8) A n^3``
    with ``A = int (1-e^{-2t}) e^{-3t} I0(t)^3 dt``.  d=4, k=3: half the
    square of the k=2 expansion to order n^7,
    ``(V_4 W_4)^2/8 n^8 - (V_3 V_4 W_4 / 16) A n^7``.
    """
    o = alphas if isinstance(alphas, OrthotopeSpec) else OrthotopeSpec(tuple(alphas))
    if o.d != d:
        raise ValueError(f"{len(o.alphas)} side ratios for d={d}")
    if (d, k) == (3, 2):
        return 0.5 * o.volume() * watson(3, spec) * n ** 3
    if d == 4 and k in (2, 3):
        v4 = face_volume(o, 4)
        v3 = face_volume(o, 3)
        w4 = watson(4, spec)
        a = face_green_integral(4, 3, 1, spec)
        if k == 2:
            return 0.5 * v4 * w4 * n ** 4 - v3 * a / 8.0 * n ** 3
        return (v4 * w4) ** 2 / 8.0 * n ** 8 - v3 * v4 * w4 * a / 16.0 * n ** 7
    raise ValueError(f"no forest prediction for d={d}, k={k}")


# -- sweeps ----------------------------------------------------------------

@dataclass(frozen=True)
class SweepRecord:
    n: int
    lhs: float
    rhs_partial: float
    residual: float
    residual_delta: float | None = None

    def __post_init__(self):
        if not math.isfinite(self.residual):
            raise ValueError(f"non-finite residual at n={self.n}")


def residual_sweep(target: str, params: dict | None, n_list: Sequence[int],
                   convention: str = zetadet.STANDARD, precision: str = "standard",
                   spec: QuadratureSpec = DEFAULT_SPEC) -> list:
    """Residuals ``lhs - rhs_partial`` in the order of ``n_list`` (must ascend)."""
    n_list = [int(n) for n in n_list]
    if not n_list or any(b <= a for a, b in zip(n_list, n_list[1:])) or n_list[0] < 1:
        raise ValueError(f"n_list must be positive and strictly ascending, got {n_list}")
    params = dict(params or {})
    if target == "theorem1":
        alphas = OrthotopeSpec(tuple(params.get("alphas", (1, 1))))
        rhs = theorem1_rhs(alphas, convention=convention, spec=spec)

        def lhs(n):
            return spectra.log_det_star(alphas.grid(n))
    elif target == "theorem3":
        rhs = theorem3_rhs(convention=convention)

        def lhs(n):
            return float(exact.tau_qad_product(n, extended=precision == "extended"))
    else:
        raise ValueError(f"unknown sweep target {target!r}")

    records = []
    prev = None
    for n in n_list:
        left = lhs(n)
        part = rhs.partial(n)
        res = left - part
        records.append(SweepRecord(n, left, part, res, None if prev is None else res - prev))
        prev = res
    return records


def is_cauchy(records: Sequence[SweepRecord]) -> bool:
    """Successive residual gaps strictly shrink in absolute value."""
    gaps = [abs(b.residual - a.residual) for a, b in zip(records, records[1:])]
    return all(g2 < g1 for g1, g2 in zip(gaps, gaps[1:]))


def constant_candidates(target: str, params: dict | None = None) -> dict:
    """Theorem constants under each interval convention, plus the grid-implied QAD constant."""
    params = dict(params or {})
    out = {}
    for conv in zetadet.CONVENTIONS:
        if target == "theorem1":
            out[conv] = theorem1_rhs(tuple(params.get("alphas", (1, 1))), convention=conv).constant
        elif target == "theorem3":
            out[conv] = theorem3_rhs(convention=conv).constant
        else:
            raise ValueError(f"unknown target {target!r}")
    if target == "theorem3":
        out["from_grid_identity"] = qad_constant_from_grid(zetadet.STANDARD)
    return out

"""``latdet`` command line.

Exit codes: 0 success, 1 verification failure, 2 usage or parameter error,
3 numerical non-convergence.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import os
import random
import sys
from dataclasses import dataclass, field, fields
from fractions import Fraction

from latdet import asympt, combinatorics, exact, spectra, zetadet
from latdet.quadrature import QuadratureError, QuadratureSpec
from latdet.specfun import catalan_constant

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
COMMANDS = ("tau", "constants", "verify", "sweep", "theta", "zeta")
VERIFY_TARGETS = ("theta", "inversion", "theorem2", "qad-identity", "forests")
PRECISIONS = ("standard", "extended")
EPS = 2.0 ** -52


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    parameters: dict = field(default_factory=dict)
    output_format: str = "json"
    tolerance: float = 1e-10
    precision_mode: str = "standard"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.output_format not in ("json", "csv", "text"):
            raise UsageError(f"unknown output format {self.output_format!r}")
        if not self.tolerance > 0:
            raise UsageError("tolerance must be positive")
        if self.precision_mode not in PRECISIONS:
            raise UsageError(f"precision must be one of {PRECISIONS}")

    @classmethod
    def from_mapping(cls, data: dict):
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise UsageError(f"unknown RunConfig keys: {', '.join(unknown)}")
        return cls(**data)


# -- output ----------------------------------------------------------------

def _encode(obj) -> str:
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format(obj, ".17g") if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_encode(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_encode(v) for v in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj) -> str:
    """JSON with every float written to 17 significant digits."""
    return _encode(obj)


def tagged(value, method, error=None):
    out = {"value": value, "method": method}
    if error is not None:
        out["error"] = float(error)
    return out


def _csv(header, rows):
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join("" if v is None else (format(v, ".17g") if isinstance(v, float) else str(v))
                           for v in row) + "\n")
    return buf.getvalue()


def tagged_verdict():
    v = asympt.i31_verdict()
    cands = {name: {**row, "method": "closed-form"} for name, row in v["candidates"].items()}
    return {"quadrature": tagged(v["quadrature"], "quadrature", v["error"]),
            "tolerance": v["tolerance"], "candidates": cands, "matching": v["matching"]}


# -- commands --------------------------------------------------------------

def cmd_tau(cfg: RunConfig):
    kind = cfg.parameters["kind"]
    sizes = tuple(cfg.parameters["sizes"])
    loose_rule = cfg.parameters.get("loose_rule", False)
    try:
        g = exact.build_graph(kind, sizes, loose_rule=loose_rule)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    record = {"kind": kind, "sizes": list(sizes)}
    if g.vertex_count <= exact.MAX_TREE_VERTICES:
        tau = exact.matrix_tree(g)
        record["tau"] = tagged(tau, "exact", 0.0)
        text = str(tau)
    else:
        if kind == "qad":
            if loose_rule:
                raise UsageError("the product formula covers the corrected vertex rule only")
            log_tau = float(exact.tau_qad_product(sizes[0], extended=cfg.precision_mode == "extended"))
            count = sizes[0] ** 2
        else:
            spec = spectra.LatticeSpec(kind, sizes)
            count = spec.vertex_count
            log_tau = spectra.log_det_star(spec) - math.log(count)
        record["log_tau"] = tagged(log_tau, "spectral-product", 8 * EPS * count * max(1.0, abs(log_tau) / count))
        text = f"log_tau {format(log_tau, '.17g')}"
    return EXIT_OK, dumps(record) if cfg.output_format == "json" else text


def cmd_constants(cfg: RunConfig):
    d = int(cfg.parameters["d"])
    if not 1 <= d <= 4:
        raise UsageError("constants: d must lie in [1, 4]")
    spec = QuadratureSpec(abs_tol=cfg.tolerance)
    out = {"d": d, "tolerance": cfg.tolerance}
    c, err = asympt.c_d(d, spec, full_output=True)
    out["c_d"] = tagged(c, "quadrature", err)
    cat = catalan_constant()
    out["catalan"] = tagged(cat, "series", 4 * EPS)
    if d == 2:
        out["c_d"]["abs_diff_4G_over_pi"] = abs(c - 4 * cat / math.pi)
    if d >= 3:
        w, werr = asympt.watson(d, spec, full_output=True)
        out["watson"] = tagged(w, "quadrature", werr)
        if d == 3:
            out["watson"]["abs_diff_gamma_closed_form"] = abs(w - asympt.watson3_closed())
    boundary = {}
    for m in range(1, d):
        v, e = asympt.boundary_coeff(d, m, spec, full_output=True)
        boundary[str(m)] = tagged(v, "quadrature", e)
    out["boundary_coeff"] = boundary
    if d == 3:
        out["i31_verdict"] = tagged_verdict()
    if d <= 3:
        cands = {}
        for conv in zetadet.CONVENTIONS:
            rhs = asympt.theorem1_rhs((1,) * d, convention=conv, spec=spec)
            cands[conv] = tagged(rhs.constant, "series", 1e-12)
        out["determinant_constant_unit_cube"] = cands
    return EXIT_OK, dumps(out)


def _verify_theta():
    rng = random.Random(20240611)
    cases = []
    for _ in range(50):
        d = rng.randint(1, 3)
        sides = tuple(rng.randint(1, 8) for _ in range(d))
        t = rng.uniform(0.05, 5.0)
        scale = spectra.theta(spectra.LatticeSpec.grid(*sides), t)
        r_star, r_torus = spectra.check_theta_decomposition(sides, t)
        rel = max(r_star, r_torus) / scale
        cases.append((rel <= 1e-12, f"sides={sides} t={t:.6g} rel_residual={rel:.3g}"))
    return cases


def _verify_inversion():
    rng = random.Random(7)
    cases = []
    for trial in range(200):
        l = rng.randint(0, 8)
        vals = [1] + [Fraction(rng.randint(-10 ** 6, 10 ** 6), rng.randint(1, 1000))
                      for _ in range((1 << l) - 1)]
        g = combinatorics.SubsetTable(l, vals)
        back = combinatorics.invert(combinatorics.forward(g))
        cases.append((back == g, f"trial={trial} l={l}"))
    return cases


def _verify_theorem2():
    cases = []
    for n1 in range(1, 5):
        for n2 in range(1, 5):
            chk = exact.verify_torus_grid_identity(n1, n2)
            cases.append((chk.holds, f"n1={n1} n2={n2} tau_torus={chk.lhs} rhs={chk.rhs}"))
    return cases


def _verify_qad():
    cases = []
    for n in range(1, 13):
        chk = exact.verify_qad_identity(n)
        cases.append((chk.holds, f"n={n} tau_grid={chk.lhs} rhs={chk.rhs} "
                                 f"tau_qad={chk.witness['tau_qad']}"))
    return cases


def forest_checks(sides):
    """Exact forest polynomial against the spectral sums on one grid."""
    poly = exact.forest_polynomial(exact.grid_graph(sides))
    spec = spectra.LatticeSpec.grid(*sides)
    n1, n2 = poly.rooted_forests(1), poly.rooted_forests(2)
    s1 = spectra.spectral_sum(spec, 1) if spec.vertex_count > 1 else 0.0
    s2 = spectra.spectral_sum(spec, 2) if spec.vertex_count > 1 else 0.0
    ratio2 = n2 / n1
    err2 = abs(ratio2 - s1)
    err3 = None
    if poly.degree >= 3:
        err3 = abs(poly.rooted_forests(3) / n1 - 0.5 * (ratio2 ** 2 - s2))
    return poly, err2, err3


def ratio_scale(sides):
    return spectra.spectral_sum(spectra.LatticeSpec.grid(*sides), 1)


def _verify_forests():
    cases = []
    poly, _, _ = forest_checks((2, 2))
    cases.append((poly.coeffs == (0, 16, 20, 8, 1), f"grid(2,2) coeffs={list(poly.coeffs)}"))
    shapes = [(a, b) for a in range(2, 13) for b in range(a, 13) if a * b <= 12]
    shapes += [(a,) for a in range(2, 13)] + [(2, 2, 2), (2, 2, 3)]
    for sides in shapes:
        _, e2, e3 = forest_checks(sides)
        ok = e2 <= 1e-12 * max(1.0, ratio_scale(sides)) and (e3 is None or e3 <= 1e-12)
        cases.append((ok, f"grid{sides} |N2/N1 - sum 1/lambda|={e2:.3g} N3_residual="
                          f"{'n/a' if e3 is None else format(e3, '.3g')}"))
    return cases


VERIFIERS = {"theta": _verify_theta, "inversion": _verify_inversion,
             "theorem2": _verify_theorem2, "qad-identity": _verify_qad,
             "forests": _verify_forests}


def cmd_verify(cfg: RunConfig):
    target = cfg.parameters["target"]
    if target not in VERIFIERS:
        raise UsageError(f"unknown verify target {target!r}")
    cases = VERIFIERS[target]()
    passed = all(ok for ok, _ in cases)
    if cfg.output_format == "json":
        body = dumps({"target": target, "passed": passed,
                      "cases": [{"pass": ok, "witness": w} for ok, w in cases]})
    else:
        lines = [f"{'PASS' if ok else 'FAIL'} {w}" for ok, w in cases]
        lines.append(f"{'PASS' if passed else 'FAIL'} {target}: "
                     f"{sum(ok for ok, _ in cases)}/{len(cases)} cases")
        body = "\n".join(lines)
    return (EXIT_OK if passed else EXIT_VERIFY), body


def cmd_sweep(cfg: RunConfig):
    p = cfg.parameters
    target = p["target"]
    params = {"alphas": tuple(p["alphas"])} if p.get("alphas") else None
    try:
        records = asympt.residual_sweep(target, params, p["n"], p.get("convention", zetadet.STANDARD),
                                        cfg.precision_mode)
    except (ValueError, exact.GraphSizeError) as exc:
        raise UsageError(str(exc)) from exc
    header = ("n", "lhs", "rhs_partial", "residual", "residual_delta")
    if cfg.output_format == "csv":
        return EXIT_OK, _csv(header, [[getattr(r, h) for h in header] for r in records]).rstrip("\n")
    last = records[-1].residual
    cands = asympt.constant_candidates(target, params)
    meta = {"target": target, "convention": p.get("convention", zetadet.STANDARD),
            "precision": cfg.precision_mode,
            "cauchy": asympt.is_cauchy(records),
            "field_methods": {"n": "exact", "lhs": "spectral-product", "rhs_partial": "quadrature",
                              "residual": "quadrature", "residual_delta": "quadrature"},
            "constant_candidates": {k: {"value": v, "method": "series", "error": 1e-12, "gap": last - v}
                                    for k, v in cands.items()},
            "i31_verdict": tagged_verdict()}
    rows = [{h: getattr(r, h) for h in header} for r in records]
    return EXIT_OK, dumps({"records": rows, "metadata": meta})


def cmd_theta(cfg: RunConfig):
    p = cfg.parameters
    t = float(p["t"])
    sides = tuple(p["sides"])
    if not t > 0:
        raise UsageError("theta needs t > 0")
    try:
        spec = spectra.LatticeSpec(p.get("kind", "grid"), sides)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    value = spectra.theta(spec, t)
    out = {"kind": spec.kind, "sides": list(sides), "t": t,
           "theta": tagged(value, "series", EPS * spec.vertex_count)}
    if spec.kind == "grid":
        r_star, r_torus = spectra.check_theta_decomposition(sides, t)
        out["residual_star"] = r_star
        out["residual_torus"] = r_torus
    return EXIT_OK, dumps(out)


def cmd_zeta(cfg: RunConfig):
    p = cfg.parameters
    conv = p.get("convention", zetadet.STANDARD)
    try:
        dom = zetadet.DomainSpec(p["domain"], tuple(p.get("lengths") or ()))
        zp = zetadet.zeta_prime0(dom, conv)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    out = {"domain": dom.kind, "lengths": list(dom.lengths), "convention": conv,
           "zeta_prime0": tagged(zp, "series", 1e-12), "log_det_star": tagged(-zp, "series", 1e-12)}
    if dom.kind == "orthotope" and len(dom.lengths) == 2:
        eta = zetadet.zeta_prime0_rectangle_eta(*dom.lengths)
        out["zeta_prime0_eta"] = tagged(eta, "eta-oracle", 1e-13)
    if dom.kind == "torus" and len(dom.lengths) == 2:
        out["zeta_prime0_eta"] = tagged(zetadet.torus_zeta_prime0_eta(*dom.lengths), "eta-oracle", 1e-13)
    return EXIT_OK, dumps(out)


HANDLERS = {"tau": cmd_tau, "constants": cmd_constants, "verify": cmd_verify,
            "sweep": cmd_sweep, "theta": cmd_theta, "zeta": cmd_zeta}


# -- argument parsing -------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def build_parser():
    parser = _Parser(prog="latdet", description="Spanning trees, forests and determinants on lattices.")
    parser.add_argument("--tol", type=float, default=1e-10, help="quadrature tolerance")
    parser.add_argument("--precision", choices=PRECISIONS, default=None)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("tau", help="spanning-tree count")
    p.add_argument("kind", choices=("grid", "torus", "qad"))
    p.add_argument("sizes", type=int, nargs="+")
    p.add_argument("--loose-rule", action="store_true", help="qad vertex rule k1+k2 <= n")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("constants", help="lattice constants for dimension d")
    p.add_argument("--d", type=int, required=True)

    p = sub.add_parser("verify", help="run an exact or numeric identity suite")
    p.add_argument("target", choices=VERIFY_TARGETS)
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("sweep", help="residual sweep against a theorem")
    p.add_argument("target", choices=("theorem1", "theorem3"))
    p.add_argument("--n", type=_int_list, required=True)
    p.add_argument("--alphas", type=_int_list, default=None)
    p.add_argument("--convention", choices=zetadet.CONVENTIONS, default=zetadet.STANDARD)
    p.add_argument("--format", choices=("csv", "json"), default="json")

    p = sub.add_parser("theta", help="heat trace of a grid or torus")
    p.add_argument("--kind", choices=("grid", "torus"), default="grid")
    p.add_argument("--sides", type=_int_list, required=True)
    p.add_argument("--t", type=float, required=True)

    p = sub.add_parser("zeta", help="zeta'(0) and log det* of a continuum domain")
    p.add_argument("--domain", choices=("interval", "orthotope", "torus", "triangle"), required=True)
    p.add_argument("--lengths", type=_float_list, default=None)
    p.add_argument("--convention", choices=zetadet.CONVENTIONS, default=zetadet.STANDARD)
    return parser


def config_from_args(ns) -> RunConfig:
    precision = ns.precision or os.environ.get("LATDET_PRECISION", "standard")
    params = {k: v for k, v in vars(ns).items()
              if k not in ("command", "tol", "precision", "format")}
    if ns.command == "verify":
        params = {"target": ns.target}
    return RunConfig(command=ns.command, parameters=params,
                     output_format=getattr(ns, "format", "json"),
                     tolerance=ns.tol, precision_mode=precision)


def run(argv=None):
    """Return ``(exit_code, stdout_text, stderr_text)`` without touching sys streams."""
    try:
        cfg = config_from_args(build_parser().parse_args(argv))
        code, body = HANDLERS[cfg.command](cfg)
        return code, body + "\n", ""
    except UsageError as exc:
        return EXIT_USAGE, "", f"latdet: error: {exc}\n"
    except (exact.GraphSizeError, exact.DisconnectedGraphError, zetadet.DimensionError) as exc:
        return EXIT_USAGE, "", f"latdet: error: {exc}\n"
    except QuadratureError as exc:
        return EXIT_NUMERIC, "", f"latdet: quadrature did not converge: {exc}\n"


def main(argv=None):
    code, out, err = run(argv)
    if out:
        sys.stdout.write(out)
    if err:
        sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())

"""Residuals of log tau(QAD_n) against (2G/pi) n^2 - log(2+sqrt2) n - (3/4) log n."""
import argparse
import math

from latdet import asympt, zetadet


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", default="64,128,256,512")
    ap.add_argument("--precision", choices=("standard", "extended"), default="extended")
    args = ap.parse_args()
    ns = [int(x) for x in args.n.split(",")]

    recs = asympt.residual_sweep("theorem3", None, ns, precision=args.precision)
    for r in recs:
        delta = "" if r.residual_delta is None else f"{r.residual_delta:12.3e}"
        print(f"{r.n:6d} {r.residual:20.14f} {delta}")
    last = recs[-1].residual
    print("Cauchy:", asympt.is_cauchy(recs))
    for name, c in asympt.constant_candidates("theorem3").items():
        print(f"{name:20s} {c:.14f}   gap {last - c:+.3e}")
    tri = -zetadet.zeta_prime0_triangle(zetadet.STANDARD)
    k = (last - tri) / math.log(2)
    print(f"measured constant = log det*(triangle) + {k:.6f} log 2")


if __name__ == "__main__":
    main()

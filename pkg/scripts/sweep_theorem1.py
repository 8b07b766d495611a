"""Residual sweeps of log det* on grids L(alpha n) against the theorem1 expansion."""
import argparse

from latdet import asympt, zetadet


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alphas", default="1,1", help="comma-separated side ratios")
    ap.add_argument("--n", default="8,16,32,64,128,256")
    args = ap.parse_args()
    alphas = tuple(int(a) for a in args.alphas.split(","))
    ns = [int(x) for x in args.n.split(",")]

    recs = asympt.residual_sweep("theorem1", {"alphas": alphas}, ns)
    print(f"{'n':>6} {'residual':>20} {'delta':>12}")
    for r in recs:
        delta = "" if r.residual_delta is None else f"{r.residual_delta:12.3e}"
        print(f"{r.n:6d} {r.residual:20.14f} {delta}")
    print("Cauchy:", asympt.is_cauchy(recs))
    for conv in zetadet.CONVENTIONS:
        c = asympt.theorem1_rhs(alphas, convention=conv).constant
        print(f"constant [{conv:8s}] {c:.14f}   gap {recs[-1].residual - c:+.3e}")


if __name__ == "__main__":
    main()

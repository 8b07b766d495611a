"""Table of lattice constants c_d, Watson integrals and boundary coefficients."""
from latdet import asympt


def main():
    for d in range(1, 7):
        c, err = asympt.c_d(d, full_output=True)
        w = f"{asympt.watson(d):.15f}" if d >= 3 else "diverges"
        print(f"d={d}  c_d={c:.15f} (+-{err:.1e})  W_d={w}")
        for m in range(1, d):
            print(f"      I^{d}_{m}(0) = {asympt.boundary_coeff(d, m):.15f}")
    v = asympt.i31_verdict()
    print("I^3_1(0) candidates:")
    for name, row in v["candidates"].items():
        print(f"  {name:40s} {row['value']:+.15f}  matches={row['matches']} sign_flipped={row['sign_flipped']}")


if __name__ == "__main__":
    main()

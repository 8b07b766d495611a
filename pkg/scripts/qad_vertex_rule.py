"""Compare the two staircase vertex rules for the quartered Aztec diamond."""
import math

from latdet import exact


def main():
    print(f"{'n':>3} {'tau(L(n,n))':>22} {'k1+k2<=n-1':>14} {'k1+k2<=n':>14} {'exp(product)':>14}")
    for n in range(1, 10):
        tau_l = exact.matrix_tree(exact.grid_graph((n, n)))
        strict = exact.matrix_tree(exact.qad_graph(n))
        loose = exact.matrix_tree(exact.qad_graph(n, loose_rule=True))
        prod = round(math.exp(exact.tau_qad_product(n)))
        ok = "ok" if tau_l == n * 2 ** (n - 1) * strict ** 2 else "MISMATCH"
        print(f"{n:3d} {tau_l:22d} {strict:14d} {loose:14d} {prod:14d}  identity[{ok}]")


if __name__ == "__main__":
    main()

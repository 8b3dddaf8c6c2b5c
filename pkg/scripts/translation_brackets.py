"""Convergence of the power bracket for translation lengths.

For each element prints the end-slope formula and the upper bound d(A_n, B_n)/n
at the sampled powers n of g^n = (A_n, B_n).
"""

import argparse

from cubical_thompson.diagrams import element
from cubical_thompson.isometry import translation_length_bracket


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("elements", nargs="*", default=["x0", "parabolic", "parabolic^-1"])
    ap.add_argument("--n-max", type=int, default=10**4)
    args = ap.parse_args()
    for name in args.elements:
        br = translation_length_bracket(element(name), args.n_max)
        print(f"{name}: formula {br.formula:.12f} (exact: {br.formula_exact})")
        for n, upper, _ in br.samples:
            print(f"  n={n:6d}  upper {upper:.12f}  gap {upper - br.formula:.3e}")


if __name__ == "__main__":
    main()

"""Displacement of the parabolic example along points approaching its infimum.

Prints the certified value next to the two closed forms sqrt(5 + 1/n) and
sqrt(5 + (n-1)/n^2) so the matching one can be read off.
"""

import argparse
import math

from cubical_thompson.diagrams import G_PARABOLIC
from cubical_thompson.isometry import displacement, approach_point


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=12)
    args = ap.parse_args()
    print(f"{'n':>4} {'measured':>16} {'sqrt(5+1/n)':>16} {'sqrt(5+(n-1)/n^2)':>18}")
    for n in range(1, args.n + 1):
        br = displacement(G_PARABOLIC, approach_point(n))
        a, b = math.sqrt(5 + 1 / n), math.sqrt(5 + (n - 1) / n**2)
        print(f"{n:4d} {br.lower:16.12f} {a:16.12f} {b:18.12f}")


if __name__ == "__main__":
    main()

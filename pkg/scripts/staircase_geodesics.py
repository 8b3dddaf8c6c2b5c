"""Geodesics from the origin of the staircase complex.

Axis targets (k^2, 0) give nested geodesics; corner targets (k^2, k) give
geodesics that bend at a staircase corner and never extend one another.
"""

import argparse

from cubical_thompson.staircase import StaircaseRegion, polygon_geodesic


def show(path):
    return " -> ".join(f"({x},{y})" for x, y in path)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=6)
    ap.add_argument("--x-max", type=int, default=64)
    args = ap.parse_args()
    region = StaircaseRegion(args.x_max)
    for k in range(1, args.count + 1):
        for target in ((k * k, 0), (k * k, k)):
            length, path = polygon_geodesic(region, (0, 0), target)
            print(f"{str(target):>10} {length:14.10f}  {show(path)}")


if __name__ == "__main__":
    main()

"""Corner times and local straightness of flow rays, with a bent control ray.

The Lebesgue ray should be a local geodesic at every corner; the control ray
uses weights that break the child-sum rule below a chosen depth and visibly
bends there.
"""

import argparse

from cubical_thompson.flows import (
    LEBESGUE,
    lebesgue_corner_times,
    local_geodesic_check,
    perturbed_weight,
    ray_from_flow,
    trace_ray,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--steps", type=int, default=12)
    ap.add_argument("--eps", type=float, default=1e-3)
    ap.add_argument("--bend-depth", type=int, default=3)
    args = ap.parse_args()
    good = ray_from_flow(LEBESGUE, args.steps)
    bent = trace_ray(perturbed_weight(LEBESGUE, args.bend_depth), args.steps)
    expected = lebesgue_corner_times(args.steps)
    print(f"{'k':>3} {'time':>16} {'expected':>16} {'residual':>10} {'control':>10}")
    for k in range(1, args.steps):
        r_good = local_geodesic_check(good, k, args.eps)
        r_bent = local_geodesic_check(bent, k, args.eps)
        print(f"{k:3d} {good.corner_times[k]:16.12f} {expected[k]:16.12f} {r_good:10.1e} {r_bent:10.1e}")


if __name__ == "__main__":
    main()

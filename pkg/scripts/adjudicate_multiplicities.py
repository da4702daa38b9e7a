"""Decide between candidate short-root multiplicities by sampling Grassmannians.

For each preset the Monte Carlo estimate of E|Cos|^{2nu} phi_m / E|Cos|^{2nu}
is compared with the closed form computed under the geometric convention
2b = d(n - 2r) and the literal one 2b = 2d(n - 2r).  Only the true Haar
measure is sampled, so the wrong convention shows up as a large z-score.
"""

import argparse

from grasstrans.grassgeo import mc_grid

PRESETS = [("R", 5, 1), ("R", 6, 2), ("C", 5, 2), ("H", 5, 2)]


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--samples", type=int, default=200_000)
    p.add_argument("--seed", type=int, default=4)
    args = p.parse_args()
    print("field,n,r,convention,max_abs_z,passed")
    for field, n, r in PRESETS:
        for conv in ("geometric", "literal"):
            rep = mc_grid(field, n, r, [1], 4, args.samples, args.seed, convention=conv)
            print(f"{field},{n},{r},{conv},{rep['max_abs_z']:.2f},{rep['passed']}")


if __name__ == "__main__":
    main()

"""Monte Carlo check of cosine/sine symbols on the acceptance grid of Grassmannians."""

import argparse
import json

from grasstrans.grassgeo import mc_grid

GRID = [("R", 4, 2), ("R", 5, 2), ("C", 4, 2), ("C", 5, 2), ("H", 4, 2)]


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=100)
    p.add_argument("--deg", type=int, default=4)
    p.add_argument("--json", action="store_true", help="dump every cell as JSON")
    args = p.parse_args()
    reports = []
    for i, (field, n, r) in enumerate(GRID):
        rep = mc_grid(field, n, r, [1, 2], args.deg, args.samples, args.seed + i)
        reports.append(rep)
        status = "PASS" if rep["passed"] else "FAIL"
        print(f"G({n},{r},{field}): {len(rep['cells'])} cells, max |z| {rep['max_abs_z']:.2f}, "
              f"flagged {rep['flagged']}, persistent {rep['persistent']}  {status}")
    if args.json:
        print(json.dumps(reports, indent=1, default=str))


if __name__ == "__main__":
    main()

"""Minimum normalised Knapp-Stein eigenvalue against t for each field and rank."""

import argparse
from fractions import Fraction

from grasstrans.spectra import stein_positivity_scan


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--deg", type=int, default=12)
    p.add_argument("--steps", type=int, default=20, help="t runs over k/steps, 0 < k < steps")
    args = p.parse_args()
    print("field,r,t,min_ratio,argmin,witness,status")
    for field in "RCH":
        for r in (1, 2):
            for k in range(1, args.steps):
                rep = stein_positivity_scan(field, r, Fraction(k, args.steps), args.deg)
                status = {True: "PASS", False: "FAIL", None: "REPORT"}[rep.passed]
                arg = " ".join(map(str, rep.argmin))
                wit = " ".join(map(str, rep.witness)) if rep.witness else ""
                print(f"{field},{r},{rep.t},{rep.min_ratio:.6g},{arg},{wit},{status}")


if __name__ == "__main__":
    main()

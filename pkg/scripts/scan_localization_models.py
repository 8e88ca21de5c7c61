#!/usr/bin/env python3
"""Sweep the built-in lattice constructions and print one verdict per row.

    python3 scripts/scan_localization_models.py --sizes 8 16 32 --t-max 2
"""

import argparse

from opmeas.causality import builtin_model_family, schlieder_scan


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[8, 16, 32])
    ap.add_argument("--t-max", type=int, default=2)
    ap.add_argument("--tol", type=float, default=1e-8)
    args = ap.parse_args()

    findings = []
    print(f"{'model':<28} {'verdict':<24} {'cov':>5} {'strict':>7} {'weak':>5} {'comm':>5}")
    for label, lmap in builtin_model_family(sizes=tuple(args.sizes)):
        rep = schlieder_scan(lmap, max_t=args.t_max, tol=args.tol, label=label)
        flags = [
            "ok" if rep.condition_row(name).holds else "X"
            for name in ("covariance", "localizability", "weak localizability", "local commutativity")
        ]
        print(f"{label:<28} {rep.verdict:<24} {flags[0]:>5} {flags[1]:>7} {flags[2]:>5} {flags[3]:>5}")
        findings += list(rep.findings)

    if findings:
        print("\nconsistency violations:")
        for f in findings:
            print(" ", f)
        raise SystemExit(2)


if __name__ == "__main__":
    main()

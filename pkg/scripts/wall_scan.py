#!/usr/bin/env python3
"""Scan a single tetrahedron across a flat-degeneration wall.

Walks the family l(t) = (t, s, s, t, s, s) through the wall at
t* = arccosh(2 cosh s + 1), where the cosine-law value on the long pair
hits -1 exactly, and prints phi, the dihedral angles, the covolume and the
volume.  Shows the C^1 matching of the covolume and the vanishing of the
volume on the flat side.

Usage: python scripts/wall_scan.py [--s 0.5] [--points 13]
"""

import argparse
import math
import pathlib
import sys

import numpy as np

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from hypmet.hyperideal import classify_lengths, cov_hyper, hyper_angles_from_lengths, phi, vol_hyper


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--s", type=float, default=0.5, help="short-edge length of the family")
    parser.add_argument("--points", type=int, default=13)
    args = parser.parse_args()

    s = args.s
    t_star = math.acosh(2.0 * math.cosh(s) + 1.0)
    print(f"family (t, {s}, {s}, t, {s}, {s}); wall at t* = {t_star:.10f}")
    print(f"{'t - t*':>10} {'phi_pair0':>12} {'a_pair0':>10} {'class':>14} {'cov':>12} {'vol':>12}")
    for dt in np.linspace(-0.6, 0.6, args.points):
        t = t_star + dt
        if t <= 0:
            continue
        l = [t, s, s, t, s, s]
        ph = phi(l)
        a = hyper_angles_from_lengths(l)
        cls = classify_lengths(l)
        print(
            f"{dt:10.3f} {ph[0]:12.6f} {a[0]:10.6f} {cls.kind:>14} "
            f"{cov_hyper(l):12.8f} {vol_hyper(l):12.8f}"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""Separation collapse of rotated-lattice distance sets under sup norm.

The axis-aligned lattice has sup-norm distance set {1, ..., q}/1 with
unit gaps at every q; rotating by pi/6 destroys the arithmetic and the
minimum gap collapses polynomially.  Prints both trends side by side.
"""

import math

import numpy as np

from gaugedist import LpBall, PointSet, distance_set

QS = [16, 32, 64, 128, 256, 512]
ANGLE = math.pi / 6


def scan():
    body = LpBall(np.inf, (1.0, 1.0))
    print(f"{'q':>5} {'straight gap':>14} {'rotated gap':>14} {'rot count':>10}")
    for q in QS:
        straight = distance_set(PointSet.lattice(q), body)
        rot = distance_set(PointSet.rotated_lattice(q, ANGLE), body)
        print(f"{q:>5} {straight.min_gap:>14.6g} {rot.min_gap:>14.6g} "
              f"{rot.count:>10d}")


if __name__ == "__main__":
    scan()

#!/usr/bin/env python3
"""L2 spherical-average decay slopes for a panel of planar bodies.

Prints one row per body: fitted slope of the L2 average of the body
transform over dyadic R in [8, 512], expected near -1.5 regardless of
boundary smoothness.
"""

import numpy as np

from gaugedist import (
    Ellipsoid,
    decay_fit,
    disk,
    random_symmetric_hexagon,
    regular_polygon,
    spherical_average,
    square,
    window_aggregate,
)

R_GRID = np.geomspace(8.0, 512.0, 49)
SEED = 0


def sweep():
    rng = np.random.default_rng(SEED)
    panel = [
        ("disk", disk()),
        ("square", square()),
        ("ellipse 2:1", Ellipsoid((2.0, 1.0))),
        ("hexagon (regular)", regular_polygon(6)),
        ("hexagon (random)", random_symmetric_hexagon(rng)),
    ]
    print(f"{'body':<20} {'slope':>8} {'residual':>10} {'windows':>8}")
    for label, body in panel:
        vals = np.array([spherical_average(body, R, kind="body", p=2)
                         for R in R_GRID])
        Rf, vf = window_aggregate(R_GRID, vals, 2, agg="rms")
        fit = decay_fit(Rf, vf)
        print(f"{label:<20} {-fit.gamma:>8.3f} {fit.residual:>10.3g} "
              f"{fit.n_used:>8d}")


if __name__ == "__main__":
    sweep()

#!/usr/bin/env python3
"""A guided tour of the dynamics at lam = 2.

Walks through the main objects in order: the map on the symmetry axis and
its attracting fixed point, a plane orbit falling into a pole, an escaping
point built from a prescribed diamond itinerary, the symbol read-back, and
a periodic orbit shadowing the escaping point.

Run:  python demos/escaping_orbit_tour.py
"""

import numpy as np

from qrtan import (
    Itinerary,
    PeriodicCycleSpec,
    axis_fixed_point,
    classify_orbit,
    itinerary_of,
    iterate,
    periodic_near_escaping,
    periodic_point_from_cycle,
    point_from_itinerary,
    pole_location,
    tangent3,
)

LAM = 2.0


def main():
    print("== the axis is a one-dimensional tanh map ==")
    xi = axis_fixed_point(LAM)
    print(f"lam*tanh(x) = x has the positive solution x = {xi:.12f}")
    orbit = iterate([0.0, 0.0, 0.5], LAM, 12)
    print("orbit of (0,0,0.5):", ", ".join(f"{p[2]:.6f}" for p in orbit))

    print("\n== generic points off the plane fall to the axis fixed points ==")
    rec = classify_orbit(np.array([0.3, -0.4, 1.0]), LAM)
    print(f"(0.3,-0.4,1.0) -> {rec.fate.value} after {rec.iterations} steps, "
          f"witness {np.round(rec.witness, 6)}")

    print("\n== an escaping point from a prescribed diamond itinerary ==")
    itin = Itinerary(prefix=[], tail=lambda j: (0, j + 3))
    x = point_from_itinerary(itin, LAM, n_compose=26)
    print(f"the unique point visiting diamonds (0,3), (0,4), ... is {x}")
    first = [tuple(s) for s in itin.symbols(5)]
    print("prescribed pole indices:", first)
    print("pole coordinates:      ",
          [tuple(round(float(c), 3) for c in pole_location(s))
           for s in itin.symbols(5)])
    got, reason = itinerary_of(x, LAM, 8)
    print("read back from the orbit:", [tuple(s) for s in got], f"({reason})")

    print("\n== periodic points beside it ==")
    res = periodic_point_from_cycle(PeriodicCycleSpec(cycle=[(1, 1), (-1, -1), (0, 1)]),
                                    LAM)
    print(f"3-cycle through diamonds (1,1),(-1,-1),(0,1): point {res.point}, "
          f"forward residual {res.residual:.2e}")
    near = periodic_near_escaping(x, 1e-3, LAM)
    gap = float(np.linalg.norm(near.point - x))
    print(f"periodic point within 1e-3 of the escaping point: period "
          f"{near.period}, gap {gap:.2e}, residual {near.residual:.2e}")

    print("\n== the two omitted values are the asymptotic limits ==")
    up = tangent3([0.7, -1.1, 20.0], LAM)
    print(f"T(0.7,-1.1,20) = {np.round(up, 9)} -> approaches (0, 0, {LAM})")


if __name__ == "__main__":
    main()

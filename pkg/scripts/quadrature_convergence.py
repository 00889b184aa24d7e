#!/usr/bin/env python3
"""Node-count sweep for the moment identity residual ||f(T) - T^m a||.

Uniform-angle trapezoidal quadrature on a circle converges geometrically
at rate (distance of the spectrum from the contour center / radius)^nodes
until it hits the rounding floor.  Two geometries are swept: a snug
contour where 64 nodes already reach the floor, and an off-center one
whose slow rate keeps the decay visible out to several hundred nodes.
"""

import math

import numpy as np

from slicecalc import Circle, Contour, ImagUnit, moment_check, s_spectrum_exact
from slicecalc.verify import random_operator


def sweep(T, circle, label):
    report = s_spectrum_exact(T)
    plane = ImagUnit.axis(1, 2)
    clearance = min(circle.distance(u, v) for u, v in report.plane_points())
    ratio = max(
        math.hypot(u - circle.center, v) for u, v in report.plane_points()
    ) / circle.radius
    print(f"\n{label}: radius {circle.radius:.3f}, clearance {clearance:.3f}, "
          f"decay ratio {ratio:.3f}")
    print("  nodes   residual")
    a = T.algebra.scalar(1.0)
    for nodes in (32, 64, 128, 256, 512, 1024):
        resid = moment_check(T, 3, a, Contour(plane, (circle,), nodes), report=report)
        print(f"  {nodes:5d}   {resid:.3e}")


def main():
    rng = np.random.default_rng(7)
    T = random_operator(rng, 2, 2)
    report = s_spectrum_exact(T)
    reach = max(math.hypot(u, v) for u, v in report.plane_points())
    sweep(T, Circle(0.0, reach + 0.3, 1), "snug contour")
    far = max(math.hypot(u + 3.0, v) for u, v in report.plane_points())
    sweep(T, Circle(-3.0, far + 0.21, 1), "off-center contour")


if __name__ == "__main__":
    main()

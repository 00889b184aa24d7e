#!/usr/bin/env python3
"""End-to-end walkthrough on the Pauli tuple T = sigma_3 e1 + sigma_1 e2.

Computes the S-spectrum both ways, evaluates exp(T) and T^2 by contour
quadrature against direct composition, and runs the chart route for a
resolvent-type function.
"""

import numpy as np

from slicecalc import (
    ExtendedFunction,
    ImagUnit,
    Paravector,
    build_contour,
    exp_series,
    f_of_T,
    f_of_T_via_chart,
    hausdorff_distance,
    monomial,
    rational_pole,
    s_resolvent,
    s_spectrum_exact,
    s_spectrum_scan,
)
from slicecalc.verify import pauli_operator


def main():
    T = pauli_operator()
    component_norm, rep_norm = T.norms()
    print(f"operator: n={T.n}, d={T.d}, component norm {component_norm:.6f}, rep norm {rep_norm:.6f}")

    exact = s_spectrum_exact(T)
    print("\nS-spectrum (eigenvalue route):")
    for c in exact.components:
        kind = "real point" if c.r == 0 else "sphere"
        print(f"  (u={c.u:+.3e}, r={c.r:.3e})  {kind}, multiplicity {c.multiplicity}")

    scan = s_spectrum_scan(T, step=0.05)
    print("scan cross-check (step 0.05):", [(round(c.u, 3), round(c.r, 3)) for c in scan.components])
    print("exact/scan hausdorff:", f"{hausdorff_distance(exact.points(), scan.points()):.2e}")

    plane = ImagUnit.axis(1, 2)
    f2 = monomial(T.algebra, 2)
    contour = build_contour(exact, f2, plane, nodes=512)
    sq = f_of_T(f2, T, contour, report=exact)
    direct = T.compose(T)
    print("\nx^2 by quadrature vs composition: residual", f"{sq.value.diff_rep_norm(direct):.2e}")
    print("T^2 blade components (scalar and e12):")
    print(np.round(direct.blades[0], 12))
    print(np.round(direct.blades[3], 12))

    fe = exp_series(T.algebra)
    ce = build_contour(exact, fe, plane, nodes=512)
    val = f_of_T(fe, T, ce, report=exact)
    print("\nexp(T) computed with clearance", f"{val.clearance:.3f}", "and", val.nodes, "nodes")
    print("exp(T) scalar blade:")
    print(np.round(val.value.blades[0], 9))

    c = 5.0
    ef = ExtendedFunction.from_series(rational_pole(T.algebra, c))
    via = f_of_T_via_chart(ef, T, k=3.0)
    oracle = -s_resolvent(Paravector.real_point(c, 2), T)
    print("\nchart route for (x - 5)^(-1): residual vs -S^(-1)(5, T)",
          f"{via.value.diff_rep_norm(oracle):.2e}")


if __name__ == "__main__":
    main()

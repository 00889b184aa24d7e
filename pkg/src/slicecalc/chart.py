"""Functional calculus through the resolvent chart p = (s - k)^(-1).

For a real k in the resolvent set, the companion operator
A = (T - k I)^(-1) is bounded even when T is not, and
f(T) := phi(A) with phi(p) = f(p^(-1) + k) transfers the calculus to A.
This module validates the whole route on bounded surrogates, where both the
chart value and the direct integral formula are computable: the Moebius map
carries the spectrum of T onto the spectrum of A one to one, the resolvents
satisfy S^(-1)(s,T) = p I - S^(-1)(p,A) p^2, and the direct formula
f(infinity) I + (1/2 pi) int S^(-1)(s,T) ds_I f(s), taken over negatively
oriented circles around the real singularities of f (the boundary of a
neighborhood of the extended spectrum including infinity), reproduces
phi(A).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .clifford import ImagUnit, Multivector, Paravector
from .errors import ContourError, SpectrumHitError
from .operators import CliffordMatrix
from .calculus import (
    CalculusResult,
    Circle,
    Contour,
    DEFAULT_NODES,
    _quadrature,
    build_contour,
    f_of_T,
)
from .series import SliceSeriesFunction
from .spectrum import (
    SpectrumComponent,
    SpectrumReport,
    hausdorff_distance,
    s_resolvent,
    s_spectrum_exact,
)

TRANSFER_ORDER = 64


@dataclass(frozen=True)
class ResolventChart:
    """The Moebius map p = (s - k)^(-1) with real k off the spectrum."""

    k: float

    def map_point(self, s: Paravector) -> Paravector:
        if abs(s - self.k) == 0.0:
            raise ValueError("chart point k maps to infinity")
        return (s - self.k).inverse()

    def map_plane_value(self, z: complex) -> complex:
        return 1.0 / (z - self.k)

    def map_component(self, u: float, r: float) -> tuple[float, float]:
        w = self.map_plane_value(complex(u, r))
        return (w.real, abs(w.imag))


def moebius_spectrum(
    chart: ResolventChart,
    report: SpectrumReport,
    include_infinity: bool = False,
) -> SpectrumReport:
    """Image of a spectrum report under the chart.

    include_infinity appends (0, 0), the image of the point at infinity,
    when modeling a genuinely unbounded operator; bounded surrogates leave
    it off.
    """
    comps = []
    for c in report.components:
        u, r = chart.map_component(c.u, c.r)
        comps.append(SpectrumComponent(u=u, r=r, multiplicity=c.multiplicity))
    if include_infinity:
        comps.append(SpectrumComponent(u=0.0, r=0.0, multiplicity=1))
    comps.sort(key=lambda c: (c.u, c.r))
    return SpectrumReport(
        components=comps,
        method=report.method,
        cluster_tol=report.cluster_tol,
        extras={"chart_k": chart.k},
    )


def companion_operator(T: CliffordMatrix, k: float) -> CliffordMatrix:
    """A = (T - k I)^(-1), with the -S^(-1)(k, T) identity asserted.

    For real k the pencil at (k, 0) factors as (T - k I)^2, so the closed
    form of the S-resolvent collapses to -(T - k I)^(-1); both routes are
    computed and must agree, which guards the sign conventions.
    """
    alg = T.algebra
    shifted = T.add_scalar(alg.scalar(-float(k)))
    try:
        A = shifted.invert()
    except Exception as exc:
        raise SpectrumHitError(k, 0.0, f"k={k} is not in the real resolvent set") from exc
    R = s_resolvent(Paravector.real_point(float(k), T.n), T)
    mismatch = A.diff_rep_norm(-R)
    scale = max(A.rep_norm(), 1.0)
    if mismatch > 1e-8 * scale:
        raise AssertionError(
            f"companion operator disagrees with -S^(-1)(k,T): residual {mismatch:.3e}"
        )
    return A


@dataclass(frozen=True)
class ExtendedFunction:
    """A series function together with its finite value at infinity.

    Functions admitted to the chart route must tend to a finite limit at
    infinity; for the series forms used here that means no positive powers,
    so f is a constant plus a Laurent tail and f(infinity) is the constant
    term.  A user-supplied value must match the computed one to 1e-10.
    """

    f: SliceSeriesFunction
    f_inf: Multivector

    def __post_init__(self):
        limit = infinity_value(self.f)
        if (self.f_inf - limit).norm() > 1e-10 * max(limit.norm(), 1.0):
            raise ValueError(
                "supplied value at infinity disagrees with the series limit"
            )

    @classmethod
    def from_series(cls, f: SliceSeriesFunction) -> "ExtendedFunction":
        return cls(f=f, f_inf=infinity_value(f))


def infinity_value(f: SliceSeriesFunction) -> Multivector:
    """Limit of f at infinity; requires no positive powers in the series."""
    for m, a in enumerate(f.power_coeffs):
        if m >= 1 and a.norm() > 0.0:
            raise ValueError(
                "series has positive powers, hence no finite value at infinity"
            )
    if f.has_laurent and f.outer_radius != math.inf:
        raise ValueError("series must converge out to infinity")
    if f.power_coeffs:
        return f.power_coeffs[0]
    return f.algebra.scalar(0.0)


def transfer_series(
    f: SliceSeriesFunction,
    k: float,
    order: int = TRANSFER_ORDER,
    branch: str = "power",
) -> SliceSeriesFunction:
    """phi(p) = f(p^(-1) + k) as a series around p = 0.

    Each pole term (x - c)^(-m) becomes p^m (1 + w p)^(-m) with w = k - c,
    which is a rational function of p with its only pole at p = 1/(c - k).
    The 'power' branch expands it binomially on |p| < 1/|w| (spectrum of
    the companion inside the pole image, k beyond the pole as seen from the
    spectrum); the 'laurent' branch expands on |p| > 1/|w| (k in a spectral
    gap closer to the spectrum than the pole).  Coefficients stay real
    whenever f is intrinsic.
    """
    alg = f.algebra
    limit = infinity_value(f)  # also rejects positive powers
    w = float(k) - f.center
    if branch not in ("power", "laurent"):
        raise ValueError("branch must be 'power' or 'laurent'")
    if branch == "power" or w == 0.0:
        coeffs = [alg.zero() for _ in range(order + 1)]
        coeffs[0] = coeffs[0] + limit
        for m, b in enumerate(f.laurent_coeffs, start=1):
            if b.norm() == 0.0:
                continue
            binom = 1.0
            for j in range(order + 1 - m):
                coeffs[m + j] = coeffs[m + j] + binom * b
                binom *= -(m + j) / (j + 1.0) * w
        outer = math.inf if not f.has_laurent or w == 0.0 else 1.0 / abs(w)
        return SliceSeriesFunction(
            center=0.0, power_coeffs=tuple(coeffs), outer_radius=outer
        )
    # |p| > 1/|w|: p^m (1 + w p)^(-m) = w^(-m) (1 + (1/w) p^(-1))^(-m)
    const = alg.zero() + limit
    laurent = [alg.zero() for _ in range(order)]
    for m, b in enumerate(f.laurent_coeffs, start=1):
        if b.norm() == 0.0:
            continue
        binom = w ** (-m)
        const = const + binom * b
        for j in range(1, order + 1):
            binom *= -(m + j - 1) / (j * w)
            laurent[j - 1] = laurent[j - 1] + binom * b
    return SliceSeriesFunction(
        center=0.0,
        power_coeffs=(const,),
        laurent_coeffs=tuple(laurent),
        inner_radius=1.0 / abs(w),
        outer_radius=math.inf,
    )


def f_of_T_via_chart(
    ef: ExtendedFunction,
    T: CliffordMatrix,
    k: float,
    plane: ImagUnit | None = None,
    margin: float | None = None,
    nodes: int = DEFAULT_NODES,
    phi: SliceSeriesFunction | None = None,
    transfer_order: int = TRANSFER_ORDER,
) -> CalculusResult:
    """Evaluate f(T) as phi(A) with the bounded calculus on the companion.

    phi defaults to the symbolic transfer of f through the chart, on the
    expansion branch that holds on the companion spectrum; callers may
    supply their own series when f is not in the rational family.
    """
    A = companion_operator(T, k)
    report = s_spectrum_exact(A)
    if phi is None:
        f = ef.f
        w = float(k) - f.center
        if not f.has_laurent or w == 0.0:
            branch = "power"
        else:
            pole_image = 1.0 / abs(w)
            mags = [math.hypot(c.u, c.r) for c in report.components]
            if max(mags) < pole_image * (1.0 - 1e-9):
                branch = "power"
            elif min(mags) > pole_image * (1.0 + 1e-9):
                branch = "laurent"
            else:
                raise ContourError(
                    "chart image of the pole of f is not separable from the "
                    "companion spectrum"
                )
        phi = transfer_series(f, k, order=transfer_order, branch=branch)
    contour = build_contour(report, phi, plane or ImagUnit.axis(1, T.n), margin=margin, nodes=nodes)
    return f_of_T(phi, A, contour, report=report)


def f_of_T_direct(
    ef: ExtendedFunction,
    T: CliffordMatrix,
    plane: ImagUnit | None = None,
    nodes: int = DEFAULT_NODES,
    report: SpectrumReport | None = None,
) -> CalculusResult:
    """Direct formula f(infinity) I + (1/2 pi) int S^(-1)(s,T) ds_I f(s).

    The integration region is a neighborhood of the extended spectrum,
    spectrum plus infinity, minus small discs around the real singularities
    of f; its boundary consists of negatively oriented circles around those
    singularities (the outward piece at infinity contributes nothing).  A
    constant f therefore integrates to zero and returns f(infinity) I
    directly, and on bounded surrogates the value agrees with the chart
    route.
    """
    plane = plane or ImagUnit.axis(1, T.n)
    report = report or s_spectrum_exact(T)
    pts = report.plane_points()
    f = ef.f
    alg = T.algebra
    base = CliffordMatrix.identity(alg, T.d).right_mul(ef.f_inf)
    if not f.has_laurent:
        return CalculusResult(
            value=base,
            clearance=math.inf,
            nodes=0,
            plane=plane,
        )
    dist = float(np.min(np.hypot(pts[:, 0] - f.center, pts[:, 1])))
    if dist <= 0.0:
        raise ContourError("a singularity of f lies on the spectrum")
    radius = 0.5 * dist
    contour = Contour(
        plane=plane, cycles=(Circle(f.center, radius, -1),), nodes_per_cycle=nodes
    )
    value = base + _quadrature(f, T, contour)
    return CalculusResult(
        value=value,
        clearance=contour.clearance_to(pts),
        nodes=contour.total_nodes,
        plane=plane,
    )


def transform_residual(s: Paravector, T: CliffordMatrix, k: float) -> float:
    """Residual of S^(-1)(s,T) = p I - S^(-1)(p,A) p^2 at p = (s - k)^(-1)."""
    alg = T.algebra
    A = companion_operator(T, k)
    p = ResolventChart(k).map_point(s)
    p_mv = p.to_multivector(alg)
    lhs = s_resolvent(s, T)
    rhs = CliffordMatrix.identity(alg, T.d).right_mul(p_mv) - s_resolvent(p, A).right_mul(
        p_mv * p_mv
    )
    return lhs.diff_rep_norm(rhs)


def spectrum_correspondence_gap(T: CliffordMatrix, k: float) -> float:
    """Hausdorff gap between the chart image of sigma_S(T) and sigma_S(A)."""
    chart = ResolventChart(k)
    mapped = moebius_spectrum(chart, s_spectrum_exact(T))
    direct = s_spectrum_exact(companion_operator(T, k))
    return hausdorff_distance(mapped.points(), direct.points())


def transfer_sanity_gap(ef: ExtendedFunction, k: float, s: Paravector) -> float:
    """|phi(Phi(s)) - f(s)| for one admissible sample point."""
    phi = transfer_series(ef.f, k)
    p = ResolventChart(k).map_point(s)
    return (phi.eval(p) - ef.f.eval(s)).norm()

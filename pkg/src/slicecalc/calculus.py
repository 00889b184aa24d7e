"""Contour construction and quadrature evaluation of f(T).

f(T) is the average over a cycle in a slice plane L_I of
S^(-1)(s, T) (R e^(I theta)) f(s), the discretized form of the slice
calculus integral (1/2 pi) int S^(-1)(s,T) ds_I f(s) with
ds_I = -ds I.  All cycles are circles centered on the real axis, so the
swept region is axially symmetric and automatically contains the
circularization of the spectrum it encloses.  Factor order is fixed left to
right and nodes are summed in index order for bit reproducibility.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .clifford import ImagUnit, Multivector
from .errors import ContourError, ConvergenceError
from .operators import CliffordMatrix
from .series import SliceSeriesFunction, cauchy_product, monomial
from .spectrum import SpectrumReport, s_spectrum_exact

DEFAULT_NODES = 512
CLEARANCE_RTOL = 1e-6


@dataclass(frozen=True)
class Circle:
    """Oriented integration circle centered on the real axis."""

    center: float
    radius: float
    orientation: int = 1

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("circle radius must be positive")
        if self.orientation not in (-1, 1):
            raise ValueError("orientation must be +1 or -1")

    def winding(self, u: float, v: float) -> int:
        inside = math.hypot(u - self.center, v) < self.radius
        return self.orientation if inside else 0

    def distance(self, u: float, v: float) -> float:
        return abs(math.hypot(u - self.center, v) - self.radius)


@dataclass(frozen=True)
class Contour:
    """Cycles in one slice plane plus the per-cycle node count."""

    plane: ImagUnit
    cycles: tuple
    nodes_per_cycle: int = DEFAULT_NODES

    def __post_init__(self):
        if self.nodes_per_cycle < 4:
            raise ValueError("need at least 4 quadrature nodes")
        object.__setattr__(self, "cycles", tuple(self.cycles))

    def winding(self, u: float, v: float) -> int:
        return sum(c.winding(u, v) for c in self.cycles)

    def clearance_to(self, points: np.ndarray) -> float:
        pts = np.atleast_2d(points)
        return min(
            c.distance(p[0], p[1]) for c in self.cycles for p in pts
        )

    @property
    def total_nodes(self) -> int:
        return self.nodes_per_cycle * len(self.cycles)


@dataclass(frozen=True)
class CalculusResult:
    """Value of f(T) together with the geometry used to obtain it."""

    value: CliffordMatrix
    clearance: float
    nodes: int
    plane: ImagUnit

    def to_json_dict(self) -> dict:
        from .operators import operator_to_dict

        return {
            "value": operator_to_dict(self.value),
            "clearance": self.clearance,
            "nodes": self.nodes,
            "plane": list(self.plane.dirs),
        }


def build_contour(
    report: SpectrumReport,
    f: SliceSeriesFunction,
    plane: ImagUnit,
    margin: float | None = None,
    nodes: int = DEFAULT_NODES,
) -> Contour:
    """Admissible cycle around the spectrum inside f's convergence annulus.

    Power series get one positive circle about the series center; a series
    with a Laurent part gets an annulus boundary (outer positive, inner
    negative) that keeps the center, where f is singular, outside the
    enclosed region.  Fails when the spectrum cannot be separated from the
    singularities of f within its annulus.
    """
    rep_norm = report.rep_norm if report.rep_norm is not None else 1.0
    if margin is None:
        margin = 0.1 * (1.0 + rep_norm)
    floor = CLEARANCE_RTOL * max(rep_norm, 1e-300)
    if margin < floor:
        raise ContourError(f"margin {margin:.3g} is below the clearance floor {floor:.3g}")
    c = f.center
    dists = [math.hypot(comp.u - c, comp.r) for comp in report.components]
    if not dists:
        raise ContourError("empty spectrum report")
    if not f.has_laurent:
        radius = max(dists) + margin
        if radius >= f.outer_radius:
            radius = 0.5 * (max(dists) + f.outer_radius)
        if radius >= f.outer_radius or radius <= max(dists):
            raise ContourError(
                "spectrum cannot be enclosed within the convergence disc of f"
            )
        return Contour(plane=plane, cycles=(Circle(c, radius, 1),), nodes_per_cycle=nodes)
    inner_gap, outer_gap = min(dists), max(dists)
    r_out = outer_gap + margin
    if r_out >= f.outer_radius:
        r_out = 0.5 * (outer_gap + f.outer_radius)
    r_in = inner_gap - margin
    if r_in <= f.inner_radius:
        r_in = 0.5 * (inner_gap + f.inner_radius)
    if not (f.inner_radius < r_in < inner_gap and outer_gap < r_out < f.outer_radius):
        raise ContourError(
            "spectrum is not separable from the singularities of f inside its annulus"
        )
    cycles = (Circle(c, r_out, 1), Circle(c, r_in, -1))
    return Contour(plane=plane, cycles=cycles, nodes_per_cycle=nodes)


def _quadrature(
    f: SliceSeriesFunction,
    T: CliffordMatrix,
    contour: Contour,
) -> CliffordMatrix:
    """Accumulate the contour sum in representation space.

    Per node s = c + R e^(I theta) the term is
    -pencil(u, r)^(-1) rep(T - conj(s) I) followed by right multiplication
    with (orientation R e^(I theta)) f(s) / nodes.  Everything stays inside
    the image of the blade representation, so the result reads back exactly.
    """
    alg = T.algebra
    d = T.d
    D = alg.dim * d
    plane = contour.plane
    I_mv = plane.to_multivector(alg)
    rep_T = T.rep()
    rep_T2 = rep_T @ rep_T
    eye = np.eye(D)
    eye_d = np.eye(d)
    acc = np.zeros((D, D))
    for cycle in contour.cycles:
        N = contour.nodes_per_cycle
        scale = cycle.orientation / N
        for k in range(N):
            theta = 2.0 * math.pi * k / N
            cu = cycle.radius * math.cos(theta)
            cv = cycle.radius * math.sin(theta)
            u = cycle.center + cu
            pencil_rep = rep_T2 - (2.0 * u) * rep_T + (u * u + cv * cv) * eye
            s_conj = Multivector(alg, _plane_coeffs(alg, plane, u, -cv))
            rep_B = rep_T - _rep_scalar(alg, d, s_conj)
            resolvent = -np.linalg.solve(pencil_rep, rep_B)
            ring = Multivector(alg, _plane_coeffs(alg, plane, cu, cv))
            fval = f.eval_plane(u, cv, plane)
            weight = (ring * fval) * scale
            acc += resolvent @ np.kron(alg.left_matrix(weight.coeffs), eye_d)
    return CliffordMatrix.from_rep(alg, d, acc)


def _plane_coeffs(alg, plane: ImagUnit, re: float, im: float) -> np.ndarray:
    c = np.zeros(alg.dim)
    c[0] = re
    for j in range(plane.n):
        c[1 << j] = im * plane.dirs[j]
    return c


def _rep_scalar(alg, d: int, a: Multivector) -> np.ndarray:
    return np.kron(alg.left_matrix(a.coeffs), np.eye(d))


def f_of_T(
    f: SliceSeriesFunction,
    T: CliffordMatrix,
    contour: Contour,
    report: SpectrumReport | None = None,
) -> CalculusResult:
    """Evaluate f(T) over an admissible contour.

    Validates that the contour winds once around every spectrum point in
    the plane, zero times around the singularities of f, and keeps a
    clearance of at least 1e-6 times the representation norm; then runs the
    node sum.
    """
    report = report or s_spectrum_exact(T)
    pts = report.plane_points()
    rep_norm = report.rep_norm if report.rep_norm is not None else T.rep_norm()
    for u, v in pts:
        w = contour.winding(u, v)
        if w != 1:
            raise ContourError(
                f"contour winds {w} times around the spectrum point (u={u:.6g}, v={v:.6g})"
            )
    if f.has_laurent and contour.winding(f.center, 0.0) != 0:
        raise ContourError("contour must not enclose the singular center of f")
    for cycle in contour.cycles:
        lo = math.hypot(cycle.center - f.center, 0.0)
        reach_min = abs(lo - cycle.radius)
        reach_max = lo + cycle.radius
        if reach_max >= f.outer_radius or reach_min <= f.inner_radius:
            raise ConvergenceError("a cycle leaves the convergence annulus of f")
    clearance = contour.clearance_to(pts)
    if clearance < CLEARANCE_RTOL * max(rep_norm, 1e-300):
        raise ContourError(
            f"contour clearance {clearance:.3g} is below the floor "
            f"{CLEARANCE_RTOL * rep_norm:.3g}"
        )
    value = _quadrature(f, T, contour)
    return CalculusResult(
        value=value, clearance=clearance, nodes=contour.total_nodes, plane=contour.plane
    )


def moment_check(
    T: CliffordMatrix,
    m: int,
    a: Multivector,
    contour: Contour,
    report: SpectrumReport | None = None,
) -> float:
    """Residual of the moment identity f(T) = T^m a for f(x) = x^m a."""
    if m < 0:
        raise ValueError("moment degree must be nonnegative")
    f = monomial(T.algebra, m, a)
    got = f_of_T(f, T, contour, report=report).value
    want = T.power(m).right_mul(a)
    return got.diff_rep_norm(want)


def plane_independence_gap(
    f: SliceSeriesFunction,
    T: CliffordMatrix,
    plane_a: ImagUnit,
    plane_b: ImagUnit,
    margin: float | None = None,
    nodes: int = DEFAULT_NODES,
) -> float:
    """Representation-norm gap between f(T) computed in two slice planes."""
    report = s_spectrum_exact(T)
    ca = build_contour(report, f, plane_a, margin=margin, nodes=nodes)
    cb = build_contour(report, f, plane_b, margin=margin, nodes=nodes)
    va = f_of_T(f, T, ca, report=report).value
    vb = f_of_T(f, T, cb, report=report).value
    return va.diff_rep_norm(vb)


def product_residual(
    f: SliceSeriesFunction,
    g: SliceSeriesFunction,
    T: CliffordMatrix,
    plane: ImagUnit | None = None,
    margin: float | None = None,
    nodes: int = DEFAULT_NODES,
) -> float:
    """Residual of (f g)(T) = f(T) g(T) for intrinsic power series.

    The identity is restricted to real scalar coefficients, exactly the
    class for which the pointwise product is again a one-sided series, so
    non-intrinsic inputs are rejected.
    """
    if not (f.intrinsic and g.intrinsic):
        raise ValueError("product rule requires intrinsic series on both sides")
    plane = plane or ImagUnit.axis(1, T.n)
    fg = cauchy_product(f, g)
    report = s_spectrum_exact(T)
    contour = build_contour(report, fg, plane, margin=margin, nodes=nodes)
    both = f_of_T(fg, T, contour, report=report).value
    left = f_of_T(f, T, contour, report=report).value
    right = f_of_T(g, T, contour, report=report).value
    return both.diff_rep_norm(left.compose(right))

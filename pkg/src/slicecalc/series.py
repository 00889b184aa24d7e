"""Slice-regular power/Laurent series and the noncommutative Cauchy kernel.

A series sum_m (x - c)^m a_m + sum_m (x - c)^(-m) b_m with real center c and
right Clifford coefficients restricts, on every slice plane L_I, to an
ordinary complex series.  Powers of a paravector never leave the plane of
its argument, which gives two equivalent evaluation routes: literal Clifford
power towers and a complex fast path used by the quadrature code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .clifford import (
    CliffordAlgebra,
    ImagUnit,
    Multivector,
    Paravector,
    algebra,
)
from .errors import ConvergenceError, SingularElementError

TAIL_RTOL = 1e-15
MAX_TERMS = 10_000


@dataclass(frozen=True)
class SliceSeriesFunction:
    """Power/Laurent series with real center and right Clifford coefficients.

    power_coeffs[m] multiplies (x - center)^m; laurent_coeffs[m - 1]
    multiplies (x - center)^(-m).  Evaluation is defined on the annulus
    inner_radius < |x - center| < outer_radius (the inner bound is waived
    when there is no Laurent part).  The intrinsic flag marks real scalar
    coefficients: the class of functions for which the product rule of the
    functional calculus holds.
    """

    center: float
    power_coeffs: tuple
    laurent_coeffs: tuple = ()
    outer_radius: float = math.inf
    inner_radius: float = 0.0
    intrinsic: bool = field(init=False)

    def __post_init__(self):
        if not self.power_coeffs and not self.laurent_coeffs:
            raise ValueError("series needs at least one coefficient")
        if len(self.power_coeffs) + len(self.laurent_coeffs) > MAX_TERMS:
            raise ValueError(f"series exceeds the {MAX_TERMS}-term cap")
        algs = {c.algebra for c in self.power_coeffs} | {c.algebra for c in self.laurent_coeffs}
        if len(algs) != 1:
            raise ValueError("all coefficients must share one algebra")
        if self.inner_radius < 0 or self.outer_radius <= self.inner_radius:
            raise ValueError("need 0 <= inner_radius < outer_radius")
        object.__setattr__(self, "power_coeffs", tuple(self.power_coeffs))
        object.__setattr__(self, "laurent_coeffs", tuple(self.laurent_coeffs))
        intrinsic = all(c.is_real_scalar() for c in self.power_coeffs) and all(
            c.is_real_scalar() for c in self.laurent_coeffs
        )
        object.__setattr__(self, "intrinsic", intrinsic)

    @property
    def algebra(self) -> CliffordAlgebra:
        return (self.power_coeffs or self.laurent_coeffs)[0].algebra

    @property
    def has_laurent(self) -> bool:
        return bool(self.laurent_coeffs)

    def _check_domain(self, dist: float):
        if dist >= self.outer_radius:
            raise ConvergenceError(
                f"point at distance {dist:.6g} from the center is outside the "
                f"convergence radius {self.outer_radius:.6g}"
            )
        if (self.has_laurent or self.inner_radius > 0) and dist <= self.inner_radius:
            raise ConvergenceError(
                f"point at distance {dist:.6g} from the center is inside the "
                f"inner radius {self.inner_radius:.6g}"
            )

    def eval(self, x) -> Multivector:
        """Evaluate by Clifford power towers, coefficients on the right."""
        alg = self.algebra
        if isinstance(x, (int, float)):
            x = Paravector.real_point(float(x), alg.n)
        xm = x.to_multivector(alg) - self.center
        self._check_domain(abs(x - self.center))
        acc = alg.zero()
        power = alg.scalar(1.0)
        scale, started, streak = 0.0, False, 0
        for a in self.power_coeffs:
            term = power * a
            acc = acc + term
            tn = term.norm()
            scale = max(scale, tn)
            if tn > TAIL_RTOL * scale or not started:
                started = started or tn > 0.0
                streak = 0
            else:
                streak += 1
                if streak >= 2:
                    break
            power = power * xm
        if self.laurent_coeffs:
            xinv = xm.inverse()
            power = alg.scalar(1.0)
            scale, started, streak = scale, False, 0
            for b in self.laurent_coeffs:
                power = power * xinv
                term = power * b
                acc = acc + term
                tn = term.norm()
                scale = max(scale, tn)
                if tn > TAIL_RTOL * scale or not started:
                    started = started or tn > 0.0
                    streak = 0
                else:
                    streak += 1
                    if streak >= 2:
                        break
        return acc

    def eval_plane(self, u: float, v: float, plane: ImagUnit) -> Multivector:
        """Evaluate at u + v I through complex powers in the plane L_I.

        Equal to eval() on the embedded point but far cheaper: the plane is
        a commutative subalgebra isomorphic to C, so the powers are complex
        and only one Clifford product (by I) is needed at the end.
        """
        alg = self.algebra
        z = complex(u - self.center, v)
        self._check_domain(abs(z))
        acc_re = np.zeros(alg.dim)
        acc_im = np.zeros(alg.dim)
        w = 1.0 + 0.0j
        scale, started, streak = 0.0, False, 0
        for a in self.power_coeffs:
            tn = abs(w) * a.norm()
            acc_re += w.real * a.coeffs
            acc_im += w.imag * a.coeffs
            scale = max(scale, tn)
            if tn > TAIL_RTOL * scale or not started:
                started = started or tn > 0.0
                streak = 0
            else:
                streak += 1
                if streak >= 2:
                    break
            w *= z
        if self.laurent_coeffs:
            zinv = 1.0 / z
            w = 1.0 + 0.0j
            started, streak = False, 0
            for b in self.laurent_coeffs:
                w *= zinv
                tn = abs(w) * b.norm()
                acc_re += w.real * b.coeffs
                acc_im += w.imag * b.coeffs
                scale = max(scale, tn)
                if tn > TAIL_RTOL * scale or not started:
                    started = started or tn > 0.0
                    streak = 0
                else:
                    streak += 1
                    if streak >= 2:
                        break
        i_left = alg.left_matrix(plane.to_multivector(alg).coeffs)
        return Multivector(alg, acc_re + i_left @ acc_im)

    def derivative(self) -> "SliceSeriesFunction":
        """Term-wise derivative; matches d/du of the restriction to R."""
        power = tuple((m + 1) * a for m, a in enumerate(self.power_coeffs[1:]))
        if not power and not self.laurent_coeffs:
            power = (self.algebra.scalar(0.0),)
        laurent = ()
        if self.laurent_coeffs:
            shifted = [self.algebra.scalar(0.0)]
            for m, b in enumerate(self.laurent_coeffs, start=1):
                shifted.append((-m) * b)
            laurent = tuple(shifted)
        return SliceSeriesFunction(
            center=self.center,
            power_coeffs=power,
            laurent_coeffs=laurent,
            outer_radius=self.outer_radius,
            inner_radius=self.inner_radius,
        )

    def __call__(self, x) -> Multivector:
        return self.eval(x)


def eval_series(f: SliceSeriesFunction, x) -> Multivector:
    return f.eval(x)


def s_derivative(f: SliceSeriesFunction) -> SliceSeriesFunction:
    return f.derivative()


def cauchy_eval(f: SliceSeriesFunction, x: Paravector, radius: float, nodes: int = 256) -> Multivector:
    """Reconstruct f(x) from its Cauchy integral over a circle.

    The circle has the given radius around the series center, taken in the
    slice plane of x (e_1 for real x), and is discretized with the uniform
    trapezoidal rule, which converges spectrally for analytic periodic
    integrands.  Factor order per node is (zeta - x)^(-1) (R e^(I theta))
    f(zeta), left to right.
    """
    if f.has_laurent:
        raise ValueError("cauchy_eval handles power series only")
    if radius >= f.outer_radius:
        raise ConvergenceError("circle does not lie inside the convergence disc")
    plane = x.plane()
    u0, v0 = x.x0, x.vec_norm()
    if math.hypot(u0 - f.center, v0) >= radius:
        raise ValueError("point lies on or outside the integration circle")
    alg = f.algebra
    acc = alg.zero()
    c = f.center
    for k in range(nodes):
        theta = 2.0 * math.pi * k / nodes
        zu = c + radius * math.cos(theta)
        zv = radius * math.sin(theta)
        zeta = Paravector(zu, zv * plane.dirs)
        diff = zeta - Paravector(u0, v0 * plane.dirs)
        kernel = diff.inverse().to_multivector(alg)
        ring = Paravector(radius * math.cos(theta), radius * math.sin(theta) * plane.dirs)
        fval = f.eval_plane(zu, zv, plane)
        acc = acc + kernel * ring.to_multivector(alg) * fval
    return acc / nodes


# -- noncommutative Cauchy kernel ------------------------------------------


def cauchy_kernel(s: Paravector, x: Paravector) -> Multivector:
    """Closed form -(x^2 - 2 Re[s] x + |s|^2)^(-1) (x - conj(s)).

    Sums the series sum_m x^m s^(-1-m) for |x| < |s| and extends it to every
    x whose quadratic x^2 - 2 Re[s] x + |s|^2 is invertible; the quadratic
    is singular exactly on the sphere {Re[x] = Re[s], |vec(x)| = |vec(s)|}.
    """
    if s.n != x.n:
        raise ValueError("paravector dimension mismatch")
    alg = algebra(s.n)
    xm = x.to_multivector(alg)
    quad = xm * xm - (2.0 * s.x0) * xm + abs(s) ** 2
    try:
        qinv = quad.inverse()
    except SingularElementError as exc:
        raise SingularElementError(
            "quadratic is singular: x lies on the spectral sphere of s"
        ) from exc
    return -(qinv * (xm - s.conj().to_multivector(alg)))


def kernel_series_partial(s: Paravector, x: Paravector, terms: int) -> Multivector:
    """Partial sum sum_{m < terms} x^m s^(-1-m); converges for |x| < |s|."""
    alg = algebra(s.n)
    sinv = s.inverse().to_multivector(alg)
    xm = x.to_multivector(alg)
    acc = alg.zero()
    xpow = alg.scalar(1.0)
    spow = sinv
    for _ in range(terms):
        acc = acc + xpow * spow
        xpow = xpow * xm
        spow = spow * sinv
    return acc


def kernel_directional_gap(s: Paravector, d1: ImagUnit, d2: ImagUnit, t: float) -> float:
    """Direction dependence of the kernel near x = conj(s).

    Compares kernel values at conj(s) + t d for two probe directions.  For
    nonreal s the gap stays bounded away from zero as t decreases: the
    kernel has no continuous extension at conj(s).  For real s this probe
    point approaches the genuine pole x = s, so the gap is dominated by the
    pole; use kernel_obstruction_gap for the continuity contrast there.
    """
    if t <= 0:
        raise ValueError("probe distance t must be positive")
    base = s.conj()
    k1 = cauchy_kernel(s, base + t * d1.to_paravector())
    k2 = cauchy_kernel(s, base + t * d2.to_paravector())
    return (k1 - k2).norm()


def kernel_obstruction_gap(s: Paravector, d1: ImagUnit, d2: ImagUnit) -> float:
    """Direction dependence of the obstruction term d^(-1) conj(s) d.

    Writing x = conj(s) + eps, the kernel inverts
    eps^(-1) conj(s) eps + conj(s) + eps - 2 Re[s], and for eps = t d the
    first summand equals d^(-1) conj(s) d independently of t.  Its spread
    over directions is zero exactly when conj(s) is real, i.e. when the
    kernel reduces to the commuting form with a removable direction
    dependence.
    """
    alg = algebra(s.n)
    sc = s.conj().to_multivector(alg)

    def obstruction(d: ImagUnit) -> Multivector:
        dm = d.to_multivector(alg)
        return dm.inverse() * sc * dm

    return (obstruction(d1) - obstruction(d2)).norm()


# -- catalog of named series ------------------------------------------------


def exp_series(alg: CliffordAlgebra, terms: int = 160) -> SliceSeriesFunction:
    coeffs = []
    fact = 1.0
    for m in range(terms):
        if m > 0:
            fact *= m
        coeffs.append(alg.scalar(1.0 / fact))
    return SliceSeriesFunction(center=0.0, power_coeffs=tuple(coeffs))


def sin_series(alg: CliffordAlgebra, terms: int = 160) -> SliceSeriesFunction:
    coeffs = []
    fact = 1.0
    for m in range(terms):
        if m > 0:
            fact *= m
        if m % 2 == 1:
            coeffs.append(alg.scalar((-1.0) ** ((m - 1) // 2) / fact))
        else:
            coeffs.append(alg.scalar(0.0))
    return SliceSeriesFunction(center=0.0, power_coeffs=tuple(coeffs))


def cos_series(alg: CliffordAlgebra, terms: int = 160) -> SliceSeriesFunction:
    coeffs = []
    fact = 1.0
    for m in range(terms):
        if m > 0:
            fact *= m
        if m % 2 == 0:
            coeffs.append(alg.scalar((-1.0) ** (m // 2) / fact))
        else:
            coeffs.append(alg.scalar(0.0))
    return SliceSeriesFunction(center=0.0, power_coeffs=tuple(coeffs))


def geometric_series(alg: CliffordAlgebra, terms: int = 600) -> SliceSeriesFunction:
    coeffs = tuple(alg.scalar(1.0) for _ in range(terms))
    return SliceSeriesFunction(center=0.0, power_coeffs=coeffs, outer_radius=1.0)


def constant_series(alg: CliffordAlgebra, value: float = 1.0) -> SliceSeriesFunction:
    return SliceSeriesFunction(center=0.0, power_coeffs=(alg.scalar(value),))


def monomial(alg: CliffordAlgebra, m: int, a: Multivector | None = None) -> SliceSeriesFunction:
    """The right monomial x^m a."""
    if m < 0:
        raise ValueError("monomial degree must be nonnegative")
    a = a if a is not None else alg.scalar(1.0)
    coeffs = [alg.scalar(0.0)] * m + [a]
    return SliceSeriesFunction(center=0.0, power_coeffs=tuple(coeffs))


def rational_pole(alg: CliffordAlgebra, c: float, m: int = 1) -> SliceSeriesFunction:
    """(x - c)^(-m) for a real pole c; defined for all x != points over c."""
    if m < 1:
        raise ValueError("pole order must be >= 1")
    laurent = [alg.scalar(0.0)] * (m - 1) + [alg.scalar(1.0)]
    return SliceSeriesFunction(
        center=float(c), power_coeffs=(alg.scalar(0.0),), laurent_coeffs=tuple(laurent)
    )


def cauchy_product(f: SliceSeriesFunction, g: SliceSeriesFunction) -> SliceSeriesFunction:
    """Coefficient convolution of two power series.

    Valid as a pointwise product when the left factor is intrinsic: real
    scalar coefficients commute past the powers of x.  Laurent parts are
    not supported.
    """
    if f.has_laurent or g.has_laurent:
        raise ValueError("cauchy_product supports power series only")
    if f.center != g.center:
        raise ValueError("series must share a center")
    if not f.intrinsic:
        raise ValueError("left factor must be intrinsic (real scalar coefficients)")
    alg = f.algebra
    la, lb = len(f.power_coeffs), len(g.power_coeffs)
    out = [alg.zero() for _ in range(la + lb - 1)]
    for i, a in enumerate(f.power_coeffs):
        ai = a.scalar_part
        if ai == 0.0:
            continue
        for j, b in enumerate(g.power_coeffs):
            out[i + j] = out[i + j] + ai * b
    return SliceSeriesFunction(
        center=f.center,
        power_coeffs=tuple(out),
        outer_radius=min(f.outer_radius, g.outer_radius),
    )

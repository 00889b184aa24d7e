import math

import numpy as np
import pytest

from slicecalc import (
    ConvergenceError,
    ImagUnit,
    Paravector,
    SingularElementError,
    SliceSeriesFunction,
    algebra,
    cauchy_eval,
    cauchy_kernel,
    cauchy_product,
    exp_series,
    geometric_series,
    kernel_directional_gap,
    kernel_obstruction_gap,
    kernel_series_partial,
    monomial,
    rational_pole,
    s_derivative,
    sin_series,
)

ALG2 = algebra(2)
E1 = Paravector(0.0, [1.0, 0.0])
E2 = Paravector(0.0, [0.0, 1.0])


def test_exp_at_real_point():
    f = exp_series(ALG2)
    assert abs(f.eval(1.0).scalar_part - math.e) < 1e-14
    assert f.eval(1.0).is_real_scalar(tol=1e-15)


def test_square_at_e1():
    f = monomial(ALG2, 2)
    assert (f.eval(E1) - ALG2.scalar(-1.0)).norm() < 1e-15


def test_geometric_series_partial_sum_oracle():
    f = geometric_series(ALG2)
    x = 0.5 * E1
    got = f.eval(x)
    # partial-sum oracle, and the closed form (1 - x)^(-1)
    acc = ALG2.zero()
    p = ALG2.scalar(1.0)
    xm = x.to_multivector(ALG2)
    for _ in range(120):
        acc = acc + p
        p = p * xm
    assert (got - acc).norm() < 1e-14
    closed = (Paravector(1.0, [0, 0]) - x).inverse().to_multivector(ALG2)
    assert (got - closed).norm() < 1e-14
    expected = ALG2.parse("0.8 + 0.4 e1")
    assert (got - expected).norm() < 1e-14


def test_eval_outside_domain_raises():
    f = geometric_series(ALG2)
    with pytest.raises(ConvergenceError):
        f.eval(Paravector(1.5, [0, 0]))
    g = rational_pole(ALG2, 0.0)
    with pytest.raises(ConvergenceError):
        g.eval(Paravector(0.0, [0.0, 0.0]))


def test_eval_plane_matches_clifford_powers(rng):
    alg = algebra(3)
    for _ in range(20):
        coeffs = tuple(
            alg.multivector(rng.uniform(-1, 1, size=alg.dim)) for _ in range(6)
        )
        laurent = tuple(
            alg.multivector(rng.uniform(-1, 1, size=alg.dim)) for _ in range(2)
        )
        f = SliceSeriesFunction(
            center=0.3, power_coeffs=coeffs, laurent_coeffs=laurent
        )
        plane = ImagUnit(rng.normal(size=3))
        u, v = rng.uniform(-2, 2), rng.uniform(0.2, 2)
        x = Paravector(u, v * plane.dirs)
        slow = f.eval(x)
        fast = f.eval_plane(u, v, plane)
        assert (slow - fast).norm() <= 1e-12 * max(1.0, slow.norm())


def test_s_derivative_shift():
    f = monomial(ALG2, 2)
    df = s_derivative(f)
    assert (df.eval(3.0) - ALG2.scalar(6.0)).norm() < 1e-14
    g = exp_series(ALG2)
    dg = s_derivative(g)
    for m in range(20):
        assert (dg.power_coeffs[m] - g.power_coeffs[m]).norm() < 1e-16


def test_s_derivative_finite_difference(rng):
    alg = algebra(2)
    coeffs = tuple(alg.multivector(rng.uniform(-1, 1, size=alg.dim)) for _ in range(8))
    f = SliceSeriesFunction(center=0.0, power_coeffs=coeffs)
    df = s_derivative(f)
    h = 1e-5
    x = 0.3
    fd = (f.eval(x + h) - f.eval(x - h)) / (2 * h)
    assert (df.eval(x) - fd).norm() <= 1e-6


def test_s_derivative_laurent():
    f = rational_pole(ALG2, 0.0, 1)  # 1/x
    df = s_derivative(f)
    x = Paravector(0.5, [0.5, 0.0])
    xm = x.to_multivector(ALG2)
    expected = -(xm.inverse() * xm.inverse())
    assert (df.eval(x) - expected).norm() < 1e-13


def test_cauchy_eval_constant():
    f = SliceSeriesFunction(center=0.0, power_coeffs=(ALG2.scalar(1.0),))
    got = cauchy_eval(f, Paravector(0.1, [0.3, 0.2]), radius=2.0, nodes=64)
    assert (got - ALG2.scalar(1.0)).norm() < 1e-12


def test_cauchy_eval_cube():
    f = monomial(ALG2, 3)
    x = Paravector(0.2, [0.4, 0.0])
    got = cauchy_eval(f, x, radius=2.0, nodes=256)
    assert (got - f.eval(x)).norm() <= 1e-10


def test_cauchy_eval_exp_off_axis():
    f = exp_series(ALG2)
    x = Paravector(0.0, [0.0, 0.5])
    got = cauchy_eval(f, x, radius=2.0, nodes=256)
    assert (got - f.eval(x)).norm() <= 1e-10


def test_cauchy_eval_radius_independence(rng):
    alg = algebra(2)
    for _ in range(10):
        coeffs = tuple(alg.multivector(rng.uniform(-1, 1, size=alg.dim)) for _ in range(5))
        f = SliceSeriesFunction(center=0.0, power_coeffs=coeffs)
        x = Paravector(rng.uniform(-0.5, 0.5), rng.uniform(0, 0.5) * np.array([1.0, 0]))
        a = cauchy_eval(f, x, radius=1.5, nodes=256)
        b = cauchy_eval(f, x, radius=2.5, nodes=256)
        assert (a - b).norm() <= 1e-10 * max(1.0, a.norm())


def test_cauchy_eval_reproduces_series(rng):
    alg = algebra(3)
    for _ in range(50):
        coeffs = tuple(alg.multivector(rng.uniform(-1, 1, size=alg.dim)) for _ in range(7))
        f = SliceSeriesFunction(center=0.0, power_coeffs=coeffs)
        plane = ImagUnit(rng.normal(size=3))
        u, v = rng.uniform(-0.5, 0.5), rng.uniform(0.0, 0.5)
        x = Paravector(u, v * plane.dirs)
        got = cauchy_eval(f, x, radius=2.0, nodes=256)
        assert (got - f.eval(x)).norm() <= 1e-8


def test_cauchy_eval_point_outside_circle():
    f = exp_series(ALG2)
    with pytest.raises(ValueError):
        cauchy_eval(f, Paravector(3.0, [0, 0]), radius=2.0)


def test_cauchy_eval_real_point_uses_default_plane():
    f = exp_series(ALG2)
    got = cauchy_eval(f, Paravector(0.5, [0.0, 0.0]), radius=1.5, nodes=128)
    assert abs(got.scalar_part - math.exp(0.5)) < 1e-10


# -- kernel -------------------------------------------------------------------


def test_kernel_worked_values():
    two = Paravector(2.0, [0.0, 0.0])
    got = cauchy_kernel(two, E1)
    assert (got - ALG2.parse("0.4 + 0.2 e1")).norm() < 1e-14

    got2 = cauchy_kernel(E1, 0.5 * E2)
    expected = ALG2.parse("-1.3333333333333333 e1 - 0.6666666666666666 e2")
    assert (got2 - expected).norm() < 1e-14

    s = Paravector(1.0, [2.0, 0.5])
    zero = Paravector(0.0, [0.0, 0.0])
    assert (cauchy_kernel(s, zero) - s.inverse().to_multivector(ALG2)).norm() < 1e-14


def test_kernel_matches_series(rng):
    for _ in range(200):
        n = 3
        sdir = rng.normal(size=n + 1)
        sdir /= np.linalg.norm(sdir)
        smag = rng.uniform(1.0, 2.0)
        s = Paravector(smag * sdir[0], smag * sdir[1:])
        xdir = rng.normal(size=n + 1)
        xdir /= np.linalg.norm(xdir)
        xmag = rng.uniform(0.01, 0.5) * smag
        x = Paravector(xmag * xdir[0], xmag * xdir[1:])
        closed = cauchy_kernel(s, x)
        series = kernel_series_partial(s, x, 60)
        assert (closed - series).norm() <= 1e-10 * closed.norm()


def test_kernel_commuting_reduction(rng):
    n = 3
    for _ in range(30):
        plane = ImagUnit(rng.normal(size=n))
        s = Paravector(rng.uniform(-2, 2), rng.uniform(0.5, 2) * plane.dirs)
        x = Paravector(rng.uniform(-2, 2), rng.uniform(0, 0.3) * plane.dirs)
        lhs = cauchy_kernel(s, x)
        rhs = (s - x).inverse().to_multivector(algebra(n))
        assert (lhs - rhs).norm() <= 1e-12 * max(1.0, rhs.norm())


def test_kernel_singular_on_spectral_sphere():
    with pytest.raises(SingularElementError):
        cauchy_kernel(E1, E2)  # x on the sphere Re=0, |vec|=1 of s


def test_directional_gap_nonreal():
    e1 = ImagUnit.axis(1, 2)
    e2 = ImagUnit.axis(2, 2)
    gaps = [kernel_directional_gap(E1, e1, e2, t) for t in (1e-2, 1e-3, 1e-4)]
    for g in gaps:
        assert g >= 0.1
    # the gap grows like 1/t: no continuous extension exists
    assert gaps[2] > gaps[1] > gaps[0]


def test_directional_gap_sequence_nonvanishing():
    s = Paravector(1.0, [0.0, 1.0])
    e1 = ImagUnit.axis(1, 2)
    e2 = ImagUnit.axis(2, 2)
    for t in (1e-2, 1e-3, 1e-4):
        assert kernel_directional_gap(s, e2, e1, t) >= 0.1


def test_obstruction_gap_real_vs_nonreal():
    e1 = ImagUnit.axis(1, 2)
    e2 = ImagUnit.axis(2, 2)
    real_s = Paravector(2.0, [0.0, 0.0])
    assert kernel_obstruction_gap(real_s, e1, e2) <= 1e-12
    assert kernel_obstruction_gap(E1, e1, e2) > 0.5


# -- products -----------------------------------------------------------------


def test_cauchy_product_polynomials():
    f = SliceSeriesFunction(center=0.0, power_coeffs=(ALG2.scalar(1.0), ALG2.scalar(1.0)))
    g = SliceSeriesFunction(center=0.0, power_coeffs=(ALG2.scalar(1.0), ALG2.scalar(-1.0)))
    fg = cauchy_product(f, g)  # (1+x)(1-x) = 1 - x^2
    x = Paravector(0.3, [0.2, 0.1])
    want = ALG2.scalar(1.0) - monomial(ALG2, 2).eval(x)
    assert (fg.eval(x) - want).norm() < 1e-14


def test_cauchy_product_requires_intrinsic_left():
    f = SliceSeriesFunction(center=0.0, power_coeffs=(ALG2.basis_vector(1),))
    g = exp_series(ALG2)
    with pytest.raises(ValueError):
        cauchy_product(f, g)


def test_sin_series_zero_coefficients_handled():
    f = sin_series(ALG2)
    assert abs(f.eval(1.0).scalar_part - math.sin(1.0)) < 1e-14

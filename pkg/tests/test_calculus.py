import math

import numpy as np
import pytest

from slicecalc import (
    CliffordMatrix,
    Contour,
    ContourError,
    Circle,
    ImagUnit,
    Multivector,
    ParavectorOperator,
    algebra,
    build_contour,
    constant_series,
    exp_series,
    f_of_T,
    geometric_series,
    monomial,
    moment_check,
    plane_independence_gap,
    product_residual,
    rational_pole,
    s_spectrum_exact,
)
from slicecalc.verify import pauli_operator, random_operator

E1_2 = ImagUnit.axis(1, 2)


def test_build_contour_pauli_exp():
    T = pauli_operator()
    report = s_spectrum_exact(T)
    contour = build_contour(report, exp_series(T.algebra), E1_2, margin=0.3)
    assert len(contour.cycles) == 1
    circle = contour.cycles[0]
    assert circle.center == 0.0 and circle.orientation == 1
    assert circle.radius >= 2.0 + 0.3


def test_build_contour_respects_radius():
    T = ParavectorOperator.from_components(
        [np.array([[1.0]]), np.zeros((1, 1)), np.zeros((1, 1))]
    )
    report = s_spectrum_exact(T)  # spectrum {(1, 0)}
    f = geometric_series(algebra(2), 400)
    f = type(f)(center=0.0, power_coeffs=f.power_coeffs, outer_radius=3.0)
    contour = build_contour(report, f, E1_2, margin=0.5)
    radius = contour.cycles[0].radius
    assert 1.0 + 0.5 <= radius < 3.0


def test_build_contour_laurent_annulus():
    alg = algebra(2)
    T = CliffordMatrix.from_blade_dict(alg, 1, {1: [[1.0]]})  # spectrum {(0, 1)}
    report = s_spectrum_exact(T)
    f = rational_pole(alg, 0.0)
    f = type(f)(
        center=0.0,
        power_coeffs=f.power_coeffs,
        laurent_coeffs=f.laurent_coeffs,
        inner_radius=0.5,
        outer_radius=4.0,
    )
    contour = build_contour(report, f, E1_2, margin=0.2)
    outer, inner = contour.cycles
    assert outer.orientation == 1 and inner.orientation == -1
    assert 0.5 < inner.radius < 1.0 < outer.radius < 4.0
    # winds once around the spectrum, zero times around the singular center
    assert contour.winding(0.0, 1.0) == 1 and contour.winding(0.0, -1.0) == 1
    assert contour.winding(0.0, 0.0) == 0


def test_build_contour_inseparable_spectrum():
    alg = algebra(2)
    T = ParavectorOperator.from_components(np.zeros((3, 1, 1)))  # spectrum {(0,0)}
    with pytest.raises(ContourError):
        build_contour(s_spectrum_exact(T), rational_pole(alg, 0.0), E1_2)


def test_f_of_one_is_identity():
    T = pauli_operator()
    report = s_spectrum_exact(T)
    f = constant_series(T.algebra, 1.0)
    contour = build_contour(report, f, E1_2, nodes=256)
    result = f_of_T(f, T, contour, report=report)
    assert result.value.diff_rep_norm(CliffordMatrix.identity(T.algebra, 2)) <= 1e-10
    assert result.clearance > 0
    assert result.nodes == 256


def test_f_square_of_pauli_is_T_squared():
    T = pauli_operator()
    report = s_spectrum_exact(T)
    f = monomial(T.algebra, 2)
    contour = build_contour(report, f, E1_2, nodes=512)
    got = f_of_T(f, T, contour, report=report).value
    want = T.compose(T)
    # the square has the displayed form -2 I + 2 J e1 e2
    expect = np.zeros((4, 2, 2))
    expect[0] = -2.0 * np.eye(2)
    expect[3] = np.array([[0.0, 2.0], [-2.0, 0.0]])
    assert np.allclose(want.blades, expect, atol=1e-14)
    assert got.diff_rep_norm(want) <= 1e-8


def test_f_exp_of_real_diagonal():
    T = ParavectorOperator.from_components(
        [np.diag([0.0, math.log(2.0)])] + [np.zeros((2, 2))] * 2
    )
    report = s_spectrum_exact(T)
    f = exp_series(T.algebra)
    contour = build_contour(report, f, E1_2, nodes=512)
    got = f_of_T(f, T, contour, report=report).value
    want = CliffordMatrix.from_blade_dict(T.algebra, 2, {0: np.diag([1.0, 2.0])})
    assert got.diff_rep_norm(want) <= 1e-8


def test_winding_validation_rejects_offset_contour():
    T = pauli_operator()
    report = s_spectrum_exact(T)
    f = exp_series(T.algebra)
    bad = Contour(plane=E1_2, cycles=(Circle(5.0, 1.0, 1),), nodes_per_cycle=64)
    with pytest.raises(ContourError):
        f_of_T(f, T, bad, report=report)


def test_clearance_floor_rejects_grazing_contour():
    T = pauli_operator()
    report = s_spectrum_exact(T)
    f = exp_series(T.algebra)
    grazing = Contour(
        plane=E1_2, cycles=(Circle(0.0, 2.0 + 1e-9, 1),), nodes_per_cycle=64
    )
    with pytest.raises(ContourError):
        f_of_T(f, T, grazing, report=report)


def test_moment_identity_examples():
    T = pauli_operator()
    report = s_spectrum_exact(T)
    alg = T.algebra
    contour = build_contour(report, monomial(alg, 1), E1_2, nodes=512)
    assert moment_check(T, 0, alg.scalar(1.0), contour, report=report) <= 1e-10
    assert moment_check(T, 1, alg.scalar(1.0), contour, report=report) <= 1e-8
    assert moment_check(T, 3, alg.blade(3), contour, report=report) <= 1e-8


def test_moment_identity_random(rng):
    for _ in range(10):
        n = int(rng.integers(2, 4))
        d = int(rng.integers(1, 4))
        T = random_operator(rng, n, d)
        report = s_spectrum_exact(T)
        alg = T.algebra
        a = Multivector(alg, rng.uniform(-1, 1, size=alg.dim))
        m = int(rng.integers(0, 5))
        contour = build_contour(report, monomial(alg, m, a), ImagUnit.axis(1, n), nodes=512)
        resid = moment_check(T, m, a, contour, report=report)
        assert resid <= 1e-8 * (1.0 + T.rep_norm()) ** m


def test_deformation_invariance(rng):
    T = random_operator(rng, 2, 2)
    report = s_spectrum_exact(T)
    f = exp_series(T.algebra)
    a = build_contour(report, f, E1_2, margin=0.2, nodes=512)
    b = build_contour(report, f, E1_2, margin=0.8, nodes=512)
    va = f_of_T(f, T, a, report=report).value
    vb = f_of_T(f, T, b, report=report).value
    assert va.diff_rep_norm(vb) <= 1e-8


def test_plane_independence_pauli_exp():
    T = pauli_operator()
    gap = plane_independence_gap(exp_series(T.algebra), T, E1_2, ImagUnit.axis(2, 2))
    assert gap <= 1e-8


def test_plane_independence_same_plane_is_exact():
    T = pauli_operator()
    gap = plane_independence_gap(exp_series(T.algebra), T, E1_2, E1_2)
    assert gap == 0.0


def test_plane_independence_random_plane(rng):
    n = 3
    T = random_operator(rng, n, 2)
    extra = ImagUnit(rng.normal(size=n))
    gap = plane_independence_gap(monomial(T.algebra, 3), T, ImagUnit.axis(1, n), extra)
    assert gap <= 1e-8


def test_right_module_homomorphism(rng):
    """f_of_T(f a + g b) = f_of_T(f) a + f_of_T(g) b for Clifford constants."""
    T = random_operator(rng, 2, 2)
    report = s_spectrum_exact(T)
    alg = T.algebra
    a = Multivector(alg, rng.uniform(-1, 1, size=alg.dim))
    b = Multivector(alg, rng.uniform(-1, 1, size=alg.dim))
    f = monomial(alg, 1)
    g = monomial(alg, 2)
    combo = type(f)(
        center=0.0,
        power_coeffs=(alg.zero(), a, b),
    )
    contour = build_contour(report, combo, E1_2, nodes=512)
    lhs = f_of_T(combo, T, contour, report=report).value
    rhs = (
        f_of_T(f, T, contour, report=report).value.right_mul(a)
        + f_of_T(g, T, contour, report=report).value.right_mul(b)
    )
    assert lhs.diff_rep_norm(rhs) <= 1e-10


def test_product_rule_examples(rng):
    alg = algebra(2)
    T = pauli_operator()
    x = monomial(alg, 1)
    assert product_residual(x, x, T, nodes=512) <= 1e-8

    one_plus = type(x)(center=0.0, power_coeffs=(alg.scalar(1.0), alg.scalar(1.0)))
    one_minus = type(x)(center=0.0, power_coeffs=(alg.scalar(1.0), alg.scalar(-1.0)))
    assert product_residual(one_plus, one_minus, T, nodes=512) <= 1e-8


def test_product_rule_exp_real_diagonal():
    T = ParavectorOperator.from_components(
        [np.diag([0.1, -0.2])] + [np.zeros((2, 2))] * 2
    )
    f = exp_series(T.algebra, terms=60)
    assert product_residual(f, f, T, nodes=512) <= 1e-8


def test_product_rule_rejects_non_intrinsic():
    alg = algebra(2)
    T = pauli_operator()
    f = type(monomial(alg, 1))(center=0.0, power_coeffs=(alg.basis_vector(1),))
    with pytest.raises(ValueError):
        product_residual(f, monomial(alg, 1), T)


def test_riesz_dunford_single_operator(rng):
    """For T = T1 e1 the calculus reduces to powers of T1 e1 itself."""
    T1 = rng.uniform(-1, 1, size=(2, 2))
    T = ParavectorOperator.from_components([np.zeros((2, 2)), T1])
    report = s_spectrum_exact(T)
    for m in (1, 2, 3):
        f = monomial(T.algebra, m)
        contour = build_contour(report, f, ImagUnit.axis(1, 1), nodes=512)
        got = f_of_T(f, T, contour, report=report).value
        assert got.diff_rep_norm(T.power(m)) <= 1e-8


def test_quadrature_convergence_doubling(rng):
    """With clearance at 0.2 rep_norm on an off-center circle, the 256-node
    error sits above the rounding floor and node doubling gains >= 10x."""
    for _ in range(3):
        T = random_operator(rng, 2, 2)
        report = s_spectrum_exact(T)
        far = max(math.hypot(u + 3.0, v) for u, v in report.plane_points())
        circle = Circle(-3.0, far + 0.21, 1)
        a = T.algebra.scalar(1.0)
        r256 = moment_check(T, 3, a, Contour(E1_2, (circle,), 256), report=report)
        r512 = moment_check(T, 3, a, Contour(E1_2, (circle,), 512), report=report)
        clearance = min(circle.distance(u, v) for u, v in report.plane_points())
        assert clearance >= 0.2 * T.rep_norm()
        assert r256 >= 10.0 * r512

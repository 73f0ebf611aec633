import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypermono import algebra as alg
from hypermono.geometry import FDScheme, Point, convergence_order, cov_gradient, random_points
from hypermono.monopole import (bogomolny_residual, energy_density, field_strength, field_strength_fd,
                                gauge_transform, harmonic_f, higgs_gradient, one_monopole, su2_dexp,
                                su2_exp, zero_fields)

CFG = one_monopole()
ORIGIN = Point(0.0, 0.0, 1.0)
PTS = random_points(20, seed=42)


def expm_eig(m):
    """Matrix exponential via eigendecomposition; an independent oracle."""
    w, v = np.linalg.eig(m)
    return v @ np.diag(np.exp(w)) @ np.linalg.inv(v)


def test_higgs_vanishes_at_centre():
    np.testing.assert_allclose(CFG.Phi(ORIGIN), 0, atol=1e-15)


def test_connection_at_centre():
    a = CFG.A(ORIGIN)
    np.testing.assert_allclose(a[0], 0.5j * alg.SIGMA2)
    np.testing.assert_allclose(a[1], -0.5j * alg.SIGMA1)
    np.testing.assert_allclose(a[2], 0, atol=1e-15)


def test_higgs_eigenvalues_at_boundary():
    phi = CFG.Phi(Point(0.0, 0.0, 1e-8))
    np.testing.assert_allclose(np.sort(np.linalg.eigvals(phi).imag), [-0.5, 0.5], atol=1e-7)


def test_higgs_norm_approaches_mass_quadratically():
    devs = []
    for r in (1e-2, 1e-3):
        devs.append(abs(np.linalg.norm(CFG.Phi(Point(0.0, 0.0, r)), 2) - 0.5))
    assert devs[1] < devs[0]
    assert 50 < devs[0] / devs[1] < 200  # deviation is O(rho^2)


def test_charge_and_mass():
    assert CFG.n == 1 and CFG.p_mass == 0.5
    assert CFG.energy == pytest.approx(np.pi)


def test_nonpositive_lambda_rejected():
    with pytest.raises(ValueError):
        one_monopole(lam=0.0)


def test_fields_are_su2_valued():
    pts = random_points(100, seed=1)
    for m in (CFG.A(pts), CFG.Phi(pts), CFG.field_strength(pts), CFG.higgs_gradient(pts)):
        assert alg.is_traceless(m) and alg.is_antihermitian(m)


def test_curvature_at_centre():
    assert harmonic_f(ORIGIN) == 0.5
    np.testing.assert_allclose(field_strength(CFG, ORIGIN)[0], 0.5j * alg.SIGMA3)


def test_harmonic_f_bounded_by_boundary_value():
    pts = random_points(200, seed=5)
    f = harmonic_f(pts)
    assert np.all(f > 0) and np.all(f < 2.0)
    assert harmonic_f(Point(0.0, 0.0, 1e-9)) == pytest.approx(2.0)


@settings(max_examples=30)
@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-2, 2), st.floats(-2, 2), st.floats(0.1, 3))
def test_harmonic_f_translation_covariant(x0, y0, x, y, r):
    f0 = harmonic_f(Point(x, y, r), (0.0, 0.0, 1.0))
    f1 = harmonic_f(Point(x + x0, y + y0, r), (x0, y0, 1.0))
    assert abs(f0 - f1) < 1e-15 * max(1.0, f0) * 10


def test_curvature_fd_agreement():
    err = np.max(np.abs(field_strength_fd(CFG, PTS) - CFG.field_strength(PTS)))
    assert err < 1e-6


def test_higgs_gradient_fd_agreement():
    err = np.max(np.abs(cov_gradient(CFG.A, CFG.Phi, PTS) - CFG.higgs_gradient(PTS)))
    assert err < 1e-6


def test_bogomolny_at_point():
    assert bogomolny_residual(CFG, Point(0.3, -0.2, 0.8), FDScheme(1e-4)) < 1e-6


def test_bogomolny_zero_fields_exact():
    assert bogomolny_residual(zero_fields(), PTS) == 0.0


def test_bogomolny_detects_perturbed_higgs():
    bad = one_monopole()
    bad = type(bad)(bad.n, bad.p_mass, bad.center, bad.A, lambda p: CFG.Phi(p) + 0.01j * alg.SIGMA3,
                    bad.field_strength, None)
    # a constant shift is not covariantly constant, so d^A Phi changes
    assert bogomolny_residual(bad, PTS) > 1e-3


def test_bogomolny_convergence_order():
    hs = (1e-3, 5e-4, 2.5e-4)
    res = [bogomolny_residual(CFG, PTS, FDScheme(h)) for h in hs]
    assert convergence_order(hs, res) > 1.7


@pytest.mark.parametrize("center", [(0.4, -0.3, 1.0), (0.0, 0.0, 0.5), (1.0, 2.0, 2.5)])
def test_bogomolny_other_centres(center):
    assert bogomolny_residual(one_monopole(*center), PTS) < 1e-6


def test_energy_density_at_centre():
    assert energy_density(CFG, ORIGIN) == pytest.approx(0.75, abs=1e-15)


def test_energy_density_closed_form():
    pts = random_points(50, seed=9)
    np.testing.assert_allclose(energy_density(CFG, pts), 3 * pts.rho ** 4 * harmonic_f(pts) ** 2, atol=1e-14)
    assert np.all(energy_density(CFG, pts) >= 0)


@settings(max_examples=30)
@given(st.tuples(*(st.floats(-2, 2) for _ in range(3))))
def test_su2_exp_matches_eigen_oracle(v):
    m = alg.from_su2_coefficients(np.array(v))
    np.testing.assert_allclose(su2_exp(m), expm_eig(m), atol=1e-12)


@settings(max_examples=30)
@given(st.tuples(*(st.floats(-2, 2) for _ in range(6))))
def test_su2_dexp_matches_finite_difference(v):
    m = alg.from_su2_coefficients(np.array(v[:3]))
    dm = alg.from_su2_coefficients(np.array(v[3:]))
    h = 1e-5
    fd = (su2_exp(m + h * dm) - su2_exp(m - h * dm)) / (2 * h)
    left = alg.dagger(su2_exp(m)) @ fd
    np.testing.assert_allclose(su2_dexp(m, dm), left, atol=1e-8)


@pytest.mark.parametrize("s", [0.1, 0.7, -1.3])
def test_higgs_gauge_transform_preserves_bogomolny(s):
    moved = gauge_transform(CFG, s)
    assert bogomolny_residual(moved, PTS) < 1e-6
    np.testing.assert_allclose(moved.Phi(PTS), CFG.Phi(PTS))
    err = np.max(np.abs(field_strength_fd(moved, PTS) - moved.field_strength(PTS)))
    assert err < 1e-6
    np.testing.assert_allclose(higgs_gradient(moved, PTS), cov_gradient(moved.A, moved.Phi, PTS), atol=1e-6)


def test_gauge_transform_zero_is_identity():
    np.testing.assert_allclose(gauge_transform(CFG, 0.0).A(PTS), CFG.A(PTS), atol=1e-15)

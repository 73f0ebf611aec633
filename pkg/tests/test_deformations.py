import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypermono import algebra as alg
from hypermono import deformations as dfm
from hypermono import geometry as geo
from hypermono.geometry import FDScheme, Point
from hypermono.monopole import harmonic_f, one_monopole

CFG = one_monopole()
ORIGIN = Point(0.0, 0.0, 1.0)
PTS = geo.random_points(10, seed=42)
PTS20 = geo.random_points(20, seed=7)
STEPS = (1e-3, 5e-4, 2.5e-4)


def maxabs(a):
    return float(np.max(np.abs(a)))


def interior(kind, form, p, center=geo.UNIT_CENTER):
    return dfm._interior(geo.killing_field(kind, p, center), form)


def contract(kind, one_form, p, center=geo.UNIT_CENTER):
    return np.einsum("...k,...kgh->...gh", geo.killing_field(kind, p, center), one_form)


# -- Killing spinors --------------------------------------------------------------

def test_killing_pair_is_normalised():
    pts = geo.random_points(100, seed=3)
    np.testing.assert_allclose(alg.pair(dfm.psi1(pts), dfm.psi2(pts)), 1, atol=1e-12)


@pytest.mark.parametrize("psi", [dfm.psi1, dfm.psi2])
def test_killing_spinor_residual_order(psi):
    res = [dfm.killing_spinor_residual(psi, PTS, FDScheme(h)) for h in STEPS]
    assert dfm.killing_spinor_residual(psi, PTS, FDScheme(1e-4)) < 1e-5
    assert geo.convergence_order(STEPS, res) > 1.7


def test_lifted_spinors_bounded_at_boundary():
    for r in (1e-2, 1e-4):
        for t in dfm.lifted_killing_spinors(Point(0.0, 0.0, r)):
            assert np.linalg.norm(t) < 2


# -- eigenspinors -------------------------------------------------------------------

def test_nu1_at_centre():
    nu1, _ = dfm.eigenspinors(CFG)
    v = nu1(ORIGIN)
    np.testing.assert_allclose(v[0], alg.SIGMA3 / 2, atol=1e-15)
    np.testing.assert_allclose(v[1], (alg.SIGMA1 + 1j * alg.SIGMA2) / 2, atol=1e-15)


def test_trace_pair_of_eigenspinors():
    nu1, nu2 = dfm.eigenspinors(CFG)
    assert alg.trace_pair(nu1(ORIGIN), nu2(ORIGIN)) == pytest.approx(-1.5, abs=1e-14)
    pts = geo.random_points(50, seed=11)
    want = -6 * pts.rho ** 4 * harmonic_f(pts) ** 2
    np.testing.assert_allclose(alg.trace_pair(nu1(pts), nu2(pts)), want, atol=1e-12)


@pytest.mark.parametrize("center", [(0.0, 0.0, 1.0), (0.5, -0.3, 2.0), (0.0, 0.0, 0.5)])
def test_eigenspinors_match_clifford_route(center):
    cfg = one_monopole(*center)
    for a, b in zip(dfm.eigenspinors(cfg), dfm.eigenspinors_cl(cfg)):
        assert maxabs(a(PTS20) - b(PTS20)) < 1e-10


@pytest.mark.parametrize("i", [0, 1])
def test_dirac_eigen_residual_converges(i):
    nu = dfm.eigenspinors(CFG)[i]
    res = [dfm.dirac_eigen_residual(CFG, nu, PTS, FDScheme(h)) for h in STEPS]
    assert dfm.dirac_eigen_residual(CFG, nu, PTS, FDScheme(1e-4)) < 1e-5
    assert geo.convergence_order(STEPS, res) > 1.7


def test_dirac_eigen_wrong_sign_fails():
    nu = dfm.eigenspinors(CFG)[0]
    assert dfm.dirac_eigen_residual(CFG, nu, PTS, sign=+1) > 1e-2


def test_eigenspinors_at_moved_centre_solve_dirac():
    cfg = one_monopole(0.5, -0.3, 2.0)
    for nu in dfm.eigenspinors(cfg):
        assert dfm.dirac_eigen_residual(cfg, nu, PTS, FDScheme(1e-4)) < 1e-5


# -- tangent vectors ------------------------------------------------------------------

def test_mu0_is_star_curvature():
    a, phi = dfm.tangent_vector(CFG, 0).at(PTS20)
    star_f = geo.hodge_two(CFG.field_strength(PTS20), PTS20.rho)
    assert maxabs(a - star_f) < 1e-12
    assert maxabs(phi) == 0


def test_mu0_at_centre():
    a, _ = dfm.tangent_vector(CFG, 0).at(ORIGIN)
    # F = (i/2)(s3, s1, s2) in (xy, yrho, rhox) order; *(dx^dy) = -rho drho flips the sign
    np.testing.assert_allclose(a, -0.5j * np.stack([alg.SIGMA1, alg.SIGMA2, alg.SIGMA3]), atol=1e-14)


def test_mu0_cl_matches_spinor_decomposition():
    b = dfm.cl_deformation(dfm.tangent_vector(CFG, 0), PTS20)
    nu1, nu2 = dfm.eigenspinors(CFG)
    want = alg.tensor(nu1(PTS20), alg.dual(dfm.psi2(PTS20))) - alg.tensor(nu2(PTS20), alg.dual(dfm.psi1(PTS20)))
    assert maxabs(b - want) < 1e-10


def test_mu3_spinor_form_explicit():
    b = dfm.cl_deformation(dfm.tangent_vector(CFG, 3), PTS20)
    nu1, nu2 = dfm.eigenspinors(CFG)
    want = 1j * (alg.tensor(nu1(PTS20), alg.dual(dfm.psi2(PTS20)))
                 + alg.tensor(nu2(PTS20), alg.dual(dfm.psi1(PTS20))))
    assert maxabs(b - want) < 1e-10


@pytest.mark.parametrize("mu", [0, 1, 2, 3])
@pytest.mark.parametrize("center", [(0.0, 0.0, 1.0), (0.5, -0.3, 2.0)])
def test_tangent_vector_spinor_form(mu, center):
    cfg = one_monopole(*center)
    d, s = dfm.tangent_vector(cfg, mu), dfm.tangent_vector_spinor(cfg, mu)
    assert maxabs(d.a(PTS20) - s.a(PTS20)) < 1e-10
    assert maxabs(d.phi(PTS20) - s.phi(PTS20)) < 1e-10


def test_tangent_vectors_at_matches_single():
    a, phi = dfm.tangent_vectors_at(CFG, PTS)
    for mu in range(4):
        d = dfm.tangent_vector(CFG, mu)
        np.testing.assert_allclose(a[..., mu, :, :, :], d.a(PTS), atol=1e-15)
        np.testing.assert_allclose(phi[..., mu, :, :], d.phi(PTS), atol=1e-15)


def test_tangent_vector_rejects_bad_index():
    with pytest.raises(ValueError):
        dfm.tangent_vector(CFG, 4)


def test_tangent_vectors_are_finite():
    pts = geo.random_points(200, seed=8)
    a, phi = dfm.tangent_vectors_at(CFG, pts)
    assert np.all(np.isfinite(a)) and np.all(np.isfinite(phi))


def test_y1_contractions_match_closed_forms():
    assert maxabs(interior("Y1", CFG.field_strength(PTS20), PTS20) - dfm.y1_interior_F(PTS20)) < 1e-12
    assert maxabs(contract("Y1", CFG.higgs_gradient(PTS20), PTS20) - dfm.y1_interior_dphi(PTS20)) < 1e-12


def test_mu1_is_boost_plus_i_gauge():
    g = dfm.gauge_mode(CFG, lambda q: dfm.chi(1, q))
    d = dfm.tangent_vector(CFG, 1)
    a = dfm.y1_interior_F(PTS20) + 1j * g.a(PTS20)
    phi = dfm.y1_interior_dphi(PTS20) + 1j * g.phi(PTS20)
    assert maxabs(a - d.a(PTS20)) < 1e-6 and maxabs(phi - d.phi(PTS20)) < 1e-6


# -- gauge fixing and linearised Bogomolny ---------------------------------------------

@pytest.mark.parametrize("sign", [1, -1])
def test_gauge_fix_mu0_both_signs(sign):
    assert dfm.gauge_fix_residual(CFG, dfm.tangent_vector(CFG, 0), sign, PTS, FDScheme(1e-4)) < 1e-6


@pytest.mark.parametrize("mu", [1, 2, 3])
def test_gauge_fix_mu_j(mu):
    d = dfm.tangent_vector(CFG, mu)
    assert dfm.gauge_fix_residual(CFG, d, -1, PTS, FDScheme(1e-4)) < 1e-6
    assert dfm.gauge_fix_residual(CFG, d, +1, PTS, FDScheme(1e-4)) > 1e-3


def test_gauge_fix_order():
    d = dfm.tangent_vector(CFG, 2)
    res = [dfm.gauge_fix_residual(CFG, d, -1, PTS, FDScheme(h)) for h in STEPS]
    assert geo.convergence_order(STEPS, res) > 1.7


def test_gauge_fix_rejects_bad_sign():
    with pytest.raises(ValueError):
        dfm.gauge_fix_residual(CFG, dfm.tangent_vector(CFG, 0), 0, PTS)


def test_gauge_fix_negative_control():
    g = dfm.gauge_mode(CFG, lambda q: dfm.chi(3, q, "bare"))
    assert dfm.gauge_fix_residual(CFG, g, -1, PTS) > 1e-3


@pytest.mark.parametrize("mu", [0, 1, 2, 3])
def test_linearised_bogomolny_tangent_vectors(mu):
    d = dfm.tangent_vector(CFG, mu)
    assert dfm.lin_bogomolny_residual(CFG, d, PTS, FDScheme(1e-4)) < 1e-6


def test_linearised_bogomolny_order():
    d = dfm.tangent_vector(CFG, 1)
    res = [dfm.lin_bogomolny_residual(CFG, d, PTS, FDScheme(h)) for h in STEPS]
    assert geo.convergence_order(STEPS, res) > 1.7


def test_linearised_bogomolny_pure_gauge():
    def smooth(q):
        x, y, r = (np.asarray(c, dtype=float)[..., None, None] for c in q.coords())
        return 1j * (np.sin(x) * alg.SIGMA1 + x * y * r * alg.SIGMA2 + np.exp(-r) * alg.SIGMA3)

    g = dfm.gauge_mode(CFG, smooth)
    assert dfm.lin_bogomolny_residual(CFG, g, PTS, FDScheme(1e-4)) < 1e-6


def test_linearised_bogomolny_negative_control():
    def a(q):
        x, _, r = (np.asarray(c, dtype=float)[..., None, None] for c in q.coords())
        return np.stack([1j * x * alg.SIGMA1, 1j * r * alg.SIGMA2, 1j * x * r * alg.SIGMA3], axis=-3)

    def phi(q):
        return 1j * np.asarray(q.y, dtype=float)[..., None, None] * alg.SIGMA3

    d = dfm.Deformation(a, phi)
    assert dfm.lin_bogomolny_residual(CFG, d, PTS) > 1e-2


# -- explicit gauge transformations --------------------------------------------------------

def test_chi_examples():
    np.testing.assert_allclose(dfm.chi(1, ORIGIN), 0.5j * alg.SIGMA1)
    np.testing.assert_allclose(dfm.chi(2, ORIGIN), 0.5j * alg.SIGMA2)


def test_chi_errors():
    with pytest.raises(ValueError):
        dfm.chi(4, ORIGIN)
    with pytest.raises(ValueError):
        dfm.chi(3, ORIGIN, "other")


@pytest.mark.parametrize("j", [1, 2, 3])
def test_rotation_acts_as_gauge(j):
    g = dfm.gauge_mode(CFG, lambda q: dfm.chi(j, q))
    assert maxabs(interior(f"X{j}", CFG.field_strength(PTS20), PTS20) - g.a(PTS20)) < 1e-10
    assert maxabs(contract(f"X{j}", CFG.higgs_gradient(PTS20), PTS20) - g.phi(PTS20)) < 1e-10


@pytest.mark.parametrize("variant", ["transcribed", "bare"])
def test_other_chi3_variants_break_the_identity(variant):
    g = dfm.gauge_mode(CFG, lambda q: dfm.chi(3, q, variant))
    assert maxabs(interior("X3", CFG.field_strength(PTS20), PTS20) - g.a(PTS20)) > 1e-2


@pytest.mark.parametrize("j", [1, 2, 3])
def test_boost_plus_i_chi_has_spinor_form(j):
    g = dfm.gauge_mode(CFG, lambda q: dfm.chi(j, q))
    t = dfm.tangent_vector_spinor(CFG, j)
    a = interior(f"Y{j}", CFG.field_strength(PTS20), PTS20) + 1j * g.a(PTS20)
    phi = contract(f"Y{j}", CFG.higgs_gradient(PTS20), PTS20) + 1j * g.phi(PTS20)
    assert maxabs(a - t.a(PTS20)) < 1e-6 and maxabs(phi - t.phi(PTS20)) < 1e-6


# -- pluricomplex structure --------------------------------------------------------------

def test_J_examples():
    np.testing.assert_allclose(dfm.pluricomplex_J(1, 0, 0, 0, 0.7), (0, 1, 0, 0))
    np.testing.assert_allclose(dfm.pluricomplex_J(0, 0, 0, 1, 2.0), (0, 0, -0.5, 0))
    twice = dfm.pluricomplex_J(*dfm.pluricomplex_J(1, 2, 3, 4, 2.0), 2.0)
    np.testing.assert_allclose(twice, (-1, -2, -3, -4))


def test_J_rejects_nonpositive_rho():
    with pytest.raises(ValueError):
        dfm.pluricomplex_J(1, 0, 0, 0, 0.0)


@given(st.lists(st.floats(-10, 10), min_size=4, max_size=4), st.floats(0.05, 20))
def test_J_squares_to_minus_one(v, rho):
    twice = dfm.pluricomplex_J(*dfm.pluricomplex_J(*v, rho), rho)
    np.testing.assert_allclose(twice, -np.array(v), atol=1e-12 * (1 + max(abs(c) for c in v)))


@settings(max_examples=30)
@given(st.integers(0, 2 ** 32 - 1))
def test_real_tangent_spinor_reconstruction(seed):
    rng = np.random.default_rng(seed)
    p = Point(*rng.uniform([-2, -2, 0.2], [2, 2, 3]))
    a = alg.from_su2_coefficients(rng.normal(size=(3, 3)))
    phi = alg.from_su2_coefficients(rng.normal(size=3))
    nu = dfm.real_tangent_nu(a[0], a[1], a[2], phi, p.rho)
    s = dfm.psi1(p)
    rebuilt = alg.tensor(nu, alg.dual(s)) + alg.tensor(alg.conj_gauge_spinor(nu), alg.dual(alg.conj_spinor(s)))
    assert maxabs(rebuilt - alg.cl(a[0], a[1], a[2], phi, p.rho)) < 1e-10

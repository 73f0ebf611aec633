"""Pointwise verification suites run by ``hypermono verify``.

Each suite returns a list of :class:`~hypermono.report.Result`.  Residual
checks use finite differences at step ``h``; algebraic identities are checked
to ``ALG_TOL``.
"""

import numpy as np

from . import algebra as alg
from . import deformations as dfm
from . import geometry as geo
from .monopole import (bogomolny_residual, energy_density, field_strength_fd, gauge_transform,
                       harmonic_f, one_monopole)
from .report import Result

RESIDUAL_TOL = 1e-5
ALG_TOL = 1e-10
ORDER_MIN = 1.7
ORDER_STEPS = (1e-3, 5e-4, 2.5e-4)
SUITES = ("algebra", "geometry", "monopole", "deformations")


def _maxabs(a):
    return float(np.max(np.abs(a)))


def _random_su2(rng, shape):
    return alg.from_su2_coefficients(rng.normal(size=tuple(shape) + (3,)))


def _random_sl2(rng, shape):
    return _random_su2(rng, shape) + 1j * _random_su2(rng, shape)


def algebra_suite(points, seed, fd):
    rng = np.random.default_rng(seed)
    n = points.shape
    out = []

    prod = np.einsum("iab,jbc->ijac", alg.PAULI, alg.PAULI)
    eps = np.zeros((3, 3, 3))
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        eps[i, j, k], eps[j, i, k] = 1, -1
    want = np.einsum("ij,ab->ijab", np.eye(3), alg.I2) + 1j * np.einsum("ijk,kab->ijab", eps, alg.PAULI)
    out.append(Result.residual("pauli_products", _maxabs(prod - want), ALG_TOL))

    out.append(Result.residual("cl_volume_is_identity",
                               _maxabs(alg.volume_element(points.rho) - alg.I2), ALG_TOL))

    a = _random_sl2(rng, n + (3,))
    ph = _random_sl2(rng, n)
    b = alg.cl(a[..., 0, :, :], a[..., 1, :, :], a[..., 2, :, :], ph, points.rho)
    a2, ph2 = alg.cl_inverse(b, points.rho)
    out.append(Result.residual("cl_inverse_roundtrip", max(_maxabs(a2 - a), _maxabs(ph2 - ph)), ALG_TOL))

    s1 = rng.normal(size=n + (2,)) + 1j * rng.normal(size=n + (2,))
    s2 = rng.normal(size=n + (2,)) + 1j * rng.normal(size=n + (2,))
    nu1 = rng.normal(size=n + (2, 2, 2)) + 1j * rng.normal(size=n + (2, 2, 2))
    nu2 = rng.normal(size=n + (2, 2, 2)) + 1j * rng.normal(size=n + (2, 2, 2))
    m1, m2 = alg.decompose(alg.recompose(nu1, nu2, s1, s2), s1, s2)
    out.append(Result.residual("decompose_tensor_roundtrip", max(_maxabs(m1 - nu1), _maxabs(m2 - nu2)), ALG_TOL))

    out.append(Result.residual("conj_spinor_squares_to_minus_one",
                               _maxabs(alg.conj_spinor(alg.conj_spinor(s1)) + s1), ALG_TOL))
    h = alg.hermitian(s1, s1)
    out.append(Result.residual("hermitian_form_positive",
                               max(_maxabs(h.imag), float(np.max(np.abs(s1) ** 2 @ [1, 1] - h.real))), ALG_TOL))

    v = rng.normal(size=n + (3,))
    out.append(Result.residual("su2_coefficients_roundtrip",
                               _maxabs(alg.su2_coefficients(alg.from_su2_coefficients(v)) - v), ALG_TOL))
    return out


def geometry_suite(points, seed, fd):
    out = []
    for kind in ("X1", "X2", "X3", "Y1", "Y2", "Y3"):
        out.append(Result.residual(f"killing_{kind}", geo.killing_residual(kind, points, fd), RESIDUAL_TOL))

    # so(3,1) structure constants
    worst = 0.0
    for i, j, k in ((1, 2, 3), (2, 3, 1), (3, 1, 2)):
        xk, yk = geo.killing_field(f"X{k}", points), geo.killing_field(f"Y{k}", points)
        worst = max(worst,
                    _maxabs(geo.lie_bracket(f"X{i}", f"X{j}", points) + xk),
                    _maxabs(geo.lie_bracket(f"Y{i}", f"Y{j}", points) - xk),
                    _maxabs(geo.lie_bracket(f"X{i}", f"Y{j}", points) + yk))
    out.append(Result.residual("killing_brackets", worst, ALG_TOL))

    origin = geo.Point(0.0, 0.0, 1.0)
    ys = np.stack([geo.killing_field(f"Y{j}", origin) for j in (1, 2, 3)])
    gram = geo.metric_pair(ys[:, None, :], ys[None, :, :], origin)
    out.append(Result.residual("boosts_orthonormal_at_origin", _maxabs(gram - np.eye(3)), ALG_TOL))

    rng = np.random.default_rng(seed)
    a = rng.normal(size=points.shape + (3, 2, 2))
    star2 = geo.hodge_two(geo.hodge_one(a, points.rho), points.rho)
    out.append(Result.residual("hodge_star_involution", _maxabs(star2 - a), ALG_TOL))

    res = [geo.killing_residual("Y1", points, geo.FDScheme(h)) for h in ORDER_STEPS]
    order = geo.convergence_order(ORDER_STEPS, res)
    out.append(Result(f"killing_fd_order", order, ORDER_MIN, passed=order >= ORDER_MIN))
    return out


def monopole_suite(points, seed, fd):
    cfg = one_monopole()
    out = [Result.residual("bogomolny", bogomolny_residual(cfg, points, fd), RESIDUAL_TOL)]
    out.append(Result.residual("curvature_closed_form_vs_fd",
                               _maxabs(field_strength_fd(cfg, points, fd) - cfg.field_strength(points)),
                               RESIDUAL_TOL))
    out.append(Result.residual("higgs_gradient_closed_form_vs_fd",
                               _maxabs(geo.cov_gradient(cfg.A, cfg.Phi, points, fd) - cfg.higgs_gradient(points)),
                               RESIDUAL_TOL))
    f = harmonic_f(points)
    out.append(Result.residual("energy_density_closed_form",
                               _maxabs(energy_density(cfg, points) - 3 * points.rho ** 4 * f ** 2), ALG_TOL))
    fields_ok = (alg.is_antihermitian(cfg.A(points)) and alg.is_traceless(cfg.A(points))
                 and alg.is_antihermitian(cfg.Phi(points)) and alg.is_traceless(cfg.Phi(points)))
    out.append(Result("fields_in_su2", fields_ok, 0.0, passed=fields_ok))

    edge = geo.Point(points.x, points.y, np.full(points.shape, 1e-6))
    mass = np.sqrt(-0.5 * alg.trace(cfg.Phi(edge) @ cfg.Phi(edge)).real)
    out.append(Result.compare("higgs_boundary_eigenvalue", float(np.max(mass)), float(cfg.p_mass), 1e-5))

    moved = one_monopole(0.4, -0.2, 1.7)
    out.append(Result.residual("bogomolny_moved_center", bogomolny_residual(moved, points, fd), RESIDUAL_TOL))
    dyon = gauge_transform(cfg, 0.3)
    out.append(Result.residual("bogomolny_after_higgs_gauge", bogomolny_residual(dyon, points, fd), RESIDUAL_TOL))
    out.append(Result.residual("curvature_after_higgs_gauge",
                               _maxabs(field_strength_fd(dyon, points, fd) - dyon.field_strength(points)),
                               RESIDUAL_TOL))

    res = [bogomolny_residual(cfg, points, geo.FDScheme(h)) for h in ORDER_STEPS]
    order = geo.convergence_order(ORDER_STEPS, res)
    out.append(Result("bogomolny_fd_order", order, ORDER_MIN, passed=order >= ORDER_MIN))
    return out


def deformations_suite(points, seed, fd):
    cfg = one_monopole()
    out = []
    for name, psi in (("psi1", dfm.psi1), ("psi2", dfm.psi2)):
        out.append(Result.residual(f"killing_spinor_{name}", dfm.killing_spinor_residual(psi, points, fd),
                                   RESIDUAL_TOL))
        d = geo.dirac_spinor(psi, points, fd)
        out.append(Result.residual(f"dirac_on_{name}", _maxabs(d - 1.5j * psi(points)), RESIDUAL_TOL))
    out.append(Result.residual("spinor_pairing_normalised",
                               _maxabs(alg.pair(dfm.psi1(points), dfm.psi2(points)) - 1), ALG_TOL))

    nus = dfm.eigenspinors(cfg)
    nus_cl = dfm.eigenspinors_cl(cfg)
    out.append(Result.residual("eigenspinors_two_routes",
                               max(_maxabs(nus[i](points) - nus_cl[i](points)) for i in range(2)), ALG_TOL))
    for i in range(2):
        out.append(Result.residual(f"dirac_eigen_nu{i + 1}", dfm.dirac_eigen_residual(cfg, nus[i], points, fd),
                                   RESIDUAL_TOL))
    f = harmonic_f(points)
    out.append(Result.residual("trace_pair_nu1_nu2",
                               _maxabs(alg.trace_pair(nus[0](points), nus[1](points)) + 6 * points.rho ** 4 * f ** 2),
                               ALG_TOL))

    for mu in range(4):
        d = dfm.tangent_vector(cfg, mu)
        s = dfm.tangent_vector_spinor(cfg, mu)
        out.append(Result.residual(f"spinor_form_mu{mu}",
                                   max(_maxabs(d.a(points) - s.a(points)), _maxabs(d.phi(points) - s.phi(points))),
                                   ALG_TOL))
        out.append(Result.residual(f"gauge_fixing_mu{mu}", dfm.gauge_fix_residual(cfg, d, -1, points, fd),
                                   RESIDUAL_TOL))
        out.append(Result.residual(f"linearised_bogomolny_mu{mu}", dfm.lin_bogomolny_residual(cfg, d, points, fd),
                                   RESIDUAL_TOL))

    for j in (1, 2, 3):
        g = dfm.gauge_mode(cfg, lambda q, j=j: dfm.chi(j, q))
        xj = geo.killing_field(f"X{j}", points)
        lhs_a = dfm._interior(xj, cfg.field_strength(points))
        lhs_phi = np.einsum("...k,...kgh->...gh", xj, cfg.higgs_gradient(points))
        out.append(Result.residual(f"rotation_is_gauge_chi{j}",
                                   max(_maxabs(lhs_a - g.a(points)), _maxabs(lhs_phi - g.phi(points))), ALG_TOL))
        yj = geo.killing_field(f"Y{j}", points)
        t = dfm.tangent_vector_spinor(cfg, j)
        ya = dfm._interior(yj, cfg.field_strength(points)) + 1j * g.a(points)
        yphi = np.einsum("...k,...kgh->...gh", yj, cfg.higgs_gradient(points)) + 1j * g.phi(points)
        out.append(Result.residual(f"boost_plus_i_chi{j}_spinor_form",
                                   max(_maxabs(ya - t.a(points)), _maxabs(yphi - t.phi(points))), ALG_TOL))

    y1 = geo.killing_field("Y1", points)
    err = max(_maxabs(dfm._interior(y1, cfg.field_strength(points)) - dfm.y1_interior_F(points)),
              _maxabs(np.einsum("...k,...kgh->...gh", y1, cfg.higgs_gradient(points)) - dfm.y1_interior_dphi(points)))
    out.append(Result.residual("boost_y1_closed_forms", err, ALG_TOL))

    rng = np.random.default_rng(seed)
    comps = rng.normal(size=(4,) + points.shape)
    twice = dfm.pluricomplex_J(*dfm.pluricomplex_J(*comps, points.rho), points.rho)
    out.append(Result.residual("pluricomplex_J_squared", _maxabs(np.stack(twice) + comps), ALG_TOL))

    a = _random_su2(rng, points.shape + (3,))
    ph = _random_su2(rng, points.shape)
    nu = dfm.real_tangent_nu(a[..., 0, :, :], a[..., 1, :, :], a[..., 2, :, :], ph, points.rho[..., None, None])
    p1 = dfm.psi1(points)
    rebuilt = (alg.tensor(nu, alg.dual(p1))
               + alg.tensor(alg.conj_gauge_spinor(nu), alg.dual(alg.conj_spinor(p1))))
    want = alg.cl(a[..., 0, :, :], a[..., 1, :, :], a[..., 2, :, :], ph, points.rho)
    out.append(Result.residual("real_tangent_spinor_form", _maxabs(rebuilt - want), ALG_TOL))
    return out


_RUNNERS = {"algebra": algebra_suite, "geometry": geometry_suite,
            "monopole": monopole_suite, "deformations": deformations_suite}


def run_suite(name, points=10, seed=42, h=1e-4):
    """Run one suite (or ``"all"``) at ``points`` seeded random points."""
    names = SUITES if name == "all" else (name,)
    for n in names:
        if n not in _RUNNERS:
            raise ValueError(f"unknown suite {name!r}")
    pts = geo.random_points(points, seed)
    fd = geo.FDScheme(h)
    out = []
    for n in names:
        for r in _RUNNERS[n](pts, seed, fd):
            r.name = f"{n}.{r.name}"
            out.append(r)
    return out

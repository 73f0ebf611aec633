"""Killing spinors, Dirac eigenspinors and the symmetry-induced tangent vectors.

A tangent vector ``(a, phi)`` to the moduli space is represented by a
:class:`Deformation`, whose evaluators return ``a`` as ``(..., 3, 2, 2)`` and
``phi`` as ``(..., 2, 2)``.  ``phi`` doubles as the ``d theta`` component of
the circle-invariant 1-form ``b = a + phi d theta``.

Only the Killing spinors with Killing constant ``-i/2`` have closed forms
here; their partners are reached through :func:`hypermono.algebra.conj_spinor`.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import algebra as alg
from .geometry import (UNIT_CENTER, FDScheme, Point, cov_curl, cov_div, cov_gradient, cov_deriv_spinor,
                       dirac, flat_to_frame, killing_field, partial)
from .monopole import field_strength, higgs_gradient, one_monopole

KILLING_CONSTANT = -0.5j


# -- Killing spinors ---------------------------------------------------------

def psi1(p, center=UNIT_CENTER):
    lam = center[2]
    s = (np.asarray(p.rho, dtype=float) / lam) ** -0.5
    return np.stack([s, np.zeros_like(s)], axis=-1).astype(complex)


def psi2(p, center=UNIT_CENTER):
    """``rho^-1/2 (-x + i y, rho)``; with ``center`` the transported spinor."""
    x0, y0, lam = center
    x, y, r = (np.asarray(c, dtype=float) for c in p.coords())
    s = (lam * r) ** -0.5
    return np.stack([s * (-(x - x0) + 1j * (y - y0)), s * r], axis=-1)


def killing_spinor_residual(psi, p, fd=FDScheme()):
    """Max over coordinate directions of ``|nabla_X psi + (i/2) X . psi|``."""
    worst = 0.0
    for k in range(3):
        d = np.zeros(3)
        d[k] = 1.0
        lhs = cov_deriv_spinor(psi, d, p, fd)
        rhs = KILLING_CONSTANT * np.einsum("...st,...t->...s", flat_to_frame(d, p), psi(p))
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


def lifted_killing_spinors(p, theta=0.0):
    """The Killing spinors rescaled and re-framed as spinors on the 4-sphere.

    Both components stay bounded as ``rho -> 0``.
    """
    x, y, r = (np.asarray(c, dtype=float) for c in p.coords())
    w = (4.0 / (1 + x * x + y * y + r * r)) ** 0.25
    t1 = np.stack([w, np.zeros_like(w)], axis=-1).astype(complex)
    t2 = np.stack([w * (-x + 1j * y), w * r * np.exp(1j * theta)], axis=-1)
    return t1, t2


# -- eigenspinors ----------------------------------------------------------------

@dataclass(frozen=True)
class EigenSpinorField:
    nu: Callable[[Point], np.ndarray]
    eigen_sign: int = -1

    def __call__(self, p):
        return self.nu(p)


def eigenspinors(cfg):
    """``nu_alpha = F . psi_alpha`` written out in components.

    The Killing spinors are those transported to the monopole centre.
    """
    x0, y0, lam = cfg.center

    def nu1(p):
        f = field_strength(cfg, p)
        c = -1j * lam ** 0.5 * (np.asarray(p.rho, dtype=float) ** 1.5)[..., None, None]
        fxy, fyr, frx = f[..., 0, :, :], f[..., 1, :, :], f[..., 2, :, :]
        return np.stack([c * fxy, c * (fyr + 1j * frx)], axis=-3)

    def nu2(p):
        f = field_strength(cfg, p)
        x, y, r = (np.asarray(c, dtype=float)[..., None, None] for c in p.coords())
        c = 1j * r ** 1.5 / lam ** 0.5
        z = (x - x0) - 1j * (y - y0)
        fxy, fyr, frx = f[..., 0, :, :], f[..., 1, :, :], f[..., 2, :, :]
        top = z * fxy - r * (fyr - 1j * frx)
        bottom = z * (fyr + 1j * frx) + r * fxy
        return np.stack([c * top, c * bottom], axis=-3)

    return EigenSpinorField(nu1), EigenSpinorField(nu2)


def eigenspinors_cl(cfg):
    """Same fields computed as ``cl(F) psi_alpha`` (independent route)."""
    def make(psi):
        def nu(p):
            f = field_strength(cfg, p)
            b = alg.cl_two_form(f[..., 0, :, :], f[..., 1, :, :], f[..., 2, :, :], p.rho)
            return alg.apply(b, psi(p, cfg.center))
        return EigenSpinorField(nu)

    return make(psi1), make(psi2)


def dirac_eigen_residual(cfg, nu, p, fd=FDScheme(), sign=-1):
    """Max-norm of ``D^A nu - [Phi, nu] - sign (i/2) nu``."""
    val = nu(p)
    ph = cfg.Phi(p)[..., None, :, :]
    res = dirac(cfg.A, nu, p, fd) - (ph @ val - val @ ph) - sign * 0.5j * val
    return float(np.max(np.abs(res)))


# -- tangent vectors -------------------------------------------------------------

@dataclass(frozen=True)
class Deformation:
    a: Callable[[Point], np.ndarray]
    phi: Callable[[Point], np.ndarray]
    label: str = "custom"

    def at(self, p):
        return self.a(p), self.phi(p)


# coefficients C[alpha, beta] of nu_alpha (x) psi_beta^* for each tangent vector
SPINOR_COEFFS = {
    0: np.array([[0, 1], [-1, 0]], dtype=complex),
    1: np.array([[-1j, 0], [0, 1j]]),
    2: np.array([[-1, 0], [0, -1]], dtype=complex),
    3: np.array([[0, 1j], [1j, 0]]),
}


def _interior(z, form):
    """``Z -| F`` for a 2-form ``(xy, yrho, rhox)``: returns a 1-form."""
    zx, zy, zr = (z[..., k, None, None] for k in range(3))
    fxy, fyr, frx = form[..., 0, :, :], form[..., 1, :, :], form[..., 2, :, :]
    # (Z -| F)_i = Z^k F_ki
    ax = zy * (-fxy) + zr * frx
    ay = zx * fxy - zr * fyr
    ar = -zx * frx + zy * fyr
    return np.stack([ax, ay, ar], axis=-3)


def tangent_vector(cfg, mu):
    """The four symmetry-induced tangent vectors.

    ``mu = 0`` is ``(d^A Phi, 0)``; ``mu = j`` is ``(Z_j -| F, Z_j -| d^A Phi)``
    with the Killing fields transported to the monopole centre.
    """
    if mu == 0:
        def a(p):
            return higgs_gradient(cfg, p)

        def phi(p):
            return np.zeros(tuple(p.shape) + (2, 2), dtype=complex)

        return Deformation(a, phi, "mu0")
    if mu not in (1, 2, 3):
        raise ValueError("mu must be 0, 1, 2 or 3")
    kind = f"Z{mu}"

    def a(p):
        return _interior(killing_field(kind, p, cfg.center), field_strength(cfg, p))

    def phi(p):
        z = killing_field(kind, p, cfg.center)
        return np.einsum("...k,...kgh->...gh", z, higgs_gradient(cfg, p))

    return Deformation(a, phi, f"mu{mu}")


def tangent_vectors_at(cfg, p):
    """All four tangent vectors at ``p``: ``a`` as ``(..., 4, 3, 2, 2)``, ``phi`` as ``(..., 4, 2, 2)``.

    Shares one evaluation of ``F`` and ``d^A Phi`` across the four.
    """
    f = field_strength(cfg, p)
    dphi = higgs_gradient(cfg, p)
    a = [dphi]
    phi = [np.zeros_like(dphi[..., 0, :, :])]
    for j in (1, 2, 3):
        z = killing_field(f"Z{j}", p, cfg.center)
        a.append(_interior(z, f))
        phi.append(np.einsum("...k,...kgh->...gh", z, dphi))
    return np.stack(a, axis=-4), np.stack(phi, axis=-3)


def tangent_vector_spinor(cfg, mu):
    """The tangent vector ``mu`` rebuilt from ``sum C[a,b] nu_a (x) psi_b^*``."""
    nus = eigenspinors(cfg)
    psis = (psi1, psi2)
    coeff = SPINOR_COEFFS[mu]

    def block(p):
        out = 0
        for al in range(2):
            nu = nus[al](p)
            for be in range(2):
                if coeff[al, be] != 0:
                    out = out + coeff[al, be] * alg.tensor(nu, alg.dual(psis[be](p, cfg.center)))
        return out

    def a(p):
        return alg.cl_inverse(block(p), p.rho)[0]

    def phi(p):
        return alg.cl_inverse(block(p), p.rho)[1]

    return Deformation(a, phi, f"mu{mu}-spinor")


def cl_deformation(d, p):
    a, phi = d.at(p)
    return alg.cl(a[..., 0, :, :], a[..., 1, :, :], a[..., 2, :, :], phi, p.rho)


def gauge_fix_residual(cfg, d, sign, p, fd=FDScheme()):
    """Max-norm of ``*d^A*a + [Phi, phi] + sign 2i phi``."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    ph = cfg.Phi(p)
    phi = d.phi(p)
    res = cov_div(cfg.A, d.a, p, fd) + alg.commutator(ph, phi) + sign * 2j * phi
    return float(np.max(np.abs(res)))


def lin_bogomolny_residual(cfg, d, p, fd=FDScheme()):
    """Max-norm of ``d^A phi + [a, Phi] - *d^A a``."""
    ph = cfg.Phi(p)[..., None, :, :]
    a = d.a(p)
    res = cov_gradient(cfg.A, d.phi, p, fd) + (a @ ph - ph @ a) - cov_curl(cfg.A, d.a, p, fd)
    return float(np.max(np.abs(res)))


INNER_FD = FDScheme(h=1e-3, order=4)


def gauge_mode(cfg, chi, fd=INNER_FD, label="gauge"):
    """Infinitesimal gauge transformation ``(d^A chi, [Phi, chi])``.

    ``d^A chi`` uses a fourth-order stencil so the result can itself be
    differentiated numerically.
    """
    def a(p):
        q = fd if fd.h is None or fd.h < np.min(np.asarray(p.rho)) / 2 else FDScheme(None, 4)
        return cov_gradient(cfg.A, chi, p, q)

    def phi(p):
        return alg.commutator(cfg.Phi(p), chi(p))

    return Deformation(a, phi, label)


# -- explicit gauge transformations for the centred unit monopole -----------------

CHI3_VARIANTS = ("corrected", "transcribed", "bare")


def chi(j, p, variant="corrected"):
    """Closed-form ``chi_j`` with ``X_j -| (F, d^A Phi) = (d^A chi_j, [Phi, chi_j])``.

    ``chi_3`` comes in three variants: ``"corrected"`` is
    ``i sigma3 / (1 + |x|^2) - Phi`` and satisfies the identity above;
    ``"transcribed"`` carries ``+Phi`` instead and does not; ``"bare"`` has no
    ``Phi`` term.  ``variant`` is ignored for ``j = 1, 2``.
    """
    if variant not in CHI3_VARIANTS:
        raise ValueError(f"variant must be one of {CHI3_VARIANTS}")
    x, y, r = (np.asarray(c, dtype=float)[..., None, None] for c in p.coords())
    den = 1 + x * x + y * y + r * r
    if j == 1:
        return 1j * (r * alg.SIGMA1 - x * alg.SIGMA3) / den
    if j == 2:
        return 1j * (r * alg.SIGMA2 - y * alg.SIGMA3) / den
    if j == 3:
        out = 1j * alg.SIGMA3 / den
        if variant == "bare":
            return out
        ph = one_monopole().Phi(p)
        return out - ph if variant == "corrected" else out + ph
    raise ValueError("j must be 1, 2 or 3")


def y1_interior_F(p):
    """Transcribed closed form of ``Y_1 -| F`` for the centred unit monopole."""
    x, y, r = (np.asarray(c, dtype=float)[..., None, None] for c in p.coords())
    n2 = x * x + y * y + r * r
    c = 1j / (1 + n2) ** 2
    q = 1 - x * x + y * y + r * r
    ax = c * 2 * x * (y * alg.SIGMA3 - r * alg.SIGMA2)
    ay = c * (2 * x * r * alg.SIGMA1 + q * alg.SIGMA3)
    ar = -c * (2 * x * y * alg.SIGMA1 + q * alg.SIGMA2)
    return np.stack([ax, ay, ar], axis=-3)


def y1_interior_dphi(p):
    """Transcribed closed form of ``Y_1 -| d^A Phi`` for the centred unit monopole."""
    x, y, r = (np.asarray(c, dtype=float)[..., None, None] for c in p.coords())
    n2 = x * x + y * y + r * r
    q = 1 - x * x + y * y + r * r
    return 1j * r / (1 + n2) ** 2 * (2 * x * (y * alg.SIGMA2 + r * alg.SIGMA3) - q * alg.SIGMA1)


# -- pluricomplex structure and real tangent vectors -------------------------------

def pluricomplex_J(a_x, a_y, a_rho, phi, rho):
    """``(a_x, a_y, a_rho, phi) -> (-a_y, a_x, -phi/rho, rho a_rho)``."""
    if np.any(np.asarray(rho) <= 0):
        raise ValueError("rho must be positive")
    return -a_y, a_x, -phi / rho, rho * a_rho


def real_tangent_nu(a_x, a_y, a_rho, phi, rho):
    """``nu = -i rho^(3/2) (a_x - i a_y, -a_rho + i phi / rho)`` as a gauge spinor."""
    c = -1j * rho ** 1.5
    return np.stack([c * (a_x - 1j * a_y), c * (-a_rho + 1j * phi / rho)], axis=-3)

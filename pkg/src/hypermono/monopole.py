"""The charge-1 hyperbolic monopole with mass parameter 1/2, in closed form.

Fields are evaluators ``Point -> ndarray``: the connection returns
``(..., 3, 2, 2)`` ordered ``(x, y, rho)``, the Higgs field ``(..., 2, 2)`` and
the field strength ``(..., 3, 2, 2)`` ordered ``(xy, yrho, rhox)``.
"""

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .algebra import PAULI, SIGMA1, SIGMA2, SIGMA3, commutator, su2_coefficients, trace
from .geometry import FDScheme, Point, cov_gradient, gradient_stack, hodge_two


@dataclass(frozen=True)
class FieldConfig:
    """A monopole ``(A, Phi)`` given by stateless evaluators.

    ``field_strength`` and ``higgs_gradient`` are optional closed forms of
    ``F^A`` and ``d^A Phi``; when absent, callers fall back to finite
    differences.
    """

    n: int
    p_mass: Fraction
    center: tuple
    A: Callable[[Point], np.ndarray]
    Phi: Callable[[Point], np.ndarray]
    field_strength: Optional[Callable[[Point], np.ndarray]] = None
    higgs_gradient: Optional[Callable[[Point], np.ndarray]] = None

    @property
    def energy(self):
        """The Bogomolny bound ``2 pi n p``."""
        return 2 * np.pi * self.n * float(self.p_mass)


def _m(c):
    return np.asarray(c, dtype=float)[..., None, None]


def _rel(p, center):
    x0, y0, lam = center
    X = np.asarray(p.x, dtype=float) - x0
    Y = np.asarray(p.y, dtype=float) - y0
    r = np.asarray(p.rho, dtype=float)
    return X, Y, r, lam * lam + X * X + Y * Y + r * r


def harmonic_f(p, center=(0.0, 0.0, 1.0)):
    """``f = 2 lambda^2 / (|x - x0|^2 + lambda^2)^2``."""
    *_, d = _rel(p, center)
    lam = center[2]
    return 2 * lam * lam / d ** 2


def one_monopole(x0=0.0, y0=0.0, lam=1.0):
    """Charge-1, mass-1/2 monopole centred at ``(x0, y0, lam)`` in upper half-space."""
    if not lam > 0:
        raise ValueError("lambda must be positive")
    center = (float(x0), float(y0), float(lam))

    def A(p):
        X, Y, r, d = _rel(p, center)
        c = 1j / _m(d)
        ax = c * (_m(r) * SIGMA2 - _m(Y) * SIGMA3)
        ay = c * (_m(X) * SIGMA3 - _m(r) * SIGMA1)
        ar = c * (_m(Y) * SIGMA1 - _m(X) * SIGMA2)
        return np.stack([ax, ay, ar], axis=-3)

    def Phi(p):
        X, Y, r, d = _rel(p, center)
        return 0.5j * SIGMA3 - 1j * _m(r / d) * (_m(r) * SIGMA3 + _m(X) * SIGMA1 + _m(Y) * SIGMA2)

    def F(p):
        f = _m(harmonic_f(p, center))
        return np.stack([1j * f * SIGMA3, 1j * f * SIGMA1, 1j * f * SIGMA2], axis=-3)

    def dPhi(p):
        X, Y, r, d = _rel(p, center)
        u = r / d
        v = _m(r) * SIGMA3 + _m(X) * SIGMA1 + _m(Y) * SIGMA2
        du = (-2 * r * X / d ** 2, -2 * r * Y / d ** 2, 1 / d - 2 * r * r / d ** 2)
        partials = [-1j * (_m(du[k]) * v + _m(u) * s) for k, s in enumerate((SIGMA1, SIGMA2, SIGMA3))]
        a = A(p)
        ph = Phi(p)
        return np.stack([partials[k] + commutator(a[..., k, :, :], ph) for k in range(3)], axis=-3)

    return FieldConfig(1, Fraction(1, 2), center, A, Phi, F, dPhi)


def field_strength(cfg, p):
    """Closed-form ``F^A`` if the configuration has one, else the finite-difference curl."""
    if cfg.field_strength is not None:
        return cfg.field_strength(p)
    return field_strength_fd(cfg, p)


def field_strength_fd(cfg, p, fd=FDScheme()):
    """``F_ij = d_i A_j - d_j A_i + [A_i, A_j]`` with central differences."""
    d = gradient_stack(cfg.A, p, fd)  # [..., k, j] = d_k A_j
    a = cfg.A(p)

    def comp(i, j):
        return d[..., i, j, :, :] - d[..., j, i, :, :] + commutator(a[..., i, :, :], a[..., j, :, :])

    return np.stack([comp(0, 1), comp(1, 2), comp(2, 0)], axis=-3)


def higgs_gradient(cfg, p, fd=FDScheme()):
    """``d^A Phi``: closed form when available, otherwise finite differences."""
    if cfg.higgs_gradient is not None:
        return cfg.higgs_gradient(p)
    return cov_gradient(cfg.A, cfg.Phi, p, fd)


def bogomolny_residual(cfg, p, fd=FDScheme()):
    """Max-norm of ``d^A Phi - *F`` with ``d^A Phi`` by finite differences."""
    lhs = cov_gradient(cfg.A, cfg.Phi, p, fd)
    rhs = hodge_two(field_strength(cfg, p), p.rho)
    return float(np.max(np.abs(lhs - rhs)))


def energy_density(cfg, p):
    """Integrand of the energy against the hyperbolic volume form.

    ``-1/4 Tr(|d^A Phi|^2 + |F|^2)`` with ``|a|^2 = rho^2 sum a_k^2`` and
    ``|F|^2 = rho^4 sum F_ij^2``.
    """
    r2 = np.asarray(p.rho, dtype=float) ** 2
    dphi = higgs_gradient(cfg, p)
    f = field_strength(cfg, p)
    t_higgs = np.sum(trace(dphi @ dphi), axis=-1)
    t_curv = np.sum(trace(f @ f), axis=-1)
    return (-0.25 * (r2 * t_higgs + r2 * r2 * t_curv)).real


def zero_fields():
    def zero_form(p):
        return np.zeros(tuple(p.shape) + (3, 2, 2), dtype=complex)

    def zero_scalar(p):
        return np.zeros(tuple(p.shape) + (2, 2), dtype=complex)

    return FieldConfig(0, Fraction(0), (0.0, 0.0, 1.0), zero_form, zero_scalar, zero_form, zero_form)


# -- Higgs gauge transformations g_s = exp(s Phi) ----------------------------

def su2_exp(m):
    """``exp(m)`` for traceless antihermitian ``m = i v.sigma``."""
    v = su2_coefficients(m).real
    t = np.linalg.norm(v, axis=-1)
    return np.cos(t)[..., None, None] * np.eye(2) + np.sinc(t / np.pi)[..., None, None] * m


def su2_dexp(m, dm):
    """Left-trivialised derivative ``exp(-m) d exp(m)`` along ``dm``.

    With ``theta = 2|v|``: ``dm_par + sin(theta)/theta dm_perp
    - (1 - cos theta)/theta^2 [m, dm]``.
    """
    v = su2_coefficients(m).real
    w = su2_coefficients(dm).real
    t = np.linalg.norm(v, axis=-1)
    theta = 2 * t
    safe = np.where(t > 0, t, 1.0)
    vhat = v / safe[..., None]
    w_par = np.where((t > 0)[..., None], np.sum(w * vhat, axis=-1)[..., None] * vhat, 0.0)
    par = 1j * np.einsum("...k,kij->...ij", w_par, PAULI)
    perp = dm - par
    s = np.sinc(theta / np.pi)
    half = np.sinc(theta / (2 * np.pi))
    c = 0.5 * half * half  # (1 - cos theta) / theta^2
    return par + s[..., None, None] * perp - c[..., None, None] * commutator(m, dm)


def gauge_transform(cfg, s):
    """The monopole transformed by ``g = exp(s Phi)``: ``A^s = g^-1 A g + g^-1 dg``.

    The Higgs field commutes with ``g`` and is unchanged.
    """
    s = float(s)

    def A(p):
        ph = cfg.Phi(p)
        g = su2_exp(s * ph)
        gi = np.conj(np.swapaxes(g, -1, -2))
        a = cfg.A(p)
        dphi = higgs_gradient(cfg, p)
        out = []
        for k in range(3):
            ak = a[..., k, :, :]
            dk = dphi[..., k, :, :] - commutator(ak, ph)  # plain partial of Phi
            out.append(gi @ ak @ g + su2_dexp(s * ph, s * dk))
        return np.stack(out, axis=-3)

    def conj(fn):
        def wrapped(p):
            g = su2_exp(s * cfg.Phi(p))[..., None, :, :]
            gi = np.conj(np.swapaxes(g, -1, -2))
            return gi @ fn(p) @ g
        return wrapped

    F = conj(cfg.field_strength) if cfg.field_strength is not None else None
    dPhi = conj(cfg.higgs_gradient) if cfg.higgs_gradient is not None else None
    return replace(cfg, A=A, field_strength=F, higgs_gradient=dPhi)

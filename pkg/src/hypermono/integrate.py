"""Deterministic quadrature over H^3 and the integral invariants of a monopole.

Every integral is a tensor-product Gauss-Legendre rule on ``(-1, 1)^3`` pulled
back through

    x   = x0 + c u / (1 - u^2)
    y   = y0 + c v / (1 - v^2)
    rho = c (1 + w) / (1 - w)

with the Jacobians and the hyperbolic weight ``rho^-3`` folded into the node
weights.  Densities are integrated against ``Vol = -rho^-3 drho^dx^dy``, which
is a positive measure; 3-forms written as ``h dx^dy^drho`` are converted with
``dx^dy^drho = -rho^3 Vol``.

Nodes are grouped in slabs of constant ``rho``.  Slabs may be evaluated on a
thread pool, but partial sums are always combined by the same fixed pairwise
tree, so results do not depend on the number of workers.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import algebra as alg
from .deformations import SPINOR_COEFFS, eigenspinors, tangent_vectors_at
from .geometry import Point
from .monopole import field_strength, higgs_gradient

THREADS_ENV = "HYPERMONO_THREADS"


class QuadratureError(RuntimeError):
    pass


class ConvergenceError(RuntimeError):
    def __init__(self, message, ladder=()):
        super().__init__(message)
        self.ladder = list(ladder)


@dataclass(frozen=True)
class QuadratureSpec:
    nodes_per_axis: int = 64
    axis_scale: float = 1.0
    rel_tol: float = 1e-4

    def __post_init__(self):
        if self.nodes_per_axis < 8:
            raise ValueError("need at least 8 nodes per axis")
        if not self.axis_scale > 0:
            raise ValueError("axis scale must be positive")

    def refined(self, factor=2):
        return QuadratureSpec(self.nodes_per_axis * factor, self.axis_scale, self.rel_tol)


def default_spec(cfg, nodes=64, rel_tol=1e-4):
    return QuadratureSpec(nodes, max(1.0, cfg.center[2]), rel_tol)


def worker_count(threads=None):
    if threads is None:
        threads = int(os.environ.get(THREADS_ENV, "0") or 0)
    if threads <= 0:
        threads = os.cpu_count() or 1
    return threads


@lru_cache(maxsize=32)
def _legendre(n):
    return np.polynomial.legendre.leggauss(n)


def h3_nodes(spec, center=(0.0, 0.0)):
    """Mapped 1-d nodes and weights ``(x, wx), (y, wy), (rho, wrho)``.

    ``wrho`` already contains the ``rho^-3`` volume weight.
    """
    t, w = _legendre(spec.nodes_per_axis)
    c = spec.axis_scale
    s = 1 - t * t
    lin = c * t / s
    wl = w * c * (1 + t * t) / s ** 2
    rho = c * (1 + t) / (1 - t)
    wr = w * 2 * c / (1 - t) ** 2 / rho ** 3
    return (center[0] + lin, wl), (center[1] + lin, wl), (rho, wr)


def _tree_sum(parts):
    parts = list(parts)
    while len(parts) > 1:
        nxt = [parts[i] + parts[i + 1] for i in range(0, len(parts) - 1, 2)]
        if len(parts) % 2:
            nxt.append(parts[-1])
        parts = nxt
    return parts[0]


def integrate_h3(density, spec=QuadratureSpec(), center=(0.0, 0.0), threads=None):
    """``int_{H^3} density Vol``.

    ``density`` maps a batch :class:`Point` of shape ``(N, N)`` to an array
    whose leading two axes match; trailing axes are integrated componentwise.
    """
    (xs, wx), (ys, wy), (rhos, wr) = h3_nodes(spec, center)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    WXY = np.outer(wx, wy)

    def slab(k):
        vals = np.asarray(density(Point(X, Y, np.full_like(X, rhos[k]))))
        if not np.all(np.isfinite(vals)):
            i, j = np.argwhere(~np.isfinite(vals.reshape(X.shape + (-1,))).any(axis=-1))[0]
            raise QuadratureError(
                f"non-finite density at node (x={X[i, j]:.6g}, y={Y[i, j]:.6g}, rho={rhos[k]:.6g})")
        weights = WXY.reshape(WXY.shape + (1,) * (vals.ndim - 2))
        return wr[k] * np.sum(vals * weights, axis=(0, 1))

    n = worker_count(threads)
    idx = range(len(rhos))
    if n == 1:
        parts = [slab(k) for k in idx]
    else:
        with ThreadPoolExecutor(max_workers=n) as pool:
            parts = list(pool.map(slab, idx))
    return _tree_sum(parts)


def integrate_horosphere(density, rho, spec=QuadratureSpec(), center=(0.0, 0.0)):
    """``int density dx dy`` over the horosphere at height ``rho``."""
    (xs, wx), (ys, wy), _ = h3_nodes(spec, center)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    vals = np.asarray(density(Point(X, Y, np.full_like(X, float(rho)))))
    weights = np.outer(wx, wy).reshape(X.shape + (1,) * (vals.ndim - 2))
    return _tree_sum(list(np.sum(vals * weights, axis=1)))


@dataclass
class Converged:
    value: object
    ladder: list = field(default_factory=list)
    converged: bool = True


def with_ladder(compute, spec, steps=2):
    """Evaluate ``compute(spec)`` on ``spec`` and its refinement.

    ``converged`` compares the last two rungs at ``spec.rel_tol`` (max-norm,
    relative to the finest value).
    """
    ladder = []
    s = spec
    for _ in range(steps):
        ladder.append((s.nodes_per_axis, compute(s)))
        s = s.refined()
    a, b = np.asarray(ladder[-2][1]), np.asarray(ladder[-1][1])
    scale = max(float(np.max(np.abs(b))), 1e-300)
    ok = float(np.max(np.abs(a - b))) / scale < spec.rel_tol
    return Converged(ladder[-1][1], ladder, ok)


# -- monopole integrals ----------------------------------------------------------

def _center_xy(cfg):
    return cfg.center[0], cfg.center[1]


def energy(cfg, spec=QuadratureSpec(), threads=None):
    from .monopole import energy_density

    return float(integrate_h3(lambda p: energy_density(cfg, p), spec, _center_xy(cfg), threads).real)


def omega_pair(nu_a, nu_b, spec=QuadratureSpec(), center=(0.0, 0.0), threads=None):
    """``omega(nu_a, nu_b) = -1/2 int Tr(nu_a, nu_b) Vol``."""
    return complex(integrate_h3(lambda p: -0.5 * alg.trace_pair(nu_a(p), nu_b(p)), spec, center, threads))


def omega_matrix(cfg, spec=QuadratureSpec(), threads=None):
    """The 2x2 matrix ``omega(nu_alpha, nu_beta)`` from one quadrature pass."""
    nus = eigenspinors(cfg)

    def dens(p):
        v = [nu(p) for nu in nus]
        out = np.empty(p.shape + (2, 2), dtype=complex)
        for i in range(2):
            for j in range(2):
                out[..., i, j] = -0.5 * alg.trace_pair(v[i], v[j])
        return out

    return np.asarray(integrate_h3(dens, spec, _center_xy(cfg), threads))


@dataclass
class GramMatrix:
    values: np.ndarray
    route: str

    @property
    def max_imag(self):
        return float(np.max(np.abs(self.values.imag)))

    def deviation(self, target):
        return float(np.max(np.abs(self.values - target)))

    @property
    def asymmetry(self):
        return float(np.max(np.abs(self.values - self.values.T)))


def gram_direct(cfg, spec=QuadratureSpec(), threads=None):
    """``g(mu, nu) = -1/2 int Tr(<a_mu, a_nu> + phi_mu phi_nu) Vol`` over the tangent vectors."""
    def dens(p):
        a, phi = tangent_vectors_at(cfg, p)
        r2 = np.asarray(p.rho, dtype=float)[..., None, None] ** 2
        # Tr(X Y) = sum(X * Y^T), so flatten and use a matrix product
        lead = a.shape[:-4]
        fa = a.reshape(lead + (4, 12))
        fat = np.swapaxes(a, -1, -2).reshape(lead + (4, 12))
        fp = phi.reshape(lead + (4, 4))
        fpt = np.swapaxes(phi, -1, -2).reshape(lead + (4, 4))
        t = r2 * (fa @ np.swapaxes(fat, -1, -2)) + fp @ np.swapaxes(fpt, -1, -2)
        return -0.5 * t

    return GramMatrix(np.asarray(integrate_h3(dens, spec, _center_xy(cfg), threads)), "direct")


def gram_from_omega(omega):
    """Assemble ``g`` from ``omega`` and the spinor pairing.

    ``g(nu_a (x) psi_b*, nu_c (x) psi_d*) = 1/2 eps_bd omega(nu_a, nu_c)``
    (the Killing spinors are normalised to ``(psi_1, psi_2) = 1``).
    """
    g = np.empty((4, 4), dtype=complex)
    for m in range(4):
        for n in range(4):
            cm, cn = SPINOR_COEFFS[m], SPINOR_COEFFS[n]
            g[m, n] = 0.5 * np.einsum("ab,cd,bd,ac->", cm, cn, alg.EPS2, omega)
    return g


def gram_omega(cfg, spec=QuadratureSpec(), threads=None):
    return GramMatrix(gram_from_omega(omega_matrix(cfg, spec, threads)), "omega")


def gram_matrix(cfg, spec=QuadratureSpec(), route="direct", threads=None):
    if route == "direct":
        return gram_direct(cfg, spec, threads)
    if route == "omega":
        return gram_omega(cfg, spec, threads)
    raise ValueError(f"unknown route {route!r}")


# -- Chern-Simons --------------------------------------------------------------

def _wedge_2_1(f, a):
    """Coefficient of ``dx^dy^drho`` in ``Tr(F ^ a)``; ``f`` is a 2-form, ``a`` a 1-form."""
    return alg.trace(f[..., 0, :, :] @ a[..., 2, :, :] + f[..., 1, :, :] @ a[..., 0, :, :]
                     + f[..., 2, :, :] @ a[..., 1, :, :])


def _as_vol_density(coeff, p):
    # h dx^dy^drho = -rho^3 h Vol
    return -np.asarray(p.rho, dtype=float) ** 3 * coeff


def cs_density(cfg):
    """``Tr(A ^ dA + 2/3 A^3) = Tr(A ^ F) - 1/3 Tr(A^3)`` as a density against ``Vol``."""
    def dens(p):
        a = cfg.A(p)
        f = field_strength(cfg, p)
        ax, ay, ar = a[..., 0, :, :], a[..., 1, :, :], a[..., 2, :, :]
        a_f = alg.trace(ax @ f[..., 1, :, :] + ay @ f[..., 2, :, :] + ar @ f[..., 0, :, :])
        a3 = 3 * alg.trace(ax @ (ay @ ar - ar @ ay))
        return _as_vol_density(a_f - a3 / 3, p)
    return dens


def boundary_cs_term(cfg0, cfg1, rho, spec=QuadratureSpec(), center=(0.0, 0.0)):
    """``int Tr(A0 ^ A1)`` over the horosphere at height ``rho``.

    On the boundary the induced orientation makes ``dx^dy`` positive.
    """
    def dens(p):
        a0, a1 = cfg0.A(p), cfg1.A(p)
        return alg.trace(a0[..., 0, :, :] @ a1[..., 1, :, :] - a0[..., 1, :, :] @ a1[..., 0, :, :])
    return complex(integrate_horosphere(dens, rho, spec, center))


HOROSPHERES = (1e-2, 5e-3, 2.5e-3)


@dataclass
class ChernSimons:
    value: float
    bulk1: float
    bulk0: float
    boundary: float
    boundary_ladder: list
    imag: float

    def __float__(self):
        return self.value


def _richardson(hs, vals):
    """Extrapolate ``vals(h) -> h = 0`` assuming an expansion in powers of ``h``."""
    hs = np.asarray(hs, dtype=float)
    v = np.asarray(vals, dtype=float)
    vander = np.vander(hs, len(hs), increasing=True)
    return float(np.linalg.solve(vander, v)[0])


def chern_simons(cfg0, cfg1, spec=QuadratureSpec(), horospheres=HOROSPHERES, threads=None,
                 boundary_tol=None):
    """``CS[A0, A1]``: two bulk integrals plus the boundary term at the conformal boundary.

    The boundary term is evaluated on a ladder of horospheres and
    Richardson-extrapolated to ``rho = 0``.  Raises :class:`ConvergenceError`
    if successive horosphere values differ by more than ``boundary_tol``
    (default ``spec.rel_tol``) or fail to converge monotonically.
    """
    center = _center_xy(cfg0)
    bulk1 = complex(integrate_h3(cs_density(cfg1), spec, center, threads))
    bulk0 = complex(integrate_h3(cs_density(cfg0), spec, center, threads))
    ladder = [(h, boundary_cs_term(cfg0, cfg1, h, spec, center)) for h in horospheres]
    vals = [v.real for _, v in ladder]
    tol = spec.rel_tol if boundary_tol is None else boundary_tol
    steps = np.diff(vals)
    scale = max(abs(bulk1.real) + abs(bulk0.real), 1.0)
    if np.any(np.abs(steps) > tol * scale) or (len(steps) > 1 and np.any(np.abs(steps[1:]) > np.abs(steps[:-1]))):
        raise ConvergenceError("boundary term does not converge on the horosphere ladder", ladder)
    boundary = _richardson([h for h, _ in ladder], vals)
    value = bulk1.real - bulk0.real + boundary
    imag = abs(bulk1.imag) + abs(bulk0.imag) + max(abs(v.imag) for _, v in ladder)
    return ChernSimons(value, bulk1.real, bulk0.real, boundary, ladder, imag)


def cs_rate(cfg, spec=QuadratureSpec(), threads=None):
    """``2 int Tr(F ^ d^A Phi)``."""
    def dens(p):
        return _as_vol_density(_wedge_2_1(field_strength(cfg, p), higgs_gradient(cfg, p)), p)
    return float(2 * integrate_h3(dens, spec, _center_xy(cfg), threads).real)


def framedness_integral(cfg, deformation_a, spec=QuadratureSpec(), threads=None):
    """``int Tr(F ^ a)`` for a gauge-mode 1-form ``a = d^A chi``."""
    def dens(p):
        return _as_vol_density(_wedge_2_1(field_strength(cfg, p), deformation_a(p)), p)
    return complex(integrate_h3(dens, spec, _center_xy(cfg), threads))


# -- equivariant index ---------------------------------------------------------

@dataclass(frozen=True)
class IndexPolynomial:
    """Laurent polynomial in ``gamma`` with integer coefficients."""

    coefficients: dict

    @property
    def dim_plus(self):
        return self.coefficients.get(1, 0)

    @property
    def dim_minus(self):
        return self.coefficients.get(-1, 0)

    def is_palindromic(self):
        return all(self.coefficients.get(-k, 0) == c for k, c in self.coefficients.items())

    def __str__(self):
        terms = []
        for k in sorted(self.coefficients):
            c = self.coefficients[k]
            terms.append(f"{c}" if k == 0 else f"{c}γ" if k == 1 else f"{c}γ^{k}")
        return " + ".join(terms)


def equivariant_index(n, p):
    """``2n sum_{j=0}^{4p-1} gamma^(2j + 1 - 4p)``; ``p`` must be a positive half-integer."""
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 1:
        raise ValueError("charge n must be a positive integer")
    try:
        p = Fraction(p)
    except (TypeError, ValueError):
        raise ValueError("mass p must be a positive half-integer") from None
    if p <= 0 or (2 * p).denominator != 1:
        raise ValueError("mass p must be a positive half-integer")
    four_p = int(4 * p)
    coeffs = {}
    for j in range(four_p):
        k = 2 * j + 1 - four_p
        coeffs[k] = coeffs.get(k, 0) + 2 * int(n)
    return IndexPolynomial(coeffs)

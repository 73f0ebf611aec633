"""Upper half-space model of hyperbolic 3-space.

Coordinates are ``(x, y, rho)`` with ``rho > 0``, metric
``rho^-2 (drho^2 + dx^2 + dy^2)`` and volume form ``-rho^-3 drho^dx^dy``.
Note the orientation: ``dx^dy^drho`` is *negatively* oriented.

Forms are stored by their coordinate components.  A gauge-valued 1-form is an
array ``(..., 3, 2, 2)`` ordered ``(x, y, rho)``; a 2-form is an array
``(..., 3, 2, 2)`` ordered ``(xy, yrho, rhox)``.  With this pairing the Hodge
star maps component ``k`` of a 1-form to component ``k`` of a 2-form.

Differential operators acting on field evaluators use central differences;
they are meant as residual checks on closed-form solutions, not as solvers.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .algebra import PAULI

AXES = ("x", "y", "rho")


@dataclass(frozen=True)
class Point:
    """A point (or a broadcastable batch of points) of H^3."""

    x: object
    y: object
    rho: object

    def __post_init__(self):
        if np.any(np.asarray(self.rho) <= 0):
            raise ValueError("points of H^3 need rho > 0")

    @classmethod
    def of(cls, x, y, rho):
        x, y, rho = np.broadcast_arrays(*(np.asarray(c, dtype=float) for c in (x, y, rho)))
        return cls(x, y, rho)

    @property
    def shape(self):
        return np.broadcast(self.x, self.y, self.rho).shape

    @property
    def r2(self):
        """Euclidean ``|x|^2 = x^2 + y^2 + rho^2``."""
        return self.x ** 2 + self.y ** 2 + self.rho ** 2

    def coords(self):
        return (self.x, self.y, self.rho)

    def shifted(self, axis, h):
        c = list(self.coords())
        c[axis] = c[axis] + h
        return Point(*c)


def random_points(n, seed=42, x_range=1.5, rho_range=(0.3, 2.5)):
    """A batch of ``n`` pseudo-random points in a box away from the conformal boundary."""
    rng = np.random.default_rng(seed)
    xs = rng.uniform(-x_range, x_range, size=(n, 2))
    rhos = rng.uniform(*rho_range, size=n)
    return Point(xs[:, 0], xs[:, 1], rhos)


# -- finite differences ----------------------------------------------------

@dataclass(frozen=True)
class FDScheme:
    """Central differences; ``order=4`` applies one Richardson step.

    ``h=None`` selects the relative default ``1e-4 * max(1, rho)``.
    """

    h: Optional[float] = None
    order: int = 2

    def __post_init__(self):
        if self.order not in (2, 4):
            raise ValueError("order must be 2 or 4")
        if self.h is not None and not self.h > 0:
            raise ValueError("step must be positive")

    def step(self, p):
        rho = np.asarray(p.rho, dtype=float)
        h = 1e-4 * np.maximum(1.0, rho) if self.h is None else np.full_like(rho, self.h)
        if np.any(h >= rho / 2):
            raise ValueError(f"finite-difference stencil of width {np.max(h):g} exits rho > 0")
        return h


def _expand(h, ndim):
    h = np.asarray(h)
    return h.reshape(h.shape + (1,) * (ndim - h.ndim))


def _central(fn, p, axis, h):
    fp = np.asarray(fn(p.shifted(axis, h)))
    fm = np.asarray(fn(p.shifted(axis, -h)))
    return (fp - fm) / (2 * _expand(h, fp.ndim))


def partial(fn, p, axis, fd=FDScheme()):
    """Coordinate derivative ``d fn / d axis`` at ``p``."""
    h = fd.step(p)
    d = _central(fn, p, axis, h)
    if fd.order == 4:
        d = (4 * _central(fn, p, axis, h / 2) - d) / 3
    return d


def gradient_stack(fn, p, fd=FDScheme()):
    """All three coordinate derivatives, stacked right after the point axes."""
    return np.stack([partial(fn, p, k, fd) for k in range(3)], axis=len(p.shape))


# -- Killing vector fields -------------------------------------------------

KILLING_KINDS = ("X1", "X2", "X3", "Y1", "Y2", "Y3", "Z1", "Z2", "Z3")


def _killing_and_jacobian(kind, p):
    x, y, r = (np.asarray(c, dtype=float) for c in p.coords())
    one, zero = np.ones_like(x), np.zeros_like(x)
    n2 = x * x + y * y + r * r
    y3 = np.stack([x, y, r], -1)
    jy3 = np.broadcast_to(np.eye(3), x.shape + (3, 3))
    grad_n2 = np.stack([2 * x, 2 * y, 2 * r], -1)
    ex = np.stack([one, zero, zero], -1)
    ey = np.stack([zero, one, zero], -1)
    gx = np.stack([one, zero, zero], -1)  # gradient of x
    gy = np.stack([zero, one, zero], -1)

    def combo(c, gc, vec, u, gu, e):
        # c * vec + u * e, jacobian J[k, j] = d_j V^k
        v = c[..., None] * vec + u[..., None] * e
        jac = (c[..., None, None] * jvec(vec)
               + vec[..., :, None] * gc[..., None, :]
               + e[..., :, None] * gu[..., None, :])
        return v, jac

    def jvec(vec):
        return jy3 if vec is y3 else np.zeros(x.shape + (3, 3))

    base = kind[0] + kind[1]
    if base == "X3":
        v = np.stack([-y, x, zero], -1)
        jac = np.zeros(x.shape + (3, 3))
        jac[..., 0, 1] = -1
        jac[..., 1, 0] = 1
    elif base == "Y3":
        v, jac = y3, jy3
    elif base == "X1":
        v, jac = combo(y, gy, y3, (1 - n2) / 2, -grad_n2 / 2, ey)
    elif base == "X2":
        v, jac = combo(-x, -gx, y3, -(1 - n2) / 2, grad_n2 / 2, ex)
    elif base == "Y1":
        v, jac = combo(-x, -gx, y3, (1 + n2) / 2, grad_n2 / 2, ex)
    elif base == "Y2":
        v, jac = combo(-y, -gy, y3, (1 + n2) / 2, grad_n2 / 2, ey)
    else:
        raise ValueError(f"unknown Killing field {kind!r}")
    return np.asarray(v, dtype=complex), np.asarray(jac, dtype=complex)


UNIT_CENTER = (0.0, 0.0, 1.0)


def _pull_back(p, center):
    x0, y0, lam = center
    return Point((np.asarray(p.x) - x0) / lam, (np.asarray(p.y) - y0) / lam, np.asarray(p.rho) / lam)


def killing_field_with_jacobian(kind, p, center=UNIT_CENTER):
    """Components ``V^k`` and analytic Jacobian ``J[k, j] = d_j V^k``.

    ``Z_j = Y_j + i X_j``.  The fields are adapted to the point ``(0, 0, 1)``;
    another ``center = (x0, y0, lam)`` transports them by the isometry
    ``q -> (x0, y0, 0) + lam q``.
    """
    if kind not in KILLING_KINDS:
        raise ValueError(f"unknown Killing field {kind!r}")
    if tuple(center) != UNIT_CENTER:
        v, jac = killing_field_with_jacobian(kind, _pull_back(p, center))
        return center[2] * v, jac
    if kind[0] == "Z":
        vy, jy = _killing_and_jacobian("Y" + kind[1], p)
        vx, jx = _killing_and_jacobian("X" + kind[1], p)
        return vy + 1j * vx, jy + 1j * jx
    return _killing_and_jacobian(kind, p)


def killing_field(kind, p, center=UNIT_CENTER):
    return killing_field_with_jacobian(kind, p, center)[0]


def lie_bracket(u_kind, v_kind, p):
    """Vector-field commutator ``[U, V]^k = U^j d_j V^k - V^j d_j U^k``."""
    u, ju = killing_field_with_jacobian(u_kind, p)
    v, jv = killing_field_with_jacobian(v_kind, p)
    return np.einsum("...j,...kj->...k", u, jv) - np.einsum("...j,...kj->...k", v, ju)


def metric_pair(u, v, p):
    """Complex-bilinear ``g(u, v) = (u . v) / rho^2``."""
    return np.sum(np.asarray(u) * np.asarray(v), axis=-1) / np.asarray(p.rho) ** 2


def christoffel(p):
    """``Gamma[k, i, j]`` of the upper half-space metric, closed form."""
    r = np.asarray(p.rho, dtype=float)
    ds = np.zeros(r.shape + (3,))
    ds[..., 2] = -1 / r  # gradient of log conformal factor, sigma = -log rho
    d = np.eye(3)
    return (np.einsum("ki,...j->...kij", d, ds) + np.einsum("kj,...i->...kij", d, ds)
            - np.einsum("ij,...k->...kij", d, ds))


def killing_residual(kind, p, fd=FDScheme()):
    """Max-norm of ``nabla_i X_j + nabla_j X_i`` with ``d_i X_j`` by central differences."""
    def lowered(q):
        return killing_field(kind, q) / np.asarray(q.rho)[..., None] ** 2

    dlow = np.stack([partial(lowered, p, i, fd) for i in range(3)], axis=-2)  # [..., i, j]
    gam = christoffel(p)
    cov = dlow - np.einsum("...kij,...k->...ij", gam, lowered(p))
    return float(np.max(np.abs(cov + np.swapaxes(cov, -1, -2))))


def vector_field_lie_residual(field, p, fd=FDScheme()):
    """Killing operator residual for an arbitrary field ``Point -> (..., 3)``."""
    def lowered(q):
        return np.asarray(field(q)) / np.asarray(q.rho)[..., None] ** 2

    dlow = np.stack([partial(lowered, p, i, fd) for i in range(3)], axis=-2)
    cov = dlow - np.einsum("...kij,...k->...ij", christoffel(p), lowered(p))
    return float(np.max(np.abs(cov + np.swapaxes(cov, -1, -2))))


# -- spin connection and Clifford-related calculus ---------------------------

def spin_connection(p):
    """``(w_x, w_y, w_rho)`` with ``nabla = d + w``; shape ``(..., 3, 2, 2)``."""
    r = np.asarray(p.rho, dtype=float)[..., None, None]
    wx = 1j * PAULI[1] / (2 * r)
    wy = -1j * PAULI[0] / (2 * r)
    return np.stack([wx, wy, np.zeros_like(wx)], axis=-3)


def cov_deriv_spinor(field, direction, p, fd=FDScheme()):
    """``nabla_dir field`` for a spinor field ``Point -> (..., 2)``."""
    d = np.asarray(direction)
    w = spin_connection(p)
    val = np.asarray(field(p))
    out = 0
    for k in range(3):
        term = partial(field, p, k, fd) + np.einsum("...st,...t->...s", w[..., k, :, :], val)
        out = out + d[..., k, None] * term
    return out


def flat_to_frame(v, p):
    """Lower a vector and express it in the Clifford frame: returns a 2x2 spin matrix.

    ``v^flat = (v^k / rho^2) dx^k`` maps to ``sum_k (v^k / rho) (-i sigma_k)``.
    """
    r = np.asarray(p.rho)[..., None, None]
    return -1j * np.einsum("...k,kst->...st", np.asarray(v), PAULI) / r


def hodge_one(a, rho):
    """Hodge star of a 1-form ``(x, y, rho)`` -> 2-form ``(xy, yrho, rhox)``."""
    a = np.asarray(a)
    lead = np.ndim(rho)
    r = np.asarray(rho, dtype=float).reshape(np.shape(rho) + (1,) * (a.ndim - lead))
    # *dx = -(1/rho) dy^drho, *dy = -(1/rho) drho^dx, *drho = -(1/rho) dx^dy
    return -np.take(a, [2, 0, 1], axis=lead) / r


def hodge_two(w, rho):
    """Hodge star of a 2-form ``(xy, yrho, rhox)`` -> 1-form ``(x, y, rho)``."""
    w = np.asarray(w)
    lead = np.ndim(rho)
    r = np.asarray(rho, dtype=float).reshape(np.shape(rho) + (1,) * (w.ndim - lead))
    # *(dy^drho) = -rho dx, *(drho^dx) = -rho dy, *(dx^dy) = -rho drho
    return -np.take(w, [1, 2, 0], axis=lead) * r


# -- gauge-covariant operators ------------------------------------------------
#
# ``connection`` is an evaluator ``Point -> (..., 3, 2, 2)`` (the components of
# A); adjoint-valued fields are differentiated covariantly, D_k v = d_k v + [A_k, v].

def cov_partials(connection, field, p, fd=FDScheme()):
    """List of ``D_k field`` for an adjoint field ``Point -> (..., 2, 2)``-trailing."""
    a = connection(p)
    val = np.asarray(field(p))
    out = []
    for k in range(3):
        ak = a[..., k, :, :]
        ak = ak.reshape(ak.shape[:-2] + (1,) * (val.ndim - ak.ndim) + (2, 2))
        out.append(partial(field, p, k, fd) + ak @ val - val @ ak)
    return out


def cov_gradient(connection, phi, p, fd=FDScheme()):
    """``d^A phi`` as a 1-form ``(..., 3, 2, 2)``."""
    return np.stack(cov_partials(connection, phi, p, fd), axis=-3)


def cov_exterior(connection, a, p, fd=FDScheme()):
    """``d^A a`` for a 1-form field, returned as a 2-form ``(xy, yrho, rhox)``."""
    d = [np.asarray(t) for t in cov_partials(connection, a, p, fd)]  # d[k][..., j] = D_k a_j
    dxy = d[0][..., 1, :, :] - d[1][..., 0, :, :]
    dyr = d[1][..., 2, :, :] - d[2][..., 1, :, :]
    drx = d[2][..., 0, :, :] - d[0][..., 2, :, :]
    return np.stack([dxy, dyr, drx], axis=-3)


def cov_curl(connection, a, p, fd=FDScheme()):
    """``*d^A a`` as a 1-form."""
    return hodge_two(cov_exterior(connection, a, p, fd), p.rho)


def cov_div(connection, a, p, fd=FDScheme()):
    """``*d^A* a = rho^3 sum_k D_k (a_k / rho)``."""
    def weighted(q):
        r = np.asarray(q.rho, dtype=float)[..., None, None, None]
        return np.asarray(a(q)) / r

    d = cov_partials(connection, weighted, p, fd)
    r3 = (np.asarray(p.rho, dtype=float) ** 3)[..., None, None]
    return r3 * (d[0][..., 0, :, :] + d[1][..., 1, :, :] + d[2][..., 2, :, :])


def dirac(connection, nu, p, fd=FDScheme()):
    """Twisted Dirac operator ``sum_k e^k . nabla^A_{e_k}`` on gauge spinors.

    ``nu`` maps points to ``(..., 2, 2, 2)`` (spin, then gauge matrix).  The
    frame is ``e_k = rho d_k`` with ``e^k -> -i sigma_k``.
    """
    if connection is None:
        connection = flat_connection
    w = spin_connection(p)
    val = np.asarray(nu(p))
    a = connection(p)
    r = np.asarray(p.rho, dtype=float)[..., None, None, None]
    out = 0
    for k in range(3):
        ak = a[..., k, None, :, :]
        grad = (partial(nu, p, k, fd)
                + np.einsum("...st,...tgh->...sgh", w[..., k, :, :], val)
                + ak @ val - val @ ak)
        out = out + np.einsum("st,...tgh->...sgh", -1j * PAULI[k], r * grad)
    return out


def dirac_spinor(field, p, fd=FDScheme()):
    """Untwisted Dirac operator on a plain spinor field ``Point -> (..., 2)``."""
    w = spin_connection(p)
    val = np.asarray(field(p))
    r = np.asarray(p.rho, dtype=float)[..., None]
    out = 0
    for k in range(3):
        grad = partial(field, p, k, fd) + np.einsum("...st,...t->...s", w[..., k, :, :], val)
        out = out + np.einsum("st,...t->...s", -1j * PAULI[k], r * grad)
    return out


def flat_connection(p):
    return np.zeros(tuple(p.shape) + (3, 2, 2), dtype=complex)


def convergence_order(hs, residuals):
    """Least-squares slope of ``log residual`` against ``log h``."""
    return float(np.polyfit(np.log(hs), np.log(residuals), 1)[0])


FieldFn = Callable[[Point], np.ndarray]

"""2x2 complex matrix algebra, Pauli generators and spinor structures.

Array layout used throughout the package:

* ``Mat2``            -- ``(..., 2, 2)`` complex, a gauge (or spin) endomorphism
* spinor              -- ``(..., 2)`` complex
* gauge spinor        -- ``(..., 2, 2, 2)``; spin index first, then a ``Mat2``
* block endomorphism  -- ``(..., 2, 2, 2, 2)``; ``[s_row, s_col, g_row, g_col]``

The spin and gauge indices are never flattened into a 4x4 matrix, so traces
over either index stay unambiguous.  Leading axes are batch (point) axes.
"""

import numpy as np

EPS_ALG = 1e-12

I2 = np.eye(2, dtype=complex)
SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = np.stack([SIGMA1, SIGMA2, SIGMA3])

# antisymmetric symbol on two indices, eps[0, 1] = 1
EPS2 = np.array([[0.0, 1.0], [-1.0, 0.0]])


class DegenerateSpinorPair(ValueError):
    pass


def dagger(m):
    return np.conj(np.swapaxes(m, -1, -2))


def commutator(a, b):
    return a @ b - b @ a


def trace(m):
    return np.trace(m, axis1=-2, axis2=-1)


def is_traceless(m, tol=EPS_ALG):
    return bool(np.all(np.abs(trace(m)) < tol))


def is_antihermitian(m, tol=EPS_ALG):
    return bool(np.all(np.abs(m + dagger(m)) < tol))


def su2_coefficients(m):
    """Real-linear coordinates ``v`` with ``m = i v.sigma`` for traceless ``m``.

    For non-antihermitian input the coefficients come out complex.
    """
    return np.stack([trace(m @ s) / 2j for s in PAULI], axis=-1)


def from_su2_coefficients(v):
    v = np.asarray(v)
    return 1j * np.einsum("...k,kij->...ij", v, PAULI)


# -- spinors ---------------------------------------------------------------

def pair(s, t):
    """Symplectic pairing ``s1 t2 - s2 t1``."""
    s = np.asarray(s)
    t = np.asarray(t)
    return s[..., 0] * t[..., 1] - s[..., 1] * t[..., 0]


def dual(s):
    """The covector ``s*`` with ``dual(s) @ t == pair(s, t)``."""
    s = np.asarray(s)
    return np.stack([-s[..., 1], s[..., 0]], axis=-1)


def conj_spinor(s):
    """Quaternionic structure ``(s1, s2) -> (conj s2, -conj s1)``; squares to -1."""
    s = np.asarray(s)
    return np.stack([np.conj(s[..., 1]), -np.conj(s[..., 0])], axis=-1)


def hermitian(s, t):
    return pair(conj_spinor(s), t)


def gauge_pair(nu, mu):
    """Spin pairing of two gauge spinors; the result is a ``Mat2``."""
    return nu[..., 0, :, :] @ mu[..., 1, :, :] - nu[..., 1, :, :] @ mu[..., 0, :, :]


def trace_pair(nu, mu):
    """``Tr(nu, mu)``: gauge trace of the spin pairing."""
    return trace(gauge_pair(nu, mu))


def conj_gauge_spinor(nu):
    """Quaternionic structure on a gauge spinor, acting trivially on su(2).

    Writing a complex ``Mat2`` as ``sum_k c_k (i sigma_k)``, conjugating only
    the coefficients sends ``M -> -M^dagger``.
    """
    return np.stack([-dagger(nu[..., 1, :, :]), dagger(nu[..., 0, :, :])], axis=-3)


# -- Clifford isomorphism ----------------------------------------------------

def _check_rho(rho):
    if np.any(np.asarray(rho) <= 0):
        raise ValueError("rho must be positive")


def spin_gauge(spin_mat, gauge_mat):
    """Block endomorphism ``spin_mat (x) gauge_mat``."""
    return np.einsum("st,...gh->...stgh", spin_mat, gauge_mat)


def cl(a_x, a_y, a_rho, phi, rho):
    """Clifford image of ``a + phi`` for gauge-valued components.

    ``dx/rho -> -i sigma1``, ``dy/rho -> -i sigma2``, ``drho/rho -> -i sigma3``
    and scalars act as multiples of the identity.
    """
    _check_rho(rho)
    r = np.asarray(rho)[..., None, None]
    out = np.empty(np.broadcast(a_x, a_y, a_rho, phi).shape[:-2] + (2, 2, 2, 2), dtype=complex)
    out[..., 0, 0, :, :] = phi - 1j * r * a_rho
    out[..., 0, 1, :, :] = -1j * r * (a_x - 1j * a_y)
    out[..., 1, 0, :, :] = -1j * r * (a_x + 1j * a_y)
    out[..., 1, 1, :, :] = phi + 1j * r * a_rho
    return out


def cl_scalar(a_x, a_y, a_rho, phi, rho):
    """Clifford image of an abelian (scalar-valued) ``a + phi``."""
    _check_rho(rho)
    a_x, a_y, a_rho, phi, rho = np.broadcast_arrays(*map(np.asarray, (a_x, a_y, a_rho, phi, rho)))
    out = np.empty(a_x.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = phi - 1j * rho * a_rho
    out[..., 0, 1] = -1j * rho * (a_x - 1j * a_y)
    out[..., 1, 0] = -1j * rho * (a_x + 1j * a_y)
    out[..., 1, 1] = phi + 1j * rho * a_rho
    return out


def cl_inverse(b, rho):
    """Recover ``(a, phi)`` from a block endomorphism.

    Returns ``a`` stacked as ``(..., 3, 2, 2)`` in the order ``(x, y, rho)``
    and ``phi`` as ``(..., 2, 2)``.
    """
    _check_rho(rho)
    r = np.asarray(rho)[..., None, None]
    phi = 0.5 * (b[..., 0, 0, :, :] + b[..., 1, 1, :, :])
    comps = [0.5j * np.einsum("ts,...stgh->...gh", s, b) / r for s in PAULI]
    return np.stack(comps, axis=-3), phi


def cl_two_form(f_xy, f_yrho, f_rhox, rho):
    """Clifford image of a gauge-valued 2-form, ``-i rho^2 (F_xy s3 + F_yr s1 + F_rx s2)``."""
    _check_rho(rho)
    r2 = (np.asarray(rho) ** 2)[..., None, None]
    return -1j * (spin_gauge(SIGMA3, r2 * f_xy) + spin_gauge(SIGMA1, r2 * f_yrho)
                  + spin_gauge(SIGMA2, r2 * f_rhox))


def volume_element(rho=1.0):
    """Clifford image of the volume form ``-rho^-3 drho^dx^dy``."""
    e = [cl_scalar(1 / rho if k == 0 else 0, 1 / rho if k == 1 else 0,
                   1 / rho if k == 2 else 0, 0, rho) for k in range(3)]
    return -(e[2] @ e[0] @ e[1])


def tensor(nu, psi_dual):
    """Outer product ``nu (x) psi*`` as an endomorphism of the spin index.

    ``nu`` may be a plain spinor (result ``(..., 2, 2)``) or a gauge spinor
    (result is a block endomorphism).
    """
    nu = np.asarray(nu)
    psi_dual = np.asarray(psi_dual)
    if nu.ndim >= 3 and nu.shape[-3:] == (2, 2, 2):
        return np.einsum("...sgh,...t->...stgh", nu, psi_dual)
    return nu[..., :, None] * psi_dual[..., None, :]


def apply(b, psi):
    """Contract the spin column of ``b`` with a plain spinor."""
    b = np.asarray(b)
    if b.ndim >= 4 and b.shape[-4:] == (2, 2, 2, 2):
        return np.einsum("...stgh,...t->...sgh", b, psi)
    return np.einsum("...st,...t->...s", b, psi)


def apply_spin(m, nu):
    """Left-multiply the spin index of a gauge spinor by a spin matrix ``m``."""
    return np.einsum("...st,...tgh->...sgh", m, nu)


def trace_spin(b):
    return b[..., 0, 0, :, :] + b[..., 1, 1, :, :]


def decompose(b, psi1, psi2):
    """Split ``b = nu1 (x) psi1* + nu2 (x) psi2*``.

    ``nu_alpha = eps_{alpha beta} b psi_beta / (psi1, psi2)``.
    """
    c = np.asarray(pair(psi1, psi2))
    if np.any(np.abs(c) < EPS_ALG):
        raise DegenerateSpinorPair("psi1 and psi2 are (numerically) parallel")
    if np.ndim(b) >= 4 and np.shape(b)[-4:] == (2, 2, 2, 2):
        c = c[..., None, None, None]
    else:
        c = c[..., None]
    return apply(b, psi2) / c, -apply(b, psi1) / c


def recompose(nu1, nu2, psi1, psi2):
    return tensor(nu1, dual(psi1)) + tensor(nu2, dual(psi2))

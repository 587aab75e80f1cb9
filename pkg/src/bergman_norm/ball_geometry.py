"""Pointwise geometry of the unit ball of C^n.

Points are complex arrays whose last axis holds the ``n`` coordinates, so a
single point has shape ``(n,)`` and a batch of points has shape ``(m, n)``.
Every function accepts batches along leading axes. A batch never mixes
dimensions: the last axis length is the dimension ``n`` of the computation.
"""

import numpy as np

from .errors import DomainError

__all__ = [
    "as_point",
    "unit_vector",
    "inner_product",
    "norm_sq",
    "moebius_map",
    "real_jacobian",
    "identity_residual",
]

# Below this norm the anchor is treated as the origin, where phi_0 = -Id.
ORIGIN_CUTOFF = 1e-14


def as_point(coords, boundary=False):
    """Coerce ``coords`` to a complex point array and validate it.

    Parameters
    ----------
    coords : array_like
        Coordinates, last axis of length ``n >= 1``. Real input is promoted.
    boundary : bool
        Allow ``|z| == 1`` (closed ball). Interior points are required
        otherwise.
    """
    z = np.asarray(coords, dtype=complex)
    if z.ndim == 0:
        z = z.reshape(1)
    if z.shape[-1] < 1:
        raise DomainError("points need at least one coordinate")
    r2 = norm_sq(z)
    if boundary:
        bad = r2 > 1.0 + 1e-15
    else:
        bad = r2 >= 1.0
    if np.any(bad) or not np.all(np.isfinite(r2)):
        kind = "closed" if boundary else "open"
        raise DomainError(f"point outside the {kind} unit ball: |z|^2 = {np.max(r2)!r}")
    return z


def unit_vector(n, k=0):
    """The coordinate vector e_{k+1} of C^n (``e_1`` by default)."""
    if n < 1:
        raise DomainError("dimension must be >= 1")
    e = np.zeros(n, dtype=complex)
    e[k] = 1.0
    return e


def inner_product(z, w):
    """Hermitian inner product ``<z, w> = sum_k z_k conj(w_k)``."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    if z.shape[-1] != w.shape[-1]:
        raise DomainError(
            f"dimension mismatch: {z.shape[-1]} vs {w.shape[-1]}"
        )
    return np.sum(z * np.conj(w), axis=-1)


def norm_sq(z):
    """Squared Euclidean norm along the last axis."""
    z = np.asarray(z)
    return np.sum(z.real**2 + z.imag**2, axis=-1)


def moebius_map(z, omega):
    """The involutive automorphism ``phi_z`` of the ball evaluated at ``omega``.

    ``phi_z(omega) = (z - P omega - s Q omega) / (1 - <omega, z>)`` where
    ``P`` projects onto the complex line through ``z``, ``Q = I - P`` and
    ``s = sqrt(1 - |z|^2)``. For ``z = 0`` the map is ``-Id``.

    ``z`` is a single anchor point of shape ``(n,)``; ``omega`` may be a batch.
    """
    z = as_point(z)
    omega = as_point(omega)
    if z.ndim != 1:
        raise DomainError("moebius_map takes a single anchor point z")
    if z.shape[-1] != omega.shape[-1]:
        raise DomainError(
            f"dimension mismatch: {z.shape[-1]} vs {omega.shape[-1]}"
        )
    z2 = norm_sq(z)
    if np.sqrt(z2) < ORIGIN_CUTOFF:
        return -omega
    oz = inner_product(omega, z)[..., None]
    p_omega = (oz / z2) * z
    q_omega = omega - p_omega
    s = np.sqrt(1.0 - z2)
    return (z - p_omega - s * q_omega) / (1.0 - oz)


def real_jacobian(z, omega):
    """Real Jacobian determinant of ``omega -> phi_z(omega)``.

    Equals ``(1 - |z|^2)^(n+1) / |1 - <z, omega>|^(2n+2)``.
    """
    z = as_point(z)
    omega = as_point(omega)
    n = z.shape[-1]
    base = (1.0 - norm_sq(z)) / np.abs(1.0 - inner_product(omega, z)) ** 2
    return base ** (n + 1)


def identity_residual(z, omega):
    """Deviation from ``|1-<z,omega>| |1-<z,phi_z(omega)>| = 1-|z|^2``."""
    z = as_point(z)
    omega = as_point(omega)
    phi = moebius_map(z, omega)
    lhs = np.abs(1.0 - inner_product(z, omega)) * np.abs(1.0 - inner_product(z, phi))
    return np.abs(lhs - (1.0 - norm_sq(z)))

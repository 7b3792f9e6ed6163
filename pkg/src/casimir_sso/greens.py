"""Free-space Green functions of a homogeneous medium at imaginary frequency.

With sources (J, M) radiating in a medium (eps, mu) the fields are

    E = G^EE J + G^EH M,        H = G^HE J + G^HH M,

    G^EE_ij = -(1/kappa) [ (1/eps) d_i d'_j + mu kappa^2 delta_ij ] g
    G^HH_ij = -(1/kappa) [ (1/mu)  d_i d'_j + eps kappa^2 delta_ij ] g
    G^HE_ij = -eps_ijk d_k g,       G^EH_ij = -eps_ijk d'_k g,

where g = exp(-q r)/(4 pi r), q = kappa sqrt(eps mu), and primes act on the
source point.  Everything here is a function of the separation dr = r - r'
only, so d'_j = -d_j.  All functions broadcast over leading axes of ``dr``.
"""

from __future__ import annotations

import math
from enum import Enum

import numpy as np

from .core import MediumResponse

LEVI_CIVITA = np.zeros((3, 3, 3))
LEVI_CIVITA[0, 1, 2] = LEVI_CIVITA[1, 2, 0] = LEVI_CIVITA[2, 0, 1] = 1.0
LEVI_CIVITA[0, 2, 1] = LEVI_CIVITA[2, 1, 0] = LEVI_CIVITA[1, 0, 2] = -1.0


class GreenBlockLabel(str, Enum):
    EE = "EE"
    HH = "HH"
    HE = "HE"
    EH = "EH"


def scalar_green(separation, kappa: float, medium: MediumResponse):
    """g = exp(-kappa sqrt(eps mu) r) / (4 pi r) for r > 0."""
    r = np.asarray(separation, dtype=float)
    if np.any(r <= 0):
        raise ValueError("scalar Green function requires a positive separation")
    q = kappa * medium.index
    return np.exp(-q * r) / (4.0 * math.pi * r)


def _radial_derivatives(r, q):
    """g, g'/r and (g'' - g'/r)/r^2 for g(r) = exp(-qr)/(4 pi r)."""
    g = np.exp(-q * r) / (4.0 * math.pi * r)
    qr = q * r
    # g' = -g (1 + qr)/r ;  g'' = g (2 + 2qr + (qr)^2)/r^2
    d1_over_r = -g * (1.0 + qr) / r**2
    d2_minus = g * (3.0 + 3.0 * qr + qr * qr) / r**4
    return g, d1_over_r, d2_minus


def green_gradient(dr, kappa: float, medium: MediumResponse):
    """Gradient of g with respect to the field point, shape (..., 3)."""
    dr = np.asarray(dr, dtype=float)
    r = np.linalg.norm(dr, axis=-1)
    if np.any(r <= 0):
        raise ValueError("Green tensor requires dr != 0")
    _, d1_over_r, _ = _radial_derivatives(r, kappa * medium.index)
    return d1_over_r[..., None] * dr


def green_hessian(dr, kappa: float, medium: MediumResponse):
    """Second derivatives d_i d_j g with respect to the field point."""
    dr = np.asarray(dr, dtype=float)
    r = np.linalg.norm(dr, axis=-1)
    if np.any(r <= 0):
        raise ValueError("Green tensor requires dr != 0")
    _, d1_over_r, d2_minus = _radial_derivatives(r, kappa * medium.index)
    outer = dr[..., :, None] * dr[..., None, :]
    return d2_minus[..., None, None] * outer + d1_over_r[..., None, None] * np.eye(3)


def green_block(label, dr, kappa: float, medium: MediumResponse):
    """One 3x3 block of the 6x6 free Green tensor.

    Parameters
    ----------
    label : GreenBlockLabel or str
        ``"EE"``, ``"HH"``, ``"HE"`` or ``"EH"``.
    dr : array_like, shape (..., 3)
        Separation r - r' (must not vanish).
    kappa : float
        Imaginary-frequency wavenumber; must be positive for EE and HH.
    medium : MediumResponse

    Returns
    -------
    ndarray, shape (..., 3, 3)
    """
    label = GreenBlockLabel(label)
    if label in (GreenBlockLabel.HE, GreenBlockLabel.EH):
        curl = np.einsum("ijk,...k->...ij", LEVI_CIVITA, green_gradient(dr, kappa, medium))
        return -curl if label is GreenBlockLabel.HE else curl
    if not kappa > 0:
        raise ValueError("EE and HH blocks carry 1/kappa; the static limit belongs to the static module")
    dr = np.asarray(dr, dtype=float)
    r = np.linalg.norm(dr, axis=-1)
    hess = green_hessian(dr, kappa, medium)
    g = scalar_green(r, kappa, medium)
    if label is GreenBlockLabel.EE:
        a, b = medium.epsilon, medium.mu
    else:
        a, b = medium.mu, medium.epsilon
    # d_i d'_j = -d_i d_j on functions of r - r'
    return -(1.0 / kappa) * (-hess / a + b * kappa**2 * g[..., None, None] * np.eye(3))


def green_tensor(dr, kappa: float, medium: MediumResponse):
    """Full 6x6 tensor ordered (E, H) x (J, M)."""
    ee = green_block("EE", dr, kappa, medium)
    hh = green_block("HH", dr, kappa, medium)
    he = green_block("HE", dr, kappa, medium)
    top = np.concatenate([ee, -he], axis=-1)
    bottom = np.concatenate([he, hh], axis=-1)
    return np.concatenate([top, bottom], axis=-2)

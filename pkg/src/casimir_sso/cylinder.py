"""Infinite circular cylinder in the vector-cylindrical-wave basis.

For each angular index m and axial wavenumber k_z, surface currents are
expanded as (j_z, j_phi, m_z, m_phi) exp(i m phi + i k_z z).  In a medium
with p = sqrt(eps mu kappa^2 + k_z^2), q = kappa sqrt(eps mu) and
eta = sqrt(eps/mu), the two wave types are built from
psi = Z_m(p rho) exp(i m phi + i k_z z), Z = I or K:

    a-waves:  E = M = curl(z psi),          H = -eta N
    b-waves:  E = N = curl M / q,           H =  eta M

with tangential (z, phi) parts on rho = R

    E_t = A(Z) (a, b),  A(Z) = [[0, -p^2 Z/q], [-p Z', -m k_z Z/(q R)]]
    H_t = eta B(Z) (a, b),  B(Z) = [[p^2 Z/q, 0], [m k_z Z/(q R), -p Z']].

The b-waves carry E_z and correspond to the E polarization of the
T-matrix, the a-waves to H.  All Bessel functions are exponentially
scaled (I by exp(-x), K by exp(+x)), so blocks stay finite for large kappa R.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sp

from .core import NM_EV, VACUUM, MediumResponse, Units, as_material, evaluate_material, PerfectConductor
from .engine import block_eigenvalues
from .special import cyl_i_prime_scaled, cyl_i_scaled, cyl_k_prime_scaled, cyl_k_scaled

TWO_PI = 2.0 * math.pi
_N_CROSS = np.array([[0.0, 1.0], [-1.0, 0.0]])  # n x V on (z, phi) components, n = rho-hat


@dataclass(frozen=True)
class CylinderConfig:
    """Cylinder of radius R made of ``material`` in ``medium0`` (vacuum by default)."""

    radius: float = 1.0
    material: object = 30.0
    medium0: object = VACUUM
    units: Units = NM_EV

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        object.__setattr__(self, "material", as_material(self.material))
        if isinstance(self.material, PerfectConductor):
            raise ValueError("perfectly conducting cylinders are not supported")

    def responses(self, kappaR: float):
        kappa = kappaR / self.radius
        m0 = self.medium0 if isinstance(self.medium0, MediumResponse) else evaluate_material(
            as_material(self.medium0), kappa, self.units)
        return m0, evaluate_material(self.material, kappa, self.units)


@dataclass(frozen=True)
class TBlock:
    """2x2 T-matrix block ((T^EE, T^EH), (T^HE, T^HH)).

    ``scaled`` holds T exp(-log_scale) with log_scale = 2 p0 R; T itself
    grows like exp(2 p0 R) and overflows for kappa R of order 10^3.
    """

    m: int
    scaled: np.ndarray
    log_scale: float

    @property
    def entries(self) -> np.ndarray:
        with np.errstate(over="ignore"):
            return self.scaled * math.exp(min(self.log_scale, 709.0)) if self.log_scale <= 709.0 \
                else self.scaled * np.inf

    def ratio(self, other: "TBlock") -> np.ndarray:
        """Entrywise ratio (NaN where ``other`` vanishes)."""
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.scaled / other.scaled * math.exp(self.log_scale - other.log_scale)


@dataclass(frozen=True)
class CylIntermediates:
    """p0, p1 (in units of 1/R), the coupling K and Delta_1..Delta_4."""

    p0: float
    p1: float
    K: float
    deltas: tuple


def _check(m, kappaR, kzR):
    if int(m) != m or m < 0:
        raise ValueError("m must be a non-negative integer")
    if not kappaR > 0:
        raise ValueError("kappaR must be positive")
    if not np.isfinite(kzR):
        raise ValueError("kzR must be finite")


@dataclass(frozen=True)
class _Waves:
    p: float
    q: float
    eta: float
    AK: np.ndarray
    BK: np.ndarray
    AI: np.ndarray
    BI: np.ndarray


def _ab(m, kz, p, q, Z, Zp):
    A = np.array([[0.0, -p * p * Z / q], [-p * Zp, -m * kz * Z / q]])
    B = np.array([[p * p * Z / q, 0.0], [m * kz * Z / q, -p * Zp]])
    return A, B


def _waves(m: int, kappaR: float, kzR: float, medium: MediumResponse) -> _Waves:
    q = kappaR * medium.index
    p = math.sqrt(q * q + kzR * kzR)
    AK, BK = _ab(m, kzR, p, q, float(cyl_k_scaled(m, p)), float(cyl_k_prime_scaled(m, p)))
    AI, BI = _ab(m, kzR, p, q, float(cyl_i_scaled(m, p)), float(cyl_i_prime_scaled(m, p)))
    return _Waves(p, q, math.sqrt(medium.epsilon / medium.mu), AK, BK, AI, BI)


# currents (j_z, j_phi, m_z, m_phi) -> right-hand side of the jump conditions
_JUMP_RHS = np.zeros((4, 4))
_JUMP_RHS[0, 3] = 1.0
_JUMP_RHS[1, 2] = -1.0
_JUMP_RHS[2, 1] = -1.0
_JUMP_RHS[3, 0] = 1.0


def _radiated(w: _Waves):
    """Outgoing/interior amplitudes radiated by unit currents in a homogeneous
    medium, and the principal-value traces (n x E, n x H) on the surface.

    Jump conditions: n x (H_out - H_in) = J, n x (E_out - E_in) = -M.
    Returns (trace 4x4, outgoing 2x4).
    """
    L = np.block([[w.AK, -w.AI], [w.eta * w.BK, -w.eta * w.BI]])
    C = np.linalg.solve(L, _JUMP_RHS)
    co, ci = C[:2], C[2:]
    e_avg = 0.5 * (w.AK @ co + w.AI @ ci)
    h_avg = 0.5 * w.eta * (w.BK @ co + w.BI @ ci)
    return np.vstack([_N_CROSS @ e_avg, _N_CROSS @ h_avg]), co


def cyl_block_analytic(m: int, kappaR: float, kzR: float, medium0: MediumResponse,
                       medium: MediumResponse) -> np.ndarray:
    """C1 block from cylindrical-wave expansions of G0 and G_s (R = 1 units)."""
    _check(m, kappaR, kzR)
    t0, _ = _radiated(_waves(m, kappaR, kzR, medium0))
    t1, _ = _radiated(_waves(m, kappaR, kzR, medium))
    e0, m0, e1, m1 = medium0.epsilon, medium0.mu, medium.epsilon, medium.mu
    e_rows = -2.0 / (m0 + m1) * (m1 * t1[2:] - m0 * t0[2:])
    h_rows = 2.0 / (e0 + e1) * (e1 * t1[:2] - e0 * t0[:2])
    return np.vstack([e_rows, h_rows])


# quadrature path ---------------------------------------------------------------------

def _zk1_minus_one(z):
    """z K_1(z) - 1, accurate for small z (series) and large z (direct)."""
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    small = z < 1.0
    zs = z[small]
    if zs.size:
        y = zs * zs / 4.0
        lg = 2.0 * np.log(zs / 2.0)
        total = np.zeros_like(zs)
        term = np.ones_like(zs)  # y^(k+1) / (k! (k+1)!) built incrementally
        for k in range(30):
            term = term * y / ((k + 1.0) if k == 0 else (k * (k + 1.0)))
            total = total + term * (lg - sp.digamma(k + 1.0) - sp.digamma(k + 2.0))
        out[small] = total
    zl = z[~small]
    out[~small] = zl * sp.k1(zl) - 1.0
    return out


def _kernel_2d(rho_vec, kappa, kz, medium0, medium):
    """Difference kernels of the k_z-transformed Green tensors.

    Returns (dHH, dHE, dEH) stacks of 3x3 complex matrices with
      dHH = mu1 G1^HH - mu0 G0^HH (also equal to eps1 G1^EE - eps0 G0^EE),
      dHE = mu1 G1^HE - mu0 G0^HE and dEH = eps1 G1^EH - eps0 G0^EH,
    where g~ = K_0(p rho)/(2 pi).  The rho^-2 parts of the Hessians cancel
    analytically through _zk1_minus_one.
    """
    rho = np.linalg.norm(rho_vec, axis=-1)
    rhat = rho_vec[:, :2] / rho[:, None]
    x0 = medium0.epsilon * medium0.mu * kappa**2
    x1 = medium.epsilon * medium.mu * kappa**2
    p0, p1 = math.sqrt(x0 + kz * kz), math.sqrt(x1 + kz * kz)
    z0, z1 = p0 * rho, p1 * rho
    g0, g1 = sp.k0(z0) / TWO_PI, sp.k0(z1) / TWO_PI
    a0, a1 = _zk1_minus_one(z0), _zk1_minus_one(z1)
    # h = g1 - g0
    dh = -(a1 - a0) / rho / TWO_PI
    d2h = (p1 * p1 * sp.k0(z1) - p0 * p0 * sp.k0(z0)) / TWO_PI + (a1 - a0) / rho**2 / TWO_PI
    n = len(rho)
    DD = np.zeros((n, 3, 3), dtype=complex)
    outer = rhat[:, :, None] * rhat[:, None, :]
    DD[:, :2, :2] = d2h[:, None, None] * outer + (dh / rho)[:, None, None] * (np.eye(2) - outer)
    grad_h = dh[:, None] * rhat
    DD[:, :2, 2] = 1j * kz * grad_h
    DD[:, 2, :2] = 1j * kz * grad_h
    DD[:, 2, 2] = -kz * kz * (g1 - g0)
    diff_x = (x1 * g1 - x0 * g0)[:, None, None] * np.eye(3)
    dHH = -(1.0 / kappa) * (-DD + diff_x)

    def grad(g_fn_p, g):
        gr = np.zeros((n, 3), dtype=complex)
        gr[:, :2] = (-g_fn_p * sp.k1(g_fn_p * rho) / TWO_PI)[:, None] * rhat
        gr[:, 2] = 1j * kz * g
        return gr

    from .greens import LEVI_CIVITA
    grad0, grad1 = grad(p0, g0), grad(p1, g1)

    def curl_block(coef1, coef0):
        v = coef1 * grad1 - coef0 * grad0
        return -np.einsum("ijk,nk->nij", LEVI_CIVITA, v)

    dHE = curl_block(medium.mu, medium0.mu)
    dEH = -curl_block(medium.epsilon, medium0.epsilon)
    return dHH, dHE, dEH


def cyl_block_quadrature(m: int, kappaR: float, kzR: float, medium0: MediumResponse,
                         medium: MediumResponse, n_nodes: int = 160) -> np.ndarray:
    """C1 block by direct integration of the k_z-transformed kernel over the
    angle (R = 1).

    The axial integral is done analytically (K_0 representation); the
    remaining angular integral has logarithmic and jump singularities at
    dphi = 0 only, so each half [0, pi] is mapped by dphi = pi t^3 and
    integrated with Gauss-Legendre.
    """
    _check(m, kappaR, kzR)
    t, w = np.polynomial.legendre.leggauss(n_nodes)
    t = 0.5 * (t + 1.0)
    w = 0.5 * w
    phi_half = math.pi * t**3
    w_half = w * 3.0 * math.pi * t**2
    phi = np.concatenate([phi_half, -phi_half])
    wts = np.concatenate([w_half, w_half])
    s = np.sin(phi / 2.0)
    rho_vec = np.stack([2.0 * s * s, -np.sin(phi), np.zeros_like(phi)], axis=-1)
    dHH, dHE, dEH = _kernel_2d(rho_vec, kappaR, kzR, medium0, medium)
    phase = np.exp(1j * m * phi) * wts
    zhat = np.array([0.0, 0.0, 1.0])
    phihat = np.stack([-np.sin(phi), np.cos(phi), np.zeros_like(phi)], axis=-1)
    basis = [np.broadcast_to(zhat, phihat.shape), phihat]
    e0, mu0, e1, mu1 = medium0.epsilon, medium0.mu, medium.epsilon, medium.mu

    def tangential_n_cross(v):
        # n = x-hat: (n x V)_z = V_y, (n x V)_phi = -V_z at phi = 0
        return np.array([v[1], -v[2]])

    block = np.zeros((4, 4))
    for b in range(4):
        src = basis[b % 2]
        if b < 2:  # electric current
            h_field = np.einsum("nij,nj,n->i", dHE, src, phase)
            # eps1 G1^EE - eps0 G0^EE has the same form as mu1 G1^HH - mu0 G0^HH
            e_field = np.einsum("nij,nj,n->i", dHH, src, phase)
        else:      # magnetic current
            h_field = np.einsum("nij,nj,n->i", dHH, src, phase)
            e_field = np.einsum("nij,nj,n->i", dEH, src, phase)
        col = np.concatenate([-2.0 / (mu0 + mu1) * tangential_n_cross(h_field),
                              2.0 / (e0 + e1) * tangential_n_cross(e_field)])
        if np.max(np.abs(col.imag)) > 1e-8 * max(1.0, np.max(np.abs(col.real))):
            raise ArithmeticError("angular quadrature produced a complex block")
        block[:, b] = col.real
    return block


def cyl_sso_block(m: int, kappaR: float, kzR: float, config: CylinderConfig,
                  method: str = "analytic", **options) -> np.ndarray:
    """C1 block per (m, k_z); ``method`` is ``"analytic"`` or ``"quadrature"``."""
    m0, m1 = config.responses(kappaR)
    if method == "analytic":
        return cyl_block_analytic(m, kappaR, kzR, m0, m1)
    if method == "quadrature":
        return cyl_block_quadrature(m, kappaR, kzR, m0, m1, **options)
    raise ValueError(f"unknown method {method!r}")


def cyl_eigs(m: int, kappaR: float, kzR: float, config: CylinderConfig) -> np.ndarray:
    return block_eigenvalues(cyl_sso_block(m, kappaR, kzR, config))


# T-matrix ------------------------------------------------------------------------------

def cyl_intermediates(m: int, kappaR: float, kzR: float, medium: MediumResponse) -> CylIntermediates:
    """p0, p1, the polarization coupling K and Delta_1..Delta_4 (vacuum outside)."""
    _check(m, kappaR, kzR)
    e, mu = medium.epsilon, medium.mu
    n = math.sqrt(e * mu)
    p0 = math.hypot(kappaR, kzR)
    p1 = math.sqrt(e * mu * kappaR**2 + kzR**2)
    K = m * kzR / (n * kappaR) * (1.0 / p1**2 - 1.0 / p0**2)
    ri1 = float(cyl_i_prime_scaled(m, p1) / (p1 * cyl_i_scaled(m, p1)))
    rk0 = float(cyl_k_prime_scaled(m, p0) / (p0 * cyl_k_scaled(m, p0)))
    ri0 = float(cyl_i_prime_scaled(m, p0) / (p0 * cyl_i_scaled(m, p0)))
    deltas = (ri1 - rk0 / e, ri1 - rk0 / mu, ri1 - ri0 / e, ri1 - ri0 / mu)
    return CylIntermediates(p0, p1, K, deltas)


def t_exact(m: int, kappaR: float, kzR: float, config: CylinderConfig) -> TBlock:
    """Closed-form T-matrix of a magneto-dielectric cylinder in vacuum.

    T^HH = -(I/K) (D1 D4 + K^2)/(D1 D2 + K^2), T^EE = -(I/K) (D2 D3 + K^2)/(D1 D2 + K^2),
    T^HE = -T^EH = K / (sqrt(eps mu) (p0 R)^2 K_m(p0 R)^2 (D1 D2 + K^2)),
    Bessel functions at p0 R; returned scaled by exp(-2 p0 R).
    """
    m0, m1 = config.responses(kappaR)
    if abs(m0.epsilon - 1.0) > 0 or abs(m0.mu - 1.0) > 0:
        raise ValueError("the closed-form T-matrix assumes a vacuum exterior; use t_sso")
    c = cyl_intermediates(m, kappaR, kzR, m1)
    d1, d2, d3, d4 = c.deltas
    den = d1 * d2 + c.K**2
    i0, k0 = float(cyl_i_scaled(m, c.p0)), float(cyl_k_scaled(m, c.p0))
    thh = -i0 / k0 * (d1 * d4 + c.K**2) / den
    tee = -i0 / k0 * (d2 * d3 + c.K**2) / den
    the = c.K / (m1.index * c.p0**2 * k0**2) / den
    return TBlock(m, np.array([[tee, 0.0 - the], [the, thh]]), 2.0 * c.p0)


def _t_from_currents(m, kappaR, kzR, m0, m1, solve):
    w0 = _waves(m, kappaR, kzR, m0)
    _, co = _radiated(w0)
    T = np.zeros((2, 2))
    for a in range(2):
        amp = np.zeros(2)
        amp[a] = 1.0
        e_inc = w0.AI @ amp
        h_inc = w0.eta * (w0.BI @ amp)
        V = np.concatenate([2.0 * m0.mu / (m0.mu + m1.mu) * (_N_CROSS @ h_inc),
                            -2.0 * m0.epsilon / (m0.epsilon + m1.epsilon) * (_N_CROSS @ e_inc)])
        T[:, a] = co @ solve(V)
    # (a, b) wave order -> (E, H) polarization order: E <-> b, H <-> a
    return np.array([[T[1, 1], T[0, 1]], [T[1, 0], T[0, 0]]])


def t_sso(m: int, kappaR: float, kzR: float, config: CylinderConfig, order: int | None = None) -> TBlock:
    """T-matrix from the surface currents (1 - K)^-1 V or sum_{q<=order} K^q V.

    A regular wave of unit amplitude drives the source term V; the currents
    radiate outgoing waves whose amplitudes are the T-matrix columns.
    """
    m0, m1 = config.responses(kappaR)
    K = cyl_block_analytic(m, kappaR, kzR, m0, m1)
    if order is None:
        solve = lambda V: np.linalg.solve(np.eye(4) - K, V)
    else:
        if order < 0:
            raise ValueError("order must be non-negative")

        def solve(V):
            total, term = V.copy(), V.copy()
            for _ in range(order):
                term = K @ term
                total = total + term
            return total
    p0 = math.sqrt((kappaR * m0.index) ** 2 + kzR**2)
    return TBlock(m, _t_from_currents(m, kappaR, kzR, m0, m1, solve), 2.0 * p0)


def mse_t(m: int, kappaR: float, kzR: float, config: CylinderConfig, order: int) -> TBlock:
    """Order-p multiple-scattering approximant of the T-matrix.

    Using the same incident and outgoing waves as :func:`t_exact`, the p -> infinity
    limit reproduces the closed form with no extra normalization.
    """
    return t_sso(m, kappaR, kzR, config, order)

"""Zero-frequency formulation in terms of surface charges.

At kappa = 0 the finite-frequency kernels are singular, but the charge
densities obey decoupled electric and magnetic equations whose kernel is
the double-layer operator 2 c d_{n(u)} g0(u - u') with static contrast
c = (chi_0 - chi_s)/(chi_0 + chi_s), chi = eps or mu.  On a sphere of
radius R, d_n g0 = -1/(8 pi R |u - u'|).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    NM_EV, VACUUM, Drude, Fixed, MediumResponse, MseOrder, PerfectConductor, Plasma, Units,
    as_material,
)
from .quadrature import QuadratureConfig, integrate_semi_infinite

TWO_PI = 2.0 * math.pi


class ResolutionError(RuntimeError):
    """Raised when a discretization is too coarse for the requested output."""


@dataclass(frozen=True)
class StaticContrast:
    """(chi_0 - chi_s)/(chi_0 + chi_s) for chi = eps or mu."""

    value: float

    def __post_init__(self):
        if not -1.0 <= self.value <= 1.0:
            raise ValueError("static contrast must lie in [-1, 1]")

    @classmethod
    def from_response(cls, chi0: float, chi: float) -> "StaticContrast":
        if chi0 <= 0 or chi <= 0:
            raise ValueError("static responses must be positive")
        return cls((chi0 - chi) / (chi0 + chi))


@dataclass(frozen=True)
class Sphere:
    radius: float = 1.0


@dataclass(frozen=True)
class PlanePair:
    """Two parallel planes at distance d; charges are given as in-plane Fourier
    amplitudes at wavenumber k, shape (2,) = (plate 1, plate 2)."""

    distance: float
    k: float


@dataclass
class SurfaceChargeDensity:
    """Charge values on Nystrom nodes with positive weights."""

    nodes: np.ndarray
    weights: np.ndarray
    values: np.ndarray


@dataclass(frozen=True)
class SphereGrid:
    """Product grid: Gauss-Legendre in cos(theta), uniform in phi."""

    radius: float
    cos_theta: np.ndarray
    phi: np.ndarray
    weights_theta: np.ndarray

    @classmethod
    def build(cls, radius: float = 1.0, n_theta: int = 64) -> "SphereGrid":
        if n_theta < 2:
            raise ValueError("n_theta must be at least 2")
        x, w = np.polynomial.legendre.leggauss(n_theta)
        phi = TWO_PI * np.arange(2 * n_theta) / (2 * n_theta)
        return cls(radius, x, phi, w)

    @property
    def n_phi(self) -> int:
        return len(self.phi)

    def ring_weights(self) -> np.ndarray:
        """Weight of each node on a ring of constant theta."""
        return self.weights_theta * (TWO_PI / self.n_phi) * self.radius**2

    def nodes(self) -> np.ndarray:
        st = np.sqrt(1.0 - self.cos_theta**2)
        xyz = np.stack(np.broadcast_arrays(st[:, None] * np.cos(self.phi)[None, :],
                                           st[:, None] * np.sin(self.phi)[None, :],
                                           self.cos_theta[:, None]), axis=-1)
        return self.radius * xyz.reshape(-1, 3)

    def weights(self) -> np.ndarray:
        return np.repeat(self.ring_weights(), self.n_phi)

    def charge(self, values) -> SurfaceChargeDensity:
        return SurfaceChargeDensity(self.nodes(), self.weights(), np.asarray(values, dtype=float))


def _check_weights(weights, area):
    if np.any(weights <= 0) or abs(weights.sum() - area) > 1e-10 * area:
        raise ResolutionError("quadrature weights do not integrate the surface area")


def _sphere_ring_kernel(grid: SphereGrid, contrast: float):
    """Kernel values K(theta_i, theta_j, dphi_p) with the coincident node zeroed,
    and the diagonal correction D_i = -c - sum_{j != i} K_ij w_j (the exact
    integral of the kernel over the sphere is -c)."""
    R = grid.radius
    x = grid.cos_theta
    s = np.sqrt(1.0 - x * x)
    cosg = x[:, None, None] * x[None, :, None] + s[:, None, None] * s[None, :, None] * np.cos(grid.phi)[None, None, :]
    dist = R * np.sqrt(np.maximum(2.0 * (1.0 - cosg), 0.0))
    n = len(x)
    dist[np.arange(n), np.arange(n), 0] = np.inf
    K = -contrast / (4.0 * math.pi * R * dist)
    wq = grid.ring_weights()
    D = -contrast - np.einsum("ijp,j->i", K, wq)
    return K, D


def sphere_static_mblocks(contrast: float, radius: float = 1.0, n_theta: int = 64) -> dict:
    """Symmetrized azimuthal blocks of the Nystrom matrix of the sphere kernel.

    The kernel depends only on u . u', so the Nystrom matrix is circulant
    in phi and splits into one n_theta x n_theta block per azimuthal index
    m.  The similarity W^1/2 A W^-1/2 makes each block symmetric.
    """
    grid = SphereGrid.build(radius, n_theta)
    _check_weights(grid.weights(), 4.0 * math.pi * radius**2)
    K, D = _sphere_ring_kernel(grid, contrast)
    F = np.fft.fft(K, axis=2).real
    sq = np.sqrt(grid.ring_weights())
    return {m: F[:, :, m] * sq[:, None] * sq[None, :] + np.diag(D) for m in range(n_theta)}


def static_kernel_apply(shape, contrast, charge):
    """Apply the static double-layer kernel 2 c d_n g0.

    Parameters
    ----------
    shape : Sphere or PlanePair
    contrast : StaticContrast or float, or a pair of them for PlanePair
    charge : SurfaceChargeDensity (sphere, on a :class:`SphereGrid`) or
        array of two Fourier amplitudes (plane pair)
    """
    if isinstance(shape, PlanePair):
        c = contrast if isinstance(contrast, (tuple, list)) else (contrast, contrast)
        c1, c2 = (getattr(v, "value", v) for v in c)
        rho = np.asarray(charge, dtype=float)
        e = math.exp(-shape.k * shape.distance)
        # flat self-kernels vanish; cross kernel 2 c d_n g0 -> c exp(-k d)
        return np.array([c1 * e * rho[1], c2 * e * rho[0]])
    if not isinstance(shape, Sphere):
        raise TypeError("shape must be Sphere or PlanePair")
    c = getattr(contrast, "value", contrast)
    R = shape.radius
    w = np.asarray(charge.weights, dtype=float)
    _check_weights(w, 4.0 * math.pi * R**2)
    u = np.asarray(charge.nodes, dtype=float)
    f = np.asarray(charge.values, dtype=float)
    out = np.empty_like(f)
    for i in range(len(f)):
        dist = np.linalg.norm(u - u[i], axis=1)
        dist[i] = np.inf
        k = -c / (4.0 * math.pi * R * dist)
        out[i] = np.dot(k * w, f - f[i]) - c * f[i]
    return SurfaceChargeDensity(u, w, out)


def static_sphere_eigs(l_max: int, contrast, radius: float = 1.0, n_theta: int = 64,
                       degeneracy_tol: float = 1e-3) -> np.ndarray:
    """Eigenvalues lambda_0 .. lambda_{l_max} of the static sphere kernel.

    Obtained from the Nystrom matrix: the degree-l eigenvalue appears once in
    each azimuthal block |m| <= l (2l + 1 times in total); the returned value
    is the mean over those copies.

    Raises
    ------
    ResolutionError
        If the copies disagree by more than ``degeneracy_tol`` relative, or
        l_max is not resolved by the grid.
    """
    c = getattr(contrast, "value", contrast)
    if l_max < 0:
        raise ValueError("l_max must be non-negative")
    if l_max > n_theta // 4:
        raise ResolutionError("l_max too large for the Nystrom grid; increase n_theta")
    if c == 0:
        return np.zeros(l_max + 1)
    blocks = sphere_static_mblocks(c, radius, n_theta)
    ordered = {}
    for m in range(min(l_max, n_theta - 1) + 1):
        ev = np.linalg.eigvalsh(blocks[m])
        ordered[m] = ev[np.argsort(-np.abs(ev))]
    out = np.empty(l_max + 1)
    for l in range(l_max + 1):
        copies = np.array([ordered[m][l - m] for m in range(l + 1)])
        spread = np.max(np.abs(copies - copies[0]))
        if spread > degeneracy_tol * abs(copies[0]):
            raise ResolutionError(f"degeneracy mismatch at l={l}: spread {spread:.3g}")
        # weight m > 0 twice (m and -m)
        wts = np.where(np.arange(l + 1) == 0, 1.0, 2.0)
        out[l] = np.dot(wts, copies) / (2 * l + 1)
    return out


def sphere_static_spectrum(contrast, radius: float = 1.0, n_theta: int = 64) -> np.ndarray:
    """All eigenvalues of the symmetrized Nystrom matrix (each m-block, m > 0
    counted twice)."""
    c = getattr(contrast, "value", contrast)
    blocks = sphere_static_mblocks(c, radius, n_theta)
    out = []
    n_phi = 2 * n_theta
    for m in range(n_phi):
        mm = m if m <= n_theta else n_phi - m
        if mm >= n_theta:
            continue
        out.append(np.linalg.eigvalsh(blocks[mm]))
    return np.concatenate(out)


# plates -------------------------------------------------------------------------

def static_reflection(material, k, medium0=VACUUM, units: Units = NM_EV):
    """Static reflection coefficients (r_j, r_m) of a half-space.

    r_j = (eps - eps0)/(eps + eps0) (1 for conductors) and
    r_m = (mu - mu0)/(mu + mu0).  For the plasma model the magnetic
    coefficient keeps its wavenumber dependence,
    (mu k - mu0 sqrt(k^2 + mu k_p^2)) / (mu k + mu0 sqrt(...)), k_p = omega_p/(hbar c).
    A perfect conductor has r_m = 0 (the eps -> infinity limit of a
    non-magnetic dielectric).
    """
    model = as_material(material)
    m0 = medium0 if isinstance(medium0, MediumResponse) else MediumResponse(
        as_material(medium0).epsilon, as_material(medium0).mu)
    k = np.asarray(k, dtype=float)
    one = np.ones_like(k)
    if isinstance(model, Fixed):
        rj = (model.epsilon - m0.epsilon) / (model.epsilon + m0.epsilon)
        rm = (model.mu - m0.mu) / (model.mu + m0.mu)
        return rj * one, rm * one
    if isinstance(model, PerfectConductor):
        return one, 0.0 * one
    if isinstance(model, Drude):
        return one, (model.mu - m0.mu) / (model.mu + m0.mu) * one
    if isinstance(model, Plasma):
        kp2 = (model.omega_p / units.hbar_c) ** 2
        root = np.sqrt(k * k + model.mu * kp2 / m0.epsilon)
        return one, (model.mu * k - m0.mu * root) / (model.mu * k + m0.mu * root)
    raise TypeError(f"unknown material model {model!r}")


def _medium0_response(config):
    m0 = config.medium0
    return MediumResponse(m0.epsilon, m0.mu)


def static_plate_mode(config, k, order=None, quantity: str = "energy"):
    """Per-mode n = 0 integrand (without k/2pi) summed over both charge types.

    energy: ln(1 - x_p) or -sum_{j <= k+1} x_p^j / j, x_p = r1_p r2_p e^{-2kd};
    force:  -2k x_p/(1 - x_p) or its truncation.
    """
    order = MseOrder.parse(order)
    k = np.asarray(k, dtype=float)
    m0 = _medium0_response(config)
    r1 = static_reflection(config.body1, k, m0, config.units)
    r2 = static_reflection(config.body2, k, m0, config.units)
    e = np.exp(-2.0 * k * config.distance)
    total = np.zeros_like(k)
    for p in range(2):
        x = r1[p] * r2[p] * e
        if quantity == "energy":
            if order.k is None:
                total = total + np.log1p(-x)
            else:
                total = total - sum(x**j / j for j in range(1, order.k + 2))
        else:
            if order.k is None:
                total = total - 2.0 * k * x / (1.0 - x)
            else:
                total = total - 2.0 * k * sum(x**j for j in range(1, order.k + 2))
    return total


def static_plate_n0_integral(config, order=None, quantity: str = "energy",
                             quadrature: QuadratureConfig | None = None) -> float:
    """Unweighted n = 0 term  int k dk/(2 pi) [static per-mode integrand].

    For flat plates the static self-kernels vanish, so the Neumann order l
    has no effect at n = 0; only the round-trip truncation k matters.
    """
    cfg = quadrature or config.quadrature
    res = integrate_semi_infinite(
        lambda k: np.asarray(k) / TWO_PI * static_plate_mode(config, k, order, quantity),
        1.0 / config.distance, cfg)
    return float(res.value)


def static_plate_n0_energy(config, order=None) -> float:
    """Classical n = 0 contribution (k_B T / 2) sum_p int k dk/(2 pi) ln(1 - r1 r2 e^{-2kd})."""
    if not config.temperature > 0:
        return 0.0
    kT = config.units.thermal_energy(config.temperature)
    return 0.5 * kT * static_plate_n0_integral(config, order, "energy")


# Casimir-Polder -----------------------------------------------------------------

def static_gamma_plate(z0: float, material, medium0=VACUUM, units: Units = NM_EV,
                       quadrature: QuadratureConfig | None = None):
    """kappa -> 0 limit of kappa * Gamma at the particle position.

    Returns ((ee_xx, ee_zz), (hh_xx, hh_zz)).  For wavenumber-independent
    reflection coefficients r this is r diag(1, 1, 2)/(32 pi z0^3).
    """
    if not z0 > 0:
        raise ValueError("z0 must be positive")
    model = as_material(material)
    if isinstance(model, Plasma):
        cfg = quadrature or QuadratureConfig(rel_tol=1e-12)

        def f(k):
            rj, rm = static_reflection(model, k, medium0, units)
            base = np.asarray(k) ** 2 * np.exp(-2.0 * np.asarray(k) * z0) / (4.0 * math.pi)
            return np.stack([0.5 * base * rj, base * rj, 0.5 * base * rm, base * rm], axis=-1)
        v = integrate_semi_infinite(f, 1.0 / z0, cfg).value
        return (v[0], v[1]), (v[2], v[3])
    rj, rm = (float(np.asarray(r).ravel()[0]) for r in static_reflection(model, np.array([1.0]), medium0, units))
    base = 1.0 / (32.0 * math.pi * z0**3)
    return (rj * base, 2.0 * rj * base), (rm * base, 2.0 * rm * base)


def static_cp_n0(particle, z0: float, material, temperature: float, medium0=VACUUM,
                 units: Units = NM_EV) -> float:
    """Classical n = 0 Casimir-Polder term -2 pi k_B T [alpha(0) tr G_EE + beta(0) tr G_HH]."""
    if not temperature > 0:
        return 0.0
    (exx, ezz), (hxx, hzz) = static_gamma_plate(z0, material, medium0, units)
    kT = units.thermal_energy(temperature)
    a0 = particle.alpha_trace_weighted(0.0, (exx, exx, ezz))
    b0 = particle.beta_trace_weighted(0.0, (hxx, hxx, hzz))
    return -2.0 * math.pi * kT * (a0 + b0)

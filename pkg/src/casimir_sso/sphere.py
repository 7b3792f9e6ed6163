"""Single sphere in the vector-spherical-harmonic basis.

Surface currents of degree l are expanded on T1 = r x grad Y_lm and
T2 = r x T1 (the pair X_lm, r x X_lm up to a common factor), so a block is
indexed (j1, j2, m1, m2).  By rotational symmetry the 4x4 block does not
depend on m.

With x = q R, q = kappa sqrt(eps mu), and the scaled spherical functions of
:mod:`casimir_sso.special`, write for each medium

    P = i_l k_l,   Q = I' K',   S = i_l K' + k_l I',
    I' = (x i_l)'/x,  K' = (x k_l)'/x,

which are exactly the radial factors of the principal-value surface traces
of the free Green tensor.  The C1 block is

    K^EE = diag(-1, 1) (mu0 x0^2 S0 - mu1 x1^2 S1) / (mu0 + mu1)
    K^EH = 2/(mu0 + mu1) [-n0 x0^2 A0 + n1 x1^2 A1],   A = [[0, Q], [P, 0]]
    K^HH = diag(1, -1) (eps1 x1^2 S1 - eps0 x0^2 S0) / (eps0 + eps1)
    K^HE = -(mu0 + mu1)/(eps0 + eps1) K^EH

with n = sqrt(eps mu).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import NM_EV, VACUUM, MediumResponse, PerfectConductor, Units, as_material, evaluate_material
from .engine import block_eigenvalues
from .greens import green_tensor
from .special import sph_i_riccati_scaled, sph_i_scaled, sph_k_riccati_scaled, sph_k_scaled

TWO_PI = 2.0 * math.pi


class QuadratureConvergenceError(RuntimeError):
    """Raised when refining a quadrature changes the result beyond tolerance."""


@dataclass(frozen=True)
class SphereConfig:
    """Sphere of radius R made of ``material`` in ``medium0``.

    ``kappaR`` arguments are dimensionless; the material is evaluated at
    kappa = kappaR / R in the unit system ``units``.
    """

    radius: float = 1.0
    material: object = 4.0
    medium0: object = VACUUM
    units: Units = NM_EV

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        object.__setattr__(self, "material", as_material(self.material))

    def responses(self, kappaR: float):
        kappa = kappaR / self.radius
        m0 = self.medium0 if isinstance(self.medium0, MediumResponse) else evaluate_material(
            as_material(self.medium0), kappa, self.units)
        if isinstance(self.material, PerfectConductor):
            return m0, None
        return m0, evaluate_material(self.material, kappa, self.units)


@dataclass(frozen=True)
class SphericalBlock:
    l: int
    block: np.ndarray


@dataclass(frozen=True)
class SphereRadial:
    """Radial trace factors of one medium (scaled, overflow free)."""

    x: float
    P: float
    Q: float
    S: float

    @classmethod
    def at(cls, l: int, x: float) -> "SphereRadial":
        i, k = sph_i_scaled(l, x), sph_k_scaled(l, x)
        di, dk = sph_i_riccati_scaled(l, x), sph_k_riccati_scaled(l, x)
        return cls(float(x), float(i * k), float(di * dk), float(i * dk + k * di))


def _check(l, kappaR):
    if int(l) != l or l < 1:
        raise ValueError("l must be an integer >= 1")
    if not kappaR > 0:
        raise ValueError("kappaR must be positive")


def sphere_block_closed_form(l: int, kappaR: float, medium0: MediumResponse, medium: MediumResponse) -> np.ndarray:
    """C1 block from the spherical-wave expansion of G0 and G_s."""
    _check(l, kappaR)
    e0, m0, e1, m1 = medium0.epsilon, medium0.mu, medium.epsilon, medium.mu
    r0 = SphereRadial.at(l, kappaR * medium0.index)
    r1 = SphereRadial.at(l, kappaR * medium.index)
    flip = np.diag([-1.0, 1.0])

    def A(r):
        return np.array([[0.0, r.Q], [r.P, 0.0]])

    ee = flip * (m0 * r0.x**2 * r0.S - m1 * r1.x**2 * r1.S) / (m0 + m1)
    hh = -flip * (e1 * r1.x**2 * r1.S - e0 * r0.x**2 * r0.S) / (e0 + e1)
    eh = 2.0 / (m0 + m1) * (-medium0.index * r0.x**2 * A(r0) + medium.index * r1.x**2 * A(r1))
    he = -(m0 + m1) / (e0 + e1) * eh
    return np.block([[ee, eh], [he, hh]])


def pc_sphere_block(l: int, kappaR: float, medium0: MediumResponse = VACUUM) -> np.ndarray:
    """Electric-current-only block of 2 n x G0^HE on a sphere: x0^2 S0 diag(-1, 1)."""
    _check(l, kappaR)
    r0 = SphereRadial.at(l, kappaR * medium0.index)
    return r0.x**2 * r0.S * np.diag([-1.0, 1.0])


# quadrature path -----------------------------------------------------------------

def _frame(u0):
    e3 = u0 / np.linalg.norm(u0)
    a = np.array([1.0, 0.0, 0.0]) if abs(e3[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = np.cross(a, e3)
    e1 /= np.linalg.norm(e1)
    return e1, np.cross(e3, e1), e3


def _harmonic_gradient(l: int, m: int, u):
    """Gradient of an extension of the real harmonic Y (m = 0: P_l(z);
    m = 1: -x P_l'(z)); only its tangential part is used."""
    z = u[..., 2]
    if m == 0:
        dp = _legendre_derivative(l, z)
        g = np.zeros(u.shape)
        g[..., 2] = dp
        return g
    if m == 1:
        dp = _legendre_derivative(l, z)
        ddp = _legendre_second_derivative(l, z)
        g = np.zeros(u.shape)
        g[..., 0] = -dp
        g[..., 2] = -u[..., 0] * ddp
        return g
    raise ValueError("quadrature basis implemented for m = 0 and m = 1")


def _legendre_derivative(l, z):
    """P_l'(z) as a polynomial (exact at z = +-1)."""
    c = np.zeros(l + 1)
    c[l] = 1.0
    return np.polynomial.legendre.legval(z, np.polynomial.legendre.legder(c))


def _legendre_second_derivative(l, z):
    c = np.zeros(l + 1)
    c[l] = 1.0
    return np.polynomial.legendre.legval(z, np.polynomial.legendre.legder(c, 2))


def _basis(l, m, u):
    """T1 = u x grad Y and T2 = u x T1 at unit vectors u."""
    t1 = np.cross(u, _harmonic_gradient(l, m, u))
    return t1, np.cross(u, t1)


def _cross_matrix(n):
    return np.array([[0.0, -n[2], n[1]], [n[2], 0.0, -n[0]], [-n[1], n[0], 0.0]])


def sphere_block_quadrature(l: int, kappaR: float, medium0: MediumResponse, medium: MediumResponse,
                            m: int = 0, n_gamma: int = 64, n_phi: int | None = None,
                            point=(0.9, 0.4)) -> np.ndarray:
    """C1 block by direct surface quadrature of the kernel.

    The kernel is applied to each basis field and evaluated at one point
    u0 (polar angles ``point``) on the unit sphere (R = 1; only kappaR
    matters).  The surface integral uses geodesic polar coordinates
    (gamma, phi) around u0: the area element sin(gamma) cancels the
    1/|u - u'| = 1/(2 sin(gamma/2)) singularity of the C1 kernel, leaving a
    smooth integrand handled by Gauss-Legendre in gamma and the trapezoid
    rule in phi.  The block follows from K_ab = (K T_b)(u0) . T_a(u0) / |T_a(u0)|^2.
    """
    _check(l, kappaR)
    n_phi = n_phi or 2 * l + 24
    th, ph = point
    u0 = np.array([math.sin(th) * math.cos(ph), math.sin(th) * math.sin(ph), math.cos(th)])
    e1, e2, e3 = _frame(u0)
    xg, wg = np.polynomial.legendre.leggauss(n_gamma)
    gam = 0.5 * math.pi * (xg + 1.0)
    wgam = 0.5 * math.pi * wg
    phis = TWO_PI * np.arange(n_phi) / n_phi
    G, P = np.meshgrid(gam, phis, indexing="ij")
    u = (np.sin(G)[..., None] * (np.cos(P)[..., None] * e1 + np.sin(P)[..., None] * e2)
         + np.cos(G)[..., None] * e3)
    w = (wgam * np.sin(gam))[:, None] * (TWO_PI / n_phi) * np.ones_like(P)
    dr = u0 - u
    kappa = kappaR
    g0 = green_tensor(dr, kappa, medium0)
    g1 = green_tensor(dr, kappa, medium)
    ci = np.array([medium.epsilon] * 3 + [medium.mu] * 3)
    ce = np.array([medium0.epsilon] * 3 + [medium0.mu] * 3)
    bracket = ci[:, None] * g1 - ce[:, None] * g0
    nx = _cross_matrix(u0)
    b_e = nx @ bracket[..., 0:3, :]
    b_h = nx @ bracket[..., 3:6, :]
    kern = np.concatenate([-2.0 / (medium.mu + medium0.mu) * b_h,
                           2.0 / (medium.epsilon + medium0.epsilon) * b_e], axis=-2)
    t1, t2 = _basis(l, m, u)
    a1, a2 = _basis(l, m, u0[None, :])
    targets = [a1[0], a2[0]]
    block = np.zeros((4, 4))
    for b in range(4):
        src = np.zeros(u.shape[:-1] + (6,))
        tb = (t1, t2)[b % 2]
        if b < 2:
            src[..., 0:3] = tb
        else:
            src[..., 3:6] = tb
        out = np.einsum("abij,abj,ab->i", kern, src, w)
        for a in range(4):
            ta = targets[a % 2]
            part = out[0:3] if a < 2 else out[3:6]
            block[a, b] = part @ ta / (ta @ ta)
    return block


def sphere_sso_block(l: int, kappaR: float, config: SphereConfig, method: str = "addition",
                     **quadrature_options) -> SphericalBlock:
    """C1 block for degree l.

    ``method`` is ``"addition"`` (spherical-wave expansion, closed form) or
    ``"quadrature"`` (direct surface integration); perfectly conducting
    spheres return the 2x2 electric-current block.
    """
    m0, m1 = config.responses(kappaR)
    if m1 is None:
        return SphericalBlock(l, pc_sphere_block(l, kappaR, m0))
    if method in ("addition", "addition_theorem", "AdditionTheorem"):
        return SphericalBlock(l, sphere_block_closed_form(l, kappaR, m0, m1))
    if method in ("quadrature", "Quadrature"):
        return SphericalBlock(l, sphere_block_quadrature(l, kappaR, m0, m1, **quadrature_options))
    raise ValueError(f"unknown method {method!r}")


def sphere_eigs(l: int, kappaR: float, config: SphereConfig) -> np.ndarray:
    """Eigenvalues of the degree-l block (4 values, or 2 for a perfect conductor)."""
    return block_eigenvalues(sphere_sso_block(l, kappaR, config).block)


def high_freq_eig_limit(medium0: MediumResponse, medium: MediumResponse) -> float:
    """(sqrt(eps mu) - sqrt(eps0 mu0)) / sqrt((mu + mu0)(eps + eps0)); the
    kernel eigenvalues approach +-this value as kappa -> infinity."""
    if min(medium0.epsilon, medium0.mu, medium.epsilon, medium.mu) <= 0:
        raise ValueError("responses must be positive")
    return (medium.index - medium0.index) / math.sqrt((medium.mu + medium0.mu) * (medium.epsilon + medium0.epsilon))


# scattering check ------------------------------------------------------------------

@dataclass(frozen=True)
class SphereScattering:
    """Physical surface currents for a unit regular incident wave.

    ``currents`` is (j1, j2, m1, m2) in the (T1, T2) basis and ``source``
    the corresponding inhomogeneity of the integral equation; both are scaled
    by exp(-x0).  ``t_scaled`` is the outgoing amplitude times exp(-2 x0).
    """

    polarization: str
    currents: np.ndarray
    source: np.ndarray
    t_scaled: float


def mie_currents(l: int, kappaR: float, medium0: MediumResponse, medium: MediumResponse | None,
                 polarization: str) -> SphereScattering:
    """Surface currents j = n x H, m = -n x E of the exact (Mie) solution.

    Regular and outgoing waves are E = M_l f (TE, ``"M"``) or H = M_l f
    (TM, ``"N"``), f = i_l or k_l.  On the surface M_t = -f T1 and
    N_t = -((x f)'/x) T2; the companion field follows from
    curl E = -kappa mu H, curl H = kappa eps E.
    """
    _check(l, kappaR)
    x0 = kappaR * medium0.index
    i0, k0 = float(sph_i_scaled(l, x0)), float(sph_k_scaled(l, x0))
    di0, dk0 = float(sph_i_riccati_scaled(l, x0)), float(sph_k_riccati_scaled(l, x0))
    eta0 = math.sqrt(medium0.epsilon / medium0.mu)
    if medium is not None:
        x1 = kappaR * medium.index
        i1, di1 = float(sph_i_scaled(l, x1)), float(sph_i_riccati_scaled(l, x1))
        eta1 = math.sqrt(medium.epsilon / medium.mu)
    if polarization == "M":
        # E_t = -(i0 + c k0) T1, H_t = eta0 (I0' + c K0') T2 outside
        if medium is None:
            c = -i0 / k0
        else:
            # continuity: a i1 = i0 + c k0, eta1 a I1' = eta0 (I0' + c K0')
            c = (eta1 * di1 * i0 - eta0 * di0 * i1) / (eta0 * dk0 * i1 - eta1 * di1 * k0)
        e1 = i0 + c * k0
        h2 = eta0 * (di0 + c * dk0)
        j = np.array([-h2, 0.0])
        m = np.array([0.0, e1])
        src_h, src_e = np.array([-eta0 * di0, 0.0]), np.array([0.0, i0])
    elif polarization == "N":
        # H_t = -(i0 + c k0) T1, E_t = -(I0' + c K0')/eta0 T2 outside
        if medium is None:
            c = -di0 / dk0
        else:
            c = (di1 / eta1 * i0 - di0 / eta0 * i1) / (dk0 / eta0 * i1 - di1 / eta1 * k0)
        h1 = -(i0 + c * k0)
        e2 = -(di0 + c * dk0) / eta0
        j = np.array([0.0, h1])
        m = np.array([e2, 0.0])
        src_h, src_e = np.array([0.0, -i0]), np.array([-di0 / eta0, 0.0])
    else:
        raise ValueError("polarization must be 'M' or 'N'")
    if medium is None:
        source = 2.0 * src_h
        currents = j
    else:
        source = np.concatenate([2.0 * medium0.mu / (medium0.mu + medium.mu) * src_h,
                                 2.0 * medium0.epsilon / (medium0.epsilon + medium.epsilon) * src_e])
        currents = np.concatenate([j, m])
    return SphereScattering(polarization, currents, source, c)


def sso_currents(l: int, kappaR: float, medium0: MediumResponse, medium: MediumResponse | None,
                 polarization: str, order: int | None = None) -> np.ndarray:
    """Currents from (1 - K)^-1 V (or its Neumann sum) for the same incident wave."""
    ref = mie_currents(l, kappaR, medium0, medium, polarization)
    K = pc_sphere_block(l, kappaR, medium0) if medium is None else sphere_block_closed_form(l, kappaR, medium0, medium)
    if order is None:
        return np.linalg.solve(np.eye(len(K)) - K, ref.source)
    total = ref.source.copy()
    term = ref.source.copy()
    for _ in range(order):
        term = K @ term
        total = total + term
    return total

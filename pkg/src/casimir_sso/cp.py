"""Casimir-Polder interaction of a polarizable particle above a plate.

The scattering Green tensor at the particle position r0 = (0, 0, z0) is

    Gamma(r0, r0) = int du G0(r0 - u) (1 - K11)^-1 M(u, r0),

evaluated in the plane-wave basis with k_par = (k, 0) and averaged over
the in-plane direction, so xx and yy components coincide.  Truncating the
inverse at Neumann order l gives the multiple-scattering approximants; l = 0
is the single-surface-integral term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import static
from .core import (
    C1, EXACT, NM_EV, VACUUM, CoefficientChoice, EnergyBreakdown, MediumResponse, MseOrder,
    PerfectConductor, Units, as_material, evaluate_material,
)
from .engine import exact_inverse, matsubara_sum, neumann_inverse, zero_temperature_integral
from .greens import GreenBlockLabel, green_block
from .plates import (
    PlateMedia, assemble_plate_operators, fresnel, plane_wave_green_full, plane_wave_s,
    plate_source_operator,
)
from .quadrature import QuadratureConfig, integrate_semi_infinite

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Polarizability:
    """Single-oscillator electric and magnetic polarizabilities.

    alpha(i xi) = alpha0 / (1 + xi^2 / omega_a^2), likewise for beta.
    ``alpha0`` and ``beta0`` are volumes (or length^3 in dimensionless
    units); they may be 3-vectors for diagonal anisotropic tensors.
    ``omega_a = inf`` gives a frequency-independent polarizability.
    Frequencies are energies in the same unit system as hbar c.
    """

    alpha0: object = 1.0
    omega_a: float = math.inf
    beta0: object = 0.0
    omega_b: float = math.inf

    def __post_init__(self):
        for name in ("alpha0", "beta0"):
            v = np.broadcast_to(np.asarray(getattr(self, name), dtype=float), (3,))
            if np.any(v < 0):
                raise ValueError(f"{name} must be non-negative")
            object.__setattr__(self, name, tuple(float(x) for x in v))
        for name in ("omega_a", "omega_b"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")

    @staticmethod
    def _lorentz(static_value, omega, xi):
        return np.asarray(static_value) / (1.0 + (xi / omega) ** 2)

    def alpha(self, xi: float) -> np.ndarray:
        return self._lorentz(self.alpha0, self.omega_a, xi)

    def beta(self, xi: float) -> np.ndarray:
        return self._lorentz(self.beta0, self.omega_b, xi)

    def alpha_trace_weighted(self, xi: float, gamma_diag) -> float:
        """sum_i alpha_ii(i xi) Gamma_ii."""
        return float(np.dot(self.alpha(xi), gamma_diag))

    def beta_trace_weighted(self, xi: float, gamma_diag) -> float:
        return float(np.dot(self.beta(xi), gamma_diag))


@dataclass(frozen=True)
class TabulatedPolarizability:
    """Isotropic polarizabilities interpolated from a table of alpha(i xi), beta(i xi).

    Linear interpolation in xi; values outside the table are held at the
    end points.
    """

    xi: tuple
    alpha_values: tuple
    beta_values: tuple = ()

    def __post_init__(self):
        xi = np.asarray(self.xi, dtype=float)
        a = np.asarray(self.alpha_values, dtype=float)
        b = np.zeros_like(a) if len(self.beta_values) == 0 else np.asarray(self.beta_values, dtype=float)
        if xi.ndim != 1 or xi.size < 2 or a.shape != xi.shape or b.shape != xi.shape:
            raise ValueError("polarizability table needs matching 1-D columns with at least two rows")
        if np.any(np.diff(xi) <= 0) or xi[0] < 0:
            raise ValueError("table frequencies must be non-negative and increasing")
        if np.any(a < 0) or np.any(b < 0):
            raise ValueError("tabulated polarizabilities must be non-negative")
        for name, v in (("xi", xi), ("alpha_values", a), ("beta_values", b)):
            object.__setattr__(self, name, tuple(float(x) for x in v))

    def alpha(self, xi: float) -> np.ndarray:
        return np.full(3, np.interp(xi, self.xi, self.alpha_values))

    def beta(self, xi: float) -> np.ndarray:
        return np.full(3, np.interp(xi, self.xi, self.beta_values))

    def alpha_trace_weighted(self, xi: float, gamma_diag) -> float:
        return float(np.dot(self.alpha(xi), gamma_diag))

    def beta_trace_weighted(self, xi: float, gamma_diag) -> float:
        return float(np.dot(self.beta(xi), gamma_diag))


@dataclass(frozen=True)
class GammaCoincident:
    """Diagonal of the scattering Green tensor at the particle position.

    ``ee_diag`` = (Gamma^EE_xx = Gamma^EE_yy, Gamma^EE_zz); ``hh_diag`` likewise.
    """

    ee_diag: tuple
    hh_diag: tuple
    converged: bool = True

    @property
    def ee_trace(self) -> float:
        return 2.0 * self.ee_diag[0] + self.ee_diag[1]

    @property
    def hh_trace(self) -> float:
        return 2.0 * self.hh_diag[0] + self.hh_diag[1]


def _media(material, kappa, medium0, units):
    model = as_material(material)
    m0 = medium0 if isinstance(medium0, MediumResponse) else evaluate_material(as_material(medium0), kappa, units)
    body = None if isinstance(model, PerfectConductor) else evaluate_material(model, kappa, units)
    return PlateMedia(m0, body, body)


def _field_operator(k, kappa, z0, medium0):
    """E and H at r0 from tangential surface currents (j, m) on the plate,
    shape (nk, 3, 4) each (columns j_x, j_y, m_x, m_y)."""
    ee, eh, he, hh = plane_wave_green_full(k, kappa, medium0, z0)
    to_e = np.concatenate([ee[..., :, 0:2], eh[..., :, 0:2]], axis=-1)
    to_h = np.concatenate([he[..., :, 0:2], hh[..., :, 0:2]], axis=-1)
    return to_e, to_h


def gamma_mode(k, kappa: float, z0: float, media: PlateMedia, l=None,
               coefficients: CoefficientChoice = C1):
    """Per-mode Gamma contributions (before the k dk/2pi measure).

    Returns an array (..., 4): (EE_xx, EE_zz, HH_xx, HH_zz) with xx already
    averaged over the in-plane direction.
    """
    k = np.atleast_1d(np.asarray(k, dtype=float))
    K11 = assemble_plate_operators(k, kappa, 1.0, media, coefficients)[0]
    X = exact_inverse(K11, "plate") if l is None else neumann_inverse(K11, l)
    src_j, src_m = plate_source_operator(k, kappa, z0, media, coefficients)
    to_e, to_h = _field_operator(k, kappa, z0, media.medium0)
    if media.body1 is None:
        to_e, to_h = to_e[..., 0:2], to_h[..., 0:2]
    gee = to_e @ X @ src_j
    ghh = to_h @ X @ src_m

    def reduce(A):
        return 0.5 * (A[..., 0, 0] + A[..., 1, 1]).real, A[..., 2, 2].real
    exx, ezz = reduce(gee)
    hxx, hzz = reduce(ghh)
    return np.stack([exx, ezz, hxx, hzz], axis=-1)


def gamma_mode_fresnel(k, kappa: float, z0: float, media: PlateMedia):
    """Independent half-space reflection representation of :func:`gamma_mode`."""
    k = np.asarray(k, dtype=float)
    m0 = media.medium0
    s0 = plane_wave_s(k, kappa, m0)
    f = fresnel(k, kappa, m0, media.body1)
    pre = np.exp(-2.0 * s0 * z0) / (2.0 * s0 * kappa)
    x0 = m0.epsilon * m0.mu * kappa**2
    exx = pre * 0.5 * (s0**2 * f.r_tm - x0 * f.r_te) / m0.epsilon
    ezz = pre * k * k * f.r_tm / m0.epsilon
    hxx = pre * 0.5 * (s0**2 * f.r_te - x0 * f.r_tm) / m0.mu
    hzz = pre * k * k * f.r_te / m0.mu
    return np.stack([exx, ezz, hxx, hzz], axis=-1)


_ROUNDING = 64.0 * np.finfo(float).eps


def _perfect_reflector_gamma(kappa: float, z0: float, medium0: MediumResponse) -> float:
    """Sum of the moduli of the diagonal Gamma components above a perfect reflector."""
    a, b = medium0.index * kappa, 2.0 * z0
    e = math.exp(-b * a)
    s2 = e * (a * a / b + 2.0 * a / b**2 + 2.0 / b**3)
    s0 = e / b
    xx = (s2 + a * a * s0) / (8.0 * math.pi * kappa)
    zz = (s2 - a * a * s0) / (4.0 * math.pi * kappa)
    return (xx + zz) * (1.0 / medium0.epsilon + 1.0 / medium0.mu)


def _k_integral(fn, kappa, z0, cfg, medium0):
    # absolute floor at the rounding level of the perfect-reflector value; without it a
    # vanishing integrand (no contrast) is rounding noise that never meets rel_tol
    floor = _ROUNDING * _perfect_reflector_gamma(kappa, z0, medium0)
    res = integrate_semi_infinite(lambda k: np.asarray(k)[..., None] / TWO_PI * fn(k),
                                  max(kappa, 1.0 / z0), replace(cfg, abs_tol=max(cfg.abs_tol, floor)))
    return res.value, res.converged


def gamma_plate_coincident(z0: float, kappa: float, material, order=EXACT, medium0=VACUUM,
                           units: Units = NM_EV, coefficients: CoefficientChoice = C1,
                           quadrature: QuadratureConfig | None = None,
                           method: str = "operator") -> GammaCoincident:
    """Scattering Green tensor of a plate at the particle position.

    Parameters
    ----------
    z0 : float
        Height above the plate surface.
    kappa : float
        Imaginary wavenumber (> 0).
    order : MseOrder or str
        Only the Neumann order ``l`` matters here; ``exact`` keeps
        (1 - K11)^-1.
    method : {"operator", "fresnel"}
        Surface-operator evaluation or the reflection-coefficient oracle.
    """
    if not z0 > 0:
        raise ValueError("z0 must be positive")
    if not kappa > 0:
        raise ValueError("kappa must be positive; use static.static_gamma_plate at kappa = 0")
    order = MseOrder.parse(order)
    cfg = quadrature or QuadratureConfig()
    media = _media(material, kappa, medium0, units)
    if method == "fresnel":
        fn = lambda k: gamma_mode_fresnel(k, kappa, z0, media)
    elif method == "operator":
        fn = lambda k: gamma_mode(k, kappa, z0, media, order.l, coefficients)
    else:
        raise ValueError(f"unknown method {method!r}")
    v, ok = _k_integral(fn, kappa, z0, cfg, media.medium0)
    return GammaCoincident((float(v[0]), float(v[1])), (float(v[2]), float(v[3])), ok)


def gamma_first_order_real_space(z0: float, kappa: float, material, medium0=VACUUM,
                                 units: Units = NM_EV, n_phi: int = 32,
                                 quadrature: QuadratureConfig | None = None) -> GammaCoincident:
    """Single-surface-integral term int du G0(r0 - u) M(u, r0), evaluated
    literally in real space with the C1 source operator.

    The in-plane integral uses polar coordinates around the foot point of
    the particle; the azimuthal integral is a trapezoid rule (exact for the
    trigonometric polynomial that appears) and the radial one is adaptive.
    """
    cfg = quadrature or QuadratureConfig(rel_tol=1e-12)
    media = _media(material, kappa, medium0, units)
    m0, m1 = media.medium0, media.body1
    if m1 is None:
        cj, cm = 2.0, 0.0
    else:
        cj, cm = 2.0 * m0.mu / (m0.mu + m1.mu), -2.0 * m0.epsilon / (m0.epsilon + m1.epsilon)
    phis = TWO_PI * np.arange(n_phi) / n_phi
    nz = np.array([0.0, 0.0, 1.0])

    def ncross(A):
        # n x A column-wise for n = z-hat, as a 3x3 map onto tangential vectors
        return np.cross(nz[None, :, None] * np.ones_like(A), A, axis=-2)

    def radial(rho):
        rho = np.asarray(rho, dtype=float)
        u = np.stack([rho[:, None] * np.cos(phis), rho[:, None] * np.sin(phis),
                      np.zeros((len(rho), n_phi))], axis=-1)
        r0 = np.array([0.0, 0.0, z0])
        out_dr = r0 - u
        in_dr = u - r0
        GEE = green_block(GreenBlockLabel.EE, out_dr, kappa, m0)
        GEH = green_block(GreenBlockLabel.EH, out_dr, kappa, m0)
        GHE = green_block(GreenBlockLabel.HE, out_dr, kappa, m0)
        GHH = green_block(GreenBlockLabel.HH, out_dr, kappa, m0)
        sEE = green_block(GreenBlockLabel.EE, in_dr, kappa, m0)
        sEH = green_block(GreenBlockLabel.EH, in_dr, kappa, m0)
        sHE = green_block(GreenBlockLabel.HE, in_dr, kappa, m0)
        sHH = green_block(GreenBlockLabel.HH, in_dr, kappa, m0)
        # electric source: j = cj n x G^HE, m = cm n x G^EE
        ee = GEE @ (cj * ncross(sHE)) + GEH @ (cm * ncross(sEE))
        hh = GHE @ (cj * ncross(sHH)) + GHH @ (cm * ncross(sEH))
        w = rho[:, None] / n_phi * TWO_PI
        def red(A):
            xx = 0.5 * (A[..., 0, 0] + A[..., 1, 1])
            return np.sum(w * xx, axis=1), np.sum(w * A[..., 2, 2], axis=1)
        a, b = red(ee)
        c, d = red(hh)
        return np.stack([a, b, c, d], axis=-1)

    res = integrate_semi_infinite(radial, z0, cfg)
    v = res.value
    return GammaCoincident((float(v[0]), float(v[1])), (float(v[2]), float(v[3])), res.converged)


@dataclass(frozen=True)
class CPResult:
    energy: float
    breakdown: EnergyBreakdown
    order: MseOrder = EXACT


def cp_energy(particle: Polarizability, z0: float, material, temperature: float = 0.0,
              order=EXACT, medium0=VACUUM, units: Units = NM_EV,
              quadrature: QuadratureConfig | None = None, method: str = "operator",
              n_max: int = 100000) -> EnergyBreakdown:
    """Casimir-Polder energy -4 pi k_B T sum'_n kappa_n [alpha tr Gamma^EE + beta tr Gamma^HH].

    At T = 0 the sum becomes (hbar c / 2 pi) int dkappa.  The n = 0 term uses
    the static limit of kappa Gamma from :mod:`casimir_sso.static`.
    """
    if not z0 > 0:
        raise ValueError("z0 must be positive")
    order = MseOrder.parse(order)
    cfg = quadrature or QuadratureConfig()

    def term(kappa):
        g = gamma_plate_coincident(z0, kappa, material, order, medium0, units,
                                   quadrature=cfg, method=method)
        xi = kappa * units.hbar_c
        ee = (g.ee_diag[0], g.ee_diag[0], g.ee_diag[1])
        hh = (g.hh_diag[0], g.hh_diag[0], g.hh_diag[1])
        return -4.0 * math.pi * kappa * (particle.alpha_trace_weighted(xi, ee)
                                         + particle.beta_trace_weighted(xi, hh))

    # rounding floor from the retarded perfect-conductor scale 3 alpha / (4 z0^3) per unit kappa
    static_pol = float(np.sum(np.abs(particle.alpha(0.0))) + np.sum(np.abs(particle.beta(0.0))))
    floor = _ROUNDING * 3.0 * static_pol / (4.0 * z0**3)
    if temperature > 0:
        (exx, ezz), (hxx, hzz) = static.static_gamma_plate(z0, material, medium0, units)
        t0 = -4.0 * math.pi * (particle.alpha_trace_weighted(0.0, (exx, exx, ezz))
                               + particle.beta_trace_weighted(0.0, (hxx, hxx, hzz)))
        quad = replace(cfg, abs_tol=max(cfg.abs_tol, floor))
        return matsubara_sum(term, temperature, quad, n_max=n_max, term0=t0, units=units)
    quad = replace(cfg, abs_tol=max(cfg.abs_tol, floor / z0))
    return zero_temperature_integral(term, quad, scale=1.0 / (2.0 * z0), units=units)


def pec_retarded_cp(alpha0: float, z0: float, units: Units = NM_EV) -> float:
    """-3 hbar c alpha0 / (8 pi z0^4) for a static polarizability above a perfect conductor."""
    return -3.0 * units.hbar_c * alpha0 / (8.0 * math.pi * z0**4)


def fit_power_law(z, energy) -> float:
    """Least-squares exponent of |energy| versus z on log-log axes."""
    z = np.asarray(z, dtype=float)
    e = np.abs(np.asarray(energy, dtype=float))
    return float(np.polyfit(np.log(z), np.log(e), 1)[0])

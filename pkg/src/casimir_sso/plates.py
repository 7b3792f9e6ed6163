"""Two parallel plates in the plane-wave basis.

Geometry: body 1 fills z < 0 (surface normal +z), body 2 fills z > d
(surface normal -z), medium 0 in between.  With rotational invariance the
in-plane wavevector is fixed to k_par = (k, 0).  Surface currents on either
plate are expanded on the global tangential pair (x, y), so every block is
indexed (E_x, E_y, H_x, H_y): electric current components first, magnetic
second.  Blocks are returned stacked along a leading axis when ``k`` is an
array.

The kernel of a body with coefficient matrices C^i, C^e (diagonal over the
electric and magnetic equations) is

    K_ss' = 2 P (C^i + C^e)^-1 n_s x [delta_ss' C^i G_s - C^e G_0],

P = [[0, -1], [1, 0]] acting on the (E, H) index.  For C1 this reduces to
the closed forms in :func:`plate_self_block` and :func:`plate_cross_block`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import static
from .core import (
    C1, EXACT, NM_EV, VACUUM, CoefficientChoice, EnergyBreakdown, MediumResponse, MseOrder, PerfectConductor,
    Units, as_material, evaluate_material,
)
from .engine import (
    exact_inverse, matsubara_sum, mode_energy, mode_energy_derivative_factor, neumann_inverse,
    zero_temperature_integral,
)
from .quadrature import QuadratureConfig, integrate_semi_infinite

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class PlateMedia:
    """Responses of the gap medium and of both plates at one frequency.

    A plate that is a perfect conductor is represented by ``None``.
    """

    medium0: MediumResponse
    body1: MediumResponse | None
    body2: MediumResponse | None

    def body(self, sigma: int) -> MediumResponse | None:
        return self.body1 if sigma == 1 else self.body2


@dataclass(frozen=True)
class PlateConfig:
    """Two-plate configuration.

    Parameters
    ----------
    body1, body2 : material model
        Plate materials (``Fixed``, ``Drude``, ``Plasma``, ``PerfectConductor``
        or a bare permittivity).
    distance : float
        Gap width d in the length unit of ``units``.
    temperature : float
        Kelvin (or a dimensionless temperature with :data:`DIMENSIONLESS`);
        0 selects the zero-temperature frequency integral.
    medium0 : material model
        Gap medium, vacuum by default.
    coefficients : CoefficientChoice
        Coefficient matrices of the integral equations (C1 by default).
    inner2 : {"exact", "same"} or int
        Treatment of (1 - K22)^-1 in truncated orders: exact (default), the
        same Neumann order as body 1, or an explicit order.
    """

    body1: object
    body2: object
    distance: float
    temperature: float = 0.0
    medium0: object = VACUUM
    units: Units = NM_EV
    coefficients: CoefficientChoice = C1
    inner2: object = "exact"
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    n_max: int = 100000

    def __post_init__(self):
        if not self.distance > 0:
            raise ValueError("plate distance must be positive")
        if not self.temperature >= 0:
            raise ValueError("temperature must be non-negative")
        object.__setattr__(self, "body1", as_material(self.body1))
        object.__setattr__(self, "body2", as_material(self.body2))
        object.__setattr__(self, "medium0", as_material(self.medium0))
        if isinstance(self.medium0, PerfectConductor):
            raise ValueError("the gap medium cannot be a perfect conductor")

    def media_at(self, kappa: float) -> PlateMedia:
        def ev(model):
            if isinstance(model, PerfectConductor):
                return None
            return evaluate_material(model, kappa, self.units)
        return PlateMedia(ev(self.medium0), ev(self.body1), ev(self.body2))


@dataclass(frozen=True)
class FresnelPair:
    r_tm: np.ndarray
    r_te: np.ndarray


def plane_wave_s(k, kappa: float, medium: MediumResponse):
    """s = sqrt(eps mu kappa^2 + k^2)."""
    k = np.asarray(k, dtype=float)
    return np.sqrt(medium.epsilon * medium.mu * kappa**2 + k * k)


def plane_wave_quantities(k, kappa: float, media: PlateMedia):
    """(s0, s1, s2); entries for perfectly conducting plates are None."""
    return tuple(None if m is None else plane_wave_s(k, kappa, m)
                 for m in (media.medium0, media.body1, media.body2))


def fresnel(k, kappa: float, medium0: MediumResponse, medium: MediumResponse | None) -> FresnelPair:
    """Reflection coefficients of a half-space at imaginary frequency."""
    k = np.asarray(k, dtype=float)
    if medium is None:
        return FresnelPair(np.ones_like(k), -np.ones_like(k))
    s0 = plane_wave_s(k, kappa, medium0)
    s1 = plane_wave_s(k, kappa, medium)
    e0, m0, e1, m1 = medium0.epsilon, medium0.mu, medium.epsilon, medium.mu
    r_tm = (e1 * s0 - e0 * s1) / (e1 * s0 + e0 * s1)
    r_te = (m1 * s0 - m0 * s1) / (m1 * s0 + m0 * s1)
    return FresnelPair(r_tm, r_te)


def _p_matrix(k, x):
    """[[0, x], [-k^2 - x, 0]] stacked over k."""
    k = np.asarray(k, dtype=float)
    out = np.zeros(k.shape + (2, 2))
    out[..., 0, 1] = x
    out[..., 1, 0] = -k * k - x
    return out


def _require_kappa(kappa):
    if not kappa > 0:
        raise ValueError("finite-frequency plate kernels need kappa > 0; use the static module at kappa = 0")


def plate_self_block(body: int, k, kappa: float, media: PlateMedia):
    """C1 single-plate kernel K_ss at k_par = (k, 0).

    EE and HH blocks vanish; with x_a = eps_a mu_a kappa^2,

        K^EH = (-1)^(s+1) / (kappa (mu0 + mu_s)) [P(x0)/s0 - P(x_s)/s_s]
        K^HE = -(mu0 + mu_s)/(eps0 + eps_s) K^EH,

    P(x) = [[0, x], [-k^2 - x, 0]].
    """
    _require_kappa(kappa)
    m0, ms = media.medium0, media.body(body)
    if ms is None:
        raise ValueError("perfectly conducting plates use pc_plate_blocks")
    k = np.asarray(k, dtype=float)
    s0, ss = plane_wave_s(k, kappa, m0), plane_wave_s(k, kappa, ms)
    x0, xs = m0.epsilon * m0.mu * kappa**2, ms.epsilon * ms.mu * kappa**2
    sign = 1.0 if body == 1 else -1.0
    eh = sign / (kappa * (m0.mu + ms.mu)) * (_p_matrix(k, x0) / s0[..., None, None]
                                              - _p_matrix(k, xs) / ss[..., None, None])
    he = -(m0.mu + ms.mu) / (m0.epsilon + ms.epsilon) * eh
    out = np.zeros(k.shape + (4, 4))
    out[..., 0:2, 2:4] = eh
    out[..., 2:4, 0:2] = he
    return out


def plate_self_eigs(k, kappa: float, media: PlateMedia, body: int = 1):
    """Closed-form eigenvalues (+lam, -lam) of the C1 plate self kernel.

    lam^2 = (s_s - s0)(eps_s mu_s s0 - eps0 mu0 s_s)
            / (s0 s_s (eps0 + eps_s)(mu0 + mu_s)); each has multiplicity two.
    """
    _require_kappa(kappa)
    m0, ms = media.medium0, media.body(body)
    s0, ss = plane_wave_s(k, kappa, m0), plane_wave_s(k, kappa, ms)
    rad = (ss - s0) * (ms.epsilon * ms.mu * s0 - m0.epsilon * m0.mu * ss) / (
        s0 * ss * (m0.epsilon + ms.epsilon) * (m0.mu + ms.mu))
    rad = np.asarray(rad)
    if np.any(rad < -1e-15 * np.abs(rad).max(initial=0.0)):
        raise ValueError("negative radicand: inconsistent media")
    lam = np.sqrt(np.maximum(rad, 0.0))
    return lam, -lam


def plate_cross_block(direction: str, k, kappa: float, d: float, media: PlateMedia):
    """C1 inter-plate kernel K_12 (``"12"``) or K_21 (``"21"``).

    For K_12 (propagation from plate 2 to plate 1, scattering at plate 1):

        EE = -mu0/(mu0+mu1) e,   HH = -eps0/(eps0+eps1) e,
        EH = P(x0) e / ((mu0+mu1) kappa s0),   HE = -P(x0) e / ((eps0+eps1) kappa s0),

    with e = exp(-s0 d).  K_21 uses body 2 and flips the sign of EH and HE.
    """
    _require_kappa(kappa)
    if not d > 0:
        raise ValueError("distance must be positive")
    sigma = {"12": 1, "21": 2}[str(direction).replace("->", "").replace("→", "")]
    m0, ms = media.medium0, media.body(sigma)
    if ms is None:
        raise ValueError("perfectly conducting plates use pc_plate_blocks")
    k = np.asarray(k, dtype=float)
    s0 = plane_wave_s(k, kappa, m0)
    e = np.exp(-s0 * d)
    x0 = m0.epsilon * m0.mu * kappa**2
    sign = 1.0 if sigma == 1 else -1.0
    eye = np.eye(2)
    pe = _p_matrix(k, x0) * (e / (kappa * s0))[..., None, None]
    out = np.zeros(k.shape + (4, 4))
    out[..., 0:2, 0:2] = -m0.mu / (m0.mu + ms.mu) * e[..., None, None] * eye
    out[..., 2:4, 2:4] = -m0.epsilon / (m0.epsilon + ms.epsilon) * e[..., None, None] * eye
    out[..., 0:2, 2:4] = sign * pe / (m0.mu + ms.mu)
    out[..., 2:4, 0:2] = -sign * pe / (m0.epsilon + ms.epsilon)
    return out


def pc_plate_blocks(k, kappa: float, d: float):
    """Electric-current-only kernels 2 n x G0^HE of two perfectly conducting plates.

    Returns (K11, K12, K22, K21), each 2x2 per mode.  The self kernels vanish
    because n(u) . (u - u') = 0 on a plane; the cross kernels equal
    -exp(-s0 d) times the identity.
    """
    _require_kappa(kappa)
    k = np.asarray(k, dtype=float)
    s0 = np.sqrt(kappa**2 + k * k)
    cross = -np.exp(-s0 * d)[..., None, None] * np.eye(2)
    zero = np.zeros(k.shape + (2, 2))
    return zero, cross, zero.copy(), cross.copy()


# generic plane-wave assembly -------------------------------------------------

def _tangential_green(k, kappa: float, medium: MediumResponse, dz: float):
    """Tangential-tangential parts of the plane-wave Green tensor.

    Returns a stack of 4x4 matrices [[G^EE, G^EH], [G^HE, G^HH]] restricted to
    (x, y) field and source components, including the factor
    exp(-s|dz|)/(2s).  At dz = 0 the odd z-derivative takes its principal
    value 0.
    """
    k = np.asarray(k, dtype=float)
    s = plane_wave_s(k, kappa, medium)
    gt = np.exp(-s * abs(dz)) / (2.0 * s)
    dzv = -s * np.sign(dz)
    e, m = medium.epsilon, medium.mu
    out = np.zeros(k.shape + (4, 4))
    out[..., 0, 0] = -(k * k / e + m * kappa**2) / kappa
    out[..., 1, 1] = -(m * kappa**2) / kappa
    out[..., 2, 2] = -(k * k / m + e * kappa**2) / kappa
    out[..., 3, 3] = -(e * kappa**2) / kappa
    # G^HE_xy = -D_z g, G^HE_yx = D_z g ; G^EH = -G^HE
    out[..., 2, 1] = -dzv
    out[..., 3, 0] = dzv
    out[..., 0, 3] = dzv
    out[..., 1, 2] = -dzv
    return out * gt[..., None, None]


def _n_cross(nz: float):
    """Matrix of n x (.) on tangential (x, y) components for n = nz z-hat."""
    return np.array([[0.0, -nz], [nz, 0.0]])


def _apply_n_cross(block, nz):
    """Apply n x to the field index of each 2x2 sub-block of a 4x4 stack."""
    nc = np.kron(np.eye(2), _n_cross(nz))
    return nc @ block


def _coefficient_rows(tang, coeff_e, coeff_h):
    """Scale the E rows and H rows of a 4x4 stack."""
    out = tang.copy()
    out[..., 0:2, :] *= coeff_e
    out[..., 2:4, :] *= coeff_h
    return out


def _p_rows(block, sum_e, sum_h):
    """2 P (C^i + C^e)^-1 applied to the (E, H) row index."""
    out = np.empty_like(block)
    out[..., 0:2, :] = -2.0 * block[..., 2:4, :] / sum_h
    out[..., 2:4, :] = 2.0 * block[..., 0:2, :] / sum_e
    return out


_NZ = {1: 1.0, 2: -1.0}


def assemble_plate_operators(k, kappa: float, d: float, media: PlateMedia,
                             coefficients: CoefficientChoice = C1):
    """Kernels (K11, K12, K22, K21) for arbitrary coefficient choices.

    Dielectric plates carry (j, m) currents (4 components); perfectly
    conducting plates carry j only (2 components) with rows 2 n x G0^(H.).
    """
    _require_kappa(kappa)
    m0 = media.medium0
    g0_self = _tangential_green(k, kappa, m0, 0.0)
    # field at plate 1 (z = 0) from sources at plate 2 (z = d): dz = -d; and reverse
    g0_cross = {(1, 2): _tangential_green(k, kappa, m0, -d), (2, 1): _tangential_green(k, kappa, m0, d)}

    def rows(sigma):
        ms = media.body(sigma)
        nz = _NZ[sigma]
        if ms is None:
            def op(g0, gs):
                return 2.0 * _apply_n_cross(g0, nz)[..., 0:2, :]
            return op
        c = coefficients.for_body(m0, ms, sigma - 1)
        (ie, ih), (ee, eh) = c.interior, c.exterior

        def op(g0, gs):
            bracket = -_coefficient_rows(g0, ee, eh)
            if gs is not None:
                bracket = bracket + _coefficient_rows(gs, ie, ih)
            return _p_rows(_apply_n_cross(bracket, nz), ie + ee, ih + eh)
        return op

    def cols(sigma, block):
        return block[..., :, 0:2] if media.body(sigma) is None else block

    blocks = {}
    for s in (1, 2):
        ms = media.body(s)
        gs = None if ms is None else _tangential_green(k, kappa, ms, 0.0)
        if ms is None:
            blocks[(s, s)] = cols(s, rows(s)(g0_self, None)) * 0.0
        else:
            blocks[(s, s)] = cols(s, rows(s)(g0_self, gs))
    blocks[(1, 2)] = cols(2, rows(1)(g0_cross[(1, 2)], None))
    blocks[(2, 1)] = cols(1, rows(2)(g0_cross[(2, 1)], None))
    return blocks[(1, 1)], blocks[(1, 2)], blocks[(2, 2)], blocks[(2, 1)]


def plate_source_operator(k, kappa: float, z0: float, media: PlateMedia, coefficients=C1, body: int = 1):
    """Plane-wave source operator M_1(u, r0) for a point source at height z0
    above plate 1, with k_par = (k, 0).

    Returns two stacks of shape (..., n_c, 3): the currents induced by a
    unit electric source J (column index = Cartesian component) and by a
    unit magnetic source M.  Entries are complex because of the in-plane
    derivative i k.
    """
    m0 = media.medium0
    ms = media.body(body)
    G = plane_wave_green_full(k, kappa, m0, -z0)  # dr = u - r0 has dz = -z0
    nz = _NZ[body]
    # tangential rows of n x (.) from the 3-vector field
    ncross3 = np.array([[0.0, -nz, 0.0], [nz, 0.0, 0.0]])
    ee, eh, he, hh = G
    if ms is None:
        return (2.0 * ncross3 @ he, 2.0 * ncross3 @ hh)
    c = coefficients.for_body(m0, ms, body - 1)
    (ie, ih), (xe, xh) = c.interior, c.exterior
    # M = -2 P (Ci+Ce)^-1 Ce n x G0
    j_from_J = 2.0 * xh / (ih + xh) * (ncross3 @ he)
    m_from_J = -2.0 * xe / (ie + xe) * (ncross3 @ ee)
    j_from_M = 2.0 * xh / (ih + xh) * (ncross3 @ hh)
    m_from_M = -2.0 * xe / (ie + xe) * (ncross3 @ (-he))
    return (np.concatenate([j_from_J, m_from_J], axis=-2),
            np.concatenate([j_from_M, m_from_M], axis=-2))


def plane_wave_green_full(k, kappa: float, medium: MediumResponse, dz: float):
    """Full 3x3 plane-wave Green blocks (EE, EH, HE, HH) at k_par = (k, 0) and
    separation dz != 0 along z, including exp(-s|dz|)/(2s)."""
    if dz == 0:
        raise ValueError("full plane-wave blocks need dz != 0")
    k = np.asarray(k, dtype=float)
    s = plane_wave_s(k, kappa, medium)
    gt = np.exp(-s * abs(dz)) / (2.0 * s)
    D = np.zeros(k.shape + (3,), dtype=complex)
    D[..., 0] = 1j * k
    D[..., 2] = -s * np.sign(dz)
    DD = D[..., :, None] * D[..., None, :]
    eye = np.eye(3)
    e, m = medium.epsilon, medium.mu
    gt3 = gt[..., None, None]
    ee = -(1.0 / kappa) * (-DD / e + m * kappa**2 * eye) * gt3
    hh = -(1.0 / kappa) * (-DD / m + e * kappa**2 * eye) * gt3
    from .greens import LEVI_CIVITA
    he = -np.einsum("ijk,...k->...ij", LEVI_CIVITA, D) * gt3
    return ee, -he, he, hh


# energies and forces ------------------------------------------------------------

def _orders(orders):
    if isinstance(orders, (MseOrder, str)) or orders is None:
        return [MseOrder.parse(orders)]
    return [MseOrder.parse(o) for o in orders]


def _inner2(config: PlateConfig, l):
    if config.inner2 == "exact" or l is None:
        return None
    if config.inner2 == "same":
        return l
    return int(config.inner2)


def _mode_values(config: PlateConfig, k, kappa: float, orders, quantity: str):
    """Per-mode integrand (times k / 2 pi) for each order, shape (nk, n_orders)."""
    media = config.media_at(kappa)
    K11, K12, K22, K21 = assemble_plate_operators(k, kappa, config.distance, media, config.coefficients)
    s0 = plane_wave_s(k, kappa, media.medium0)
    cache = {}

    def inverse(K, l, label):
        key = (label, l)
        if key not in cache:
            cache[key] = exact_inverse(K, label) if l is None else neumann_inverse(K, l)
        return cache[key]

    out = []
    for order in orders:
        X1 = inverse(K11, order.l, "body 1")
        X2 = inverse(K22, _inner2(config, order.l), "body 2")
        N = X1 @ K12 @ X2 @ K21
        if quantity == "energy":
            v = mode_energy(N, order.k)
        else:
            v = -2.0 * s0 * mode_energy_derivative_factor(N, order.k)
        out.append(np.asarray(k) / TWO_PI * v)
    return np.stack(out, axis=-1)


def _k_scale(kappa, d):
    return max(kappa, 1.0 / d)


def _perfect_reflector_magnitude(kappa: float, config: PlateConfig, quantity: str) -> float:
    """|int k dk/(2 pi)| of the per-mode integrand for two perfect reflectors,
    summed over both polarizations (series over reflections)."""
    d = config.distance
    a = config.media_at(kappa).medium0.index * kappa if kappa > 0 else 0.0
    n = np.arange(1, 400)
    b = 2.0 * n * d
    if quantity == "energy":
        # (1/pi) sum_n (1/n) int_a^inf s exp(-b s) ds
        vals = np.exp(-b * a) * (a / b + 1.0 / b**2) / n
    else:
        # (2/pi) sum_n int_a^inf 2 s^2 exp(-b s) ds
        vals = np.exp(-b * a) * (a * a / b + 2.0 * a / b**2 + 2.0 / b**3)
    return float(np.sum(vals) / math.pi * (1.0 if quantity == "energy" else 2.0))


def _noise_floor(config: PlateConfig, kappa: float, quantity: str) -> QuadratureConfig:
    """Quadrature settings with an absolute tolerance at the rounding level of
    the perfect-reflector magnitude.

    Without it a nearly vanishing integrand (no contrast) is pure rounding
    noise and the relative tolerance can never be met.
    """
    floor = 64.0 * np.finfo(float).eps * _perfect_reflector_magnitude(kappa, config, quantity)
    q = config.quadrature
    return replace(q, abs_tol=max(q.abs_tol, floor))


def _kappa_term(config: PlateConfig, orders, quantity: str):
    def term(kappa):
        res = integrate_semi_infinite(
            lambda k: _mode_values(config, k, kappa, orders, quantity),
            _k_scale(kappa, config.distance), _noise_floor(config, kappa, quantity))
        return res.value
    return term


def kappa_term(config: PlateConfig, kappa: float, order=EXACT, quantity: str = "energy") -> float:
    """Unweighted per-frequency term int k dk/(2 pi) [mode integrand] at one kappa > 0."""
    order = MseOrder.parse(order)
    return float(np.atleast_1d(_kappa_term(config, [order], quantity)(kappa))[0])


def _static_term(config: PlateConfig, orders, quantity: str):
    return np.array([static.static_plate_n0_integral(config, order, quantity) for order in orders])


def _sum_or_integrate(config: PlateConfig, orders, quantity: str):
    term = _kappa_term(config, orders, quantity)
    quad = _noise_floor(config, 0.0, quantity)
    if config.temperature > 0:
        return matsubara_sum(term, config.temperature, quad, n_max=config.n_max,
                             term0=_static_term(config, orders, quantity), units=config.units)
    # the kappa integral of the perfect-reflector term is about its kappa = 0 value times 1/(2d)
    quad = replace(quad, abs_tol=quad.abs_tol / (2.0 * config.distance))
    return zero_temperature_integral(term, quad, scale=1.0 / (2.0 * config.distance), units=config.units)


def _split(result, orders):
    """Split a vector-valued breakdown into one breakdown per order."""
    out = {}
    total = np.atleast_1d(result.total)
    for i, order in enumerate(orders):
        terms = [(n, kap, float(np.atleast_1d(v)[i])) for n, kap, v in result.terms]
        out[order] = EnergyBreakdown(terms, float(total[i]), result.tail_estimate, result.converged)
    return out


def mse_energies_per_area(config: PlateConfig, orders) -> dict:
    """Casimir energy per area for several MSE orders from one frequency pass.

    Returns a dict mapping each :class:`MseOrder` to an EnergyBreakdown.
    """
    orders = _orders(orders)
    return _split(_sum_or_integrate(config, orders, "energy"), orders)


def mse_energy_per_area(config: PlateConfig, order=EXACT):
    """Casimir energy per area at one MSE order (``EXACT`` by default).

    Each mode contributes ln det(1 - N) or its (k+1)-term expansion, with
    (1 - K11)^-1 replaced by its order-l Neumann sum and body 2 treated
    according to ``config.inner2``.
    """
    order = MseOrder.parse(order)
    return mse_energies_per_area(config, [order])[order]


def casimir_forces_per_area(config: PlateConfig, orders) -> dict:
    orders = _orders(orders)
    return _split(_sum_or_integrate(config, orders, "force"), orders)


def casimir_force_per_area(config: PlateConfig, order=EXACT):
    """Pressure -dE/dd, differentiated analytically mode by mode.

    Only the factors exp(-s0 d) of K12 and K21 depend on d, so
    d/dd ln det(1 - N) = 2 s0 Tr[(1 - N)^-1 N]; negative values attract.
    """
    order = MseOrder.parse(order)
    return casimir_forces_per_area(config, [order])[order]


def lifshitz_mode(k, kappa: float, media: PlateMedia, d: float):
    """ln(1 - r1 r2 e^{-2 s0 d}) summed over TM and TE, computed from Fresnel
    coefficients (independent of the surface operators)."""
    k = np.asarray(k, dtype=float)
    s0 = plane_wave_s(k, kappa, media.medium0)
    f1 = fresnel(k, kappa, media.medium0, media.body1)
    f2 = fresnel(k, kappa, media.medium0, media.body2)
    e = np.exp(-2.0 * s0 * d)
    return np.log1p(-f1.r_tm * f2.r_tm * e) + np.log1p(-f1.r_te * f2.r_te * e)


def lifshitz_energy_per_area(config: PlateConfig):
    """Lifshitz energy per area from Fresnel coefficients.

    The n = 0 term uses the static reflection coefficients of each plate.
    """
    def term(kappa):
        media = config.media_at(kappa)
        res = integrate_semi_infinite(
            lambda k: np.asarray(k) / TWO_PI * lifshitz_mode(k, kappa, media, config.distance),
            _k_scale(kappa, config.distance), config.quadrature)
        return float(res.value)
    if config.temperature > 0:
        def integrand0(k):
            r1 = static.static_reflection(config.body1, k, config.medium0, config.units)
            r2 = static.static_reflection(config.body2, k, config.medium0, config.units)
            e = np.exp(-2.0 * np.asarray(k) * config.distance)
            return np.asarray(k) / TWO_PI * (np.log1p(-r1[0] * r2[0] * e) + np.log1p(-r1[1] * r2[1] * e))
        t0 = float(integrate_semi_infinite(integrand0, 1.0 / config.distance, config.quadrature).value)
        return matsubara_sum(term, config.temperature, config.quadrature, n_max=config.n_max,
                             term0=t0, units=config.units)
    return zero_temperature_integral(term, config.quadrature, scale=1.0 / (2.0 * config.distance),
                                     units=config.units)


def pec_energy_per_area(d: float, units: Units = NM_EV) -> float:
    """-pi^2 hbar c / (720 d^3)."""
    return -math.pi**2 * units.hbar_c / (720.0 * d**3)


def pec_force_per_area(d: float, units: Units = NM_EV) -> float:
    """-pi^2 hbar c / (240 d^4)."""
    return -math.pi**2 * units.hbar_c / (240.0 * d**4)


def with_order_config(config: PlateConfig, **changes) -> PlateConfig:
    return replace(config, **changes)

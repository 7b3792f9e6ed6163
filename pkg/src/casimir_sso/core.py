"""Shared value types: units, media, material models, orders and results.

Lengths and energies are carried in a user-chosen unit system described by
:class:`Units`.  The default, :data:`NM_EV`, measures lengths in nanometres and
energies in electronvolts, so that wavenumbers are in 1/nm, energies per area
in eV/nm^2 and pressures in eV/nm^3.  :data:`DIMENSIONLESS` sets
``hbar*c = k_B = 1`` for working directly with products such as ``kappa*d``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

HBAR_C_EV_NM = 197.3269804
"""CODATA 2018 value of hbar*c in eV nm."""

K_B_EV_PER_K = 8.617333262e-5
"""CODATA 2018 Boltzmann constant in eV/K."""


@dataclass(frozen=True)
class Units:
    """Unit system used to convert temperatures and photon energies.

    Parameters
    ----------
    hbar_c : float
        Value of hbar*c in (energy unit) x (length unit).
    k_b : float
        Boltzmann constant in (energy unit) per kelvin, or 1 for a
        dimensionless temperature.
    name : str
        Label echoed in outputs.
    """

    hbar_c: float
    k_b: float
    name: str = "custom"

    def thermal_energy(self, temperature: float) -> float:
        return self.k_b * temperature

    def kappa_from_energy(self, energy: float) -> float:
        """Convert a photon energy hbar*xi into the wavenumber xi/c."""
        return energy / self.hbar_c


NM_EV = Units(HBAR_C_EV_NM, K_B_EV_PER_K, "nm-eV")
DIMENSIONLESS = Units(1.0, 1.0, "dimensionless")


@dataclass(frozen=True)
class MediumResponse:
    """Permittivity and permeability of a medium at one imaginary frequency."""

    epsilon: float
    mu: float = 1.0

    def __post_init__(self):
        for name in ("epsilon", "mu"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be finite and positive, got {value!r}")

    @property
    def index(self) -> float:
        """Refractive index sqrt(epsilon*mu)."""
        return math.sqrt(self.epsilon * self.mu)

    @property
    def impedance_ratio(self) -> float:
        """sqrt(epsilon/mu), the factor relating H to E in plane waves."""
        return math.sqrt(self.epsilon / self.mu)


VACUUM = MediumResponse(1.0, 1.0)


@dataclass(frozen=True)
class Fixed:
    """Dispersionless material with constant epsilon and mu."""

    epsilon: float
    mu: float = 1.0

    def __post_init__(self):
        MediumResponse(self.epsilon, self.mu)


@dataclass(frozen=True)
class Drude:
    """Drude metal, eps(i xi) = 1 + wp^2 / (xi (xi + gamma)).

    ``omega_p`` and ``gamma`` are photon energies (hbar*omega) in the energy
    unit of the active :class:`Units`.
    """

    omega_p: float = 9.0
    gamma: float = 0.035
    mu: float = 1.0

    def __post_init__(self):
        if not (self.omega_p > 0 and self.gamma > 0 and self.mu > 0):
            raise ValueError("Drude parameters must be positive")


@dataclass(frozen=True)
class Plasma:
    """Plasma-model metal, eps(i xi) = 1 + wp^2 / xi^2."""

    omega_p: float = 9.0
    mu: float = 1.0

    def __post_init__(self):
        if not (self.omega_p > 0 and self.mu > 0):
            raise ValueError("plasma parameters must be positive")


@dataclass(frozen=True)
class PerfectConductor:
    """Ideal conductor; handled by the electric-current-only kernels."""


MaterialModel = Union[Fixed, Drude, Plasma, PerfectConductor]


def as_material(value) -> MaterialModel:
    """Accept a material model, a MediumResponse or a bare permittivity."""
    if isinstance(value, (Fixed, Drude, Plasma, PerfectConductor)):
        return value
    if isinstance(value, MediumResponse):
        return Fixed(value.epsilon, value.mu)
    if isinstance(value, (int, float)):
        return Fixed(float(value), 1.0)
    raise TypeError(f"cannot interpret {value!r} as a material model")


def evaluate_material(model, kappa: float, units: Units = NM_EV) -> MediumResponse:
    """Evaluate a material model at imaginary frequency xi = c*kappa.

    Parameters
    ----------
    model : MaterialModel or MediumResponse
        Material description.
    kappa : float
        Imaginary-axis wavenumber xi/c, in inverse length units.
    units : Units
        Unit system used to convert ``kappa`` to a photon energy.

    Returns
    -------
    MediumResponse

    Raises
    ------
    ValueError
        For a perfect conductor (use the electric-current-only path) or for a
        Drude or plasma metal at ``kappa == 0`` where epsilon diverges.
    """
    if isinstance(model, MediumResponse):
        return model
    if not (kappa >= 0 and math.isfinite(kappa)):
        raise ValueError(f"kappa must be finite and non-negative, got {kappa!r}")
    if isinstance(model, Fixed):
        return MediumResponse(model.epsilon, model.mu)
    if isinstance(model, PerfectConductor):
        raise ValueError(
            "a perfect conductor has no finite response; use the perfect-conductor kernels"
        )
    xi = kappa * units.hbar_c
    if xi == 0:
        raise ValueError(
            f"{type(model).__name__} permittivity diverges at zero frequency; "
            "use the static (n = 0) path"
        )
    if isinstance(model, Drude):
        return MediumResponse(1.0 + model.omega_p**2 / (xi * (xi + model.gamma)), model.mu)
    if isinstance(model, Plasma):
        return MediumResponse(1.0 + (model.omega_p / xi) ** 2, model.mu)
    raise TypeError(f"unknown material model {model!r}")


def matsubara_kappa(n, temperature: float, units: Units = NM_EV):
    """Matsubara wavenumbers 2 pi n k_B T / (hbar c)."""
    return 2.0 * np.pi * np.asarray(n) * units.thermal_energy(temperature) / units.hbar_c


def matsubara_grid(temperature: float, n_max: int, units: Units = NM_EV) -> np.ndarray:
    """Return the Matsubara wavenumbers kappa_0 .. kappa_{n_max}."""
    if not temperature > 0:
        raise ValueError("temperature must be positive")
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    return matsubara_kappa(np.arange(n_max + 1), temperature, units)


@dataclass(frozen=True)
class MseOrder:
    """Truncation order of the multiple-scattering expansion.

    ``k + 1`` round trips between the bodies are kept (``2(k+1)`` inter-body
    scatterings) and each single-body inverse ``(1 - K_ss)^-1`` is replaced by
    its Neumann series up to ``K_ss^l``.  ``None`` means "not truncated".
    """

    k: int | None = None
    l: int | None = None

    def __post_init__(self):
        for name in ("k", "l"):
            value = getattr(self, name)
            if value is not None and (int(value) != value or value < 0):
                raise ValueError(f"order {name} must be a non-negative integer")

    @property
    def is_exact(self) -> bool:
        return self.k is None and self.l is None

    @classmethod
    def parse(cls, text) -> "MseOrder":
        """Parse ``"exact"``, ``"kl"`` such as ``"12"``, ``"k,l"`` or the
        string form ``"MSE_k,l"`` (either index may be ``inf``)."""
        if isinstance(text, MseOrder):
            return text
        if text is None:
            return EXACT
        s = str(text).strip().lower()
        if s.startswith("mse"):
            s = s[3:].lstrip("_")
        if s in ("exact", "inf", ""):
            return EXACT
        try:
            if "," in s:
                k, l = (p.strip() for p in s.split(","))
                return cls(None if k == "inf" else int(k), None if l == "inf" else int(l))
            if s.isdigit() and len(s) == 2:
                return cls(int(s[0]), int(s[1]))
        except ValueError:
            pass
        raise ValueError(f"cannot parse MSE order {text!r}")

    def __str__(self):
        if self.is_exact:
            return "exact"
        k = "inf" if self.k is None else self.k
        l = "inf" if self.l is None else self.l
        return f"MSE_{k},{l}"


EXACT = MseOrder()


@dataclass(frozen=True)
class Coefficients:
    """Diagonal 2x2 coefficient matrices (electric, magnetic) of one body.

    ``interior`` multiplies the interior field equations and ``exterior``
    the exterior ones; their sum must be invertible.
    """

    interior: tuple[float, float]
    exterior: tuple[float, float]

    def __post_init__(self):
        for a, b in zip(self.interior, self.exterior):
            if a + b == 0:
                raise ValueError("interior + exterior coefficients must be invertible")


@dataclass(frozen=True)
class CoefficientChoice:
    """Rule producing per-body coefficient matrices.

    ``kind`` is ``"C1"`` (interior = (eps_s, mu_s), exterior = (eps_0, mu_0)),
    ``"C2"`` (interior = (1, 0), exterior = (0, 1)) or ``"custom"`` with an
    explicit :class:`Coefficients` per body.
    """

    kind: str = "C1"
    custom: tuple = field(default=())

    def for_body(self, medium0: MediumResponse, body: MediumResponse, index: int = 0) -> Coefficients:
        if self.kind == "C1":
            return Coefficients((body.epsilon, body.mu), (medium0.epsilon, medium0.mu))
        if self.kind == "C2":
            return Coefficients((1.0, 0.0), (0.0, 1.0))
        if self.kind == "custom":
            return self.custom[index]
        raise ValueError(f"unknown coefficient choice {self.kind!r}")


C1 = CoefficientChoice("C1")
C2 = CoefficientChoice("C2")


@dataclass(frozen=True)
class PlaneWave:
    k: float


@dataclass(frozen=True)
class Spherical:
    l: int


@dataclass(frozen=True)
class Cylindrical:
    m: int
    kz: float


@dataclass
class EnergyBreakdown:
    """Result of a Matsubara sum or zero-temperature integral.

    Attributes
    ----------
    terms : list of (n, kappa_n, value)
        Unweighted Matsubara terms; empty for zero-temperature integrals.
    total : float
        ``k_B T [1/2 term_0 + sum_{n>=1} term_n]`` or the T = 0 integral.
    tail_estimate : float
        Magnitude of the last retained contribution (or quadrature error).
    converged : bool
        False when the term budget or subdivision budget ran out.
    """

    terms: list
    total: float
    tail_estimate: float
    converged: bool = True

    def cumulative(self, thermal_energy: float) -> np.ndarray:
        """Running weighted sum after each term."""
        values = np.array([t[2] for t in self.terms], dtype=float)
        weights = np.ones_like(values)
        if len(weights):
            weights[0] = 0.5
        return thermal_energy * np.cumsum(weights * values)

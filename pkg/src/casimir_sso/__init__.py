"""Surface-scattering-operator methods for Casimir and Casimir-Polder interactions.

The package builds the surface scattering operator K of each body from free
Green tensors, combines the bodies into the round-trip operator
N = (1 - K11)^-1 K12 (1 - K22)^-1 K21 and evaluates energies and forces
either exactly or at a chosen order of the multiple scattering expansion.

Backends: parallel plates (:mod:`.plates`), spheres (:mod:`.sphere`),
cylinders (:mod:`.cylinder`), the zero-frequency problem (:mod:`.static`) and
atom-plate Casimir-Polder energies (:mod:`.cp`).
"""

__version__ = "0.1.0"

from .core import (
    C1, C2, DIMENSIONLESS, EXACT, NM_EV, VACUUM, CoefficientChoice, Drude, EnergyBreakdown, Fixed,
    MediumResponse, MseOrder, PerfectConductor, Plasma, Units, evaluate_material,
    matsubara_grid, matsubara_kappa,
)
from .cp import GammaCoincident, Polarizability, cp_energy, gamma_plate_coincident
from .cylinder import CylinderConfig, TBlock, cyl_eigs, cyl_sso_block, mse_t, t_exact
from .engine import block_eigenvalues, matsubara_sum, neumann_inverse, round_trip
from .greens import green_block, green_tensor, scalar_green
from .plates import (
    PlateConfig, casimir_force_per_area, lifshitz_energy_per_area, mse_energy_per_area,
    pec_energy_per_area, pec_force_per_area,
)
from .sphere import SphereConfig, high_freq_eig_limit, pc_sphere_block, sphere_eigs, sphere_sso_block
from .static import static_cp_n0, static_kernel_apply, static_plate_n0_energy, static_sphere_eigs

__all__ = [
    "__version__", "C1", "C2", "DIMENSIONLESS", "EXACT", "NM_EV", "VACUUM", "CoefficientChoice",
    "Drude", "EnergyBreakdown", "Fixed", "MediumResponse", "MseOrder", "PerfectConductor", "Plasma",
    "Units", "evaluate_material", "matsubara_grid", "matsubara_kappa",
    "GammaCoincident", "Polarizability", "cp_energy", "gamma_plate_coincident",
    "CylinderConfig", "TBlock", "cyl_eigs", "cyl_sso_block", "mse_t", "t_exact",
    "block_eigenvalues", "matsubara_sum", "neumann_inverse", "round_trip",
    "green_block", "green_tensor", "scalar_green",
    "PlateConfig", "casimir_force_per_area", "lifshitz_energy_per_area", "mse_energy_per_area",
    "pec_energy_per_area", "pec_force_per_area",
    "SphereConfig", "high_freq_eig_limit", "pc_sphere_block", "sphere_eigs", "sphere_sso_block",
    "static_cp_n0", "static_kernel_apply", "static_plate_n0_energy", "static_sphere_eigs",
]

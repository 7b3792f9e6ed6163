"""Fast invariant suites run by ``casimir-sso selfcheck``.

Each suite returns a :class:`SuiteResult`; the suites are small versions of
the checks in the test suite and finish in a few seconds together.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .core import DIMENSIONLESS, VACUUM, Fixed, MediumResponse, PerfectConductor
from .cp import gamma_plate_coincident
from .cylinder import CylinderConfig, cyl_eigs, t_exact, t_sso
from .engine import exact_inverse, logdet_one_minus, neumann_inverse, pairing_defect
from .greens import green_block, green_tensor
from .plates import (
    PlateConfig, PlateMedia, assemble_plate_operators, lifshitz_mode, mse_energy_per_area,
    pec_energy_per_area,
)
from .sphere import SphereConfig, sphere_block_closed_form, sphere_block_quadrature, sphere_eigs
from .static import static_sphere_eigs


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


def _greens():
    rng = np.random.default_rng(1)
    m = MediumResponse(2.0, 1.5)
    worst = 0.0
    for _ in range(20):
        dr = rng.normal(size=3)
        kappa = rng.uniform(0.2, 2.0)
        G = green_tensor(dr, kappa, m)
        Gm = green_tensor(-dr, kappa, m)
        worst = max(worst, np.max(np.abs(G[:3, :3] - Gm[:3, :3].T)))
        worst = max(worst, np.max(np.abs(green_block("EH", dr, kappa, m) + green_block("HE", dr, kappa, m))))
    return worst < 1e-14, f"reciprocity/antisymmetry defect {worst:.2e}"


def _engine():
    rng = np.random.default_rng(2)
    K = 0.3 * rng.normal(size=(4, 4)) / 2.0
    diff = np.max(np.abs(neumann_inverse(K, 80) - exact_inverse(K)))
    return diff < 1e-12, f"Neumann(80) vs exact inverse {diff:.2e}"


def _plates():
    media = PlateMedia(VACUUM, MediumResponse(4.0, 1.0), MediumResponse(9.0, 2.0))
    worst = 0.0
    for kappa in (0.1, 1.0, 3.0):
        k = np.array([0.05, 0.7, 2.5])
        K11, K12, K22, K21 = assemble_plate_operators(k, kappa, 1.0, media)
        N = exact_inverse(K11) @ K12 @ exact_inverse(K22) @ K21
        ref = lifshitz_mode(k, kappa, media, 1.0)
        worst = max(worst, float(np.max(np.abs(logdet_one_minus(N) / ref - 1.0))))
    e = mse_energy_per_area(PlateConfig(PerfectConductor(), PerfectConductor(), 1.0,
                                        units=DIMENSIONLESS)).total
    pec = abs(e / pec_energy_per_area(1.0, DIMENSIONLESS) - 1.0)
    ok = worst < 1e-10 and pec < 1e-6
    return ok, f"Lifshitz mode defect {worst:.2e}; PEC energy defect {pec:.2e}"


def _sphere():
    m1 = MediumResponse(4.0, 1.0)
    a = sphere_block_closed_form(1, 1.0, VACUUM, m1)
    b = sphere_block_quadrature(1, 1.0, VACUUM, m1)
    diff = float(np.max(np.abs(a - b)))
    ev = sphere_eigs(2, 0.5, SphereConfig(1.0, Fixed(16.0, 2.0), units=DIMENSIONLESS))
    ok = diff < 1e-8 and pairing_defect(ev) < 1e-8 and np.max(np.abs(ev)) < 1
    return ok, f"closed form vs quadrature {diff:.2e}; pairing {pairing_defect(ev):.2e}"


def _cylinder():
    cfg = CylinderConfig(1.0, 30.0, units=DIMENSIONLESS)
    t1, t2 = t_exact(1, 1.0, 1.0, cfg), t_sso(1, 1.0, 1.0, cfg)
    diff = float(np.max(np.abs(t1.scaled - t2.scaled)) / np.max(np.abs(t1.scaled)))
    anti = abs(t1.scaled[0, 1] + t1.scaled[1, 0])
    ev = cyl_eigs(1, 1.0, 1.0, cfg)
    ok = diff < 1e-10 and anti == 0.0 and pairing_defect(ev) < 1e-8
    return ok, f"SSO vs closed-form T {diff:.2e}; T^HE + T^EH = {anti:.1e}"


def _static():
    ev = static_sphere_eigs(6, 0.5, n_theta=32)
    ok = bool(np.all(np.abs(ev[1:]) < 0.5)) and abs(ev[1] + 0.5 / 3) < 1e-4
    return ok, f"lambda_1 = {ev[1]:.8f} (dipole value -c/3 = {-0.5 / 3:.8f})"


def _cp():
    kw = dict(units=DIMENSIONLESS)
    a = gamma_plate_coincident(1.0, 0.8, Fixed(5.0), **kw)
    b = gamma_plate_coincident(1.0, 0.8, Fixed(5.0), method="fresnel", **kw)
    diff = max(abs(x - y) / abs(y) for x, y in zip(a.ee_diag + a.hh_diag, b.ee_diag + b.hh_diag))
    return diff < 1e-9, f"operator vs reflection oracle {diff:.2e}"


SUITES = {
    "greens": _greens,
    "engine": _engine,
    "plates": _plates,
    "sphere": _sphere,
    "cylinder": _cylinder,
    "static": _static,
    "cp": _cp,
}


def run_suites(names=None) -> list[SuiteResult]:
    """Run the named suites (all by default) in a fixed order."""
    out = []
    for name in names or SUITES:
        t0 = time.perf_counter()
        try:
            ok, detail = SUITES[name]()
        except Exception as exc:  # a crashing suite is a failing suite
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(SuiteResult(name, bool(ok), detail, time.perf_counter() - t0))
    return out


def suite_names():
    return list(SUITES)


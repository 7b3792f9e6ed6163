import math

import numpy as np
import pytest

from casimir_sso.core import DIMENSIONLESS, NM_EV, Fixed, MseOrder, PerfectConductor
from casimir_sso.cp import (
    Polarizability, TabulatedPolarizability, cp_energy, fit_power_law, gamma_first_order_real_space,
    gamma_plate_coincident, pec_retarded_cp,
)
from casimir_sso.quadrature import QuadratureConfig

DL = dict(units=DIMENSIONLESS)


@pytest.mark.parametrize("material", [Fixed(4.0), Fixed(3.0, 2.5), Fixed(50.0, 1.0), PerfectConductor()])
@pytest.mark.parametrize("kappa", [0.05, 1.0, 4.0])
def test_operator_matches_reflection_oracle(material, kappa):
    a = gamma_plate_coincident(0.8, kappa, material, **DL)
    b = gamma_plate_coincident(0.8, kappa, material, method="fresnel", **DL)
    for x, y in zip(a.ee_diag + a.hh_diag, b.ee_diag + b.hh_diag):
        assert x == pytest.approx(y, rel=1e-9, abs=1e-15 * abs(b.ee_trace))
    assert a.converged


def test_zero_contrast_gamma():
    g = gamma_plate_coincident(1.0, 1.0, Fixed(1.0), **DL)
    assert max(abs(v) for v in g.ee_diag + g.hh_diag) < 1e-14 / (32 * math.pi)


def test_exponential_envelope():
    # kappa Gamma ~ exp(-2 kappa z0) at large kappa z0
    z0 = 1.0
    vals = [gamma_plate_coincident(z0, k, Fixed(4.0), **DL).ee_trace for k in (20.0, 21.0)]
    rate = -math.log(vals[1] / vals[0])
    assert rate == pytest.approx(2 * z0, rel=0.05)


def test_first_order_term_real_space():
    for material in (Fixed(4.0), Fixed(2.0, 3.0)):
        a = gamma_plate_coincident(1.0, 0.7, material, MseOrder(0, 0), quadrature=QuadratureConfig(1e-12), **DL)
        b = gamma_first_order_real_space(1.0, 0.7, material, quadrature=QuadratureConfig(1e-12), **DL)
        for x, y in zip(a.ee_diag + a.hh_diag, b.ee_diag + b.hh_diag):
            assert x == pytest.approx(y, rel=1e-10)


def test_polarizability_models():
    p = Polarizability(2.0, 1.0, 0.5, 2.0)
    assert p.alpha(1.0)[0] == pytest.approx(1.0)
    assert p.beta(2.0)[2] == pytest.approx(0.25)
    with pytest.raises(ValueError):
        Polarizability(-1.0)
    t = TabulatedPolarizability((0.0, 1.0, 2.0), (2.0, 1.0, 0.0))
    assert t.alpha(0.5)[1] == pytest.approx(1.5)
    assert t.beta(0.5)[0] == 0.0
    with pytest.raises(ValueError):
        TabulatedPolarizability((1.0, 0.0), (1.0, 1.0))


def test_zero_polarizability_energy():
    assert cp_energy(Polarizability(0.0), 1.0, Fixed(4.0), **DL).total == 0.0


def test_pec_retarded_limit_exact():
    e = cp_energy(Polarizability(1.0), 1.0, PerfectConductor(), **DL).total
    assert e == pytest.approx(pec_retarded_cp(1.0, 1.0, DIMENSIONLESS), rel=1e-9)
    assert pec_retarded_cp(1.0, 1.0, DIMENSIONLESS) == pytest.approx(-3 / (8 * math.pi))


def test_energy_negative_for_dielectric():
    for eps in (1.5, 4.0, 30.0):
        for z0 in (0.3, 1.0, 3.0):
            assert cp_energy(Polarizability(1.0, 2.0), z0, Fixed(eps), **DL).total < 0


def test_finite_temperature_has_static_term():
    p = Polarizability(1.0, 2.0)
    res = cp_energy(p, 1.0, Fixed(4.0), temperature=0.2, **DL)
    assert res.converged
    assert res.terms[0][0] == 0
    cold = cp_energy(p, 1.0, Fixed(4.0), temperature=0.002, **DL).total
    assert cold == pytest.approx(cp_energy(p, 1.0, Fixed(4.0), **DL).total, rel=1e-3)


def test_mse_order_errors_decrease():
    p = Polarizability(1.0, 1.0)
    for eps in (2.0, 10.0):
        exact = cp_energy(p, 1.0, Fixed(eps), **DL).total
        errs = [abs(cp_energy(p, 1.0, Fixed(eps), order=MseOrder(0, l), **DL).total - exact) for l in range(5)]
        assert all(b < a for a, b in zip(errs, errs[1:]))


def test_power_law_helper():
    z = np.array([1.0, 2.0, 4.0])
    assert fit_power_law(z, 3.0 * z**-4) == pytest.approx(-4.0)


def test_physical_units_pec_value():
    e = cp_energy(Polarizability(1.0), 100.0, PerfectConductor(), units=NM_EV).total
    assert e == pytest.approx(-3 * 197.3269804 / (8 * math.pi * 1e8), rel=1e-9)


def test_input_errors():
    with pytest.raises(ValueError):
        gamma_plate_coincident(-1.0, 1.0, Fixed(2.0))
    with pytest.raises(ValueError):
        gamma_plate_coincident(1.0, 0.0, Fixed(2.0))
    with pytest.raises(ValueError):
        cp_energy(Polarizability(1.0), 0.0, Fixed(2.0))

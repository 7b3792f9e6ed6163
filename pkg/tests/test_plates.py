import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from casimir_sso.core import C2, DIMENSIONLESS, VACUUM, Fixed, MediumResponse, MseOrder, PerfectConductor
from casimir_sso.engine import block_eigenvalues, exact_inverse, logdet_one_minus, pairing_defect
from casimir_sso.plates import (
    PlateConfig, PlateMedia, assemble_plate_operators, casimir_force_per_area, fresnel, kappa_term,
    lifshitz_energy_per_area, lifshitz_mode, mse_energies_per_area, mse_energy_per_area,
    pc_plate_blocks, pec_energy_per_area, plate_cross_block, plate_self_block, plate_self_eigs,
)
from casimir_sso.quadrature import QuadratureConfig
from casimir_sso.static import static_plate_n0_integral

medium = st.builds(MediumResponse, st.floats(1.0, 100.0), st.floats(1.0, 10.0))


def _media(e1=4.0, m1=1.0, e2=9.0, m2=2.0, e0=1.0, m0=1.0):
    return PlateMedia(MediumResponse(e0, m0), MediumResponse(e1, m1), MediumResponse(e2, m2))


@given(medium, medium, medium, st.floats(0.01, 10.0), st.floats(0.0, 10.0))
def test_generic_assembly_matches_closed_forms(m0, m1, m2, kappa, k):
    media = PlateMedia(m0, m1, m2)
    K11, K12, K22, K21 = assemble_plate_operators(np.array([k]), kappa, 0.7, media)
    np.testing.assert_allclose(K11[0], plate_self_block(1, k, kappa, media), atol=1e-13)
    np.testing.assert_allclose(K22[0], plate_self_block(2, k, kappa, media), atol=1e-13)
    np.testing.assert_allclose(K12[0], plate_cross_block("12", k, kappa, 0.7, media), atol=1e-13)
    np.testing.assert_allclose(K21[0], plate_cross_block("21", k, kappa, 0.7, media), atol=1e-13)


def test_self_eigenvalue_oracle():
    # independent route: K^2 = diag(EH HE, HE EH) with EH ~ [[0, a], [b, 0]]
    kappa = k = 1.0
    eps = 2.0
    s0, s1 = math.sqrt(2.0), math.sqrt(3.0)
    a = 1.0 / s0 - eps / s1
    b = s1 - s0
    lam_ref = math.sqrt(-a * b / (kappa**2 * 2.0 * (1.0 + eps)))
    media = _media(eps, 1.0, eps, 1.0)
    lam, neg = plate_self_eigs(k, kappa, media)
    assert float(lam) == pytest.approx(lam_ref, rel=1e-14)
    assert float(lam) == pytest.approx(0.153982, abs=1e-6)
    ev = block_eigenvalues(plate_self_block(1, k, kappa, media))
    np.testing.assert_allclose(np.sort(ev.real), [-lam_ref, -lam_ref, lam_ref, lam_ref], atol=1e-14)


@given(medium, st.floats(1e-3, 1e3), st.floats(0.0, 1e3))
def test_self_spectrum_bounded_and_paired(m1, kappa, k):
    media = PlateMedia(VACUUM, m1, m1)
    ev = block_eigenvalues(plate_self_block(1, k, kappa, media))
    assert np.max(np.abs(ev)) < 1.0
    assert pairing_defect(ev) < 1e-8


def test_fresnel_limits():
    f = fresnel(np.array([0.5]), 1.0, VACUUM, None)
    assert f.r_tm[0] == 1.0 and f.r_te[0] == -1.0
    f = fresnel(np.array([0.5]), 1.0, VACUUM, VACUUM)
    assert f.r_tm[0] == 0.0 and f.r_te[0] == 0.0


@pytest.mark.parametrize("coefficients", [None, C2])
def test_logdet_equals_lifshitz(coefficients, rng):
    media = _media(7.0, 1.5, 30.0, 1.0)
    for _ in range(20):
        kappa, k, d = rng.uniform(0.01, 5), rng.uniform(0.01, 5), rng.uniform(0.1, 2)
        kw = {} if coefficients is None else {"coefficients": coefficients}
        K11, K12, K22, K21 = assemble_plate_operators(np.array([k]), kappa, d, media, **kw)
        N = exact_inverse(K11) @ K12 @ exact_inverse(K22) @ K21
        ref = lifshitz_mode(np.array([k]), kappa, media, d)
        assert logdet_one_minus(N)[0] == pytest.approx(ref[0], rel=1e-10)


def test_pc_blocks():
    K11, K12, K22, K21 = pc_plate_blocks(np.array([1.0]), 1.0, 2.0)
    assert np.all(K11 == 0) and np.all(K22 == 0)
    np.testing.assert_allclose(K12[0], -math.exp(-math.sqrt(2.0) * 2.0) * np.eye(2))


def test_zero_contrast_null():
    media = PlateMedia(VACUUM, VACUUM, VACUUM)
    for K in assemble_plate_operators(np.linspace(0, 3, 7), 0.9, 1.0, media)[::2]:
        assert np.max(np.abs(K)) < 1e-15
    cfg = PlateConfig(1.0, 1.0, 1.0, units=DIMENSIONLESS)
    assert abs(mse_energy_per_area(cfg).total) < 1e-14
    assert abs(casimir_force_per_area(cfg).total) < 1e-14


def test_energy_matches_lifshitz_integral():
    cfg = PlateConfig(Fixed(5.0, 2.0), Fixed(12.0), 1.0, units=DIMENSIONLESS)
    a = mse_energy_per_area(cfg).total
    b = lifshitz_energy_per_area(cfg).total
    assert a == pytest.approx(b, rel=1e-9)


def test_force_is_minus_energy_derivative():
    h = 1e-2
    e = lambda d: mse_energy_per_area(PlateConfig(4.0, 4.0, d, units=DIMENSIONLESS,
                                                  quadrature=QuadratureConfig(1e-12))).total
    fd = -(8 * (e(1 + h) - e(1 - h)) - (e(1 + 2 * h) - e(1 - 2 * h))) / (12 * h)
    f = casimir_force_per_area(PlateConfig(4.0, 4.0, 1.0, units=DIMENSIONLESS)).total
    assert f < 0
    assert f == pytest.approx(fd, rel=1e-6)


def test_force_derivative_at_finite_temperature():
    h = 1e-2
    base = dict(temperature=0.3, units=DIMENSIONLESS, quadrature=QuadratureConfig(1e-12))
    e = lambda d: mse_energy_per_area(PlateConfig(4.0, Fixed(3.0, 2.0), d, **base)).total
    fd = -(8 * (e(1 + h) - e(1 - h)) - (e(1 + 2 * h) - e(1 - 2 * h))) / (12 * h)
    f = casimir_force_per_area(PlateConfig(4.0, Fixed(3.0, 2.0), 1.0, **base)).total
    assert f == pytest.approx(fd, rel=1e-6)


def test_n0_term_matches_polylog_oracle():
    # int k dk/(2pi) ln(1 - x e^{-2kd}) = -Li_3(x) / (8 pi d^2)
    cfg = PlateConfig(Fixed(5.0, 3.0), Fixed(2.0, 1.5), 1.3, temperature=1.0, units=DIMENSIONLESS,
                      quadrature=QuadratureConfig(1e-13))
    xj = (4 / 6) * (1 / 3)
    xm = (2 / 4) * (0.5 / 2.5)
    ref = -float(mp.polylog(3, xj) + mp.polylog(3, xm)) / (8 * math.pi * 1.3**2)
    assert static_plate_n0_integral(cfg) == pytest.approx(ref, rel=1e-10)
    lif = lifshitz_energy_per_area(PlateConfig(Fixed(5.0, 3.0), Fixed(2.0, 1.5), 1.3, temperature=5.0,
                                               units=DIMENSIONLESS, quadrature=QuadratureConfig(1e-13)))
    assert lif.terms[0][2] == pytest.approx(ref, rel=1e-10)


def test_finite_kappa_approaches_static_term():
    cfg = PlateConfig(Fixed(5.0, 3.0), Fixed(2.0, 1.5), 1.0, temperature=1.0, units=DIMENSIONLESS,
                      quadrature=QuadratureConfig(1e-12))
    assert kappa_term(cfg, 1e-6) == pytest.approx(static_plate_n0_integral(cfg), rel=1e-4)


def test_pec_static_limit():
    # r_j = 1, r_m = 0: -k_B T zeta(3)/(16 pi d^2) for the classical term
    cfg = PlateConfig(Fixed(1e8), Fixed(1e8), 1.0, temperature=1.0, units=DIMENSIONLESS)
    ref = -float(mp.zeta(3)) / (8 * math.pi)
    assert static_plate_n0_integral(cfg) == pytest.approx(ref, rel=1e-4)
    pc = PlateConfig(PerfectConductor(), PerfectConductor(), 1.0, temperature=1.0, units=DIMENSIONLESS)
    assert static_plate_n0_integral(pc) == pytest.approx(ref, rel=1e-12)


def test_low_temperature_limit():
    # 1 K at 100 nm is within 0.1% of the zero-temperature energy
    quad = QuadratureConfig(1e-6)
    e0 = lifshitz_energy_per_area(PlateConfig(2.0, 2.0, 100.0, quadrature=quad)).total
    res = lifshitz_energy_per_area(PlateConfig(2.0, 2.0, 100.0, temperature=1.0, quadrature=quad))
    assert res.converged
    assert res.total == pytest.approx(e0, rel=1e-3)


def test_mse_orders_converge_monotonically():
    cfg = PlateConfig(Fixed(6.0), Fixed(3.0, 2.0), 1.0, units=DIMENSIONLESS)
    orders = ["exact"] + [MseOrder(k, l) for l in (0, 2) for k in range(4)]
    res = mse_energies_per_area(cfg, orders)
    exact = res[MseOrder.parse("exact")].total
    for l in (0, 2):
        errs = [abs(res[MseOrder(k, l)].total - exact) for k in range(4)]
        assert all(b < a for a, b in zip(errs, errs[1:]))
    hi = mse_energy_per_area(PlateConfig(Fixed(6.0), Fixed(3.0, 2.0), 1.0, units=DIMENSIONLESS,
                                         inner2="same"), MseOrder(30, 30)).total
    assert hi == pytest.approx(exact, rel=1e-8)


def test_pec_energy_formula():
    assert pec_energy_per_area(2.0, DIMENSIONLESS) == pytest.approx(-math.pi**2 / 5760)


def test_config_validation():
    with pytest.raises(ValueError):
        PlateConfig(2.0, 2.0, 0.0)
    with pytest.raises(ValueError):
        PlateConfig(2.0, 2.0, 1.0, temperature=-1.0)
    with pytest.raises(ValueError):
        PlateConfig(2.0, 2.0, 1.0, medium0=PerfectConductor())


def test_high_contrast_matches_arbitrary_precision_oracle():
    # eps = 1e8 plates relative to perfect conductors; double integral evaluated with mpmath
    cfg = PlateConfig(Fixed(1e8), Fixed(1e8), 1.0, units=DIMENSIONLESS)
    rel = mse_energy_per_area(cfg).total / pec_energy_per_area(1.0, DIMENSIONLESS) - 1.0
    assert rel == pytest.approx(-0.0019044015984891941, rel=1e-8)


@pytest.mark.parametrize("kappa", [1e-7, 1e-4, 1e-2])
def test_high_contrast_terms_match_fresnel_integral(kappa):
    cfg = PlateConfig(Fixed(1e8), Fixed(1e8), 1.0, units=DIMENSIONLESS)
    media = cfg.media_at(kappa)
    ref = quad_fresnel_term(kappa, media)
    assert kappa_term(cfg, kappa) == pytest.approx(ref, rel=1e-9)


def quad_fresnel_term(kappa, media, d=1.0):
    from casimir_sso.quadrature import integrate_semi_infinite
    f = lambda k: np.asarray(k) / (2 * math.pi) * lifshitz_mode(k, kappa, media, d)
    return float(integrate_semi_infinite(f, max(kappa, 1.0 / d), QuadratureConfig(1e-12)).value)

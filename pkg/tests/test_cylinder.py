import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from casimir_sso.core import DIMENSIONLESS, Fixed, MediumResponse, PerfectConductor, VACUUM
from casimir_sso.cylinder import (
    CylinderConfig, cyl_block_analytic, cyl_block_quadrature, cyl_eigs, cyl_intermediates, cyl_sso_block,
    mse_t, t_exact, t_sso,
)
from casimir_sso.engine import pairing_defect
from casimir_sso.sphere import high_freq_eig_limit

from oracles import cylinder_t_mpmath

# (T^EE, T^EH, T^HE, T^HH) at (m, kappaR, kzR, eps, mu) = (1, 1, 1, 30, 1), from the
# arbitrary-precision evaluation in oracles.cylinder_t_mpmath
REGRESSION = (-2.04583704906298, 0.3169848197628219, -0.3169848197628219, 1.220201695344951)


def _cfg(eps, mu=1.0):
    return CylinderConfig(1.0, Fixed(eps, mu), units=DIMENSIONLESS)


def test_regression_against_arbitrary_precision():
    ref = cylinder_t_mpmath(1, 1.0, 1.0, 30.0, 1.0)
    np.testing.assert_allclose(ref, REGRESSION, rtol=1e-13)
    got = t_exact(1, 1.0, 1.0, _cfg(30.0)).entries.ravel()
    np.testing.assert_allclose(got, ref, rtol=1e-10)


@pytest.mark.parametrize("m, kappaR, kzR, eps, mu", [
    (0, 0.5, 2.0, 30.0, 1.0), (2, 3.0, 0.7, 5.0, 2.0), (5, 10.0, 4.0, 2.0, 1.0), (1, 0.05, 0.1, 80.0, 1.0),
])
def test_closed_form_against_arbitrary_precision(m, kappaR, kzR, eps, mu):
    ref = np.array(cylinder_t_mpmath(m, kappaR, kzR, eps, mu))
    got = t_exact(m, kappaR, kzR, _cfg(eps, mu)).entries.ravel()
    np.testing.assert_allclose(got, ref, rtol=1e-10, atol=1e-14 * np.max(np.abs(ref)))


@given(st.integers(0, 6), st.floats(1e-2, 50.0), st.floats(0.0, 50.0), st.floats(1.0, 100.0), st.floats(1.0, 10.0))
def test_t_identities(m, kappaR, kzR, eps, mu):
    t = t_exact(m, kappaR, kzR, _cfg(eps, mu)).scaled
    assert t[1, 0] == -t[0, 1]
    if m == 0 or kzR == 0:
        assert t[0, 1] == 0.0 and t[1, 0] == 0.0


def test_zero_contrast():
    cfg = _cfg(1.0)
    assert np.max(np.abs(t_exact(2, 1.0, 1.0, cfg).scaled)) < 1e-15
    assert np.max(np.abs(t_sso(2, 1.0, 1.0, cfg).scaled)) < 1e-15
    assert np.max(np.abs(cyl_sso_block(2, 1.0, 1.0, cfg))) < 1e-15
    for p in range(4):
        assert np.max(np.abs(mse_t(2, 1.0, 1.0, cfg, p).scaled)) < 1e-15


def test_scaled_path_continuous_to_large_kappa():
    cfg = _cfg(30.0)
    xs = np.geomspace(100.0, 1e3, 40)
    vals = np.array([t_exact(1, x, 1.0, cfg).scaled.ravel() for x in xs])
    assert np.all(np.isfinite(vals))
    steps = np.abs(np.diff(vals, axis=0))
    assert np.max(steps) < 0.05 * np.max(np.abs(vals))
    t = t_exact(1, 1e3, 1.0, cfg)
    assert np.all(np.isfinite(t.scaled)) and t.log_scale == pytest.approx(2 * math.hypot(1e3, 1.0))


@pytest.mark.parametrize("m, kappaR, kzR, eps, mu", [
    (0, 1.0, 0.0, 30.0, 1.0), (1, 1.0, 1.0, 30.0, 1.0), (3, 0.4, 2.0, 4.0, 3.0), (2, 7.0, 0.3, 1.0, 4.0),
])
def test_sso_t_matrix_equals_closed_form(m, kappaR, kzR, eps, mu):
    a = t_exact(m, kappaR, kzR, _cfg(eps, mu))
    b = t_sso(m, kappaR, kzR, _cfg(eps, mu))
    np.testing.assert_allclose(b.scaled, a.scaled, rtol=1e-10, atol=1e-13 * np.max(np.abs(a.scaled)))


@pytest.mark.parametrize("m, kappaR, kzR, eps, mu", [
    (0, 1.0, 0.5, 30.0, 1.0), (1, 1.0, 1.0, 30.0, 1.0), (2, 0.3, 2.0, 4.0, 3.0), (1, 3.0, 0.0, 1.0, 4.0),
])
def test_blocks_analytic_vs_quadrature(m, kappaR, kzR, eps, mu):
    m1 = MediumResponse(eps, mu)
    a = cyl_block_analytic(m, kappaR, kzR, VACUUM, m1)
    q = cyl_block_quadrature(m, kappaR, kzR, VACUUM, m1)
    np.testing.assert_allclose(q, a, atol=1e-8)


@given(st.integers(0, 10), st.floats(-3.0, 3.0), st.floats(0.0, 5.0), st.floats(1.0, 100.0), st.floats(1.0, 100.0))
def test_spectrum_bounded_and_paired(m, log_kappa, kzR, eps, mu):
    ev = cyl_eigs(m, 10.0**log_kappa, kzR, _cfg(eps, mu))
    assert np.max(np.abs(ev)) < 1.0
    assert pairing_defect(ev) < 1e-8


@pytest.mark.parametrize("eps, mu", [(4.0, 1.0), (1.0, 4.0), (16.0, 2.0)])
def test_high_frequency_limit(eps, mu):
    lim = abs(high_freq_eig_limit(VACUUM, MediumResponse(eps, mu)))
    for m in (0, 1, 2):
        for kz in (0.0, 1.0, 2.0):
            devs = [np.max(np.abs(np.abs(cyl_eigs(m, x, kz, _cfg(eps, mu))) - lim)) for x in (10.0, 30.0, 100.0)]
            assert devs[-1] < 1e-2
            assert devs[0] > devs[2]


def test_intermediates():
    c = cyl_intermediates(1, 1.0, 1.0, MediumResponse(30.0, 1.0))
    assert c.p1 >= c.p0
    assert c.K != 0
    assert cyl_intermediates(0, 1.0, 1.0, MediumResponse(30.0, 1.0)).K == 0
    assert cyl_intermediates(2, 1.0, 0.0, MediumResponse(30.0, 1.0)).K == 0


def test_mse_t_converges_away_from_corner():
    cfg = _cfg(30.0)
    for m, x, kz in [(1, 1.0, 1.0), (0, 2.0, 1.0), (1, 0.2, 0.2)]:
        ref = t_exact(m, x, kz, cfg)
        errs = [np.nanmax(np.abs(mse_t(m, x, kz, cfg, p).ratio(ref) - 1.0)[ref.scaled != 0]) for p in (3, 10, 40)]
        assert errs[2] < 1e-6
        assert errs[0] > errs[2]


def test_input_errors():
    with pytest.raises(ValueError):
        CylinderConfig(1.0, PerfectConductor())
    with pytest.raises(ValueError):
        t_exact(-1, 1.0, 1.0, _cfg(2.0))
    with pytest.raises(ValueError):
        t_exact(1, 0.0, 1.0, _cfg(2.0))
    with pytest.raises(ValueError):
        mse_t(1, 1.0, 1.0, _cfg(2.0), -1)
    with pytest.raises(ValueError):
        t_exact(1, 1.0, 1.0, CylinderConfig(1.0, Fixed(2.0), medium0=Fixed(2.0), units=DIMENSIONLESS))

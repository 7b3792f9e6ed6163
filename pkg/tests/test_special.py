import mpmath as mp
import numpy as np
import pytest

from casimir_sso.special import (
    cyl_i_prime_scaled, cyl_i_scaled, cyl_k_prime_scaled, cyl_k_scaled, sph_i_riccati_scaled,
    sph_i_scaled, sph_k_riccati_scaled, sph_k_scaled,
)

mp.mp.dps = 40
POINTS = [(0, 0.3), (1, 1.0), (3, 2.5), (10, 7.0), (25, 40.0), (50, 3.0), (2, 500.0)]


def _rel(a, b):
    return abs(float(a) - float(b)) / abs(float(b))


@pytest.mark.parametrize("m, x", POINTS)
def test_cylindrical_scaled_against_mpmath(m, x):
    e = mp.exp(-x)
    assert _rel(cyl_i_scaled(m, x), mp.besseli(m, x) * e) < 1e-12
    assert _rel(cyl_k_scaled(m, x), mp.besselk(m, x) / e) < 1e-12
    assert _rel(cyl_i_prime_scaled(m, x), mp.diff(lambda t: mp.besseli(m, t), x) * e) < 1e-12
    assert _rel(cyl_k_prime_scaled(m, x), mp.diff(lambda t: mp.besselk(m, t), x) / e) < 1e-12


@pytest.mark.parametrize("l, x", POINTS)
def test_spherical_scaled_against_mpmath(l, x):
    e = mp.exp(-x)

    def i_l(t):
        return mp.sqrt(mp.pi / (2 * t)) * mp.besseli(l + mp.mpf(1) / 2, t)

    def k_l(t):
        return mp.sqrt(2 / (mp.pi * t)) * mp.besselk(l + mp.mpf(1) / 2, t)

    assert _rel(sph_i_scaled(l, x), i_l(x) * e) < 1e-12
    assert _rel(sph_k_scaled(l, x), k_l(x) / e) < 1e-12
    if l >= 1:
        ri = mp.diff(lambda t: t * i_l(t), x) / x
        rk = mp.diff(lambda t: t * k_l(t), x) / x
        assert _rel(sph_i_riccati_scaled(l, x), ri * e) < 1e-11
        assert _rel(sph_k_riccati_scaled(l, x), rk / e) < 1e-11


def test_scaled_values_finite_at_large_argument():
    x = np.array([1e3, 1e4])
    for f in (cyl_i_scaled, cyl_k_scaled, sph_i_scaled, sph_k_scaled):
        assert np.all(np.isfinite(f(5, x)))

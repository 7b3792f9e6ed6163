import numpy as np
import pytest
from hypothesis import given, strategies as st

from casimir_sso.core import MediumResponse
from casimir_sso.greens import green_block, green_tensor, scalar_green

from oracles import fd_curl as _curl, fd_first as _d1, fd_laplacian as _laplacian

MEDIA = [MediumResponse(1.0, 1.0), MediumResponse(4.0, 1.0), MediumResponse(2.0, 3.0)]


def test_scalar_green_value():
    m = MediumResponse(4.0, 1.0)
    assert scalar_green(2.0, 0.5, m) == pytest.approx(np.exp(-2.0) / (8 * np.pi))
    with pytest.raises(ValueError):
        scalar_green(0.0, 1.0, m)


@pytest.mark.parametrize("medium", MEDIA)
@pytest.mark.parametrize("label", ["EE", "HH", "HE", "EH"])
def test_helmholtz_and_divergence_residuals(medium, label):
    kappa = 0.8
    q2 = kappa**2 * medium.epsilon * medium.mu
    r0 = np.array([0.7, -0.4, 0.9])
    f = lambda r: green_block(label, r, kappa, medium)
    G = f(r0)
    helm = _laplacian(f, r0) - q2 * G
    assert np.max(np.abs(helm)) < 1e-6 * q2 * np.max(np.abs(G))
    div = sum(_d1(f, r0, a)[a] for a in range(3))  # d_i G_ij
    scale = max(np.max(np.abs(_d1(f, r0, a))) for a in range(3))
    assert np.max(np.abs(div)) < 1e-6 * scale


@pytest.mark.parametrize("medium", MEDIA)
def test_faraday_and_ampere_relations(medium):
    kappa = 1.3
    r0 = np.array([-0.5, 0.8, 0.3])
    ee = lambda r: green_block("EE", r, kappa, medium)
    hh = lambda r: green_block("HH", r, kappa, medium)
    he = green_block("HE", r0, kappa, medium)
    eh = green_block("EH", r0, kappa, medium)
    for lhs, rhs in ((_curl(ee, r0), -medium.mu * kappa * he), (_curl(hh, r0), medium.epsilon * kappa * eh)):
        np.testing.assert_allclose(lhs, rhs, rtol=0, atol=1e-6 * np.abs(rhs).max())


vec = st.tuples(*[st.floats(-3, 3) for _ in range(3)]).filter(lambda v: np.linalg.norm(v) > 0.05)


@given(vec, st.floats(0.01, 5.0), st.sampled_from(MEDIA))
def test_antisymmetry_and_reciprocity(dr, kappa, medium):
    dr = np.array(dr)
    eh = green_block("EH", dr, kappa, medium)
    he = green_block("HE", dr, kappa, medium)
    assert np.array_equal(eh, -he)
    for label in ("EE", "HH"):
        assert np.array_equal(green_block(label, dr, kappa, medium),
                              green_block(label, -dr, kappa, medium).T)
    # HE is odd in dr and antisymmetric in its indices
    np.testing.assert_array_equal(he, -green_block("HE", -dr, kappa, medium))
    np.testing.assert_array_equal(he, -he.T)


def test_tensor_layout():
    dr = np.array([0.3, 0.2, -0.4])
    m = MEDIA[2]
    G = green_tensor(dr, 0.7, m)
    assert G.shape == (6, 6)
    np.testing.assert_array_equal(G[3:, :3], green_block("HE", dr, 0.7, m))
    np.testing.assert_array_equal(G[:3, 3:], green_block("EH", dr, 0.7, m))


def test_broadcasting():
    dr = np.random.default_rng(0).normal(size=(5, 4, 3))
    out = green_block("EE", dr, 1.0, MEDIA[1])
    assert out.shape == (5, 4, 3, 3)
    np.testing.assert_allclose(out[2, 1], green_block("EE", dr[2, 1], 1.0, MEDIA[1]))


def test_errors():
    with pytest.raises(ValueError):
        green_block("EE", np.zeros(3), 1.0, MEDIA[0])
    with pytest.raises(ValueError):
        green_block("EE", np.ones(3), 0.0, MEDIA[0])

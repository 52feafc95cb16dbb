import numpy as np
import pytest
from hypothesis import given, strategies as st

from plancherel.bessel_ops import (ClosedFormFunction, a_equivariance_defect, bessel_apply,
                                   bessel_apply_numeric, commutator_defect, intertwining_residual,
                                   kfinite_vector, sample_annulus, spherical_vector,
                                   symmetry_check)
from plancherel.polynomial import Polynomial
from plancherel.sl_operator import SpectralParams, eigenfunction_F
from plancherel.specfun import ktilde

SIGMAS = [1.5, 2j, 0.7]


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("sigma", SIGMAS)
def test_bessel_operator_on_spherical_vector(n, sigma):
    # B_j psi_sigma = -x_j K~_{alpha}(|x|) with alpha = -sigma/2 (a closed form oracle)
    pts = sample_annulus(n, 10, seed=1)
    for j in range(1, n + 1):
        out = bessel_apply(n, sigma, j, spherical_vector(n, sigma))(pts)
        r = np.linalg.norm(pts, axis=1)
        ref = -pts[:, j - 1] * ktilde(-complex(sigma) / 2, r)
        assert np.allclose(out, ref, rtol=1e-12, atol=1e-14)


@pytest.mark.parametrize("sigma", SIGMAS)
def test_closed_form_matches_finite_differences(sigma):
    u = spherical_vector(3, sigma) + kfinite_vector(sigma, 1, Polynomial.variable(3, 2))
    pts = sample_annulus(3, 20, seed=7, r_min=0.5)
    for j in (1, 3):
        a = bessel_apply(3, sigma, j, u)(pts)
        b = bessel_apply_numeric(3, sigma, j, u, pts)
        assert np.max(np.abs(a - b) / (1 + np.abs(a))) < 1e-6


def test_linear_coordinate_has_constant_image():
    # B_1 x_1 = -(2E - sigma + n) 1 = sigma - n on R^n
    u = lambda x: np.asarray(x)[..., 0]  # noqa: E731
    pts = sample_annulus(2, 5, seed=3)
    assert np.allclose(bessel_apply_numeric(2, 1.5, 1, u, pts), -0.5, atol=1e-8)


@given(st.integers(1, 3), st.integers(1, 3), st.sampled_from(SIGMAS))
def test_bessel_operators_commute(j, l, sigma):
    u = spherical_vector(3, sigma) + kfinite_vector(sigma, 1, Polynomial.variable(3, 0))
    assert commutator_defect(3, sigma, u, j, l, sample_annulus(3, 8, seed=5)) < 1e-12


@pytest.mark.parametrize("n,sigma", [(2, 1.5), (2, 2j), (3, 1.5)])
def test_formal_self_adjointness(n, sigma):
    u = spherical_vector(n, sigma)
    for j in range(1, n + 1):
        v = kfinite_vector(sigma, 1, Polynomial.variable(n, j - 1))
        assert symmetry_check(n, sigma, u + v, v, j) < 1e-6


@pytest.mark.parametrize("sigma,tau", [(1.5, 1j), (1.5, 0.5), (2j, 2.5j)])
def test_intertwining_two_one_zero(sigma, tau):
    pts = sample_annulus(2, 100, seed=42, m=1)
    f = spherical_vector(1, tau)
    assert intertwining_residual(sigma, tau, 0, 2, 1, f, Polynomial.constant(1), 1, pts) < 1e-6


@pytest.mark.parametrize("sigma,tau", [(9.0, 5.0), (9.0, 1j), (2j, 1.5j)])
def test_intertwining_three_one_one(sigma, tau):
    pts = sample_annulus(3, 100, seed=42, m=1)
    f = spherical_vector(1, tau) + kfinite_vector(tau, 0, Polynomial.variable(1, 0))
    phi = Polynomial.variable(2, 0)
    assert intertwining_residual(sigma, tau, 1, 3, 1, f, phi, 1, pts) < 1e-6


def test_intertwining_negative_controls():
    pts = sample_annulus(2, 100, seed=42, m=1)
    sigma, tau = 1.5, 1j
    p = SpectralParams(sigma, 1)
    f = spherical_vector(1, tau)
    one = Polynomial.constant(1)
    bad = lambda t: eigenfunction_F(p, tau, t) * (1 + 0.5 * t / (1 + t))  # noqa: E731
    assert intertwining_residual(sigma, tau, 0, 2, 1, f, one, 1, pts, F_handle=bad) > 1e-2
    # a profile solving the equation for another spectral parameter
    shifted = lambda t: eigenfunction_F(p, tau + 0.4, t)  # noqa: E731
    assert intertwining_residual(sigma, tau, 0, 2, 1, f, one, 1, pts, F_handle=shifted) > 1e-2


def test_intertwining_rejects_points_outside_spectrum():
    pts = sample_annulus(2, 5, m=1)
    with pytest.raises(ValueError):
        intertwining_residual(1.5, 0.9, 0, 2, 1, spherical_vector(1, 0.9), Polynomial.constant(1),
                              1, pts)


def test_a_equivariance():
    pts = sample_annulus(2, 10, seed=2, m=1)
    d = a_equivariance_defect(1.5, 1j, 0, 2, 1, spherical_vector(1, 1j), Polynomial.constant(1),
                              0.3, pts)
    assert d < 1e-12


def test_simplified_form_preserves_values():
    u = ClosedFormFunction.from_terms(2, [(0.3, 2, Polynomial.variable(2, 0))])
    pts = sample_annulus(2, 6, seed=9)
    assert np.allclose(u.simplified()(pts), u(pts), rtol=1e-12)

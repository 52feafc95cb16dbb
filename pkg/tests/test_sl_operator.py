import numpy as np
import pytest
from hypothesis import given, strategies as st

from plancherel.sl_operator import (HypergeometricTriple, SpectralParams, apply_D, eigenfunction_F,
                                    eigenfunction_handle, eta1, eta2, lambda_star, potential_q,
                                    tau_to_lambda, wronskian, wronskian_numeric)

finite = dict(allow_nan=False, allow_infinity=False)
SIGMAS = [5, 3j, 6, 1.5, 0.5j]


def test_params_validation():
    with pytest.raises(ValueError):
        SpectralParams(5, 0)
    with pytest.raises(ValueError):
        SpectralParams(-1, 1)
    with pytest.raises(ValueError):
        SpectralParams(1 + 1j, 1)
    assert SpectralParams(5, 1.0).mu == 1


def test_triple_coordinates_agree():
    p = SpectralParams(6, 3)
    tau = 2.2j
    a = HypergeometricTriple.from_tau(p, tau)
    b = HypergeometricTriple.from_lambda(p, tau_to_lambda(p, tau))
    assert np.allclose([a.a, a.b, a.c], [b.a, b.b, b.c]) or np.allclose([a.a, a.b], [b.b, b.a])


@given(st.sampled_from(SIGMAS), st.integers(1, 5), st.floats(0.1, 12, **finite),
       st.floats(1e-3, 1e3, **finite))
def test_eigen_equation(sigma, mu, nu, t):
    p = SpectralParams(sigma, mu)
    u = eigenfunction_handle(p, 1j * nu)
    f, d1, d2 = u.derivatives(t)
    res = apply_D(p, u, t) + lambda_star(p, 1j * nu) * f
    scale = (abs(t * (1 + t) * d2) + abs(((mu - p.sigma + 2) / 2 * t + mu / 2) * d1)
             + abs(lambda_star(p, 1j * nu) * f))
    assert abs(res) <= 1e-9 * scale


def test_eigen_equation_with_finite_differences():
    p = SpectralParams(5, 2)
    f = lambda t: eigenfunction_F(p, 1.5j, t)  # noqa: E731
    t = np.array([0.5, 2.0, 7.0])
    assert np.allclose(apply_D(p, f, t), -lambda_star(p, 1.5j) * f(t), rtol=1e-6)


def test_eigenfunction_normalised_at_origin():
    p = SpectralParams(3j, 2)
    assert eigenfunction_F(p, 0.7j, 0.0) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        eigenfunction_F(p, 0.7j, -1.0)


@pytest.mark.parametrize("sigma", SIGMAS)
@pytest.mark.parametrize("lam", [0.3, 1.7, -0.2 + 0.5j, 2.0 + 1.0j])
def test_wronskian_closed_form(sigma, lam):
    p = SpectralParams(sigma, 1)
    w = wronskian(p, complex(lam))
    wn = wronskian_numeric(p, complex(lam), 1.0)
    assert abs(w - wn) <= 1e-6 * abs(w)


def test_wronskian_is_independent_of_x():
    p = SpectralParams(6, 3)
    lam = 0.8 + 0.1j
    vals = [wronskian_numeric(p, lam, x) for x in (0.6, 1.2, 2.5)]
    assert np.allclose(vals, wronskian(p, lam), rtol=1e-6)


def test_wronskian_vanishes_at_atom():
    # tau = 4 is an atom for (5, 1): lambda = -(tau/4)^2 = -1
    assert abs(wronskian(SpectralParams(5, 1), -1.0 + 0j)) <= 1e-8
    with pytest.raises(ValueError):
        wronskian(SpectralParams(5, 1), 0.0)


def test_eta1_real_for_real_lambda():
    for sigma in (5, 2j):
        v = eta1(SpectralParams(sigma, 2), 0.9, np.array([0.5, 1.5, 3.0]))
        assert np.max(np.abs(np.imag(v))) <= 1e-10 * np.max(np.abs(v))


def test_eta2_decays_and_potential_is_real():
    p = SpectralParams(5, 1)
    lam = -0.25 + 0.0j  # below the continuum, away from the atom
    vals = np.abs(eta2(p, lam, np.array([4.0, 8.0, 16.0])))
    assert vals[0] > vals[1] > vals[2]
    assert np.all(np.isreal(potential_q(p, np.array([0.5, 2.0]))))

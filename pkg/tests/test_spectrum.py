import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from plancherel.sl_operator import SpectralParams
from plancherel.spectrum import (PlancherelMeasure, SpectrumPoint, atom_indices,
                                 continuous_density, discrete_points, discrete_weight,
                                 discrete_weight_unreduced, lambda_density, measure_integrate,
                                 nu_grid, residue_oracle)

finite = dict(allow_nan=False, allow_infinity=False)


def test_atom_indices():
    assert atom_indices(SpectralParams(5, 1)) == [0]
    assert atom_indices(SpectralParams(6, 1)) == [0, 1]
    assert atom_indices(SpectralParams(3j, 2)) == []
    assert atom_indices(SpectralParams(5, 5)) == []       # threshold: (sigma-mu)/4 = 0
    assert [p.tau for p in discrete_points(SpectralParams(6, 1))] == [5, 1]


def test_weight_closed_value():
    assert discrete_weight(SpectralParams(5, 1), 0) == pytest.approx(0.75, abs=1e-10)
    with pytest.raises(ValueError):
        discrete_weight(SpectralParams(5, 1), 1)
    with pytest.raises(ValueError):
        SpectrumPoint.discrete(SpectralParams(3j, 1), 0)


@pytest.mark.parametrize("sigma,mu,j", [(5, 1, 0), (6, 1, 0), (6, 1, 1), (4.1, 4, 0), (9.3, 2, 1)])
def test_weight_against_residue_oracle(sigma, mu, j):
    p = SpectralParams(sigma, mu)
    oracle, info = residue_oracle(p, j)
    assert discrete_weight(p, j) == pytest.approx(oracle, rel=1e-6)
    assert info["connection_drift"] < 1e-8


def test_weight_reduction_matches_unreduced_formula_off_the_poles():
    p = SpectralParams(7.3, 2)
    for j in atom_indices(p):
        assert discrete_weight(p, j) == pytest.approx(discrete_weight_unreduced(p, j), rel=1e-10)


@given(st.sampled_from([5, 3j, 6, 1.5, 0.2j]), st.integers(1, 6), st.floats(0.05, 60, **finite))
def test_tau_and_lambda_densities_agree(sigma, mu, nu):
    p = SpectralParams(sigma, mu)
    tau_side = continuous_density(p, nu)
    lam_side = lambda_density(p, nu * nu / 16) * nu / 8
    assert tau_side == pytest.approx(lam_side, rel=1e-10)


@pytest.mark.parametrize("mu", [1, 2, 3, 5])
def test_density_grows_like_power(mu):
    # the density behaves like c nu^(mu-1) for large nu
    p = SpectralParams(3j, mu)
    r = continuous_density(p, 400.0) / continuous_density(p, 200.0)
    assert r == pytest.approx(2.0 ** (mu - 1), rel=1e-3)


def test_density_nonzero_at_threshold():
    # sigma = mu: a pole of Gamma((mu - sigma + i nu)/4) meets the zero of 1/Gamma(i nu/2)
    p = SpectralParams(3, 3)
    small = continuous_density(p, np.array([1e-6, 1e-4]))
    assert small[0] > 0 and small[0] == pytest.approx(small[1], rel=1e-3)


def test_measure_integrate_of_constant_decomposes():
    m = PlancherelMeasure.of(SpectralParams(5, 1))
    val, meta = measure_integrate(m, lambda tau: np.exp(-np.abs(tau) ** 2))
    atoms = 0.75 * math.exp(-16)
    grid = nu_grid(40.0, 64, 32)
    cont = np.sum(grid.weights * continuous_density(m.params, grid.nodes) * np.exp(-grid.nodes ** 2))
    assert val.real == pytest.approx(atoms + cont, rel=1e-12)
    assert meta["nu_max"] == 40.0

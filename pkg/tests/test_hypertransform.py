import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from plancherel.hypertransform import (TEST_FUNCTIONS, GridConfig, SpectralFunction, TailWarning,
                                       TransformKernel, UnitarityConfig, build_grid, forward,
                                       inverse, plancherel_norm, roundtrip_defect,
                                       verify_unitarity, weighted_norm)
from plancherel.sl_operator import SpectralParams
from plancherel.spectrum import nu_grid

P51 = SpectralParams(5, 1)


@pytest.fixture(scope="module")
def kernel51():
    return TransformKernel(P51, build_grid(P51), nu_grid())


@pytest.fixture(scope="module")
def kernels(kernel51):
    p = SpectralParams(3j, 2)
    return [(P51, kernel51), (p, TransformKernel(p, build_grid(p), nu_grid()))]


def test_grid_integrates_weight():
    # int_0^inf t^(-1/2) (1+t)^(-5/2) dt = B(1/2, 2) = 4/3
    g = build_grid(P51)
    assert np.sum(g.weighted(P51)) == pytest.approx(4.0 / 3.0, rel=1e-12)


def test_atom_value_against_quadrature_oracle(kernel51):
    # F(t, 4) = 1 for (5, 1), so the atom value is int e^-t t^(-1/2) (1+t)^(-5/2) dt
    with mpmath.workdps(30):
        ref = float(mpmath.quad(lambda t: mpmath.exp(-t) * t ** -0.5 * (1 + t) ** -2.5,
                                [0, 1, 10, mpmath.inf]))
    g = forward(P51, TEST_FUNCTIONS["exp"], kernel=kernel51)
    assert g.discrete[0].real == pytest.approx(ref, rel=1e-12)


@pytest.mark.parametrize("name", ["exp", "texp2", "rational3", "expcos"])
def test_plancherel_identity(kernels, name):
    f = TEST_FUNCTIONS[name]
    for params, kern in kernels:
        g = forward(params, f, kernel=kern)
        assert plancherel_norm(params, g) == pytest.approx(weighted_norm(params, f, kern.grid),
                                                           rel=1e-9)
        assert roundtrip_defect(params, f, g) < 1e-6


@given(st.floats(-2, 2, allow_nan=False), st.floats(-2, 2, allow_nan=False))
def test_forward_is_linear(kernel51, c1, c2):
    f1, f2 = TEST_FUNCTIONS["exp"], TEST_FUNCTIONS["rational3"]
    g = forward(P51, lambda t: c1 * f1(t) + c2 * f2(t), kernel=kernel51)
    g1, g2 = forward(P51, f1, kernel=kernel51), forward(P51, f2, kernel=kernel51)
    assert np.allclose(g.values, c1 * g1.values + c2 * g2.values, atol=1e-13)
    assert g.discrete[0] == pytest.approx(c1 * g1.discrete[0] + c2 * g2.discrete[0], abs=1e-13)


def test_zero_function(kernel51):
    g = forward(P51, TEST_FUNCTIONS["zero"], kernel=kernel51)
    assert not np.any(g.values) and g.discrete == {0: 0j}
    assert np.all(inverse(P51, g, [0.5, 2.0]) == 0)


def test_spectral_function_requires_matching_atoms():
    with pytest.raises(ValueError):
        SpectralFunction(P51, nu_grid(), np.zeros(512), {})
    assert plancherel_norm(P51, SpectralFunction.zero(P51)) == 0


def test_rational_mapping_agrees():
    res = verify_unitarity(SpectralParams(6, 3), TEST_FUNCTIONS["exp"],
                           UnitarityConfig(grid=GridConfig(mapping="rational", panels=100),
                                           nu_max=40.0, nu_panels=16))
    assert res["pass"] and res["rel_err"] < 1e-6


def test_unreachable_tolerance_fails():
    res = verify_unitarity(SpectralParams(1.5, 5), TEST_FUNCTIONS["expcos"],
                           UnitarityConfig(tol=1e-15))
    assert not res["pass"]


def test_tail_warning_for_growing_integrand():
    with pytest.warns(TailWarning):
        forward(SpectralParams(1.5, 5), TEST_FUNCTIONS["one"], grid=build_grid(None, GridConfig(panels=8)),
                nu=nu_grid(4.0, 2, 4))


def test_grid_config_validation():
    with pytest.raises(ValueError):
        GridConfig(mapping="tan")
    with pytest.raises(ValueError):
        GridConfig(panels=0)

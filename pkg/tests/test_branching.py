import numpy as np
import pytest

from plancherel.branching import (BranchingConfig, atom_census, direct_norm, factorization_check,
                                  fiber_parseval, fiber_spectral_data, full_plancherel_check,
                                  harmonic_basis, integral_formula_check, integral_formula_draws,
                                  isotypic_project, noncompact_kernel_check, psi_sigma_k,
                                  spherical_vector_ft_check)
from plancherel.quadrature import sphere_rule


def gauss(z):
    return np.exp(-np.sum(np.asarray(z) ** 2, axis=-1) / 2)


def r2gauss(z):
    r2 = np.sum(np.asarray(z) ** 2, axis=-1)
    return r2 * np.exp(-r2 / 2)


@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_harmonic_basis_orthonormal_and_harmonic(d, k):
    hb = harmonic_basis(d, k)
    assert len(hb.basis) == (1 if d == 2 and k == 0 else 2 if d == 2 else 2 * k + 1)
    om, w = sphere_rule(d, 2 * k + 4)
    vals = hb.sphere_values(om)
    assert np.allclose((vals.T * w) @ vals, np.eye(len(hb.basis)), atol=1e-12)
    for p in hb.basis:
        assert p.laplacian().is_zero(1e-10)
        assert p.degree == k


def test_one_dimensional_harmonics():
    assert len(harmonic_basis(1, 0).basis) == 1
    assert len(harmonic_basis(1, 1).basis) == 1
    assert harmonic_basis(1, 2).basis == []


def test_fiber_parseval_closes():
    partial, full = fiber_parseval(3, 1, lambda z: np.exp(-np.sum((z - 0.3) ** 2, axis=-1)),
                                   [0.4], 0.9, k_max=8)
    assert np.all(np.diff(partial) >= -1e-15)
    assert partial[-1] == pytest.approx(full, rel=1e-8)


def test_radial_fibre_only_has_degree_zero():
    comps = isotypic_project(3, 1, gauss, 1)
    assert all(abs(c.profile(np.array([0.5]), 0.7)) < 1e-14 for c in comps)


@pytest.mark.parametrize("sigma", [1.5, 2j])
def test_intertwiner_reconstructs_function(sigma):
    pts = np.array([[0.5, 0.3], [1.0, -0.8], [-0.7, 1.5]])
    spectral = fiber_spectral_data(2, 1, sigma, gauss, 0)
    psi = psi_sigma_k(sigma, 0, 2, 1, spectral, harmonic_basis(1, 0).basis[0])
    assert np.allclose(psi(pts), gauss(pts), rtol=1e-8)


def test_direct_norm_gaussian():
    # int_{R^2} e^(-|z|^2) |z|^(-1.5) dz = 2 pi Gamma(1/4) / 2
    from math import gamma, pi
    assert direct_norm(2, 1.5, gauss) == pytest.approx(pi * gamma(0.25), rel=1e-8)


def test_branching_plancherel_two_one():
    r = full_plancherel_check(2, 1, 1.5, gauss, k_max=6)
    assert r["rel_defect"] < 1e-2
    assert r["census_match"]
    assert {k: v for k, v in r["atoms"].items() if v} == {0: [(0, 0.5)]}
    assert r["fiber_norm"] == pytest.approx(r["direct_norm"], rel=1e-6)


def test_branching_plancherel_imaginary_sigma_has_no_atoms():
    r = full_plancherel_check(2, 1, 2j, gauss, k_max=6)
    assert r["rel_defect"] < 1e-2
    assert not any(r["atoms"].values())


def test_branching_plancherel_three_two():
    r = full_plancherel_check(3, 2, 5.0, r2gauss, k_max=6)
    assert r["rel_defect"] < 1e-2 and r["census_match"]


def test_branching_refinement_does_not_move_result():
    coarse = full_plancherel_check(2, 1, 1.5, gauss, k_max=2)
    fine = full_plancherel_check(2, 1, 1.5, gauss, k_max=2, config=BranchingConfig().refined(2))
    assert fine["spectral_norm"] == pytest.approx(coarse["spectral_norm"], rel=1e-4)


@pytest.mark.parametrize("sigma", [4.0, 5.0, 10.3])
def test_atom_census_index_formula(sigma):
    census = atom_census(3, 2, sigma, 6)
    assert all(v["match"] for v in census.values())


def test_atom_census_sigma_four():
    census = atom_census(3, 2, 4.0, 6)
    assert {k: [j for j, _ in v["atoms"]] for k, v in census.items() if v["atoms"]} == {0: [0],
                                                                                           1: [0]}


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("k", [0, 1, 2])
def test_fourier_hankel_factorization(n, k):
    assert factorization_check(n, k, lambda r: np.exp(-np.asarray(r) ** 2 / 2)) < 1e-6


@pytest.mark.parametrize("n,sigma", [(2, 1.0), (3, 1.5)])
def test_spherical_vector_fourier_transform(n, sigma):
    r = spherical_vector_ft_check(sigma, n)
    assert r["rel_err"] < 1e-4 and r["c_rel_err"] < 1e-4


def test_spherical_vector_fourier_transform_window():
    with pytest.raises(ValueError):
        spherical_vector_ft_check(2.5, 2)


@pytest.mark.parametrize("which", ["hankel_2f1", "jk_moment"])
def test_integral_formulas(which):
    for params in integral_formula_draws(which, 5, seed=42):
        assert integral_formula_check(which, params) < 1e-5


def test_integral_formula_window_enforced():
    bad = {"alpha": 1.0, "beta": 1.0, "nu": 0.9, "lam": 1.0, "y": 1.0}
    with pytest.raises(ValueError):
        integral_formula_check("hankel_2f1", bad)


@pytest.mark.parametrize("tup", [(-3.0, -1.2, 0, 2, 1), (-4.0, -1.5, 1, 3, 1)])
def test_noncompact_kernel_chain(tup):
    r = noncompact_kernel_check(*tup)
    assert r["subcheck_i"] < 1e-4 and r["subcheck_ii"] < 1e-4
    assert r["const_rel_err"] < 1e-4 and r["slope_err"] < 1e-4


def test_noncompact_kernel_rejects_divergent_parameters():
    with pytest.raises(ValueError):
        noncompact_kernel_check(1.5, 1j, 0, 2, 1)

import numpy as np
import pytest
from hypothesis import given, strategies as st

from plancherel.polynomial import Polynomial

coeff = st.floats(-3, 3, allow_nan=False, allow_infinity=False)


def polys(dim, max_deg=4):
    exps = st.tuples(*[st.integers(0, max_deg)] * dim)
    return st.dictionaries(exps, coeff, max_size=6).map(lambda c: Polynomial(dim, c))


points = st.lists(st.floats(-2, 2, allow_nan=False), min_size=3, max_size=3)


@given(polys(3), polys(3), points)
def test_product_evaluates_pointwise(p, q, x):
    x = np.array([x])
    assert np.allclose((p * q)(x), p(x) * q(x), rtol=1e-10, atol=1e-8)


@given(polys(3))
def test_divmod_by_norm_squared_reconstructs(p):
    q, r = p.divmod_norm_squared()
    assert all(e[0] <= 1 for e in r.coeffs)
    diff = Polynomial.norm_squared(3) * q + r - p
    assert diff.is_zero(1e-9)


@given(polys(2), polys(2))
def test_leibniz_rule(p, q):
    lhs = (p * q).deriv(0)
    rhs = p.deriv(0) * q + p * q.deriv(0)
    assert (lhs - rhs).is_zero(1e-9)


def test_laplacian_and_euler():
    r2 = Polynomial.norm_squared(4)
    assert r2.laplacian() == Polynomial.constant(4, 8.0)
    assert r2.euler() == r2 * 2
    assert Polynomial.variable(3, 1).degree == 1


def test_dimension_checks():
    with pytest.raises(ValueError):
        Polynomial(2, {(1, 0, 0): 1.0})
    with pytest.raises(ValueError):
        Polynomial.constant(2) + Polynomial.constant(3)

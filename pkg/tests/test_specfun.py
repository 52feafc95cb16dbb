import math
import warnings

import mpmath
import numpy as np
import pytest
import scipy.special as sp
from hypothesis import given, strategies as st

from plancherel.specfun import (AccuracyWarning, ParameterPoleError, PrecisionPolicy, besselk,
                                gamma, hyp2f1, hyp2f1_connection, hyp2f1_derivative,
                                jacobi_poly, jbessel, ktilde, ktilde_derivative, poch, rgamma)

finite = dict(allow_nan=False, allow_infinity=False)


def rel(a, b):
    return abs(a - b) / max(abs(a), abs(b))


# gamma ---------------------------------------------------------------------

def test_gamma_known_values():
    assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-15)
    assert gamma(2.5) / gamma(0.5) == pytest.approx(0.75, abs=1e-12)
    assert gamma(5) == pytest.approx(24.0, rel=1e-15)


def test_rgamma_vanishes_at_poles():
    assert rgamma(0) == 0
    assert rgamma(-3) == 0


@given(st.floats(-6, 6, **finite), st.floats(-6, 6, **finite))
def test_gamma_matches_scipy(x, y):
    z = complex(x, y)
    if abs(z - round(x)) < 1e-3 and round(x) <= 0:
        return
    assert rel(gamma(z), complex(sp.gamma(z))) < 1e-12


@given(st.floats(0.05, 0.95, **finite))
def test_gamma_reflection(x):
    assert gamma(x) * gamma(1 - x) == pytest.approx(math.pi / math.sin(math.pi * x), rel=1e-13)


def test_pochhammer():
    assert poch(0.5, 3) == pytest.approx(0.5 * 1.5 * 2.5)
    assert poch(-2.0, 3) == 0


# hyp2f1 ---------------------------------------------------------------------

MP_CASES = [  # (a, b, c, z); reference values from mpmath at 40 digits
    (0.3 + 0.2j, -1.1 + 0.5j, 1.5, -0.3),
    (-1.25 + 0.25j, -1.25 - 0.25j, 0.5, -7.0),
    (1.0 + 2.0j, 1.0 - 2.0j, 2.5, -150.0),
    (0.75, 0.75, 1.0, -1e6),            # a - b integer: degenerate connection
    (-0.5 + 3j, -0.5 - 3j, 1.5, -30.0),
]


@pytest.mark.parametrize("a,b,c,z", MP_CASES)
def test_hyp2f1_against_mpmath(a, b, c, z):
    with mpmath.workdps(40):
        ref = complex(mpmath.hyp2f1(a, b, c, z))
    assert rel(complex(hyp2f1(a, b, c, z)), ref) < 1e-11


@given(st.floats(-2, 2, **finite), st.floats(-1, 1, **finite), st.floats(-2, 2, **finite),
       st.floats(-1, 1, **finite), st.floats(0.5, 3, **finite), st.floats(-20, 0, **finite))
def test_kummer_transformation(ar, ai, br, bi, c, z):
    a, b = complex(ar, ai), complex(br, bi)
    lhs = hyp2f1(a, b, c, z)
    rhs = (1 - z) ** (c - a - b) * hyp2f1(c - a, c - b, c, z)
    assert rel(lhs, rhs) < 1e-9


@given(st.floats(-3, 3, **finite), st.floats(-2, 2, **finite), st.floats(-3, 3, **finite),
       st.floats(0.5, 4, **finite), st.floats(-1e4, 0, **finite))
def test_hyp2f1_matches_mpmath(ar, ai, br, c, z):
    a, b = complex(ar, ai), complex(br, -ai)
    with mpmath.workdps(40):
        ref = complex(mpmath.hyp2f1(a, b, c, z))
    if abs(ref) < 1e-8:  # relative error is meaningless next to a zero
        return
    assert rel(complex(hyp2f1(a, b, c, z)), ref) < 1e-9


def test_connection_formula_matches():
    for a, b, c, z in [(0.3 + 0.2j, -1.1 + 0.5j, 1.5, -8.0), (1.2, -0.4, 2.2, -40.0)]:
        assert rel(hyp2f1(a, b, c, z), hyp2f1_connection(a, b, c, z)) < 1e-7


def test_connection_formula_rejects_integer_difference():
    with pytest.raises(ParameterPoleError):
        hyp2f1_connection(1.5, 0.5, 2.0, -6.0)


def test_hyp2f1_terminating_polynomial():
    t = np.array([0.0, 1.0, 2.0, 100.0])
    assert np.allclose(hyp2f1(-1, -1.5, 0.5, -t), 1 - 3 * t, rtol=1e-15)


def test_hyp2f1_errors():
    with pytest.raises(ParameterPoleError):
        hyp2f1(1.0, 1.0, -2.0, -0.5)
    with pytest.raises(ValueError):
        hyp2f1(1.0, 1.0, 1.5, 0.5)


def test_hyp2f1_derivative_by_differences():
    a, b, c, z, h = 0.4 + 0.3j, -0.8, 1.3, -2.0, 1e-5
    fd = (hyp2f1(a, b, c, z + h) - hyp2f1(a, b, c, z - h)) / (2 * h)
    assert rel(hyp2f1_derivative(a, b, c, z), fd) < 1e-8


def test_policy_without_fallback_still_accurate_on_easy_input():
    pol = PrecisionPolicy(fallback=False)
    assert rel(hyp2f1(0.5, 0.5, 1.0, -0.25, pol), complex(mpmath.hyp2f1(0.5, 0.5, 1, -0.25))) < 1e-14


# K-Bessel ---------------------------------------------------------------------

@given(st.floats(-3, 3, **finite), st.floats(-3, 3, **finite), st.floats(0.1, 10, **finite))
def test_ktilde_recurrence(ar, ai, x):
    alpha = complex(ar, ai)
    terms = (x * x * ktilde(alpha + 1, x), 4 * alpha * ktilde(alpha, x), 4 * ktilde(alpha - 1, x))
    assert abs(terms[0] - terms[1] - terms[2]) <= 1e-9 * sum(abs(t) for t in terms)


@given(st.floats(-4, 4, **finite), st.floats(0.05, 30, **finite))
def test_besselk_matches_scipy_for_real_order(nu, x):
    assert rel(complex(besselk(nu, x)), sp.kv(nu, x)) < 1e-12


def test_besselk_complex_order_against_mpmath():
    for nu, x in [(0.5 + 2j, 1.3), (-1.2 + 5j, 0.7), (3j, 8.0)]:
        assert rel(complex(besselk(nu, x)), complex(mpmath.besselk(nu, x))) < 1e-11


def test_ktilde_small_argument_limit():
    # K~_a(x) -> Gamma(a) (x/2)^(-2a) / 2 for Re a > 0 as x -> 0
    a, x = 1.5, 1e-4
    assert rel(complex(ktilde(a, x, warn=False)), gamma(a) / 2 * (x / 2) ** (-2 * a)) < 1e-7
    with pytest.warns(AccuracyWarning):
        ktilde(a, 1e-3)


def test_ktilde_derivative_by_differences():
    a, x, h = 0.3 + 1.1j, 1.7, 1e-5
    fd = (ktilde(a, x + h) - ktilde(a, x - h)) / (2 * h)
    assert rel(complex(ktilde_derivative(a, x)), complex(fd)) < 1e-8


def test_ktilde_rejects_non_positive_argument():
    with pytest.raises(ValueError):
        ktilde(1.0, 0.0)


def test_jbessel_and_jacobi():
    assert jbessel(0.5, 2.0) == pytest.approx(sp.jv(0.5, 2.0), rel=1e-14)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        assert jacobi_poly(3, 0.5, -0.25, 0.3) == pytest.approx(sp.eval_jacobi(3, 0.5, -0.25, 0.3),
                                                                rel=1e-13)

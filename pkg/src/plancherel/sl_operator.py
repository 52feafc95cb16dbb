"""The hypergeometric differential operator D_{sigma,mu}, its Schroedinger
normal form on the half line, the eigenfunctions eta1/eta2 and their
Wronskian.

Conventions: for a spectral parameter tau the hypergeometric triple is
a = -(sigma-mu)/4 + tau/4, b = -(sigma-mu)/4 - tau/4, c = mu/2, and
F(t, tau) = 2F1(a, b; c; -t) solves D F = -lambda* F with
lambda* = ((sigma-mu)/4)^2 - (tau/4)^2.  In the normal form the variable is
x with t = sinh(x/2)^2 and the shifted eigenvalue is
lambda = lambda* - ((sigma-mu)/4)^2, so that tau = 4 i sqrt(lambda).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .specfun import (DEFAULT_POLICY, ParameterPoleError, PrecisionPolicy,
                      gamma_safe, hyp2f1, hyp2f1_derivative, rgamma)


@dataclass(frozen=True)
class SpectralParams:
    """The pair (sigma, mu).  sigma is purely imaginary or real and positive."""

    sigma: complex
    mu: int

    def __post_init__(self):
        sigma = complex(self.sigma)
        mu = self.mu
        if isinstance(mu, float) and mu.is_integer():
            mu = int(mu)
        if not isinstance(mu, (int, np.integer)) or isinstance(mu, bool) or mu < 1:
            raise ValueError(f"mu must be a positive integer, got {self.mu!r}")
        if sigma.real < 0:
            raise ValueError("Re sigma must be non-negative")
        if sigma.imag != 0 and sigma.real != 0:
            raise ValueError("sigma must be purely imaginary or real")
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "mu", int(mu))

    @property
    def shift(self) -> complex:
        """(sigma - mu)/4, the offset between lambda* and lambda."""
        return (self.sigma - self.mu) / 4.0

    @property
    def is_real(self) -> bool:
        return self.sigma.imag == 0


@dataclass(frozen=True)
class HypergeometricTriple:
    a: complex
    b: complex
    c: complex

    @classmethod
    def from_tau(cls, params: SpectralParams, tau):
        s = params.shift
        return cls(-s + tau / 4.0, -s - tau / 4.0, params.mu / 2.0)

    @classmethod
    def from_lambda(cls, params: SpectralParams, lam):
        isl = 1j * sqrt_lambda(lam)
        s = params.shift
        return cls(-s + isl, -s - isl, params.mu / 2.0)


class EndpointClass(enum.Enum):
    LimitPoint = "LimitPoint"
    LimitCircle = "LimitCircle"


def classify_endpoint(mu: int) -> EndpointClass:
    """Endpoint type of the normal-form operator at x = 0."""
    if mu < 1:
        raise ValueError("mu must be >= 1")
    return EndpointClass.LimitCircle if mu <= 3 else EndpointClass.LimitPoint


def sqrt_lambda(lam):
    """sqrt(lambda) on the branch with 0 < arg < pi off [0, inf), >= 0 on it."""
    lam = np.asarray(lam, dtype=complex)
    root = np.sqrt(lam)
    flip = (root.imag < 0) | ((root.imag == 0) & (lam.real < 0))
    root = np.where(flip, -root, root)
    return root[()] if root.ndim == 0 else root


def lambda_star(params: SpectralParams, tau):
    tau = np.asarray(tau, dtype=complex)
    return params.shift ** 2 - (tau / 4.0) ** 2


def tau_to_lambda(params: SpectralParams, tau):
    return -(np.asarray(tau, dtype=complex) / 4.0) ** 2


def eigenfunction_F(params: SpectralParams, tau, t, policy: PrecisionPolicy = DEFAULT_POLICY):
    """F(t, tau) = 2F1(a, b; mu/2; -t)."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be non-negative")
    tau = np.asarray(tau, dtype=complex)
    s = params.shift
    return hyp2f1(-s + tau / 4.0, -s - tau / 4.0, params.mu / 2.0, -t, policy)


@dataclass(frozen=True)
class Differentiable:
    """A function of one variable with optional analytic derivatives."""

    f: Callable
    df: Callable | None = None
    d2f: Callable | None = None

    def derivatives(self, t, h_rel=1e-4):
        t = np.asarray(t, dtype=float)
        if self.df is not None and self.d2f is not None:
            return self.f(t), self.df(t), self.d2f(t)
        return finite_differences(self.f, t, h_rel)


def finite_differences(f, t, h_rel=1e-4):
    """Value, first and second derivative by 5-point central differences
    with step h = h_rel * max(1, |t|)."""
    t = np.asarray(t, dtype=float)
    h = h_rel * np.maximum(1.0, np.abs(t))
    fm2, fm1, f0, fp1, fp2 = (f(t + k * h) for k in (-2, -1, 0, 1, 2))
    d1 = (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h)
    d2 = (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h * h)
    return f0, d1, d2


def eigenfunction_handle(params: SpectralParams, tau, policy=DEFAULT_POLICY) -> Differentiable:
    """F(., tau) together with its analytic first and second t-derivatives."""
    tr = HypergeometricTriple.from_tau(params, complex(tau))
    a, b, c = tr.a, tr.b, tr.c

    def f(t):
        return hyp2f1(a, b, c, -np.asarray(t, dtype=float), policy)

    def df(t):
        return -hyp2f1_derivative(a, b, c, -np.asarray(t, dtype=float), policy)

    def d2f(t):
        return (a * b / c) * hyp2f1_derivative(a + 1, b + 1, c + 1,
                                               -np.asarray(t, dtype=float), policy)

    return Differentiable(f, df, d2f)


def apply_D(params: SpectralParams, u, t):
    """t(1+t) u'' + ((mu-sigma+2)/2 t + mu/2) u' at t.

    ``u`` is a Differentiable or a plain callable (then 5-point differences
    with step 1e-4 * max(1, t) are used).
    """
    if not isinstance(u, Differentiable):
        u = Differentiable(u)
    t = np.asarray(t, dtype=float)
    _, d1, d2 = u.derivatives(t)
    mu, sigma = params.mu, params.sigma
    return t * (1 + t) * d2 + ((mu - sigma + 2) / 2.0 * t + mu / 2.0) * d1


def to_normalized(params: SpectralParams, t):
    """Return (x, r) with t = sinh(x/2)^2 and
    r = sinh(x/2)^(-(mu-1)/2) cosh(x/2)^((sigma-1)/2)."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ValueError("t must be positive")
    x = 2.0 * np.arcsinh(np.sqrt(t))
    return x, r_factor(params, x)


def r_factor(params: SpectralParams, x):
    x = np.asarray(x, dtype=float)
    sh, ch = np.sinh(x / 2), np.cosh(x / 2)
    return np.exp(-(params.mu - 1) / 2.0 * np.log(sh) + (params.sigma - 1) / 2.0 * np.log(ch))


def beta_coefficient(params: SpectralParams, x):
    """First-order coefficient of D written in the variable x:
    D = d^2/dx^2 + beta d/dx with
    beta = (mu-1)/2 coth(x/2) - (sigma-1)/2 tanh(x/2)."""
    x = np.asarray(x, dtype=float)
    th = np.tanh(x / 2)
    return (params.mu - 1) / 2.0 / th - (params.sigma - 1) / 2.0 * th


def potential_q(params: SpectralParams, x):
    """q(x) = q*(x) - ((sigma-mu)/4)^2 of the normal form -u'' + q u."""
    x = np.asarray(x, dtype=float)
    mu, sigma = params.mu, params.sigma
    th2 = np.tanh(x / 2) ** 2
    qstar = ((mu - 1) * (mu - 3) / 16.0 / th2 - (mu * (sigma - 2) + 1) / 8.0
             + (sigma + 1) * (sigma - 1) / 16.0 * th2)
    q = qstar - params.shift ** 2
    if np.all(np.abs(np.imag(q)) <= 1e-12 * (1 + np.abs(q))):
        q = np.real(q)
    return q


def eta1(params: SpectralParams, lam, x, policy: PrecisionPolicy = DEFAULT_POLICY):
    """Solution recessive at x = 0: r(x)^-1 2F1(a, b; c; -sinh(x/2)^2)."""
    x = np.asarray(x, dtype=float)
    tr = HypergeometricTriple.from_lambda(params, lam)
    return hyp2f1(tr.a, tr.b, tr.c, -np.sinh(x / 2) ** 2, policy) / r_factor(params, x)


def eta2(params: SpectralParams, lam, x, policy: PrecisionPolicy = DEFAULT_POLICY):
    """Solution behaving like exp(i x sqrt(lambda)) at infinity:
    r^-1 sinh(x/2)^(-2b) 2F1(b, b-c+1; b-a+1; -sinh(x/2)^-2)."""
    x = np.asarray(x, dtype=float)
    tr = HypergeometricTriple.from_lambda(params, lam)
    a, b, c = tr.a, tr.b, tr.c
    cc = b - a + 1
    if cc.imag == 0 and cc.real <= 0 and cc.real == round(cc.real):
        raise ParameterPoleError("b - a + 1 is a non-positive integer")
    sh = np.sinh(x / 2)
    core = hyp2f1(b, b - c + 1, cc, -1.0 / sh ** 2, policy)
    return np.exp(-2 * b * np.log(sh)) * core / r_factor(params, x)


def wronskian(params: SpectralParams, lam):
    """Closed-form Wronskian of eta1 and eta2, equal to eta1 eta2' - eta1' eta2.

    2 i sqrt(l) Gamma(-2 i sqrt(l)) Gamma(mu/2)
        / (Gamma(-(sigma-mu)/4 - i sqrt(l)) Gamma((sigma+mu)/4 - i sqrt(l))).
    Vanishes exactly where a denominator gamma has a pole.
    """
    lam = np.asarray(lam, dtype=complex)
    if np.any(lam == 0):
        raise ValueError("the Wronskian formula needs lambda != 0")
    isl = 1j * sqrt_lambda(lam)
    s = params.shift
    mu, sigma = params.mu, params.sigma
    w = (2 * isl * gamma_safe(-2 * isl) * gamma_safe(mu / 2.0)
         * rgamma(-s - isl) * rgamma((sigma + mu) / 4.0 - isl))
    return w[()] if np.ndim(w) == 0 else w


def wronskian_numeric(params: SpectralParams, lam, x, h=1e-4, policy=DEFAULT_POLICY):
    """eta1 eta2' - eta1' eta2 at x from 5-point differences (an oracle).

    This orientation is the one the closed form in ``wronskian`` carries;
    the opposite orientation differs by a sign only.
    """
    def d(f):
        v = [f(x + k * h) for k in (-2, -1, 1, 2)]
        return (v[0] - 8 * v[1] + 8 * v[2] - v[3]) / (12 * h)

    e1 = lambda y: eta1(params, lam, y, policy)  # noqa: E731
    e2 = lambda y: eta2(params, lam, y, policy)  # noqa: E731
    return e1(x) * d(e2) - d(e1) * e2(x)


def schroedinger_residual(params: SpectralParams, lam, u, x, h=1e-3):
    """u'' + (lambda - q) u at x, by 5-point differences."""
    _, _, d2 = finite_differences(u, np.asarray(x, dtype=float), h_rel=h)
    return d2 + (lam - potential_q(params, x)) * u(np.asarray(x, dtype=float))

"""Bessel operators B_j = x_j Delta - (2E - sigma + n) d_j, the K-finite
functions K~_alpha(|x|) p(x), the lift Psi and numeric checks of the
intertwining and symmetry identities.

A K-finite function is stored as sum_k K~_{alpha0+k}(|x|) P_k(x) with
polynomials P_k (powers of |x|^2 are folded into P_k).  Derivatives follow
from d_i K~_a(|x|) = -(x_i/2) K~_{a+1}(|x|), so the family is closed under
the operators; |x|^2 K~_{b} = 4(b-1) K~_{b-1} + 4 K~_{b-2} brings orders
back down after an operator has been applied.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .polynomial import Polynomial
from .quadrature import composite_gauss, graded_edges, sphere_rule
from .sl_operator import SpectralParams, eigenfunction_F
from .specfun import ktilde
from .spectrum import atom_indices


def _align(a0, b0):
    d = complex(b0) - complex(a0)
    if abs(d.imag) > 1e-12 or abs(d.real - round(d.real)) > 1e-12:
        raise ValueError("K-Bessel orders must differ by integers")
    return int(round(d.real))


@dataclass
class ClosedFormFunction:
    """sum_k K~_{alpha0+k}(|x|) P_k(x) on R^dim minus the origin."""

    dim: int
    alpha0: complex
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        self.alpha0 = complex(self.alpha0)
        for k, p in self.terms.items():
            if not isinstance(p, Polynomial) or p.dim != self.dim:
                raise ValueError("terms must be polynomials of the right dimension")
            if int(k) != k:
                raise ValueError("order offsets must be integers")
        self.terms = {int(k): p for k, p in self.terms.items() if not p.is_zero()}

    @classmethod
    def from_terms(cls, dim: int, terms) -> "ClosedFormFunction":
        """Build from (alpha, a, p) triples meaning K~_alpha(|x|) |x|^(2a) p(x)."""
        terms = list(terms)
        if not terms:
            return cls(dim, 0.0, {})
        base = min((complex(t[0]) for t in terms), key=lambda z: z.real)
        out = cls(dim, base, {})
        r2 = Polynomial.norm_squared(dim)
        for alpha, a, p in terms:
            if a < 0:
                raise ValueError("power index must be non-negative")
            poly = p
            for _ in range(int(a)):
                poly = poly * r2
            out = out + cls(dim, alpha, {0: poly})
        return out

    @property
    def term_list(self):
        """(alpha, 0, P) triples; powers of |x|^2 live inside P."""
        return [(self.alpha0 + k, 0, p) for k, p in sorted(self.terms.items())]

    # arithmetic --------------------------------------------------------
    def _shifted(self, alpha0):
        d = _align(alpha0, self.alpha0)
        return {k + d: p for k, p in self.terms.items()}

    def __add__(self, other: "ClosedFormFunction") -> "ClosedFormFunction":
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        if not other.terms:
            return ClosedFormFunction(self.dim, self.alpha0, dict(self.terms))
        if not self.terms:
            return ClosedFormFunction(other.dim, other.alpha0, dict(other.terms))
        base = self.alpha0 if _align(self.alpha0, other.alpha0) >= 0 else other.alpha0
        out = dict(self._shifted(base))
        for k, p in other._shifted(base).items():
            out[k] = out[k] + p if k in out else p
        return ClosedFormFunction(self.dim, base, out)

    def scale(self, c) -> "ClosedFormFunction":
        return ClosedFormFunction(self.dim, self.alpha0, {k: p * c for k, p in self.terms.items()})

    def __sub__(self, other):
        return self + other.scale(-1.0)

    def times_x(self, i: int) -> "ClosedFormFunction":
        return ClosedFormFunction(self.dim, self.alpha0,
                                  {k: p.times_x(i) for k, p in self.terms.items()})

    def partial(self, i: int) -> "ClosedFormFunction":
        """d/dx_i (0-based) using d_i K~_a(|x|) = -(x_i/2) K~_{a+1}(|x|)."""
        out = {}
        for k, p in self.terms.items():
            dp = p.deriv(i)
            out[k] = out[k] + dp if k in out else dp
            sp = p.times_x(i) * (-0.5)
            out[k + 1] = out[k + 1] + sp if k + 1 in out else sp
        return ClosedFormFunction(self.dim, self.alpha0, out)

    def laplacian(self) -> "ClosedFormFunction":
        out = ClosedFormFunction(self.dim, self.alpha0, {})
        for i in range(self.dim):
            out = out + self.partial(i).partial(i)
        return out

    def euler(self) -> "ClosedFormFunction":
        out = ClosedFormFunction(self.dim, self.alpha0, {})
        for i in range(self.dim):
            out = out + self.partial(i).times_x(i)
        return out

    def simplified(self) -> "ClosedFormFunction":
        """Lower K-Bessel orders with |x|^2 K~_b = 4(b-1) K~_{b-1} + 4 K~_{b-2}.

        A term K~_{alpha0+k} P with k >= 2 is split as P = |x|^2 Q + R and the
        Q part is moved two orders down; the result has only remainder-type
        polynomials at orders alpha0 + 2 and above.
        """
        terms = {k: p for k, p in self.terms.items()}
        while True:
            todo = [k for k in terms if k >= 2 and not terms[k].divmod_norm_squared()[0].is_zero()]
            if not todo:
                break
            k = max(todo)
            q, r = terms.pop(k).divmod_norm_squared()
            if not r.is_zero():
                terms[k] = r
            b = self.alpha0 + k
            for kk, c in ((k - 1, 4.0 * (b - 1.0)), (k - 2, 4.0)):
                add = q * c
                terms[kk] = terms[kk] + add if kk in terms else add
        scale = max((p.max_abs_coeff() for p in terms.values()), default=0.0)
        cleaned = {}
        for k, p in terms.items():
            p = Polynomial(self.dim, {e: c for e, c in p.coeffs.items() if abs(c) > 1e-14 * scale})
            if not p.is_zero():
                cleaned[k] = p
        return ClosedFormFunction(self.dim, self.alpha0, cleaned)

    def is_zero(self) -> bool:
        return not self.terms

    # evaluation --------------------------------------------------------
    def __call__(self, points):
        pts = np.asarray(points, dtype=float)
        if pts.shape[-1] != self.dim:
            raise ValueError("point dimension mismatch")
        r = np.sqrt(np.sum(pts * pts, axis=-1))
        if np.any(r == 0):
            raise ValueError("K-finite functions are not evaluated at the origin")
        out = np.zeros(pts.shape[:-1], dtype=complex)
        for k, p in self.terms.items():
            out += ktilde(self.alpha0 + k, r, warn=False) * p(pts)
        return out

    def evaluate_polar(self, r, omega):
        """Values at r_a * omega_b as an array of shape (len(r), len(omega))."""
        r = np.asarray(r, dtype=float)
        omega = np.asarray(omega, dtype=float)
        pts = r[:, None, None] * omega[None, :, :]
        out = np.zeros((r.size, omega.shape[0]), dtype=complex)
        for k, p in self.terms.items():
            out += ktilde(self.alpha0 + k, r, warn=False)[:, None] * p(pts)
        return out


def kfinite_vector(sigma, a: int, p: Polynomial) -> ClosedFormFunction:
    """K~_{-sigma/2+a}(|x|) |x|^(2a) p(x) as a single term."""
    if a < 0:
        raise ValueError("a must be non-negative")
    poly = p
    for _ in range(int(a)):
        poly = poly * Polynomial.norm_squared(p.dim)
    return ClosedFormFunction(p.dim, -complex(sigma) / 2.0 + a, {0: poly})


def spherical_vector(n: int, sigma) -> ClosedFormFunction:
    """psi_sigma(x) = K~_{-sigma/2}(|x|) on R^n."""
    return kfinite_vector(sigma, 0, Polynomial.constant(n))


def euler_apply(u: ClosedFormFunction) -> ClosedFormFunction:
    """E u = sum_i x_i d_i u (before any order reduction)."""
    return u.euler()


def bessel_apply(n: int, sigma, j: int, u: ClosedFormFunction) -> ClosedFormFunction:
    """B_j^{n,sigma} u = x_j Delta u - (2E - sigma + n) d_j u in closed form (j is 1-based)."""
    if not 1 <= j <= n:
        raise ValueError(f"axis index j={j} outside 1..{n}")
    if u.dim != n:
        raise ValueError("function lives in the wrong dimension")
    if u.is_zero():
        return ClosedFormFunction(n, u.alpha0, {})
    i = j - 1
    du = u.partial(i)
    out = u.laplacian().times_x(i) - du.euler().scale(2.0) + du.scale(complex(sigma) - n)
    return out.simplified()


_D1 = {-2: 1.0, -1: -8.0, 1: 8.0, 2: -1.0}
_D2 = {-2: -1.0, -1: 16.0, 0: -30.0, 1: 16.0, 2: -1.0}


def bessel_apply_numeric(n: int, sigma, j: int, u, x, h_rel: float = 1e-4):
    """B_j^{n,sigma} u at x from 5-point central differences along each axis.

    Step h = h_rel * max(1, |x|); mixed second derivatives use the product
    of two 5-point first-derivative stencils.  ``u`` maps arrays of shape
    (..., n) to values; ``x`` has shape (n,) or (N, n).
    """
    if not 1 <= j <= n:
        raise ValueError(f"axis index j={j} outside 1..{n}")
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    x = np.atleast_2d(x)
    if x.shape[1] != n:
        raise ValueError("point dimension mismatch")
    h = h_rel * np.maximum(1.0, np.linalg.norm(x, axis=1))
    if not h_rel > 0 or np.any(h[:, None] <= 8 * np.finfo(float).eps * np.abs(x)):
        raise ValueError("finite-difference step underflows")
    i = j - 1
    offsets = [np.zeros(n)]
    index = {(): 0}

    def slot(key, vec):
        if key not in index:
            index[key] = len(offsets)
            offsets.append(vec)
        return index[key]

    for ax in range(n):
        for s in (-2, -1, 1, 2):
            v = np.zeros(n)
            v[ax] = s
            slot(((ax, s),), v)
    for ax in range(n):
        if ax == i:
            continue
        for s in (-2, -1, 1, 2):
            for t in (-2, -1, 1, 2):
                v = np.zeros(n)
                v[ax], v[i] = s, t
                slot(((ax, s), (i, t)), v)
    off = np.array(offsets)
    pts = x[:, None, :] + h[:, None, None] * off[None, :, :]
    vals = np.asarray(u(pts.reshape(-1, n)), dtype=complex).reshape(x.shape[0], -1)

    def axis_val(ax, s):
        return vals[:, 0] if s == 0 else vals[:, index[((ax, s),)]]

    d1 = {ax: sum(c * axis_val(ax, s) for s, c in _D1.items()) / (12 * h) for ax in range(n)}
    d2 = {ax: sum(c * axis_val(ax, s) for s, c in _D2.items()) / (12 * h * h) for ax in range(n)}
    lap = sum(d2.values())
    mixed = {}
    for ax in range(n):
        if ax == i:
            mixed[ax] = d2[i]
            continue
        acc = 0
        for s, cs in _D1.items():
            for t, ct in _D1.items():
                acc = acc + cs * ct * vals[:, index[((ax, s), (i, t))]]
        mixed[ax] = acc / (144 * h * h)
    e_dj = sum(x[:, ax] * mixed[ax] for ax in range(n))
    out = x[:, i] * lap - 2.0 * e_dj + (complex(sigma) - n) * d1[i]
    return out[0] if single else out


def in_spectral_set(params: SpectralParams, tau, tol: float = 1e-12) -> bool:
    """tau on the continuous line i R_+ or at an atom sigma - mu - 4j."""
    tau = complex(tau)
    if abs(tau.real) <= tol and tau.imag > 0:
        return True
    return any(abs(tau - (params.sigma - params.mu - 4 * j)) <= tol for j in atom_indices(params))


def _evaluate(fn, pts):
    return np.asarray(fn(pts), dtype=complex)


def lift_psi(sigma, tau, k: int, n: int, m: int, f, phi, F_handle=None):
    """Psi(f (x) phi)(x, y) = |x|^((sigma-tau-mu)/2) F(|y|^2/|x|^2) f(x) phi(y), mu = 2k+n-m.

    ``f`` acts on points of R^m, ``phi`` on R^(n-m) (a Polynomial or a
    callable) and ``F_handle`` on t >= 0; the default is F(., tau) for the
    parameters (sigma, mu).
    """
    if not 0 < m < n:
        raise ValueError("need 0 < m < n")
    mu = 2 * k + n - m
    sigma, tau = complex(sigma), complex(tau)
    alpha = (sigma - tau - mu) / 2.0
    if F_handle is None:
        params = SpectralParams(sigma, mu)
        F_handle = lambda t: eigenfunction_F(params, tau, t)  # noqa: E731

    def psi(points):
        pts = np.asarray(points, dtype=float)
        x, y = pts[..., :m], pts[..., m:]
        rx2 = np.sum(x * x, axis=-1)
        if np.any(rx2 == 0):
            raise ValueError("Psi is not defined on x = 0")
        t = np.sum(y * y, axis=-1) / rx2
        return (np.exp(alpha / 2.0 * np.log(rx2)) * np.asarray(F_handle(t), dtype=complex)
                * _evaluate(f, x) * _evaluate(phi, y))

    return psi


def sample_annulus(n: int, count: int = 100, seed: int = 42, r_min: float = 0.3,
                   r_max: float = 3.0, m: int | None = None, min_x_fraction: float = 0.2):
    """Random points with r_min <= |z| <= r_max.  When ``m`` is given, points
    whose first m coordinates are shorter than min_x_fraction * |z| are
    redrawn, which keeps finite differences away from the set x = 0."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        v = rng.standard_normal(n)
        v /= np.linalg.norm(v)
        z = v * rng.uniform(r_min, r_max)
        if m is not None and np.linalg.norm(z[:m]) < min_x_fraction * np.linalg.norm(z):
            continue
        out.append(z)
    return np.array(out)


def intertwining_residual(sigma, tau, k: int, n: int, m: int, f: ClosedFormFunction, phi,
                          j: int, sample_points, F_handle=None, h_rel: float = 1e-4,
                          check_spectrum: bool = True) -> float:
    """max |B_j^{n,sigma} Psi(f (x) phi) - Psi(B_j^{m,tau} f (x) phi)| / (1 + |Psi(f (x) phi)|).

    The n-dimensional side uses finite differences, the m-dimensional side
    the closed form.
    """
    if not 1 <= j <= m:
        raise ValueError(f"axis index j={j} outside 1..{m}")
    mu = 2 * k + n - m
    if check_spectrum and F_handle is None and not in_spectral_set(SpectralParams(sigma, mu), tau):
        raise ValueError(f"tau={tau} is not in the spectral set for mu={mu}")
    pts = np.asarray(sample_points, dtype=float)
    lifted = lift_psi(sigma, tau, k, n, m, f, phi, F_handle)
    lhs = bessel_apply_numeric(n, sigma, j, lifted, pts, h_rel)
    rhs = lift_psi(sigma, tau, k, n, m, bessel_apply(m, tau, j, f), phi, F_handle)(pts)
    base = lifted(pts)
    return float(np.max(np.abs(lhs - rhs) / (1.0 + np.abs(base))))


def a_equivariance_defect(sigma, tau, k: int, n: int, m: int, f, phi, t, points) -> float:
    """Relative defect of e^((sigma-n)t) Psi(f(x)phi)(e^(-2t)z) = Psi(e^((tau-m)t) f(e^(-2t).) (x) phi)(z)."""
    sigma, tau = complex(sigma), complex(tau)
    pts = np.asarray(points, dtype=float)
    s = math.exp(-2.0 * t)
    lhs = np.exp((sigma - n) * t) * lift_psi(sigma, tau, k, n, m, f, phi)(s * pts)
    f_scaled = lambda x: np.exp((tau - m) * t) * _evaluate(f, s * np.asarray(x))  # noqa: E731
    rhs = lift_psi(sigma, tau, k, n, m, f_scaled, phi)(pts)
    return float(np.max(np.abs(lhs - rhs)) / max(np.max(np.abs(rhs)), 1e-300))


def commutator_defect(n: int, sigma, u: ClosedFormFunction, j: int, l: int, points) -> float:
    """|B_j B_l u - B_l B_j u| relative to |B_j B_l u| at the points (closed forms)."""
    a = bessel_apply(n, sigma, j, bessel_apply(n, sigma, l, u))
    b = bessel_apply(n, sigma, l, bessel_apply(n, sigma, j, u))
    va, vb = a(points), b(points)
    return float(np.max(np.abs(va - vb)) / max(np.max(np.abs(va)), 1e-300))


@dataclass(frozen=True)
class PolarRule:
    """Tensor rule r_a * omega_b with weights for r^(n-1) dr d omega."""

    r: np.ndarray
    wr: np.ndarray
    omega: np.ndarray
    womega: np.ndarray


def polar_rule(n: int, r_max: float = 40.0, order: int = 16, sphere_order: int = 16,
               first: float = 1e-12) -> PolarRule:
    """Radial Gauss-Legendre, geometrically graded towards 0 and uniform
    (width 1) on [1, r_max], times a product rule on the sphere."""
    edges = graded_edges(1.0, r_max, ratio=2.0, uniform_width=1.0, first=first)
    r, w = composite_gauss(edges, order)
    om, wo = sphere_rule(n, sphere_order)
    return PolarRule(r, w * r ** (n - 1), om, wo)


def weighted_inner(n: int, sigma, u: ClosedFormFunction, v: ClosedFormFunction,
                   rule: PolarRule | None = None) -> complex:
    """<u, v> in L^2(R^n, |x|^(-Re sigma) dx), linear in u."""
    rule = rule or polar_rule(n)
    uv = u.evaluate_polar(rule.r, rule.omega) * np.conj(v.evaluate_polar(rule.r, rule.omega))
    radial = rule.wr * rule.r ** (-complex(sigma).real)
    return complex(np.sum(radial[:, None] * rule.womega[None, :] * uv))


def symmetry_check(n: int, sigma, f: ClosedFormFunction, g: ClosedFormFunction, j: int,
                   rule: PolarRule | None = None, eps: float = 1e-300) -> float:
    """|<B_j f, g> - <f, B_j g>| / (|<B_j f, g>| + |<f, B_j g>| + eps)."""
    rule = rule or polar_rule(n)
    left = weighted_inner(n, sigma, bessel_apply(n, sigma, j, f), g, rule)
    right = weighted_inner(n, sigma, f, bessel_apply(n, sigma, j, g), rule)
    return float(abs(left - right) / (abs(left) + abs(right) + eps))

"""Branching to the subgroup: spherical-harmonic isotypic projection in y,
the fibrewise hypergeometric transform in t = |y|^2/|x|^2, the Plancherel
identity for the restriction, Fourier-Hankel utilities, the two Bessel
integral formulas and the kernel of the intertwiner in the non-compact
picture.

Conventions.  Points of R^n are split as (x, y) with x in R^m and y in
R^(n-m), d = n - m.  Harmonics are stored as solid harmonics whose
restriction to the sphere S^(d-1) is orthonormal (for d = 1 the sphere is
{+1, -1} with counting measure).  The k-th profile of F is
f_k(x, r) = r^(-k) int_{S^(d-1)} F(x, r w) phi(w) dw, so that
F(x, y) = sum f_k(x, |y|) phi(y).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.special as _sp

from .hypertransform import GridConfig, TransformKernel, build_grid
from .polynomial import Polynomial
from .quadrature import composite_gauss, graded_edges, oscillatory_integral, sphere_rule
from .sl_operator import SpectralParams, eigenfunction_F
from .specfun import besselk, gamma, hyp2f1, jbessel, ktilde
from .spectrum import continuous_density, discrete_points, discrete_weight, nu_grid


# ---------------------------------------------------------------------------
# Spherical harmonics
# ---------------------------------------------------------------------------

@dataclass
class HarmonicBasis:
    dimension: int
    degree: int
    basis: list
    gram: np.ndarray

    def sphere_values(self, omega):
        """Values of the basis on unit vectors, shape (len(omega), len(basis))."""
        omega = np.asarray(omega, dtype=float)
        if not self.basis:
            return np.zeros((omega.shape[0], 0))
        return np.stack([np.real(p(omega)) for p in self.basis], axis=1)


def _sphere_gram(d, polys, order):
    om, w = sphere_rule(d, order)
    vals = np.stack([p(om) for p in polys], axis=1) if polys else np.zeros((om.shape[0], 0))
    return (vals.T * w) @ np.conj(vals)


def _harmonic_projection(p: Polynomial, k: int) -> Polynomial:
    """Harmonic part of a homogeneous p of degree k:
    sum_j c_j |x|^(2j) Delta^j p with c_{j+1} = -c_j / (2 (j+1) (2k + d - 4 - 2j))."""
    d = p.dim
    out = Polynomial.zero(d)
    lap = p
    r2j = Polynomial.constant(d)
    c = 1.0
    j = 0
    while not lap.is_zero():
        out = out + (r2j * lap) * c
        c = -c / (2.0 * (j + 1) * (2 * k + d - 4 - 2 * j))
        lap = lap.laplacian()
        r2j = r2j * Polynomial.norm_squared(d)
        j += 1
    return out


def harmonic_basis(d: int, k: int) -> HarmonicBasis:
    """Real solid harmonics of degree k on R^d, orthonormal on S^(d-1) (d <= 3)."""
    if d not in (1, 2, 3):
        raise ValueError("harmonic bases are provided for d = 1, 2, 3")
    if k < 0:
        raise ValueError("degree must be non-negative")
    if d == 1:
        basis = [] if k >= 2 else [Polynomial(1, {(k,): 1.0 / math.sqrt(2.0)})]
    elif d == 2:
        if k == 0:
            basis = [Polynomial.constant(2, 1.0 / math.sqrt(2.0 * math.pi))]
        else:
            z = Polynomial(2, {(0, 0): 1.0})
            iy = Polynomial(2, {(1, 0): 1.0, (0, 1): 1j})
            for _ in range(k):
                z = z * iy
            re = Polynomial(2, {e: c.real for e, c in z.coeffs.items()})
            im = Polynomial(2, {e: c.imag for e, c in z.coeffs.items()})
            basis = [re * (1.0 / math.sqrt(math.pi)), im * (1.0 / math.sqrt(math.pi))]
    else:
        monos = [(a, k - a - c, c) for c in (0, 1) for a in range(k - c, -1, -1) if k - a - c >= 0]
        raw = [_harmonic_projection(Polynomial(3, {e: 1.0}), k) for e in monos]
        basis = []
        om, w = sphere_rule(3, 2 * k + 2)
        for p in raw:
            q = p
            for b in basis:
                coef = np.sum(w * q(om) * np.conj(b(om)))
                q = q - b * coef
            nrm = math.sqrt(float(np.real(np.sum(w * np.abs(q(om)) ** 2))))
            basis.append((q * (1.0 / nrm)).pruned(1e-15))
    gram = _sphere_gram(d, basis, 2 * k + 2) if d > 1 else (
        np.array([[sum(abs(p(np.array([[s]])))[0] ** 2 for s in (1.0, -1.0))] for p in basis])
        if basis else np.zeros((0, 0)))
    return HarmonicBasis(d, k, basis, np.real_if_close(gram))


def _fiber_rule(d: int, k_max: int):
    """Quadrature on S^(d-1) exact for the products of harmonics up to k_max
    with smooth fibres; returns (omega, weights)."""
    if d == 1:
        return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    return sphere_rule(d, 2 * k_max + 16)


# ---------------------------------------------------------------------------
# Isotypic projection
# ---------------------------------------------------------------------------

@dataclass
class IsotypicComponent:
    k: int
    index: int
    profile: Callable  # (x of shape (..., m), r of shape (...)) -> values


def isotypic_project(n: int, m: int, F: Callable, k: int, basis: HarmonicBasis | None = None,
                     sphere_order: int | None = None) -> list:
    """Profiles f_{k,l}(x, r) = r^(-k) int F(x, r w) phi_{k,l}(w) dw for every basis element."""
    d = n - m
    basis = basis or harmonic_basis(d, k)
    if d == 1:
        om, wo = _fiber_rule(1, k)
    else:
        om, wo = sphere_rule(d, sphere_order or (2 * k + 16))
    phis = basis.sphere_values(om)

    def make(ell):
        def profile(x, r):
            x = np.asarray(x, dtype=float)
            r = np.asarray(r, dtype=float)
            if np.any(r <= 0):
                raise ValueError("profiles are evaluated at r > 0")
            shape = np.broadcast_shapes(x.shape[:-1], r.shape)
            xb = np.broadcast_to(x, shape + (m,))
            rb = np.broadcast_to(r, shape)
            pts = np.concatenate([np.broadcast_to(xb[..., None, :], shape + (om.shape[0], m)),
                                  rb[..., None, None] * om], axis=-1)
            vals = np.asarray(F(pts), dtype=complex)
            return (vals @ (wo * phis[:, ell])) * rb ** (-float(k))
        return profile

    return [IsotypicComponent(k, ell, make(ell)) for ell in range(len(basis.basis))]


def fiber_parseval(n: int, m: int, F: Callable, x, r, k_max: int = 8):
    """Partial sphere norms sum_{k<=K} sum_l |r^k f_{k,l}(x, r)|^2 for K = 0..k_max
    against int_{S^(d-1)} |F(x, r w)|^2 dw at one fibre point.

    Returns (partial sums, sphere norm); the defects are non-increasing.
    """
    d = n - m
    x = np.asarray(x, dtype=float).reshape(m)
    om, wo = _fiber_rule(d, k_max)
    pts = np.concatenate([np.broadcast_to(x, (om.shape[0], m)), r * om], axis=1)
    full = float(np.sum(wo * np.abs(np.asarray(F(pts))) ** 2))
    partial, acc = [], 0.0
    for k in range(k_max + 1):
        for comp in isotypic_project(n, m, F, k):
            acc += abs(complex(comp.profile(x, np.asarray(r)))) ** 2 * r ** (2 * k)
        partial.append(acc)
    return partial, full


# ---------------------------------------------------------------------------
# The intertwiner Psi(sigma, k) and the Plancherel check
# ---------------------------------------------------------------------------

def psi_sigma_k(sigma, k: int, n: int, m: int, spectral: Callable, phi, nu=None):
    """Psi(sigma,k)(f (x) phi)(x, y) = phi(y) int |x|^((sigma-tau-mu)/2) F(|y|^2/|x|^2, tau) f(x, tau) dm(tau).

    ``spectral(x, taus)`` returns f at points x (shape (N, m)) for the 1-d
    array of spectral values ``taus`` as an array of shape (len(taus), N).
    The continuous part uses the nodes of ``nu`` (default nu_grid()).
    """
    mu = 2 * k + n - m
    params = SpectralParams(sigma, mu)
    nu = nu or nu_grid()
    atoms = discrete_points(params)
    taus = np.concatenate([np.array([p.tau for p in atoms], dtype=complex), 1j * nu.nodes])
    wts = np.concatenate([np.array([discrete_weight(params, p.j) for p in atoms]),
                          nu.weights * continuous_density(params, nu.nodes)])

    def evaluate(points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        x, y = pts[:, :m], pts[:, m:]
        rx2 = np.sum(x * x, axis=1)
        if np.any(rx2 == 0):
            raise ValueError("Psi(sigma,k) is not defined on x = 0")
        t = np.sum(y * y, axis=1) / rx2
        fx = np.asarray(spectral(x, taus), dtype=complex)
        Fm = eigenfunction_F(params, taus[:, None], t[None, :])
        powx = np.exp((params.sigma - taus[:, None] - mu) / 4.0 * np.log(rx2)[None, :])
        phiv = np.asarray(phi(y) if callable(phi) else phi, dtype=complex)
        return phiv * np.sum(wts[:, None] * powx * Fm * fx, axis=0)

    return evaluate


def fiber_spectral_data(n: int, m: int, sigma, F: Callable, k: int, ell: int = 0,
                        grid: GridConfig | None = None):
    """The spectral data f^(x, tau) = |x|^(-(sigma-tau-mu)/2) int F(t, tau) f_{k,l}(x, t) w(t) dt
    of the (k, l) profile, as a callable usable by ``psi_sigma_k``."""
    mu = 2 * k + n - m
    params = SpectralParams(sigma, mu)
    tg = build_grid(params, grid)
    comp = isotypic_project(n, m, F, k)[ell]
    wt = tg.weighted(params, complex_weight=True)

    def spectral(x, taus):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        rx = np.sqrt(np.sum(x * x, axis=1))
        r = rx[:, None] * np.sqrt(tg.nodes)[None, :]
        prof = comp.profile(x[:, None, :], np.maximum(r, 1e-300))
        Fm = eigenfunction_F(params, np.asarray(taus, dtype=complex)[:, None], tg.nodes[None, :])
        g = Fm @ (prof * wt[None, :]).T
        return np.exp(-(params.sigma - np.asarray(taus)[:, None] - mu) / 2.0 * np.log(rx)[None, :]) * g

    return spectral


@dataclass(frozen=True)
class BranchingConfig:
    """Quadrature for the branching check: t-grid and nu-grid of the
    transform, radial and spherical rules on R^m for x, and the polar rule
    for the direct norm on R^n."""

    grid: GridConfig = field(default_factory=GridConfig)
    nu_max: float = 80.0
    nu_panels: int = 32
    nu_order: int = 16
    x_first: float = 1e-12
    x_ratio: float = 2.0
    x_width: float = 1.0
    x_max: float = 10.0
    x_order: int = 12
    x_sphere: int = 24
    direct_sphere: int = 24

    def refined(self, factor: int = 2) -> "BranchingConfig":
        return BranchingConfig(self.grid.refined(factor), self.nu_max, self.nu_panels * factor,
                               self.nu_order, self.x_first, self.x_ratio, self.x_width / factor,
                               self.x_max, self.x_order, self.x_sphere, self.direct_sphere)


def atom_census(n: int, m: int, sigma, k_max: int) -> dict:
    """Atoms of T(sigma, 2k+n-m) per k, next to the index sets
    Z cap [0, (|Re sigma| - n + m - 2k)/4) predicted for the restriction."""
    out = {}
    s = complex(sigma)
    for k in range(k_max + 1):
        mu = 2 * k + n - m
        params = SpectralParams(s, mu)
        found = [(p.j, p.tau.real) for p in discrete_points(params)]
        bound = (abs(s.real) - n + m - 2 * k) / 4.0 if s.imag == 0 else 0.0
        predicted = [j for j in range(int(math.ceil(max(bound, 0.0)))) if j < bound]
        expected_tau = [abs(s.real) - n + m - 2 * k - 4 * j for j in predicted]
        out[k] = {"atoms": found, "predicted": list(zip(predicted, expected_tau)),
                  "match": [j for j, _ in found] == predicted
                  and all(abs(a - b) < 1e-12 for (_, a), b in zip(found, expected_tau))}
    return out


def direct_norm(n: int, sigma, F: Callable, r_max: float = 12.0, sphere_order: int = 24,
                order: int = 16) -> float:
    """int_{R^n} |F|^2 |z|^(-Re sigma) dz by polar quadrature.

    On [0, 1] the radial factor r^(n-1-Re sigma) is the weight of a
    Gauss-Jacobi rule, so an integrable singularity at the origin costs no
    accuracy; [1, r_max] uses unit Gauss-Legendre panels.  When
    r^(n-1-Re sigma) is not integrable on its own (Re sigma >= n), F must
    vanish at the origin; the Jacobi weight is then raised by the smallest
    even power that makes it integrable and |F|^2 is divided by it.
    """
    beta = n - 1 - complex(sigma).real
    shift = 0.0 if beta > -1 else 2.0 * (math.floor((-1.0 - beta) / 2.0) + 1.0)
    u, wu = _sp.roots_jacobi(order, 0.0, beta + shift)
    r_head = 0.5 * (u + 1.0)
    w_head = wu * 0.5 ** (beta + shift + 1.0) * r_head ** (-shift)
    r_tail, w_tail = composite_gauss(np.linspace(1.0, r_max, int(math.ceil(r_max - 1.0)) + 1),
                                     order)
    r = np.concatenate([r_head, r_tail])
    wr = np.concatenate([w_head, w_tail * r_tail ** beta])
    om, wo = sphere_rule(n, sphere_order)
    vals = np.abs(np.asarray(F(r[:, None, None] * om[None, :, :]))) ** 2
    return float(np.sum(wr[:, None] * wo[None, :] * vals))


def _x_rule(m: int, cfg: BranchingConfig):
    edges = graded_edges(1.0, cfg.x_max, ratio=cfg.x_ratio, uniform_width=cfg.x_width,
                         first=cfg.x_first)
    r, w = composite_gauss(edges, cfg.x_order)
    om, wo = sphere_rule(m, cfg.x_sphere)
    pts = (r[:, None, None] * om[None, :, :]).reshape(-1, m)
    wts = (w[:, None] * r[:, None] ** (m - 1) * wo[None, :]).ravel()
    rad = np.repeat(r, om.shape[0])
    return pts, wts, rad


def full_plancherel_check(n: int, m: int, sigma, F: Callable, k_max: int = 6,
                          config: BranchingConfig | None = None, chunk: int = 64) -> dict:
    """Compare ||F||^2 in L^2(R^n, |z|^(-Re sigma) dz) with the sum over k and
    the harmonic basis of int_{R^m} (1/2)|x|^(mu-Re sigma) ||g_x||^2_spec dx,
    where g_x is the hypergeometric transform of t -> f_{k,l}(x, |x| sqrt(t)).

    Returns a report with the direct norm, the spectral norm, the relative
    defect, per-(k, l) norms and the atom content per k.
    """
    cfg = config or BranchingConfig()
    d = n - m
    s = complex(sigma)
    direct = direct_norm(n, s, F, sphere_order=cfg.direct_sphere)
    tgrid = build_grid(None, cfg.grid)
    nu = nu_grid(cfg.nu_max, cfg.nu_panels, cfg.nu_order)
    xs, xw, xr = _x_rule(m, cfg)
    om, wo = _fiber_rule(d, k_max)
    sqrt_t = np.sqrt(tgrid.nodes)

    ks = [k for k in range(k_max + 1) if harmonic_basis(d, k).basis]
    bases = {k: harmonic_basis(d, k) for k in ks}
    # projection matrix: columns r^(-k)-free sphere integrals against every phi_{k,l}
    cols, labels = [], []
    for k in ks:
        vals = bases[k].sphere_values(om)
        for ell in range(vals.shape[1]):
            cols.append(wo * vals[:, ell])
            labels.append((k, ell))
    proj = np.stack(cols, axis=1)

    # profiles on (x node, t node) for every label, without the r^(-k) factor
    prof = np.zeros((len(labels), xs.shape[0], tgrid.nodes.size), dtype=complex)
    for start in range(0, xs.shape[0], chunk):
        xc = xs[start:start + chunk]
        r = np.sqrt(np.sum(xc * xc, axis=1))[:, None] * sqrt_t[None, :]
        pts = np.concatenate([np.broadcast_to(xc[:, None, None, :], r.shape + (om.shape[0], m)),
                              r[:, :, None, None] * om[None, None, :, :]], axis=-1)
        vals = np.asarray(F(pts), dtype=complex)
        prof[:, start:start + chunk, :] = np.moveaxis(vals @ proj, -1, 0)

    spec_total, t_total = 0.0, 0.0
    per_label, atom_content = {}, {}
    for k in ks:
        mu = 2 * k + d
        params = SpectralParams(s, mu)
        kern = TransformKernel(params, tgrid, nu)
        norm_w = tgrid.weighted(params)
        dens = continuous_density(params, nu.nodes)
        xfac = 0.5 * xw * np.exp((mu - s.real) * np.log(xr))
        atom_content[k] = {}
        for idx, (kk, ell) in enumerate(labels):
            if kk != k:
                continue
            rk = np.exp(-k * np.log(xr[:, None] * sqrt_t[None, :]))
            f = prof[idx] * rk
            fw = f * kern.weights[None, :]
            g = kern.continuous @ fw.T
            spec_x = np.sum((nu.weights * dens)[:, None] * np.abs(g) ** 2, axis=0)
            for j, row in kern.atoms.items():
                gj = fw @ row
                contrib = discrete_weight(params, j) * np.abs(gj) ** 2
                spec_x = spec_x + contrib
                atom_content[k][j] = atom_content[k].get(j, 0.0) + float(np.sum(xfac * contrib))
            t_x = np.sum(norm_w[None, :] * np.abs(f) ** 2, axis=1)
            spec_total += float(np.sum(xfac * spec_x))
            t_total += float(np.sum(xfac * t_x))
            per_label[(k, ell)] = {"spectral": float(np.sum(xfac * spec_x)),
                                   "fiber": float(np.sum(xfac * t_x))}
    defect = abs(spec_total - direct) / direct
    census = atom_census(n, m, s, k_max)
    return {"direct_norm": direct, "spectral_norm": spec_total, "fiber_norm": t_total,
            "rel_defect": defect, "components": per_label,
            "atom_content": atom_content,
            "atoms": {k: [(j, tau) for j, tau in v["atoms"]] for k, v in census.items()},
            "census_match": all(v["match"] for v in census.values())}


# ---------------------------------------------------------------------------
# Fourier and Hankel transforms
# ---------------------------------------------------------------------------

def hankel_transform(nu: float, f: Callable, r, s_max: float = 12.0, panels: int = 48,
                     order: int = 16, warn_tol: float = 1e-12):
    """(H_nu f)(r) = r^(-nu) int_0^inf J_nu(r s) f(s) s^(nu+1) ds by composite
    Gauss-Legendre on [0, s_max] (at r = 0 the limit of r^(-nu) J_nu(r s))."""
    if nu < -0.5:
        raise ValueError("Hankel transforms need nu >= -1/2")
    r = np.atleast_1d(np.asarray(r, dtype=float))
    edges = np.concatenate([[0.0], np.geomspace(1e-8, 1.0, 17)[:-1], np.linspace(1.0, s_max, panels + 1)])
    s, w = composite_gauss(edges, order)
    fs = np.asarray(f(s), dtype=complex)
    tail = abs(f(np.array([s_max]))[0]) * s_max ** (nu + 1)
    if tail > warn_tol:
        warnings.warn(f"Hankel integrand not negligible at s_max ({tail:.1e})", RuntimeWarning,
                      stacklevel=2)
    out = np.empty(r.shape, dtype=complex)
    for i, ri in enumerate(r):
        if ri == 0:
            kern = (s / 2.0) ** nu / math.gamma(nu + 1.0)
        else:
            kern = ri ** (-nu) * jbessel(nu, ri * s)
        out[i] = np.sum(w * kern * fs * s ** (nu + 1))
    return out


def fourier_direct(u: Callable, xi, n: int, half_width: float = 10.0, panels: int = 8,
                   order: int = 12):
    """(2 pi)^(-n/2) int e^(-i <xi, x>) u(x) dx on the cube [-L, L]^n (tensor Gauss rule)."""
    x1, w1 = composite_gauss(np.linspace(-half_width, half_width, panels + 1), order)
    grids = np.meshgrid(*([x1] * n), indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1)
    wts = np.ones(pts.shape[0])
    for g in np.meshgrid(*([w1] * n), indexing="ij"):
        wts = wts * g.ravel()
    uv = np.asarray(u(pts), dtype=complex) * wts
    xi = np.atleast_2d(np.asarray(xi, dtype=float))
    return np.array([np.sum(uv * np.exp(-1j * pts @ q)) for q in xi]) * (2 * math.pi) ** (-n / 2.0)


def factorization_check(n: int, k: int, profile: Callable, probes=None, ell: int = 0) -> float:
    """max |F(f (x) phi)(xi) - i^(-k) (H_{(n+2k-2)/2} f)(|xi|) phi(xi)| / max |rhs|."""
    phi = harmonic_basis(n, k).basis[ell]
    if probes is None:
        rng = np.random.default_rng(42)
        probes = rng.uniform(-2.0, 2.0, size=(6, n))
    probes = np.asarray(probes, dtype=float)
    u = lambda x: profile(np.sqrt(np.sum(x * x, axis=-1))) * phi(x)  # noqa: E731
    lhs = fourier_direct(u, probes, n)
    rad = np.sqrt(np.sum(probes ** 2, axis=1))
    rhs = (1j) ** (-k) * hankel_transform((n + 2 * k - 2) / 2.0, profile, rad) * phi(probes)
    return float(np.max(np.abs(lhs - rhs)) / np.max(np.abs(rhs)))


def spherical_vector_ft_check(sigma, n: int, probes=None, fit_at: float = 1.0) -> dict:
    """Fourier transform of psi_sigma(x) = K~_{-sigma/2}(|x|) against c (1+|xi|^2)^(-(sigma+n)/2).

    The transform is the Hankel transform of order (n-2)/2; c is fitted at
    |xi| = fit_at and the deviation is measured at 20 further radii.  The
    fitted c is also compared with 2^((n-2)/2) Gamma((n+sigma)/2).
    """
    s = complex(sigma)
    if not (0 < s.real < n and s.imag == 0):
        raise ValueError("need 0 < sigma < n for an absolutely convergent transform")
    if probes is None:
        probes = np.linspace(0.1, 4.0, 20)
    nu = (n - 2) / 2.0
    prof = lambda r: ktilde(-s / 2.0, r, warn=False)  # noqa: E731
    radii = np.concatenate([[fit_at], np.asarray(probes, dtype=float)])
    vals = hankel_transform(nu, prof, radii, s_max=45.0, panels=90)
    ratio = vals * (1.0 + radii ** 2) ** ((s + n) / 2.0)
    c_fit = ratio[0]
    rel = float(np.max(np.abs(ratio[1:] - c_fit)) / abs(c_fit))
    c_closed = 2.0 ** ((n - 2) / 2.0) * gamma((n + s) / 2.0)
    return {"rel_err": rel, "c_fit": complex(c_fit), "c_closed": complex(c_closed),
            "c_rel_err": float(abs(c_fit - c_closed) / abs(c_closed))}


# ---------------------------------------------------------------------------
# Bessel integral formulas
# ---------------------------------------------------------------------------

def hankel_2f1_closed(alpha, beta, nu, lam, y):
    """2^(nu-a-b+2) Gamma(nu+1) / (lam^(a+b) Gamma(a) Gamma(b)) y^(a+b-nu-2) K_{a-b}(y/lam)."""
    ab = alpha + beta
    return (2.0 ** (nu - ab + 2) * gamma(nu + 1) / (lam ** ab * gamma(alpha) * gamma(beta))
            * y ** (ab - nu - 2) * besselk(alpha - beta, y / lam))


def jk_moment_closed(mu, nu, a, b):
    """2^(mu+nu) a^mu b^nu Gamma(mu+nu+1) / (a^2+b^2)^(mu+nu+1)."""
    return 2.0 ** (mu + nu) * a ** mu * b ** nu * gamma(mu + nu + 1) / (a * a + b * b) ** (mu + nu + 1)


def _check_hankel_2f1(alpha, beta, nu, lam, y):
    lo = 2 * min(complex(alpha).real, complex(beta).real) - 1.5
    if not (y > 0 and lam > 0):
        raise ValueError("need y > 0 and lambda > 0")
    if not -1 < nu < lo:
        raise ValueError(f"nu={nu} outside (-1, 2 min(Re alpha, Re beta) - 3/2) = (-1, {lo})")


def hankel_2f1_numeric(alpha, beta, nu, lam, y, n_cycles: int = 60):
    """int_0^inf 2F1(alpha, beta; nu+1; -lam^2 x^2) J_nu(x y) x^(nu+1) dx, with the
    oscillatory tail summed over half periods and accelerated."""
    _check_hankel_2f1(alpha, beta, nu, lam, y)

    def func(x):
        x = np.asarray(x, dtype=float)
        return hyp2f1(alpha, beta, nu + 1.0, -(lam * x) ** 2) * _sp_jv(nu, x * y) * x ** (nu + 1)

    start = max(12.0 / y, 12.0 / lam)
    head = np.concatenate([[0.0], np.geomspace(1e-8, 1.0, 17)[:-1],
                           np.linspace(1.0, start, max(2, int(math.ceil(4 * start))) + 1)])
    if start <= 1.0:
        head = np.concatenate([[0.0], np.geomspace(1e-8, start, 17)])
    val, err = oscillatory_integral(func, start, math.pi / y, head_edges=head, order=24,
                                    n_cycles=n_cycles)
    return val, err


def _sp_jv(nu, x):
    return _sp.jv(nu, x)


def jk_moment_numeric(mu, nu, a, b, order: int = 24):
    """int_0^inf x^(mu+nu+1) J_mu(a x) K_nu(b x) dx by graded Gauss-Legendre."""
    if not (mu > abs(nu) - 1 and b > 0 and a > 0):
        raise ValueError("need Re mu > |Re nu| - 1, a > 0 and b > |Im a|")
    s_max = 60.0 / b
    edges = np.concatenate([[0.0], np.geomspace(1e-10, 1.0, 31)[:-1],
                            np.linspace(1.0, s_max, int(math.ceil(2 * s_max)) + 1)])
    x, w = composite_gauss(edges, order)
    return complex(np.sum(w * x ** (mu + nu + 1) * _sp_jv(mu, a * x) * besselk(nu, b * x)))


def integral_formula_draws(which: str, count: int = 5, seed: int = 42) -> list:
    """Parameter draws inside the validity strips (absolute convergence for the Hankel transform of 2F1)."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        if which == "hankel_2f1":
            alpha, beta = rng.uniform(1.0, 2.5, 2)
            hi = 2 * min(alpha, beta) - 1.5
            nu = rng.uniform(-0.4, min(hi - 0.25, 1.5))
            out.append({"alpha": float(alpha), "beta": float(beta), "nu": float(nu),
                        "lam": float(rng.uniform(0.6, 1.6)), "y": float(rng.uniform(0.6, 1.6))})
        elif which == "jk_moment":
            mu = rng.uniform(0.0, 2.5)
            nu = rng.uniform(-(mu + 1) + 0.3, mu + 1 - 0.3)
            out.append({"mu": float(mu), "nu": float(nu), "a": float(rng.uniform(0.5, 2.5)),
                        "b": float(rng.uniform(0.5, 2.5))})
        else:
            raise ValueError("which must be 'hankel_2f1' or 'jk_moment'")
    return out


def integral_formula_check(which: str, params: dict) -> float:
    """Relative error between the numeric left side and the closed right side."""
    if which == "hankel_2f1":
        num, _ = hankel_2f1_numeric(params["alpha"], params["beta"], params["nu"], params["lam"],
                             params["y"])
        ref = hankel_2f1_closed(params["alpha"], params["beta"], params["nu"], params["lam"], params["y"])
    elif which == "jk_moment":
        num = jk_moment_numeric(params["mu"], params["nu"], params["a"], params["b"])
        ref = jk_moment_closed(params["mu"], params["nu"], params["a"], params["b"])
    else:
        raise ValueError("which must be 'hankel_2f1' or 'jk_moment'")
    return float(abs(num - ref) / abs(ref))


# ---------------------------------------------------------------------------
# The intertwiner in the non-compact picture
# ---------------------------------------------------------------------------

def _abc(sigma, tau, mu):
    return (mu - sigma + tau) / 4.0, (mu - sigma - tau) / 4.0


def kernel_A(sigma, tau, k: int, n: int, m: int, x, y):
    """|x|^((sigma-tau-mu)/2) 2F1((mu-sigma+tau)/4, (mu-sigma-tau)/4; mu/2; -|y|^2/|x|^2)."""
    mu = 2 * k + n - m
    a, b = _abc(complex(sigma), complex(tau), mu)
    x = np.atleast_2d(np.asarray(x, dtype=float))
    y = np.atleast_2d(np.asarray(y, dtype=float))
    rx2 = np.sum(x * x, axis=1)
    t = np.sum(y * y, axis=1) / rx2
    return np.exp((complex(sigma) - complex(tau) - mu) / 4.0 * np.log(rx2)) * hyp2f1(a, b, mu / 2.0, -t)


def kernel_constant(sigma, tau, k: int, n: int, m: int) -> complex:
    """2^((sigma-tau+m)/2) i^(-k) Gamma(mu/2) Gamma((m-tau)/2) / (Gamma((mu-sigma+tau)/4) Gamma((mu-sigma-tau)/4))."""
    mu = 2 * k + n - m
    s, t = complex(sigma), complex(tau)
    a, b = _abc(s, t, mu)
    return complex(2.0 ** ((s - t + m) / 2.0) * (1j) ** (-k) * gamma(mu / 2.0)
                   * gamma((m - t) / 2.0) / (gamma(a) * gamma(b)))


def kernel_I(sigma, tau, k: int, n: int, m: int, xi, eta):
    """const |eta|^(-(sigma+tau+mu)/2) (|xi|^2+|eta|^2)^((tau-m)/2), the Fourier image of psi(., eta)."""
    mu = 2 * k + n - m
    s, t = complex(sigma), complex(tau)
    xi = np.atleast_2d(np.asarray(xi, dtype=float))
    eta = np.atleast_2d(np.asarray(eta, dtype=float))
    e2 = np.sum(eta * eta, axis=1)
    q = np.sum(xi * xi, axis=1) + e2
    return (kernel_constant(s, t, k, n, m) * np.exp(-(s + t + mu) / 4.0 * np.log(e2))
            * np.exp((t - m) / 2.0 * np.log(q)))


def _fiber_fourier_numeric(sigma, tau, k, n, m, x_abs, eta):
    """(2 pi)^(-d/2) int_{R^d} e^(-i y.eta) F(|y|^2/|x|^2) phi(y) dy for phi = the first
    harmonic of degree k, by a radial oscillatory integral of angular trapezoid sums."""
    d = n - m
    mu = 2 * k + d
    a, b = _abc(complex(sigma), complex(tau), mu)
    phi = harmonic_basis(d, k).basis[0]
    eta = np.asarray(eta, dtype=float).reshape(d)
    e = float(np.linalg.norm(eta))
    if d == 1:
        om, wo = np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    elif d == 2:
        om, wo = sphere_rule(2, 768)
    else:
        raise ValueError("the fibre Fourier integral is implemented for d <= 2")
    phase = om @ eta
    phis = phi(om)

    def func(r):
        r = np.asarray(r, dtype=float)
        ang = (np.exp(-1j * r[:, None] * phase[None, :]) * phis[None, :]) @ wo
        return hyp2f1(a, b, mu / 2.0, -(r / x_abs) ** 2) * r ** (d - 1 + k) * ang

    start = 12.0 / e
    head = np.linspace(0.0, start, max(4, int(math.ceil(3 * start))) + 1)
    val, err = oscillatory_integral(func, start, math.pi / e, head_edges=head, order=24,
                                    n_cycles=80)
    return val * (2 * math.pi) ** (-d / 2.0), err


def _psi_closed(sigma, tau, k, n, m, x_abs, eta):
    """The K-Bessel closed form of the fibre Fourier integral (sub-check i right side)."""
    d = n - m
    mu = 2 * k + d
    s, t = complex(sigma), complex(tau)
    a, b = _abc(s, t, mu)
    phi = harmonic_basis(d, k).basis[0]
    eta = np.asarray(eta, dtype=float).reshape(d)
    e = float(np.linalg.norm(eta))
    c1 = 2.0 ** ((s + 2) / 2.0) * gamma(mu / 2.0) / (gamma(a) * gamma(b))
    return ((1j) ** (-k) * complex(phi(eta[None, :])[0]) * e ** (-(mu - 2) / 2.0) * c1
            * x_abs ** ((mu - s) / 2.0) * e ** (-(s + 2) / 2.0) * besselk(t / 2.0, x_abs * e))


def _psi_fourier_numeric(sigma, tau, k, n, m, xi_abs, eta_abs, order: int = 24):
    """(2 pi)^(-1/2) int_R e^(-i x xi) psi(x, eta) dx for m = 1, with
    psi = C1 i^(-k) |eta|^(-(sigma+mu)/2) |x|^(-tau/2) K_{tau/2}(|x||eta|)."""
    if m != 1:
        raise ValueError("sub-check (ii) is implemented for m = 1")
    d = n - m
    mu = 2 * k + d
    s, t = complex(sigma), complex(tau)
    a, b = _abc(s, t, mu)
    c1 = 2.0 ** ((s + 2) / 2.0) * gamma(mu / 2.0) / (gamma(a) * gamma(b))
    x_end = 60.0 / eta_abs
    edges = np.concatenate([[0.0], np.geomspace(1e-10, 1.0, 31)[:-1],
                            np.linspace(1.0, x_end, int(math.ceil(2 * x_end)) + 1)])
    x, w = composite_gauss(edges, order)
    # |x|^(-tau/2) K_{tau/2}(|x| e) = (e/2)^(tau/2) K~_{tau/2}(|x| e)
    prof = (eta_abs / 2.0) ** (t / 2.0) * ktilde(t / 2.0, x * eta_abs, warn=False)
    val = 2.0 * np.sum(w * np.cos(x * xi_abs) * prof) / math.sqrt(2 * math.pi)
    return (1j) ** (-k) * c1 * eta_abs ** (-(s + mu) / 2.0) * val


def noncompact_kernel_check(sigma, tau, k: int, n: int, m: int, x_abs: float = 0.8,
                            eta_probe=None, xi_probes=None, fit_xi: float = 0.7,
                            fit_eta: float = 1.1) -> dict:
    """Sub-check (i): the fibre Fourier integral of the lifted eigenfunction
    against its K-Bessel closed form.  Sub-check (ii): the Fourier transform
    of psi(., eta) over R^m against const |eta|^(-(sigma+tau+mu)/2)
    (|xi|^2+|eta|^2)^((tau-m)/2), with const fitted at one probe and compared
    with its gamma closed form.  Also the log-log slope in |eta|.
    """
    d = n - m
    mu = 2 * k + d
    s, t = complex(sigma), complex(tau)
    a, b = _abc(s, t, mu)
    nu_b = (mu - 2) / 2.0
    lo = 2 * min(a.real, b.real) - 1.5
    if not -1 < nu_b < lo:
        raise ValueError("parameters outside the window where the fibre integral converges "
                         f"absolutely (need {nu_b} < {lo})")
    if eta_probe is None:
        eta_probe = np.array([1.1]) if d == 1 else np.array([0.7, 0.4])[:d]
    num_i, err_i = _fiber_fourier_numeric(s, t, k, n, m, x_abs, eta_probe)
    ref_i = _psi_closed(s, t, k, n, m, x_abs, eta_probe)
    rel_i = float(abs(num_i - ref_i) / abs(ref_i))

    const_closed = kernel_constant(s, t, k, n, m)
    shape = lambda xi, e: (1j) ** (-k) * e ** (-(s + t + mu) / 2.0) * (xi * xi + e * e) ** ((t - m) / 2.0)  # noqa: E731
    c_fit = _psi_fourier_numeric(s, t, k, n, m, fit_xi, fit_eta) / shape(fit_xi, fit_eta)
    const_closed_no_phase = const_closed / (1j) ** (-k)
    if xi_probes is None:
        xi_probes = [(0.3, 0.9), (1.2, 0.6), (2.0, 1.5), (0.0, 2.2)]
    devs = []
    for xi, e in xi_probes:
        num = _psi_fourier_numeric(s, t, k, n, m, xi, e)
        ref = c_fit * shape(xi, e)
        devs.append(abs(num - ref) / abs(ref))
    rel_ii = float(max(devs))
    # slope of the prefactor in |eta| at xi = 0 (after removing (|eta|^2)^((tau-m)/2))
    e1, e2 = 0.8, 1.6
    v1 = _psi_fourier_numeric(s, t, k, n, m, 0.0, e1) / (e1 * e1) ** ((t - m) / 2.0)
    v2 = _psi_fourier_numeric(s, t, k, n, m, 0.0, e2) / (e2 * e2) ** ((t - m) / 2.0)
    slope = float(np.real(np.log(v2 / v1)) / math.log(e2 / e1))
    return {"subcheck_i": rel_i, "subcheck_i_value": complex(num_i), "subcheck_i_ref": complex(ref_i),
            "subcheck_ii": rel_ii, "const_fit": complex(c_fit),
            "const_closed": complex(const_closed_no_phase),
            "const_rel_err": float(abs(c_fit - const_closed_no_phase) / abs(const_closed_no_phase)),
            "slope": slope, "slope_expected": float(-(s + t + mu).real / 2.0),
            "slope_err": abs(slope + (s + t + mu).real / 2.0)}

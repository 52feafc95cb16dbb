"""Forward and inverse hypergeometric transform and its Plancherel identity.

For f on (0, inf) the transform is

    g(tau) = int_0^inf F(t, tau) f(t) t^((mu-2)/2) (1+t)^(-sigma/2) dt,

evaluated on the atoms and on tau = i nu, and the inverse is
f(t) = int F(t, tau) g(tau) dm(tau).  The Hilbert norm on the t side uses
the weight t^((mu-2)/2) (1+t)^(-Re sigma/2); for imaginary sigma the
transform weight is complex while the norm weight is not.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .quadrature import composite_gauss
from .sl_operator import SpectralParams, eigenfunction_F
from .specfun import PrecisionPolicy
from .spectrum import (NuGrid, atom_indices, continuous_density, discrete_points,
                       discrete_weight, nu_grid)

#: Policy for kernel matrices.  Quadrature errors are far above 1e-9, so
#: ill-conditioned entries below that level are not worth an mpmath call.
KERNEL_POLICY = PrecisionPolicy(target_rel_err=1e-9)


class TailWarning(UserWarning):
    """The integrand is not negligible at the end of the grid."""


@dataclass(frozen=True)
class GridConfig:
    """Quadrature configuration for integrals over t in (0, inf).

    mapping "sinh": t = sinh(x/2)^2 with ``panels`` uniform Gauss-Legendre
    panels on x in [0, x_max].  In this variable the weighted integrands are
    smooth at x = 0 for every mu and decay exponentially at infinity.
    mapping "rational": t = s/(1-s) with geometrically graded panels near
    s = t_min and uniform panels up to s = 1.
    """

    panels: int = 80
    order: int = 8
    mapping: str = "sinh"
    x_max: float = 40.0
    t_min: float = 1e-8

    def __post_init__(self):
        if self.mapping not in ("sinh", "rational"):
            raise ValueError(f"unknown mapping {self.mapping!r}")
        if self.panels < 1 or self.order < 1 or not self.x_max > 0 or not self.t_min > 0:
            raise ValueError("invalid grid configuration")

    def refined(self, factor: int = 2) -> "GridConfig":
        return GridConfig(self.panels * factor, self.order, self.mapping, self.x_max, self.t_min)


@dataclass(frozen=True)
class QuadratureGrid:
    """Nodes t_i (increasing) with weights w_i for plain dt."""

    nodes: np.ndarray
    base_weights: np.ndarray
    t_min: float
    t_max: float
    config: GridConfig = field(default_factory=GridConfig)

    def weight_function(self, params: SpectralParams, complex_weight: bool = False):
        """t^((mu-2)/2) (1+t)^(-sigma/2) (complex) or with -Re sigma/2."""
        t = self.nodes
        s = params.sigma if complex_weight else params.sigma.real
        return np.exp((params.mu - 2) / 2.0 * np.log(t) - s / 2.0 * np.log1p(t))

    def weighted(self, params: SpectralParams, complex_weight: bool = False):
        return self.base_weights * self.weight_function(params, complex_weight)


def build_grid(params: SpectralParams | None = None, config: GridConfig | None = None) -> QuadratureGrid:
    """Quadrature grid on (0, inf); ``params`` is accepted for symmetry with
    the other builders but the nodes do not depend on it."""
    config = config or GridConfig()
    if config.mapping == "sinh":
        x, wx = composite_gauss(np.linspace(0.0, config.x_max, config.panels + 1), config.order)
        sh, ch = np.sinh(x / 2), np.cosh(x / 2)
        t = sh * sh
        w = sh * ch * wx
        return QuadratureGrid(t, w, 0.0, float(t[-1]), config)
    s_lo = config.t_min / (1 + config.t_min)
    geo = [s_lo]
    while geo[-1] < 0.05:
        geo.append(geo[-1] * 2.0)
    geo[-1] = 0.05
    edges = np.concatenate([[0.0], geo, np.linspace(0.05, 1.0, config.panels + 1)[1:]])
    s, ws = composite_gauss(edges, config.order)
    t = s / (1 - s)
    w = ws / (1 - s) ** 2
    return QuadratureGrid(t, w, 0.0, float(t[-1]), config)


@dataclass
class SpectralFunction:
    """Values of g on the atoms (by index j) and on the nodes of a nu-grid."""

    params: SpectralParams
    nu: NuGrid
    values: np.ndarray
    discrete: dict

    @property
    def continuous(self):
        return list(zip(self.nu.nodes.tolist(), self.values.tolist()))

    def __post_init__(self):
        if sorted(self.discrete) != atom_indices(self.params):
            raise ValueError("discrete indices must match the atoms of the parameters")
        self.values = np.asarray(self.values, dtype=complex)

    def scaled(self, c) -> "SpectralFunction":
        return SpectralFunction(self.params, self.nu, c * self.values,
                                {j: c * v for j, v in self.discrete.items()})

    @classmethod
    def zero(cls, params: SpectralParams, nu: NuGrid | None = None) -> "SpectralFunction":
        nu = nu or nu_grid()
        return cls(params, nu, np.zeros(nu.nodes.shape, dtype=complex),
                   {j: 0j for j in atom_indices(params)})


class TransformKernel:
    """Eigenfunction samples F(t_i, tau) on a grid, reusable across inputs."""

    def __init__(self, params: SpectralParams, grid: QuadratureGrid, nu: NuGrid,
                 policy: PrecisionPolicy = KERNEL_POLICY, chunk: int = 128):
        self.params, self.grid, self.nu = params, grid, nu
        t = grid.nodes
        self.atoms = {p.j: np.real_if_close(eigenfunction_F(params, p.tau, t, policy))
                      for p in discrete_points(params)}
        rows = []
        for start in range(0, nu.nodes.size, chunk):
            tau = 1j * nu.nodes[start:start + chunk, None]
            rows.append(eigenfunction_F(params, tau, t[None, :], policy))
        self.continuous = np.concatenate(rows, axis=0)
        if params.is_real:
            self.continuous = self.continuous.real.copy()
        self.weights = grid.weighted(params, complex_weight=True)


def forward(params: SpectralParams, f, grid: QuadratureGrid | None = None,
            nu: NuGrid | None = None, kernel: TransformKernel | None = None) -> SpectralFunction:
    """g(tau) = int F(t, tau) f(t) t^((mu-2)/2) (1+t)^(-sigma/2) dt on atoms and nu-nodes."""
    if kernel is None:
        grid = grid or build_grid(params)
        nu = nu or nu_grid()
        kernel = TransformKernel(params, grid, nu)
    grid, nu = kernel.grid, kernel.nu
    fv = np.asarray(f(grid.nodes), dtype=complex)
    if fv.shape != grid.nodes.shape:
        fv = np.broadcast_to(fv, grid.nodes.shape)
    tail = abs(fv[-1] * grid.weight_function(params)[-1])
    if tail > 1e-10:
        warnings.warn(f"integrand not negligible at t_max (|f w| = {tail:.2e})", TailWarning,
                      stacklevel=2)
    fw = fv * kernel.weights
    discrete = {j: complex(np.sum(row * fw)) for j, row in kernel.atoms.items()}
    values = kernel.continuous @ fw
    return SpectralFunction(params, nu, values, discrete)


def inverse(params: SpectralParams, g: SpectralFunction, t_points,
            policy: PrecisionPolicy = KERNEL_POLICY):
    """f(t) = sum_j w_j F(t, tau_j) g_j + int F(t, i nu) g(i nu) density(nu) d nu."""
    t = np.atleast_1d(np.asarray(t_points, dtype=float))
    out = np.zeros(t.shape, dtype=complex)
    for p in discrete_points(params):
        out += discrete_weight(params, p.j) * eigenfunction_F(params, p.tau, t, policy) * g.discrete[p.j]
    dens = continuous_density(params, g.nu.nodes)
    coef = g.nu.weights * dens * g.values
    for start in range(0, g.nu.nodes.size, 128):
        tau = 1j * g.nu.nodes[start:start + 128, None]
        out += eigenfunction_F(params, tau, t[None, :], policy).T @ coef[start:start + 128]
    return out


def plancherel_norm(params: SpectralParams, g: SpectralFunction) -> float:
    """sum_j w_j |g_j|^2 + int |g(i nu)|^2 density(nu) d nu."""
    total = 0.0
    for j, v in g.discrete.items():
        total += discrete_weight(params, j) * abs(v) ** 2
    dens = continuous_density(params, g.nu.nodes)
    return float(total + np.sum(g.nu.weights * dens * np.abs(g.values) ** 2))


def weighted_norm(params: SpectralParams, f, grid: QuadratureGrid) -> float:
    """int |f|^2 t^((mu-2)/2) (1+t)^(-Re sigma/2) dt on the grid."""
    fv = np.asarray(f(grid.nodes), dtype=complex)
    return float(np.sum(grid.weighted(params) * np.abs(fv) ** 2))


def atom_contributions(params: SpectralParams, g: SpectralFunction) -> dict:
    return {j: discrete_weight(params, j) * abs(v) ** 2 for j, v in g.discrete.items()}


#: Named test functions used by the verification suites and the CLI.
TEST_FUNCTIONS = {
    "exp": lambda t: np.exp(-t),
    "texp2": lambda t: t * np.exp(-2 * t),
    "rational3": lambda t: (1 + t) ** -3.0,
    "expcos": lambda t: np.exp(-t) * np.cos(t),
    "one": lambda t: np.ones_like(np.asarray(t, dtype=float)),
    "zero": lambda t: np.zeros_like(np.asarray(t, dtype=float)),
}


@dataclass(frozen=True)
class UnitarityConfig:
    grid: GridConfig = field(default_factory=GridConfig)
    nu_max: float = 80.0
    nu_panels: int = 32
    nu_order: int = 16
    tol: float = 1e-3

    def refined(self, factor: int = 2) -> "UnitarityConfig":
        """Both the t-panels and the nu-panels multiplied by ``factor``."""
        return UnitarityConfig(self.grid.refined(factor), self.nu_max, self.nu_panels * factor,
                               self.nu_order, self.tol)


def verify_unitarity(params: SpectralParams, f, config: UnitarityConfig | None = None) -> dict:
    """Compare the weighted norm of f with the spectral norm of its transform."""
    config = config or UnitarityConfig()
    grid = build_grid(params, config.grid)
    nu = nu_grid(config.nu_max, config.nu_panels, config.nu_order)
    g = forward(params, f, kernel=TransformKernel(params, grid, nu))
    norm_in = weighted_norm(params, f, grid)
    norm_spec = plancherel_norm(params, g)
    rel = abs(norm_in - norm_spec) / norm_in if norm_in else abs(norm_spec)
    return {"norm_in": norm_in, "norm_spec": norm_spec, "rel_err": rel,
            "pass": bool(rel <= config.tol),
            "atoms": {int(j): float(v) for j, v in atom_contributions(params, g).items()},
            "grid_meta": {"mapping": config.grid.mapping, "panels": config.grid.panels,
                          "order": config.grid.order, "x_max": config.grid.x_max,
                          "nu_max": config.nu_max, "nu_panels": config.nu_panels,
                          "nu_order": config.nu_order, "nodes": int(grid.nodes.size)}}


def probe_points(count: int = 40, x_max: float = 12.0):
    """Probe abscissae t = sinh(x/2)^2 at Gauss-Legendre nodes x in [0, x_max]
    and the matching weights for dt (used for weighted round-trip norms)."""
    x, wx = composite_gauss(np.array([0.0, x_max]), count)
    sh, ch = np.sinh(x / 2), np.cosh(x / 2)
    return sh * sh, sh * ch * wx


def roundtrip_defect(params: SpectralParams, f, g: SpectralFunction, count: int = 40,
                     x_max: float = 12.0) -> float:
    """Relative weighted L2 defect of inverse(g) against f at probe points."""
    t, w = probe_points(count, x_max)
    wt = w * np.exp((params.mu - 2) / 2.0 * np.log(t) - params.sigma.real / 2.0 * np.log1p(t))
    fv = np.asarray(f(t), dtype=complex)
    rec = inverse(params, g, t)
    num = np.sum(wt * np.abs(rec - fv) ** 2)
    den = np.sum(wt * np.abs(fv) ** 2)
    return float(math.sqrt(num / den))

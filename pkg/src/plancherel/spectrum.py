"""The spectral set T(sigma, mu) and the Plancherel measure dm_{sigma,mu}.

The measure has an absolutely continuous part on tau = i nu, nu > 0, with
density

    (1/8pi) |Gamma((mu-sigma+i nu)/4) Gamma((sigma+mu+i nu)/4)
             / (Gamma(i nu/2) Gamma(mu/2))|^2   d nu,

and, for real sigma > mu, atoms at tau_j = sigma - mu - 4j for the integers
0 <= j < (sigma-mu)/4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .quadrature import composite_gauss
from .sl_operator import SpectralParams, eta1, eta2, wronskian
from .specfun import gamma, gamma_safe, poch, rgamma


@dataclass(frozen=True)
class SpectrumPoint:
    """A point of T(sigma, mu): continuous (tau = i nu) or an atom (index j)."""

    kind: str
    tau: complex
    nu: float | None = None
    j: int | None = None

    @classmethod
    def continuous(cls, nu: float) -> "SpectrumPoint":
        if not nu > 0:
            raise ValueError("continuous points need nu > 0")
        return cls("continuous", 1j * float(nu), nu=float(nu))

    @classmethod
    def discrete(cls, params: SpectralParams, j: int) -> "SpectrumPoint":
        if not params.is_real or not 0 <= j < (params.sigma.real - params.mu) / 4:
            raise ValueError(f"j={j} is not an atom index for {params}")
        return cls("discrete", complex(params.sigma.real - params.mu - 4 * j), j=int(j))


def atom_indices(params: SpectralParams) -> list[int]:
    """Integers j with 0 <= j < (sigma - mu)/4 (empty for imaginary sigma)."""
    if not params.is_real:
        return []
    bound = (params.sigma.real - params.mu) / 4.0
    return [j for j in range(int(math.ceil(max(bound, 0.0)))) if j < bound]


def discrete_points(params: SpectralParams) -> list[SpectrumPoint]:
    """Atoms ordered by decreasing tau."""
    return [SpectrumPoint.discrete(params, j) for j in atom_indices(params)]


def discrete_weight(params: SpectralParams, j: int) -> float:
    """Mass of the atom tau_j = sigma - mu - 4j.

    The defining ratio contains Gamma(-(sigma-mu)/2 + j) / Gamma(-(sigma-mu)/2 + 2j),
    which has paired poles when (sigma-mu)/2 is an integer; it equals
    1 / (-(sigma-mu)/2 + j)_j, so the weight is evaluated as
    (-1)^j Gamma(sigma/2-j) Gamma(j+mu/2)
        / (j! Gamma(mu/2)^2 Gamma((sigma-mu)/2-2j) (-(sigma-mu)/2+j)_j),
    in which no gamma factor sits at a pole inside the atom range.
    """
    if j not in atom_indices(params):
        raise ValueError(f"j={j} is outside the atom range for {params}")
    s, mu = params.sigma.real, params.mu
    d = (s - mu) / 2.0
    num = (-1) ** j * gamma(s / 2 - j) * gamma(j + mu / 2.0)
    den = math.factorial(j) * gamma(mu / 2.0) ** 2 * gamma(d - 2 * j) * poch(-d + j, j)
    return float(np.real(num / den))


def discrete_weight_unreduced(params: SpectralParams, j: int, shift: float = 0.0) -> float:
    """The weight from the six-gamma expression with sigma moved by ``shift``.

    With a small shift this evaluates the formula near, but not on, the
    paired poles; it is the cross-check of ``discrete_weight``.
    """
    s, mu = params.sigma.real + shift, params.mu
    d = (s - mu) / 2.0
    num = (-1) ** j * gamma_safe(s / 2 - j) * gamma_safe(-d + j) * gamma_safe(j + mu / 2.0)
    den = (math.factorial(j) * gamma_safe(mu / 2.0) ** 2 * gamma_safe(d - 2 * j)
           * gamma_safe(-d + 2 * j))
    return float(np.real(num / den))


def continuous_density(params: SpectralParams, nu):
    """Density of dm on tau = i nu with respect to d nu."""
    nu = np.asarray(nu, dtype=float)
    sigma, mu = params.sigma, params.mu
    ratio = (gamma_safe((-sigma + mu + 1j * nu) / 4.0) * gamma_safe((sigma + mu + 1j * nu) / 4.0)
             * rgamma(1j * nu / 2.0) * rgamma(mu / 2.0))
    out = np.abs(ratio) ** 2 / (8.0 * math.pi)
    return out[()] if out.ndim == 0 else out


def lambda_density(params: SpectralParams, lam):
    """The same measure in the coordinate lambda = nu^2/16 (density in d lambda)."""
    lam = np.asarray(lam, dtype=float)
    sigma, mu = params.sigma, params.mu
    isl = 1j * np.sqrt(lam)
    ratio = (gamma_safe(-(sigma - mu) / 4.0 + isl) * gamma_safe((sigma + mu) / 4.0 + isl)
             * rgamma(2 * isl) * rgamma(mu / 2.0))
    out = np.abs(ratio) ** 2 / (4.0 * math.pi * np.sqrt(lam))
    return out[()] if out.ndim == 0 else out


@dataclass(frozen=True)
class NuGrid:
    """Composite Gauss-Legendre nodes on [0, nu_max] for the continuous part."""

    nodes: np.ndarray
    weights: np.ndarray
    nu_max: float
    panels: int
    order: int


def nu_grid(nu_max: float = 80.0, panels: int = 32, order: int = 16) -> NuGrid:
    if not (nu_max > 0 and panels >= 1 and order >= 1):
        raise ValueError("invalid nu-grid configuration")
    x, w = composite_gauss(np.linspace(0.0, nu_max, panels + 1), order)
    return NuGrid(x, w, float(nu_max), int(panels), int(order))


@dataclass(frozen=True)
class PlancherelMeasure:
    params: SpectralParams
    atoms: list = field(default_factory=list)
    density: Callable | None = None

    @classmethod
    def of(cls, params: SpectralParams) -> "PlancherelMeasure":
        atoms = [(p.tau.real, discrete_weight(params, p.j)) for p in discrete_points(params)]
        return cls(params, atoms, lambda nu: continuous_density(params, nu))

    @property
    def points(self) -> list[SpectrumPoint]:
        return discrete_points(self.params)


def measure_integrate(measure: PlancherelMeasure, h: Callable, nu_max: float = 40.0,
                      panels: int = 64, order: int = 32):
    """Sum over atoms plus the continuous integral of h against dm.

    ``h`` is called with an array of complex tau values (atoms first, then
    the nodes i nu).  Returns (value, metadata) where the metadata records
    the density at nu_max as the truncation gauge.
    """
    grid = nu_grid(nu_max, panels, order)
    atom_tau = np.array([t for t, _ in measure.atoms], dtype=complex)
    atom_w = np.array([w for _, w in measure.atoms], dtype=float)
    total = 0.0 + 0.0j
    if atom_tau.size:
        total += np.sum(atom_w * np.asarray(h(atom_tau), dtype=complex))
    dens = measure.density(grid.nodes)
    vals = np.asarray(h(1j * grid.nodes), dtype=complex)
    panel_sums = (grid.weights * dens * vals).reshape(panels, order).sum(axis=1)
    for s in panel_sums:
        total += s
    meta = {"nu_max": nu_max, "panels": panels,
            "density_at_nu_max": float(measure.density(nu_max))}
    return total, meta


def residue_oracle(params: SpectralParams, j: int, offsets=(1e-3, 5e-4, 2.5e-4),
                   probe_x: float = 1.0):
    """Atom weight recomputed from the resolvent data.

    The weight equals lim (lambda - lambda_j) / W(lambda) divided by the
    connection constant C with eta1 = C eta2 at lambda_j.  The limit is taken
    by Richardson extrapolation along sqrt(lambda) = q_j (1 + eps) for the
    given relative offsets; moving along sqrt(lambda) keeps the path away
    from the branch point at lambda = 0.  C is measured as the ratio
    eta1/eta2 at ``probe_x``.  Returns (weight, info) where info holds the
    extrapolation levels and the spread used to judge convergence.
    """
    if not params.is_real:
        raise ValueError("atoms exist only for real sigma")
    if j not in atom_indices(params):
        raise ValueError(f"j={j} is outside the atom range")
    kappa = (params.sigma.real - params.mu) / 4.0 - j
    qj = 1j * kappa
    lam_j = -kappa ** 2

    def h(eps):
        q = qj * (1.0 + eps)
        lam = q * q
        return (lam - lam_j) / wronskian(params, lam)

    e0, e1, e2 = offsets
    if not (abs(e0 / e1 - 2) < 1e-12 and abs(e1 / e2 - 2) < 1e-12):
        raise ValueError("offsets must halve successively")
    h0, h1, h2 = h(e0), h(e1), h(e2)
    r1a = 2 * h1 - h0
    r1b = 2 * h2 - h1
    r2 = (4 * r1b - r1a) / 3.0
    spread = abs(r2 - r1b) / max(abs(r2), 1e-300)
    if spread > 1e-4:
        raise RuntimeError(f"residue extrapolation did not settle (spread {spread:.2e})")
    res = r2
    lam_c = complex(lam_j)
    conn = complex(eta1(params, lam_c, probe_x) / eta2(params, lam_c, probe_x))
    conn2 = complex(eta1(params, lam_c, 2 * probe_x) / eta2(params, lam_c, 2 * probe_x))
    weight = res / conn
    info = {"levels": [complex(h0), complex(h1), complex(h2), complex(r1a), complex(r1b),
                       complex(r2)],
            "spread": float(spread),
            "connection": conn,
            "connection_drift": abs(conn - conn2) / abs(conn)}
    return float(np.real(weight)), info

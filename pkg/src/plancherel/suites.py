"""Verification suites shared by the CLI and the acceptance tests.

Every suite returns a list of ``Row`` records.  A row names the identity
it checks, the computed value, the reference value, the relative error and
the tolerance it is judged against.  Aggregated checks (a maximum over
random draws or sample points) report the worst relative error as the value
and 0 as the reference.  Negative controls pass when the error is at least
the tolerance.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import branching as br
from .bessel_ops import (intertwining_residual, kfinite_vector, sample_annulus,
                         spherical_vector, symmetry_check)
from .hypertransform import (TEST_FUNCTIONS, GridConfig, TransformKernel, build_grid, forward,
                             plancherel_norm, roundtrip_defect, weighted_norm)
from .polynomial import Polynomial
from .sl_operator import (SpectralParams, apply_D, eigenfunction_F, eigenfunction_handle,
                          lambda_star, tau_to_lambda, wronskian, wronskian_numeric)
from .specfun import gamma, hyp2f1, hyp2f1_connection, ktilde
from .spectrum import (continuous_density, discrete_points, discrete_weight, lambda_density,
                       nu_grid, residue_oracle)

PROFILES = ("quick", "full")


@dataclass(frozen=True)
class Row:
    suite: str
    check: str
    value: float
    reference: float
    rel_err: float
    tol: float
    lower_bound: bool = False
    detail: str = ""

    @property
    def passed(self) -> bool:
        if not math.isfinite(self.rel_err):
            return False
        return self.rel_err >= self.tol if self.lower_bound else self.rel_err <= self.tol

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def as_dict(self) -> dict:
        out = asdict(self)
        out["status"] = self.status
        return out


@dataclass(frozen=True)
class SuiteOptions:
    """Selections and overrides shared by all suites.

    ``tol`` replaces every tolerance of an upper-bound check; ``sigma`` and
    ``mu`` (or ``n``, ``m``, ``k``) narrow a suite to one parameter tuple
    where that makes sense; ``panels`` and ``nu_max`` override the
    transform quadrature.
    """

    profile: str = "full"
    seed: int = 42
    sigma: complex | None = None
    mu: int | None = None
    n: int | None = None
    m: int | None = None
    k: int | None = None
    fn: str | None = None
    tol: float | None = None
    panels: int | None = None
    nu_max: float | None = None

    def __post_init__(self):
        if self.profile not in PROFILES:
            raise ValueError(f"profile must be one of {PROFILES}")
        if self.tol is not None and not self.tol > 0:
            raise ValueError("tolerance must be positive")
        if self.fn is not None and self.fn not in TEST_FUNCTIONS:
            raise ValueError(f"unknown test function {self.fn!r}")


def _row(suite, check, value, reference, rel_err, tol, opts: SuiteOptions, lower=False,
         detail=""):
    if opts.tol is not None and not lower:
        tol = opts.tol
    return Row(suite, check, _real(value), _real(reference), float(rel_err), float(tol), lower,
               detail)


def _real(v) -> float:
    v = complex(v)
    return float(v.real) if v.imag == 0 else float(abs(v))


def _rel(a, b) -> float:
    a, b = complex(a), complex(b)
    den = max(abs(a), abs(b))
    return abs(a - b) / den if den > 0 else 0.0


def _sigma_label(s) -> str:
    s = complex(s)
    if s.imag == 0:
        return f"{s.real:g}"
    return f"{s.imag:g}i"


def _pairs(opts: SuiteOptions, default):
    if opts.sigma is None and opts.mu is None:
        return default
    sigmas = [opts.sigma] if opts.sigma is not None else sorted({s for s, _ in default}, key=str)
    mus = [opts.mu] if opts.mu is not None else sorted({m for _, m in default})
    return [(s, m) for s in sigmas for m in mus]


# ---------------------------------------------------------------------------
# special functions
# ---------------------------------------------------------------------------

def suite_specfun(opts: SuiteOptions) -> list[Row]:
    rng = np.random.default_rng(opts.seed)
    rows = []

    worst = 0.0
    for _ in range(100):
        a = complex(rng.uniform(-2, 2), rng.uniform(-1, 1))
        b = complex(rng.uniform(-2, 2), rng.uniform(-1, 1))
        c = rng.uniform(0.5, 3.0)
        z = rng.uniform(-20.0, 0.0)
        lhs = hyp2f1(a, b, c, z)
        rhs = (1 - z) ** (c - a - b) * hyp2f1(c - a, c - b, c, z)
        worst = max(worst, _rel(lhs, rhs))
    rows.append(_row("specfun", "kummer_transformation", worst, 0.0, worst, 1e-9, opts,
                     detail="100 draws, z in [-20, 0]"))

    worst = 0.0
    for _ in range(100):
        alpha = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        x = rng.uniform(0.1, 10.0)
        terms = (x * x * ktilde(alpha + 1, x), 4 * alpha * ktilde(alpha, x),
                 4 * ktilde(alpha - 1, x))
        worst = max(worst, abs(terms[0] - terms[1] - terms[2]) / sum(abs(t) for t in terms))
    rows.append(_row("specfun", "ktilde_three_term_recurrence", worst, 0.0, worst, 1e-9, opts,
                     detail="100 draws, x in [0.1, 10]"))

    worst, count = 0.0, 0
    while count < 40:
        a = complex(rng.uniform(-2, 2), rng.uniform(-1, 1))
        b = complex(rng.uniform(-2, 2), rng.uniform(-1, 1))
        dab = a - b
        if abs(dab - round(dab.real)) < 1e-3:
            continue
        c = rng.uniform(0.5, 3.0)
        z = -rng.uniform(5.0, 50.0)
        worst = max(worst, _rel(hyp2f1(a, b, c, z), hyp2f1_connection(a, b, c, z)))
        count += 1
    rows.append(_row("specfun", "hyp2f1_connection_formula", worst, 0.0, worst, 1e-7, opts,
                     detail="40 draws, z in [-50, -5]"))

    ratio = gamma(2.5) / gamma(0.5)
    rows.append(_row("specfun", "gamma_ratio_2.5_0.5", ratio, 0.75, _rel(ratio, 0.75), 1e-12,
                     opts))
    return rows


# ---------------------------------------------------------------------------
# ODE, Wronskian, spectral measure, orthogonality
# ---------------------------------------------------------------------------

ODE_PAIRS = [(s, m) for s in (5, 3j, 6, 1.5) for m in (1, 2, 3, 5)]
ODE_NUS = (0.5, 1.3, 2.7, 5.0, 9.1)


def suite_ode(opts: SuiteOptions) -> list[Row]:
    """Relative residual of D F + lambda* F, scaled by the sum of the term sizes."""
    t = np.geomspace(1e-3, 1e3, 20)
    rows = []
    for s, mu in _pairs(opts, ODE_PAIRS):
        p = SpectralParams(s, mu)
        taus = [1j * v for v in ODE_NUS] + [q.tau for q in discrete_points(p)]
        worst = 0.0
        for tau in taus:
            u = eigenfunction_handle(p, tau)
            f, d1, d2 = u.derivatives(t)
            ls = lambda_star(p, tau)
            res = apply_D(p, u, t) + ls * f
            scale = (np.abs(t * (1 + t) * d2) + np.abs(((mu - p.sigma + 2) / 2 * t + mu / 2) * d1)
                     + np.abs(ls * f))
            worst = max(worst, float(np.max(np.abs(res) / np.maximum(scale, 1e-300))))
        rows.append(_row("ode", f"eigen_equation sigma={_sigma_label(s)} mu={mu}", worst, 0.0,
                         worst, 1e-8, opts, detail=f"{len(taus)} tau values, 20 t points"))
    return rows


WRONSKIAN_SIGMAS = (5, 6, 1.5, 3j, 0.5j)
WRONSKIAN_LAMBDAS = (0.3, 1.7, -0.2 + 0.5j, 2.0 + 1.0j, 0.05 - 0.4j)


def suite_wronskian(opts: SuiteOptions) -> list[Row]:
    mu = opts.mu or 1
    sigmas = [opts.sigma] if opts.sigma is not None else WRONSKIAN_SIGMAS
    rows = []
    for s in sigmas:
        p = SpectralParams(s, mu)
        worst = 0.0
        for lam in WRONSKIAN_LAMBDAS:
            w = wronskian(p, complex(lam))
            wn = wronskian_numeric(p, complex(lam), 1.0)
            worst = max(worst, _rel(w, wn))
        rows.append(_row("wronskian", f"wronskian_closed_form sigma={_sigma_label(s)} mu={mu}",
                         worst, 0.0, worst, 1e-6, opts,
                         detail=f"{len(WRONSKIAN_LAMBDAS)} lambda values at x=1"))
    w0 = abs(wronskian(SpectralParams(5, 1), -1.0 + 0j))
    rows.append(_row("wronskian", "wronskian_zero_at_atom sigma=5 mu=1 lambda=-1", w0, 0.0, w0,
                     1e-8, opts))
    return rows


MEASURE_CASES = ((5, 1, 0), (6, 1, 0), (6, 1, 1), (4.1, 4, 0))
COHERENCE_PAIRS = ((5, 1), (3j, 2), (6, 3), (1.5, 5))


def suite_measure(opts: SuiteOptions) -> list[Row]:
    rows = []
    for s, mu, j in MEASURE_CASES:
        p = SpectralParams(s, mu)
        w = discrete_weight(p, j)
        oracle, _ = residue_oracle(p, j)
        rows.append(_row("measure", f"atom_weight_vs_residue sigma={_sigma_label(s)} mu={mu} j={j}",
                         w, oracle, _rel(w, oracle), 1e-6, opts))
    w = discrete_weight(SpectralParams(5, 1), 0)
    rows.append(_row("measure", "atom_weight sigma=5 mu=1 j=0", w, 0.75, _rel(w, 0.75), 1e-10,
                     opts))
    nus = np.array([0.3, 1.0, 2.5, 7.0, 20.0])
    for s, mu in COHERENCE_PAIRS:
        p = SpectralParams(s, mu)
        tau_side = continuous_density(p, nus)
        lam_side = lambda_density(p, nus ** 2 / 16.0) * nus / 8.0
        worst = float(np.max(np.abs(tau_side - lam_side) / tau_side))
        rows.append(_row("measure", f"tau_lambda_coherence sigma={_sigma_label(s)} mu={mu}",
                         worst, 0.0, worst, 1e-10, opts))
        lam = tau_to_lambda(p, 1j * nus)
        worst = float(np.max(np.abs(4j * np.sqrt(lam) - 1j * nus) / nus))
        rows.append(_row("measure", f"tau_lambda_coordinates sigma={_sigma_label(s)} mu={mu}",
                         worst, 0.0, worst, 1e-10, opts))
    return rows


#: The pairing of an atom eigenfunction with the continuous kernel decays
#: only like a small power of t, so this suite integrates further out than
#: the transform default.
ORTHOGONALITY_GRID = GridConfig(panels=320, order=8, x_max=160.0)


def suite_orthogonality(opts: SuiteOptions) -> list[Row]:
    p = SpectralParams(opts.sigma if opts.sigma is not None else 6, opts.mu or 1)
    pts = discrete_points(p)
    if not pts:
        raise ValueError(f"no atoms for sigma={p.sigma}, mu={p.mu}")
    g = build_grid(p, ORTHOGONALITY_GRID)
    w = g.weighted(p)
    fs = {q.j: eigenfunction_F(p, q.tau, g.nodes) for q in pts}
    rows = []
    label = f"sigma={_sigma_label(p.sigma)} mu={p.mu}"
    for q in pts:
        for r in pts:
            val = complex(np.sum(w * fs[q.j] * fs[r.j]))
            ref = 1.0 / discrete_weight(p, q.j) if q.j == r.j else 0.0
            err = abs(val - ref) * discrete_weight(p, q.j)
            rows.append(_row("orthogonality", f"atom_pairing {label} j={q.j} j'={r.j}", val, ref,
                             err, 1e-6, opts))
    nus = np.array([0.5, 1.0, 2.0, 3.0, 5.0, 8.0])
    cont = eigenfunction_F(p, 1j * nus[:, None], g.nodes[None, :])
    for q in pts:
        # relative to the norm of the atom eigenfunction
        pairing = np.abs(cont @ (w * fs[q.j])) * math.sqrt(discrete_weight(p, q.j))
        worst = float(np.max(pairing))
        rows.append(_row("orthogonality", f"atom_continuum_pairing {label} j={q.j}", worst, 0.0,
                         worst, 1e-6, opts, detail="nu in {0.5, 1, 2, 3, 5, 8}"))
    return rows


# ---------------------------------------------------------------------------
# unitarity and inversion
# ---------------------------------------------------------------------------

UNITARITY_PAIRS = [(5, 1), (3j, 2), (6, 3), (1.5, 5)]
UNITARITY_FUNCTIONS = ("exp", "texp2", "rational3", "expcos")
NOISE_FLOOR = 1e-9


def _unitarity_level(p, fns, grid_cfg, nu_max, nu_panels):
    grid = build_grid(p, grid_cfg)
    nu = nu_grid(nu_max, nu_panels, 16)
    kern = TransformKernel(p, grid, nu)
    out = {}
    for name in fns:
        f = TEST_FUNCTIONS[name]
        g = forward(p, f, kernel=kern)
        norm_in = weighted_norm(p, f, grid)
        norm_spec = plancherel_norm(p, g)
        out[name] = (abs(norm_in - norm_spec) / norm_in, g, norm_in)
    return out


def suite_unitarity(opts: SuiteOptions) -> list[Row]:
    pairs = _pairs(opts, UNITARITY_PAIRS)
    fns = (opts.fn,) if opts.fn else UNITARITY_FUNCTIONS
    base_grid = GridConfig() if opts.panels is None else GridConfig(panels=opts.panels)
    nu_max = opts.nu_max if opts.nu_max is not None else 80.0
    doublings = 2 if opts.profile == "full" else 0
    rows = []
    for s, mu in pairs:
        p = SpectralParams(s, mu)
        label = f"sigma={_sigma_label(s)} mu={mu}"
        atoms = len(discrete_points(p))
        levels = [_unitarity_level(p, fns, base_grid, nu_max, 32)]
        for d in range(1, doublings + 1):
            levels.append(_unitarity_level(p, fns, base_grid.refined(2 ** d), nu_max, 32 * 2 ** d))
        for name in fns:
            err0, g0, norm_in = levels[0][name]
            rows.append(_row("unitarity", f"plancherel_norm {label} f={name}", plancherel_norm(p, g0),
                             norm_in, err0, 1e-3, opts, detail=f"atoms={atoms}"))
            if doublings:
                errs = [lv[name][0] for lv in levels]
                rows.append(_row("unitarity", f"plancherel_norm_refined {label} f={name}",
                                 errs[-1], 0.0, errs[-1], 1e-5, opts,
                                 detail="defects " + " ".join(f"{e:.2e}" for e in errs)))
                factors = [errs[i] / errs[i + 1] if errs[i + 1] > 0 else math.inf
                           for i in range(len(errs) - 1)]
                converged = all(fct >= 4 or errs[i + 1] <= NOISE_FLOOR
                                for i, fct in enumerate(factors))
                rows.append(Row("unitarity", f"refinement_convergence {label} f={name}",
                                min(factors), 4.0, 0.0 if converged else 1.0, 0.0, False,
                                "pass when each doubling gains 4x or reaches the noise floor 1e-9"))
            rt = roundtrip_defect(p, TEST_FUNCTIONS[name], g0)
            rows.append(_row("unitarity", f"roundtrip {label} f={name}", rt, 0.0, rt, 1e-3, opts))
    return rows


# ---------------------------------------------------------------------------
# Bessel operators
# ---------------------------------------------------------------------------

# (n, m, k, sigma, [tau values]); continuous and discrete tau for each tuple
BESSEL_CASES = [
    (2, 1, 0, 1.5, [1j, 3.2j, 0.5]),
    (2, 1, 0, 2j, [1j, 0.7j]),
    (3, 1, 1, 9.0, [1j, 5.0, 1.0]),
    (3, 1, 1, 2j, [1.5j]),
]


def _bessel_inputs(n, m, k, tau):
    f = spherical_vector(m, tau) + kfinite_vector(tau, 0, Polynomial.variable(m, 0))
    if k == 0:
        phi = Polynomial.constant(n - m)
    else:
        phi = Polynomial.variable(n - m, 0)
        for _ in range(k - 1):
            phi = phi * Polynomial.variable(n - m, 0)
    return f, phi


def suite_bessel(opts: SuiteOptions) -> list[Row]:
    rows = []
    for n, m, k, s, taus in BESSEL_CASES:
        if opts.n is not None and (n, m, k) != (opts.n, opts.m, opts.k):
            continue
        pts = sample_annulus(n, 100, seed=opts.seed, m=m)
        for tau in taus:
            f, phi = _bessel_inputs(n, m, k, tau)
            res = intertwining_residual(s, tau, k, n, m, f, phi, 1, pts)
            rows.append(_row("bessel", f"intertwining (n,m,k)=({n},{m},{k}) "
                             f"sigma={_sigma_label(s)} tau={_sigma_label(tau)}", res, 0.0, res,
                             1e-6, opts, detail="100 points"))
        # negative control: a perturbed profile must break the identity
        tau = taus[0]
        f, phi = _bessel_inputs(n, m, k, tau)
        params = SpectralParams(s, 2 * k + n - m)
        bad = lambda t, p=params, tt=tau: (eigenfunction_F(p, tt, t)  # noqa: E731
                                           * (1 + 0.5 * np.asarray(t) / (1 + np.asarray(t))))
        res = intertwining_residual(s, tau, k, n, m, f, phi, 1, pts, F_handle=bad)
        rows.append(_row("bessel", f"negative_control (n,m,k)=({n},{m},{k}) "
                         f"sigma={_sigma_label(s)}", res, 0.0, res, 1e-2, opts, lower=True,
                         detail="profile multiplied by 1 + t/(2(1+t))"))
    for n, s in ((2, 1.5), (2, 2j), (3, 1.5)):
        u = spherical_vector(n, s)
        for j in range(1, n + 1):
            # a partner odd in x_j, so neither pairing vanishes by parity
            v = kfinite_vector(s, 1, Polynomial.variable(n, j - 1))
            d = symmetry_check(n, s, u + v, v, j)
            rows.append(_row("bessel", f"formal_self_adjointness n={n} sigma={_sigma_label(s)} "
                             f"j={j}", d, 0.0, d, 1e-6, opts))
    return rows


# ---------------------------------------------------------------------------
# Fourier and Hankel transforms, integral formulas, kernels, branching
# ---------------------------------------------------------------------------

FOURIER_PROFILES = {
    "gauss": lambda r: np.exp(-np.asarray(r) ** 2 / 2),
    "r2gauss": lambda r: np.asarray(r) ** 2 * np.exp(-np.asarray(r) ** 2),
}


def suite_fourier(opts: SuiteOptions) -> list[Row]:
    rows = []
    for n in (2, 3):
        for k in range(3):
            for name, prof in FOURIER_PROFILES.items():
                e = br.factorization_check(n, k, prof)
                rows.append(_row("fourier", f"fourier_hankel_factorization n={n} k={k} "
                                 f"profile={name}", e, 0.0, e, 1e-6, opts))
    for n, s in ((2, 1.0), (3, 1.5)):
        r = br.spherical_vector_ft_check(s, n)
        rows.append(_row("fourier", f"spherical_vector_fourier n={n} sigma={_sigma_label(s)}",
                         r["rel_err"], 0.0, r["rel_err"], 1e-4, opts))
        rows.append(_row("fourier", f"spherical_vector_fourier_constant n={n} "
                         f"sigma={_sigma_label(s)}", r["c_fit"], r["c_closed"], r["c_rel_err"],
                         1e-4, opts))
    return rows


def suite_integrals(opts: SuiteOptions) -> list[Row]:
    rows = []
    for which in ("hankel_2f1", "jk_moment"):
        for i, params in enumerate(br.integral_formula_draws(which, 5, seed=opts.seed)):
            e = br.integral_formula_check(which, params)
            desc = " ".join(f"{k}={v:.4g}" for k, v in params.items())
            rows.append(_row("integrals", f"{which} draw={i}", e, 0.0, e, 1e-5, opts, detail=desc))
    return rows


#: (sigma, tau, k, n, m) inside the window where the fibre integral converges
KERNEL_TUPLES = [(-3.0, -1.2, 0, 2, 1), (-4.0, -1.5, 1, 3, 1)]


def suite_kernels(opts: SuiteOptions) -> list[Row]:
    rows = []
    for s, t, k, n, m in KERNEL_TUPLES:
        r = br.noncompact_kernel_check(s, t, k, n, m)
        label = f"(n,m,k)=({n},{m},{k}) sigma={s:g} tau={t:g}"
        rows.append(_row("kernels", f"fiber_fourier_integral {label}", r["subcheck_i_value"],
                         r["subcheck_i_ref"], r["subcheck_i"], 1e-4, opts))
        rows.append(_row("kernels", f"base_fourier_shape {label}", r["subcheck_ii"], 0.0,
                         r["subcheck_ii"], 1e-4, opts))
        rows.append(_row("kernels", f"kernel_constant {label}", r["const_fit"], r["const_closed"],
                         r["const_rel_err"], 1e-4, opts))
        rows.append(_row("kernels", f"eta_power {label}", r["slope"], r["slope_expected"],
                         r["slope_err"], 1e-4, opts))
    return rows


def _gauss(z):
    return np.exp(-np.sum(np.asarray(z) ** 2, axis=-1) / 2)


def _r2gauss(z):
    r2 = np.sum(np.asarray(z) ** 2, axis=-1)
    return r2 * np.exp(-r2 / 2)


def suite_branching(opts: SuiteOptions) -> list[Row]:
    rows = []
    k_max = 6
    cases = [(2, 1, 1.5, _gauss, "gauss"), (2, 1, 2j, _gauss, "gauss"),
             (3, 2, 5.0, _r2gauss, "r2gauss")]
    if opts.profile == "full":
        cases += [(3, 1, 1.5, _gauss, "gauss")]
    for n, m, s, F, name in cases:
        r = br.full_plancherel_check(n, m, s, F, k_max=k_max)
        label = f"(n,m)=({n},{m}) sigma={_sigma_label(s)} F={name}"
        rows.append(_row("branching", f"branching_plancherel {label}", r["spectral_norm"],
                         r["direct_norm"], r["rel_defect"], 1e-2, opts))
        atoms = {k: [j for j, _ in v] for k, v in r["atoms"].items() if v}
        expected = {(2, 1, 1.5): {0: [0]}, (2, 1, 2j): {}}.get((n, m, s))
        if expected is not None:
            ok = atoms == expected and all(
                abs(tau - 0.5) < 1e-12 for v in r["atoms"].values() for _, tau in v)
            rows.append(Row("branching", f"atom_census {label}", float(sum(map(len, atoms.values()))),
                            float(sum(map(len, expected.values()))), 0.0 if ok else 1.0, 0.0,
                            detail=f"atoms {atoms}"))
    for s in (4.0, 5.0):
        census = br.atom_census(3, 2, s, k_max)
        ok = all(v["match"] for v in census.values())
        found = {k: [j for j, _ in v["atoms"]] for k, v in census.items() if v["atoms"]}
        rows.append(Row("branching", f"atom_index_formula (n,m)=(3,2) sigma={s:g} k<={k_max}",
                        float(sum(map(len, found.values()))),
                        float(sum(len(v["predicted"]) for v in census.values())),
                        0.0 if ok else 1.0, 0.0, detail=f"atoms {found}"))
    return rows


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

SUITES = {
    "specfun": suite_specfun,
    "ode": suite_ode,
    "wronskian": suite_wronskian,
    "measure": suite_measure,
    "orthogonality": suite_orthogonality,
    "unitarity": suite_unitarity,
    "bessel": suite_bessel,
    "fourier": suite_fourier,
    "branching": suite_branching,
    "integrals": suite_integrals,
    "kernels": suite_kernels,
}

#: Acceptance criterion number of each suite.
CRITERIA = {name: i + 1 for i, name in enumerate(
    ["specfun", "ode", "wronskian", "measure", "orthogonality", "unitarity", "bessel",
     "fourier", "branching", "integrals", "kernels"])}


@dataclass
class SuiteResult:
    name: str
    rows: list[Row] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return bool(self.rows) and all(r.passed for r in self.rows)


def run_suite(name: str, opts: SuiteOptions | None = None) -> SuiteResult:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}")
    opts = opts or SuiteOptions()
    start = time.perf_counter()
    rows = SUITES[name](opts)
    return SuiteResult(name, rows, time.perf_counter() - start)


def run_suites(names, opts: SuiteOptions | None = None) -> list[SuiteResult]:
    """Run suites one after another in the given order.

    Suite-specific narrowing (sigma, mu, n, m, k, fn) applies only when a
    single suite is selected; ``all`` runs every suite at its defaults with
    the profile, seed and tolerance override kept.
    """
    opts = opts or SuiteOptions()
    names = list(names)
    if len(names) > 1:
        opts = replace(opts, sigma=None, mu=None, n=None, m=None, k=None, fn=None)
    return [run_suite(n, opts) for n in names]

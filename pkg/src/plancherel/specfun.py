"""Special functions with complex parameters.

Everything here is vectorised over numpy broadcasting.  The hypergeometric
function is only needed on the negative real axis ``z <= 0``, which is the
domain the transform and the eigenfunctions live on.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy import special as _sp


class ParameterPoleError(ValueError):
    """Raised when a parameter sits on a pole of the requested function."""


class NonConvergenceError(RuntimeError):
    """Raised when a series does not converge within the term budget."""


class AccuracyWarning(UserWarning):
    """Emitted when an evaluation is requested outside its accurate range."""


@dataclass(frozen=True)
class PrecisionPolicy:
    """Accuracy knobs shared by the special-function evaluators.

    ``target_rel_err`` is the error level above which an ill-conditioned
    hypergeometric value is recomputed with mpmath (when ``fallback`` is on).
    """

    target_rel_err: float = 1e-12
    series_max_terms: int = 2000
    quad_panels: int = 64
    fallback: bool = True

    def __post_init__(self):
        if not self.target_rel_err > 0:
            raise ValueError("target_rel_err must be positive")
        if self.series_max_terms < 16:
            raise ValueError("series_max_terms must be at least 16")
        if self.quad_panels < 1:
            raise ValueError("quad_panels must be positive")


DEFAULT_POLICY = PrecisionPolicy()
_EPS = np.finfo(float).eps

# ---------------------------------------------------------------------------
# Gamma function
# ---------------------------------------------------------------------------

_LANCZOS_G = 7.0
_LANCZOS_P = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _is_nonpositive_integer(z):
    z = np.asarray(z, dtype=complex)
    re = z.real
    return (z.imag == 0) & (re <= 0) & (re == np.round(re))


def _lanczos_loggamma(z):
    """log Gamma(z) for Re z >= 1/2 (principal value is not guaranteed)."""
    z = z - 1.0
    acc = np.full(z.shape, _LANCZOS_P[0], dtype=complex)
    for i in range(1, len(_LANCZOS_P)):
        acc = acc + _LANCZOS_P[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * np.log(t) - t + np.log(acc)


def _gamma_and_rgamma(z):
    z = np.asarray(z, dtype=complex)
    shape = z.shape
    z = z.reshape(-1)
    g = np.empty(z.shape, dtype=complex)
    rg = np.empty(z.shape, dtype=complex)
    right = z.real >= 0.5
    if np.any(right):
        lg = _lanczos_loggamma(z[right])
        g[right] = np.exp(lg)
        rg[right] = np.exp(-lg)
    left = ~right
    if np.any(left):
        zl = z[left]
        lg = _lanczos_loggamma(1.0 - zl)
        s = np.sin(np.pi * zl)
        # far in the left half plane exp(lg) overflows: Gamma underflows to 0
        # and 1/Gamma is genuinely out of range
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            g[left] = np.pi / (s * np.exp(lg))
            rg[left] = s * np.exp(lg) / np.pi
    poles = _is_nonpositive_integer(z)
    g[poles] = np.nan
    rg[poles] = 0.0
    return g.reshape(shape), rg.reshape(shape)


def gamma(z):
    """Complex gamma function (Lanczos, g=7, with reflection for Re z < 1/2).

    Raises ParameterPoleError at the non-positive integers.
    """
    zz = np.asarray(z, dtype=complex)
    if np.any(_is_nonpositive_integer(zz)):
        raise ParameterPoleError("gamma has a pole at a non-positive integer")
    g, _ = _gamma_and_rgamma(zz)
    return g[()] if g.ndim == 0 else g


def rgamma(z):
    """Reciprocal gamma 1/Gamma(z); entire, exactly zero at the poles of Gamma."""
    _, rg = _gamma_and_rgamma(z)
    return rg[()] if rg.ndim == 0 else rg


def poch(a, n):
    """Rising factorial (a)_n for a non-negative integer n."""
    a = np.asarray(a, dtype=complex)
    out = np.ones(a.shape, dtype=complex)
    for i in range(int(n)):
        out = out * (a + i)
    return out[()] if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# Gauss hypergeometric function on z <= 0
# ---------------------------------------------------------------------------

def _series(a, b, c, w, max_terms, n_terms=None):
    """Partial sums of sum_n (a)_n (b)_n / ((c)_n n!) w^n.

    Returns the sum and the largest term modulus (a cancellation gauge).  When
    ``n_terms`` is given, exactly that many terms are summed for every entry.
    Converged entries are dropped from the working set every few terms.
    """
    size = w.shape[0]
    total = np.ones(size, dtype=complex)
    peak = np.ones(size)
    if size == 0:
        return total, peak
    if n_terms is not None:
        term = np.ones(size, dtype=complex)
        for n in range(int(np.max(n_terms))):
            term = term * ((a + n) * (b + n) / ((c + n) * (n + 1))) * w
            term = np.where(n < n_terms, term, 0.0)
            total += term
            peak = np.maximum(peak, np.abs(term))
        return total, peak
    idx = np.arange(size)
    term = np.ones(size, dtype=complex)
    tot = total.copy()
    pk = peak.copy()
    quiet = np.zeros(size, dtype=np.int8)
    aa, bb, cc, ww = a, b, c, w
    for n in range(max_terms):
        term *= (aa + n) * (bb + n) / ((cc + n) * (n + 1)) * ww
        tot += term
        mag = np.abs(term)
        np.maximum(pk, mag, out=pk)
        small = (mag <= 1e-17 * np.abs(tot)) | (mag <= 1e-18 * pk)
        quiet = np.where(small, quiet + 1, 0).astype(np.int8)
        if n % 4 == 3:
            done = quiet >= 2
            if np.any(done):
                total[idx[done]] = tot[done]
                peak[idx[done]] = pk[done]
                keep = ~done
                if not np.any(keep):
                    return total, peak
                idx, term, tot, pk, quiet = idx[keep], term[keep], tot[keep], pk[keep], quiet[keep]
                aa, bb, cc, ww = aa[keep], bb[keep], cc[keep], ww[keep]
    raise NonConvergenceError(
        f"hypergeometric series did not converge in {max_terms} terms")


def _terminating_degree(a, b):
    """Degree of the polynomial when a or b is a non-positive integer, else -1."""
    deg = np.full(a.shape, -1, dtype=int)
    for p in (a, b):
        hit = _is_nonpositive_integer(p)
        d = np.where(hit, -np.round(p.real), -1).astype(int)
        deg = np.where(hit & ((deg < 0) | (d < deg)), d, deg)
    return deg


def _mp_hyp2f1(a, b, c, z, cond):
    # cond is infinite for entries no double-precision route covers; mpmath
    # then picks its own transformation and 30 digits are ample
    digits = int(20 + max(0.0, math.log10(max(cond, 1.0)))) if math.isfinite(cond) else 30
    with mpmath.workdps(digits):
        return complex(mpmath.hyp2f1(complex(a), complex(b), complex(c), float(z)))


def hyp2f1(a, b, c, z, policy: PrecisionPolicy = DEFAULT_POLICY):
    """Gauss hypergeometric function 2F1(a, b; c; z) for real z <= 0.

    Regions: the direct series for |z| <= 1/2; for z < -1/2 the
    transformation to 1/(1-z), which is a two-term formula in the variable
    w = 1/(1-z) in (0, 2/3).  When a - b is within 1e-3 of an integer that
    formula is degenerate and the Pfaff map z/(z-1) is used instead.
    Entries whose cancellation gauge exceeds the policy target are recomputed
    with mpmath when ``policy.fallback`` is set.  Terminating series (a or b a
    non-positive integer) are summed exactly.
    """
    a0, b0, c0 = (np.asarray(v, dtype=complex) for v in (a, b, c))
    a, b, c, z = np.broadcast_arrays(a0, b0, c0, np.asarray(z, dtype=float))
    shape = z.shape
    a, b, c, z = (v.reshape(-1) for v in (a, b, c, z))
    if np.any(z > 0):
        raise ValueError("hyp2f1 is implemented for z <= 0 only")
    if np.any(_is_nonpositive_integer(c)):
        raise ParameterPoleError("c is a non-positive integer")
    if np.any(~np.isfinite(z)):
        raise ValueError("z must be finite")

    out = np.empty(z.shape, dtype=complex)
    cond = np.ones(z.shape)
    deg = _terminating_degree(a, b)
    mt = policy.series_max_terms

    poly = deg >= 0
    if np.any(poly):
        s, pk = _series(a[poly], b[poly], c[poly], z[poly], mt, n_terms=deg[poly])
        out[poly] = s
        cond[poly] = pk / np.maximum(np.abs(s), 1e-300)

    near = ~poly & (z >= -0.5)
    if np.any(near):
        s, pk = _series(a[near], b[near], c[near], z[near], mt)
        out[near] = s
        cond[near] = pk / np.maximum(np.abs(s), 1e-300)

    far = ~poly & (z < -0.5)
    dab = a - b
    degenerate = np.abs(dab - np.round(dab.real)) < 1e-3
    conn = far & ~degenerate
    if np.any(conn):
        aa, bb, cc, zz = a[conn], b[conn], c[conn], z[conn]
        w = 1.0 / (1.0 - zz)
        logw = np.log(w)
        s1, p1 = _series(aa, cc - bb, aa - bb + 1.0, w, mt)
        s2, p2 = _series(bb, cc - aa, bb - aa + 1.0, w, mt)
        # gamma factors depend on the parameters only: evaluate them on the
        # un-broadcast parameter arrays, which are usually much smaller
        g1, g2 = _connection_coefficients(a0, b0, c0)
        g1 = np.broadcast_to(g1, shape).reshape(-1)[conn]
        g2 = np.broadcast_to(g2, shape).reshape(-1)[conn]
        k1 = g1 * np.exp(aa * logw)
        k2 = g2 * np.exp(bb * logw)
        val = k1 * s1 + k2 * s2
        out[conn] = val
        gauge = np.abs(k1) * p1 + np.abs(k2) * p2
        cond[conn] = gauge / np.maximum(np.abs(val), 1e-300)

    pfaff = far & degenerate
    if np.any(pfaff):
        aa, bb, cc, zz = a[pfaff], b[pfaff], c[pfaff], z[pfaff]
        w = zz / (zz - 1.0)
        ok = w <= 0.9
        vals = np.empty(zz.shape, dtype=complex)
        cnd = np.full(zz.shape, np.inf)
        if np.any(ok):
            s, pk = _series(aa[ok], cc[ok] - bb[ok], cc[ok], w[ok], mt)
            pref = np.exp(-aa[ok] * np.log1p(-zz[ok]))
            vals[ok] = pref * s
            cnd[ok] = pk / np.maximum(np.abs(s), 1e-300)
        out[pfaff] = vals
        cond[pfaff] = cnd
        if not policy.fallback and np.any(~ok):
            raise NonConvergenceError(
                "degenerate parameters at large |z| need the mpmath fallback")

    if policy.fallback:
        est = 16 * _EPS * cond
        bad = np.nonzero(~(est <= policy.target_rel_err))[0]
        for i in bad:
            out[i] = _mp_hyp2f1(a[i], b[i], c[i], z[i], cond[i])
    out = out.reshape(shape)
    return out[()] if out.ndim == 0 else out


def _connection_coefficients(a, b, c):
    """Gamma factors of the 1/(1-z) transformation formula."""
    a, b, c = np.broadcast_arrays(a, b, c)
    gc = gamma_safe(c)
    with np.errstate(invalid="ignore"):
        g1 = gc * gamma_safe(b - a) * rgamma(b) * rgamma(c - a)
        g2 = gc * gamma_safe(a - b) * rgamma(a) * rgamma(c - b)
    return g1, g2


def gamma_safe(z):
    """Gamma that returns nan (not an exception) at poles; used internally."""
    g, _ = _gamma_and_rgamma(z)
    return g


def hyp2f1_derivative(a, b, c, z, policy: PrecisionPolicy = DEFAULT_POLICY):
    """d/dz 2F1(a,b;c;z) = (ab/c) 2F1(a+1,b+1;c+1;z)."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    c = np.asarray(c, dtype=complex)
    if np.any(c == 0):
        raise ParameterPoleError("c must be non-zero")
    return a * b / c * hyp2f1(a + 1, b + 1, c + 1, z, policy)


def hyp2f1_connection(a, b, c, z, policy: PrecisionPolicy = DEFAULT_POLICY):
    """Right-hand side of the 1/z connection formula for 2F1 (z < 0).

    Used only as an independent cross-check of ``hyp2f1``; it is singular
    when a - b is an integer.
    """
    a, b, c, z = np.broadcast_arrays(
        np.asarray(a, dtype=complex), np.asarray(b, dtype=complex),
        np.asarray(c, dtype=complex), np.asarray(z, dtype=float))
    if np.any(z >= 0):
        raise ValueError("connection formula needs z < 0")
    dab = a - b
    if np.any(np.abs(dab - np.round(dab.real)) < 1e-12):
        raise ParameterPoleError("a - b is an integer")
    mz = -z
    gc = gamma_safe(c)
    t1 = gc * gamma_safe(b - a) * rgamma(b) * rgamma(c - a) * np.exp(-a * np.log(mz))
    t2 = gc * gamma_safe(a - b) * rgamma(a) * rgamma(c - b) * np.exp(-b * np.log(mz))
    f1 = hyp2f1(a, a - c + 1, a - b + 1, 1.0 / z, policy)
    f2 = hyp2f1(b, b - c + 1, b - a + 1, 1.0 / z, policy)
    return t1 * f1 + t2 * f2


# ---------------------------------------------------------------------------
# Renormalised K-Bessel function
# ---------------------------------------------------------------------------

def ktilde(alpha, x, warn: bool = True):
    """K~_alpha(x) = (x/2)^(-alpha) K_alpha(x) for complex alpha and x > 0.

    Uses K_alpha(x) = (1/2) int_R exp(-x cosh u + alpha u) du with the
    trapezoidal rule.  The integrand decays doubly exponentially and is
    analytic in the strip |Im u| < pi/2, so the rule converges geometrically
    (the double-exponential rule in its natural variable).  For complex order
    the line is shifted to Im u = theta towards the saddle point
    asinh(alpha/x), which removes the cancellation that otherwise costs
    about exp(pi |Im alpha| / 2) in relative accuracy.  The prefactor is
    folded into the exponent so nothing overflows.
    """
    alpha, x = np.broadcast_arrays(np.asarray(alpha, dtype=complex),
                                   np.asarray(x, dtype=float))
    if np.any(~(x > 0)):
        raise ValueError("ktilde needs x > 0")
    if warn and np.any(x < 0.01):
        warnings.warn("ktilde below x=0.01: prefer the small-argument asymptotics",
                      AccuracyWarning, stacklevel=2)
    shape = x.shape
    if x.size == 0:
        return np.zeros(shape, dtype=complex)
    al = alpha.reshape(-1, 1)
    xx = x.reshape(-1, 1)
    theta = np.sign(al.imag) * np.minimum(
        np.arcsin(np.minimum(1.0, np.abs(al.imag) / xx)), 0.5 * np.pi - 0.4)
    margin = 0.5 * np.pi - float(np.max(np.abs(theta)))
    h = min(margin / 10.0, 0.5 / math.sqrt(float(np.max(xx))))
    ra = float(np.max(np.abs(al.real)))
    xeff = float(np.min(xx * np.cos(theta)))
    upper = 1.0
    for _ in range(60):
        nxt = math.acosh(max(1.0, (745.0 + ra * upper) / xeff)) + 0.5
        if abs(nxt - upper) < 1e-3:
            break
        upper = nxt
    n_half = int(math.ceil(upper / h))
    u = (np.arange(-n_half, n_half + 1) * h)[None, :] + 1j * theta
    expo = -xx * np.cosh(u) + al * u - al * np.log(xx / 2.0)
    out = (0.5 * h * np.exp(expo).sum(axis=1)).reshape(shape)
    return out[()] if out.ndim == 0 else out


def ktilde_derivative(alpha, x, warn: bool = True):
    """d/dx K~_alpha(x) = -(x/2) K~_{alpha+1}(x)."""
    x = np.asarray(x, dtype=float)
    return -(x / 2.0) * ktilde(np.asarray(alpha, dtype=complex) + 1.0, x, warn)


def besselk(nu, x):
    """K_nu(x) for complex order nu and x > 0 via K_nu = (x/2)^nu K~_nu."""
    nu = np.asarray(nu, dtype=complex)
    x = np.asarray(x, dtype=float)
    return np.exp(nu * np.log(x / 2.0)) * ktilde(nu, x, warn=False)


# ---------------------------------------------------------------------------
# J-Bessel and Jacobi polynomials
# ---------------------------------------------------------------------------

def jbessel(nu, x):
    """J_nu(x) for real nu >= -1/2 and x >= 0 (scipy's Amos-based jv)."""
    nu = np.asarray(nu, dtype=float)
    x = np.asarray(x, dtype=float)
    if np.any(nu < -0.5):
        raise ValueError("jbessel needs nu >= -1/2")
    if np.any(x < 0):
        raise ValueError("jbessel needs x >= 0")
    return _sp.jv(nu, x)


def jacobi_poly(n, alpha, beta, z):
    """Jacobi polynomial P_n^(alpha,beta)(z) from its finite hypergeometric sum.

    P_n = (1/n!) sum_k (-n)_k (alpha+beta+n+1)_k (alpha+k+1)_{n-k} / k! ((1-z)/2)^k
    """
    n = int(n)
    if n < 0:
        raise ValueError("degree must be non-negative")
    z = np.asarray(z)
    u = (1.0 - z) / 2.0
    total = np.zeros(np.broadcast(z, np.asarray(alpha), np.asarray(beta)).shape,
                     dtype=np.result_type(z, alpha, beta, float))
    for k in range(n + 1):
        coef = poch(-n, k) * poch(alpha + beta + n + 1, k) * poch(alpha + k + 1, n - k)
        coef = coef / math.factorial(k)
        if np.isrealobj(total):
            coef = np.real(coef)
        total = total + coef * u ** k
    total = total / math.factorial(n)
    return total[()] if np.ndim(total) == 0 else total

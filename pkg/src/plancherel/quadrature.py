"""Quadrature building blocks: composite Gauss-Legendre, sphere rules,
and an accelerated integrator for slowly decaying oscillatory tails."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy import special as _sp


@lru_cache(maxsize=64)
def _leggauss(order):
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def composite_gauss(edges, order):
    """Nodes and weights of composite Gauss-Legendre on consecutive intervals."""
    edges = np.asarray(edges, dtype=float)
    x, w = _leggauss(int(order))
    lo, hi = edges[:-1, None], edges[1:, None]
    half = 0.5 * (hi - lo)
    nodes = (lo + half * (x[None, :] + 1.0)).ravel()
    weights = (half * w[None, :]).ravel()
    return nodes, weights


def graded_edges(start, stop, ratio=2.0, uniform_width=None, first=1e-12):
    """Panel edges that grow geometrically from ``first`` up to ``start`` and
    are uniform (width ``uniform_width``) from ``start`` to ``stop``.

    The geometric part resolves algebraic endpoint behaviour at zero.
    """
    geo = [0.0]
    e = first
    while e < start:
        geo.append(e)
        e *= ratio
    geo.append(start)
    if uniform_width is None:
        uniform_width = start
    count = max(1, int(math.ceil((stop - start) / uniform_width)))
    tail = np.linspace(start, stop, count + 1)[1:]
    return np.concatenate([np.array(geo), tail])


def sphere_rule(dim, order):
    """Product quadrature on the unit sphere S^{dim-1} in R^dim.

    Returns (points of shape (N, dim), weights) exact for polynomials of
    degree < ``order`` (in each angular factor).  dim=1 is the two-point
    set {+1, -1} with counting measure.
    """
    dim = int(dim)
    if dim < 1:
        raise ValueError("dimension must be >= 1")
    if dim == 1:
        return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    if dim == 2:
        m = max(int(order), 3)
        th = 2.0 * np.pi * np.arange(m) / m
        return np.stack([np.cos(th), np.sin(th)], axis=1), np.full(m, 2.0 * np.pi / m)
    # omega = (s, sqrt(1-s^2) omega'), d omega = (1-s^2)^((dim-3)/2) ds d omega'
    q = max(int(order), 2)
    s, ws = _sp.roots_jacobi(q, 0.5 * (dim - 3), 0.5 * (dim - 3))
    sub_pts, sub_w = sphere_rule(dim - 1, order)
    rad = np.sqrt(1.0 - s ** 2)
    pts = np.concatenate(
        [s[:, None, None].repeat(len(sub_w), axis=1),
         rad[:, None, None] * sub_pts[None, :, :]], axis=2).reshape(-1, dim)
    wts = (ws[:, None] * sub_w[None, :]).ravel()
    return pts, wts


def sphere_area(dim):
    """Surface measure of S^{dim-1}; 2 for dim=1 (counting measure)."""
    return 2.0 * math.pi ** (dim / 2.0) / math.gamma(dim / 2.0)


def wynn_epsilon(partial_sums):
    """Wynn's epsilon algorithm applied to a sequence of partial sums.

    Returns (estimate, error) where the estimate is the last entry of the
    even-order column whose change from the previous even column is
    smallest; entries that blow up once the table has converged to rounding
    level are discarded.
    """
    s = [complex(v) for v in partial_sums]
    n = len(s)
    if n < 3:
        return s[-1], abs(s[-1] - s[-2]) if n > 1 else float("inf")
    prev = [0j] * (n + 1)
    cur = list(s)
    estimates = [cur[-1]]
    for k in range(1, n):
        nxt = []
        for i in range(len(cur) - 1):
            d = cur[i + 1] - cur[i]
            nxt.append(prev[i + 1] + 1.0 / d if d != 0 else complex(np.inf))
        prev, cur = cur, nxt
        if k % 2 == 0 and cur:
            if not np.isfinite(cur[-1]):
                break
            estimates.append(cur[-1])
        if len(cur) < 2:
            break
    best, err = estimates[-1], float("inf")
    for a, b in zip(estimates[:-1], estimates[1:]):
        if abs(b - a) < err:
            best, err = b, abs(b - a)
    return best, err


def oscillatory_integral(func, start, half_period, head_edges=None, order=24,
                         n_cycles=60):
    """Integral of ``func`` over [0, inf) for an integrand that decays slowly
    while oscillating with asymptotic half-period ``half_period``.

    The finite head [0, start] is integrated by composite Gauss-Legendre on
    ``head_edges`` (default: 16 uniform panels); the tail is split into
    half-period blocks whose partial sums are accelerated with Wynn's
    epsilon algorithm.  Returns (value, error estimate).
    """
    if head_edges is None:
        head_edges = np.linspace(0.0, start, 17)
    xs, ws = composite_gauss(head_edges, order)
    head = np.sum(ws * func(xs))
    edges = start + half_period * np.arange(n_cycles + 1)
    xs, ws = composite_gauss(edges, order)
    vals = (ws * func(xs)).reshape(n_cycles, -1).sum(axis=1)
    partial = head + np.cumsum(vals)
    est, err = wynn_epsilon(partial[-40:] if n_cycles > 40 else partial)
    return est, err

"""Sparse multivariate polynomials with complex coefficients.

Only what the Bessel-operator algebra and the harmonic bases need:
arithmetic, partial derivatives, multiplication by coordinates, the
Laplacian, division by |x|^2 with remainder, and vectorised evaluation.
"""

from __future__ import annotations

import numpy as np


class Polynomial:
    """sum_e c_e x^e in ``dim`` variables; ``coeffs`` maps exponent tuples to c_e."""

    __slots__ = ("dim", "coeffs")

    def __init__(self, dim: int, coeffs=None):
        if dim < 1:
            raise ValueError("dimension must be >= 1")
        self.dim = int(dim)
        clean = {}
        for e, c in (coeffs or {}).items():
            e = tuple(int(v) for v in e)
            if len(e) != self.dim or min(e) < 0:
                raise ValueError(f"bad exponent {e} for dimension {dim}")
            c = complex(c)
            if c != 0:
                clean[e] = clean.get(e, 0j) + c
        self.coeffs = {e: c for e, c in clean.items() if c != 0}

    # construction ------------------------------------------------------
    @classmethod
    def constant(cls, dim: int, c=1.0) -> "Polynomial":
        return cls(dim, {(0,) * dim: c})

    @classmethod
    def variable(cls, dim: int, i: int) -> "Polynomial":
        """The coordinate x_i (0-based index)."""
        e = [0] * dim
        e[i] = 1
        return cls(dim, {tuple(e): 1.0})

    @classmethod
    def norm_squared(cls, dim: int) -> "Polynomial":
        """|x|^2."""
        return cls(dim, {tuple(2 if j == i else 0 for j in range(dim)): 1.0 for i in range(dim)})

    @classmethod
    def zero(cls, dim: int) -> "Polynomial":
        return cls(dim)

    # arithmetic --------------------------------------------------------
    def _check(self, other):
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.dim, other)
        self._check(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0j) + c
        return Polynomial(self.dim, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.dim, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, Polynomial) else -complex(other))

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = complex(other)
            return Polynomial(self.dim, {e: c * v for e, v in self.coeffs.items()})
        self._check(other)
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0j) + c1 * c2
        return Polynomial(self.dim, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.dim == other.dim and self.coeffs == other.coeffs

    def __repr__(self):
        return f"Polynomial({self.dim}, {self.coeffs})"

    # calculus ----------------------------------------------------------
    def times_x(self, i: int) -> "Polynomial":
        out = {}
        for e, c in self.coeffs.items():
            e2 = list(e)
            e2[i] += 1
            out[tuple(e2)] = c
        return Polynomial(self.dim, out)

    def deriv(self, i: int) -> "Polynomial":
        out = {}
        for e, c in self.coeffs.items():
            if e[i] == 0:
                continue
            e2 = list(e)
            e2[i] -= 1
            out[tuple(e2)] = out.get(tuple(e2), 0j) + c * e[i]
        return Polynomial(self.dim, out)

    def laplacian(self) -> "Polynomial":
        out = Polynomial.zero(self.dim)
        for i in range(self.dim):
            out = out + self.deriv(i).deriv(i)
        return out

    def euler(self) -> "Polynomial":
        """E p = sum x_i d_i p (multiplies each degree-d part by d)."""
        return Polynomial(self.dim, {e: c * sum(e) for e, c in self.coeffs.items()})

    def divmod_norm_squared(self):
        """(Q, R) with p = |x|^2 Q + R and deg_{x_1} of every monomial of R at most 1."""
        rem = dict(self.coeffs)
        quot = {}
        while True:
            high = [e for e, c in rem.items() if e[0] >= 2 and c != 0]
            if not high:
                break
            e = max(high, key=lambda v: v[0])
            c = rem.pop(e)
            q = (e[0] - 2,) + e[1:]
            quot[q] = quot.get(q, 0j) + c
            for i in range(1, self.dim):
                e2 = list(q)
                e2[i] += 2
                rem[tuple(e2)] = rem.get(tuple(e2), 0j) - c
        return Polynomial(self.dim, quot), Polynomial(self.dim, rem)

    # queries -----------------------------------------------------------
    def is_zero(self, tol: float = 0.0) -> bool:
        return all(abs(c) <= tol for c in self.coeffs.values())

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.coeffs), default=-1)

    def max_abs_coeff(self) -> float:
        return max((abs(c) for c in self.coeffs.values()), default=0.0)

    def pruned(self, rel_tol: float = 1e-14) -> "Polynomial":
        """Drop coefficients below rel_tol times the largest one (rounding debris)."""
        cut = rel_tol * self.max_abs_coeff()
        return Polynomial(self.dim, {e: c for e, c in self.coeffs.items() if abs(c) > cut})

    def __call__(self, points):
        """Evaluate at points of shape (..., dim)."""
        pts = np.asarray(points, dtype=float)
        if pts.shape[-1] != self.dim:
            raise ValueError("point dimension mismatch")
        out = np.zeros(pts.shape[:-1], dtype=complex)
        for e, c in self.coeffs.items():
            term = np.full(pts.shape[:-1], c, dtype=complex)
            for i, p in enumerate(e):
                if p:
                    term = term * pts[..., i] ** p
            out += term
        return out

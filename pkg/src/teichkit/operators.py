"""Pre-Schwarzian and Schwarzian operators, the Bers-type embeddings and chi.

Every differential carries its truncated Taylor series and, when one is
available, an exact pointwise evaluator.  For a polynomial map ``f`` the
pre-Schwarzian ``f''/f'`` is rational and is evaluated as such; for a
:class:`RationalMap` it is the logarithmic derivative of ``f'`` and is
evaluated as a sum of simple poles, which stays accurate next to a
boundary singularity such as the Koebe function's pole at ``z = 1``.
"""

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.polynomial import polynomial as P

from . import series
from .disk_maps import DEFAULT_N, DiskMap, RationalMap
from .rational import Rational

A1_PIVOT_TOL = 1e-12


class DifferentialError(ArithmeticError):
    """The pre-Schwarzian is undefined (``f'(0) = 0``)."""


@dataclass(frozen=True, eq=False)
class _Differential:
    coeffs: np.ndarray
    exact: object = None

    kind = "differential"
    weight = 0

    def __post_init__(self):
        c = np.atleast_1d(np.array(self.coeffs, dtype=complex))
        if not np.all(np.isfinite(c)):
            raise ValueError("differential coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def N(self):
        return len(self.coeffs) - 1

    def __call__(self, z):
        if self.exact is not None:
            return self.exact(z)
        return series.evaluate(self.coeffs, z)

    def at_zero(self):
        return complex(self.coeffs[0])

    def _combine(self, other, sign):
        n = max(self.N, other.N)
        c = series.as_series(self.coeffs, n) + sign * series.as_series(other.coeffs, n)
        # pointwise, so that a - b is exactly the negative of b - a
        a, b = self, other
        exact = (lambda z: a(z) + b(z)) if sign > 0 else (lambda z: a(z) - b(z))
        return type(self)(c, exact)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __mul__(self, alpha):
        alpha = complex(alpha)
        ex = self.exact
        if isinstance(ex, Rational):
            new = ex * alpha
        elif ex is None:
            new = None
        else:
            new = lambda z: alpha * ex(z)  # noqa: E731
        return type(self)(self.coeffs * alpha, new)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def truncated(self, n):
        return type(self)(series.as_series(self.coeffs, n), self.exact)

    def series_only(self):
        return type(self)(self.coeffs)

    @cached_property
    def norm(self):
        from .metrics import sup_norm
        return sup_norm(self).value


class OneDifferential(_Differential):
    """``phi(z) dz``; weighted by ``1 - |z|^2`` in the sup-norm."""

    kind = "one_differential"
    weight = 1


class QuadDifferential(_Differential):
    """``psi(z) dz^2``; weighted by ``(1 - |z|^2)^2`` in the sup-norm."""

    kind = "quad_differential"
    weight = 2


@dataclass(frozen=True, eq=False)
class BersPoint:
    quad: QuadDifferential
    c: complex

    kind = "bers_point"


@dataclass(frozen=True, eq=False)
class ChiPoint:
    one: OneDifferential
    c: complex

    kind = "chi_point"

    def __post_init__(self):
        object.__setattr__(self, "c", complex(self.c))


# ----------------------------------------------------------- exact forms


def _cluster_roots(roots, tol=1e-5):
    """Group numerically split multiple roots; returns ``(centers, multiplicities)``."""
    roots = np.asarray(roots, dtype=complex)
    free = np.ones(len(roots), dtype=bool)
    centers, mults = [], []
    for i in range(len(roots)):
        if not free[i]:
            continue
        group = free & (np.abs(roots - roots[i]) < tol * max(1.0, abs(roots[i])))
        free &= ~group
        centers.append(roots[group].mean())
        mults.append(group.sum())
    return np.array(centers, dtype=complex), np.array(mults, dtype=float)


def _roots(c):
    c = series.trim(np.asarray(c, dtype=complex), tol=1e-300)
    if len(c) <= 1:
        return np.zeros(0, dtype=complex)
    return np.roots(c[::-1])


class PoleSum:
    """``sum_i m_i / (z - r_i)`` and its derivatives."""

    def __init__(self, poles, weights):
        self.poles = np.asarray(poles, dtype=complex)
        self.weights = np.asarray(weights, dtype=complex)

    def __call__(self, z, order=0):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        for r, m in zip(self.poles, self.weights):
            out += m * (-1) ** order * math.factorial(order) / (z - r) ** (order + 1)
        return out


def _rational_map_pre_schwarzian(f):
    """Pole-sum form of ``(log f')'`` for ``f = p/q``: ``f' = w / q^2``."""
    p, q = np.asarray(f.num), np.asarray(f.den)
    w = P.polysub(P.polymul(P.polyder(p), q), P.polymul(p, P.polyder(q)))
    zw, mw = _cluster_roots(_roots(w))
    zq, mq = _cluster_roots(_roots(q))
    return PoleSum(np.concatenate([zw, zq]), np.concatenate([mw, -2 * mq]))


def _check_pivot(fp0):
    if abs(fp0) < A1_PIVOT_TOL:
        raise DifferentialError("f'(0) vanishes: pre-Schwarzian undefined")


# -------------------------------------------------------------- operators


def pre_schwarzian(f, n=None):
    """``A(f) = f'' / f'`` as a :class:`OneDifferential`."""
    if isinstance(f, RationalMap):
        n = n or DEFAULT_N
        s = f.taylor(n + 3)
        _check_pivot(s[1])
        fp = series.deriv(s, 1)
        coeffs = series.div(series.deriv(s, 2), fp, n)
        return OneDifferential(coeffs, _rational_map_pre_schwarzian(f))
    n = f.N if n is None else n
    s = f.series
    _check_pivot(s[1])
    fp, fpp = series.deriv(s, 1), series.deriv(s, 2)
    return OneDifferential(series.div(fpp, fp, n), Rational(fpp, fp))


def schwarzian(f, n=None):
    """``S(f) = f'''/f' - (3/2) (f''/f')^2`` as a :class:`QuadDifferential`."""
    if isinstance(f, RationalMap):
        n = n or DEFAULT_N
        s = f.taylor(n + 4)
        _check_pivot(s[1])
        fp = series.deriv(s, 1)
        a = series.div(series.deriv(s, 2), fp, n)
        coeffs = series.div(series.deriv(s, 3), fp, n) - 1.5 * series.mul(a, a, n)
        ps = _rational_map_pre_schwarzian(f)
        exact = lambda z: ps(z, 1) - 0.5 * ps(z) ** 2  # noqa: E731
        return QuadDifferential(coeffs, exact)
    n = f.N if n is None else n
    s = f.series
    _check_pivot(s[1])
    f1, f2, f3 = (series.deriv(s, k) for k in (1, 2, 3))
    a = series.div(f2, f1, n)
    coeffs = series.div(f3, f1, n) - 1.5 * series.mul(a, a, n)
    exact = Rational(P.polysub(2 * P.polymul(f3, f1), 3 * P.polymul(f2, f2)),
                     2 * P.polymul(f1, f1))
    return QuadDifferential(coeffs, exact)


def psi(g):
    """``Psi(g) = g' - g^2 / 2`` by exact series arithmetic.

    The result has degree ``g.N - 1``, the last one ``g`` determines.
    """
    n = max(g.N - 1, 0)
    gp = series.as_series(series.deriv(g.coeffs, 1), n)
    coeffs = gp - 0.5 * series.mul(g.coeffs, g.coeffs, n)
    exact = None
    if isinstance(g.exact, Rational):
        exact = g.exact.deriv() - g.exact * g.exact * 0.5
    return QuadDifferential(coeffs, exact)


def psi_hat(g):
    return BersPoint(psi(g), 0.5 * g.at_zero())


def beta_hat(f, n=None):
    return pre_schwarzian(f, n)


def beta(f, n=None):
    """``(S(f), A(f)(0) / 2)``; the second entry is half the constant coefficient."""
    return BersPoint(schwarzian(f, n), 0.5 * pre_schwarzian(f, n).at_zero())


def chi(f, n=None):
    a1 = f.a1
    if abs(a1) < A1_PIVOT_TOL:
        raise DifferentialError("chi requires f'(0) != 0")
    return ChiPoint(pre_schwarzian(f, n), a1)


def chi_inverse(p, rho=1.25, n=None):
    """Recover ``f(z) = c * int_0^z exp(int_0^u phi)`` from ``p = (phi, c)``.

    Integrated termwise; the result has degree ``n`` (default: the degree
    of ``phi``) and records the modulus of the dropped exponential tail.
    """
    if abs(p.c) < A1_PIVOT_TOL:
        raise DifferentialError("chi_inverse requires c != 0")
    phi = p.one.coeffs
    n = len(phi) - 1 if n is None else n
    primitive = series.integ(series.as_series(phi, n))
    e = series.exp(primitive, 2 * n)
    fprime = p.c * e[:n]
    s = series.integ(fprime)
    tail = abs(p.c) * series.tail_bound(e, n - 1)
    return DiskMap.from_series(s, rho=rho, tail=tail)


def normalize(f):
    """``f / f'(0)``, landing in the normalization ``f'(0) = 1``."""
    a1 = f.a1
    if abs(a1) < A1_PIVOT_TOL:
        raise DifferentialError("normalize requires f'(0) != 0")
    return f.scaled(1.0 / a1)


def mobius_image(T, f):
    """``T o f`` for polynomial ``f`` as an exact :class:`RationalMap` (needs ``T(0) = 0``)."""
    if abs(T.b) > 1e-14:
        raise ValueError("T must fix the origin")
    s = f.series
    den = T.c * s
    den[0] += T.d
    return RationalMap(T.a * s, den, rho=f.rho)

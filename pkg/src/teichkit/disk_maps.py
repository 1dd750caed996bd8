"""Holomorphic maps of the unit disk fixing the origin.

:class:`DiskMap` is a polynomial ``f(z) = a_1 z + ... + a_N z^N`` asserted
univalent on ``|z| < rho`` with ``rho > 1``; that margin past the unit
circle is what stands in for a quasiconformal extension across it.
:class:`RationalMap` carries exact closed forms (the Koebe function,
Moebius images of polynomials) that have no finite Taylor expansion.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import series
from .rational import Rational

DEFAULT_N = 64
_EPS = 1e-14


class DomainError(ValueError):
    """A point lies outside the disk on which a map is defined."""


class ContainmentError(ValueError):
    """An image is not contained in the required compact set."""


def _freeze(a):
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class DiskMap:
    """Polynomial disk map; ``coeffs[0]`` is ``a_1`` (no constant term stored).

    ``tail`` records the modulus bound of whatever was discarded when the
    map was produced by truncating an infinite series.
    """

    coeffs: np.ndarray
    rho: float = 1.25
    tail: float = 0.0

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        if c.ndim != 1 or len(c) == 0:
            raise ValueError("DiskMap needs a non-empty 1-d coefficient sequence")
        if not np.all(np.isfinite(c)):
            raise ValueError("DiskMap coefficients must be finite")
        if not self.rho > 1.0:
            raise ValueError(f"univalence radius must exceed 1, got {self.rho}")
        object.__setattr__(self, "coeffs", _freeze(c))
        object.__setattr__(self, "rho", float(self.rho))

    @classmethod
    def from_series(cls, s, rho=1.25, tail=0.0, atol=1e-12):
        s = series.as_series(s)
        if abs(s[0]) > atol:
            raise ValueError(f"DiskMap requires f(0) = 0, got constant term {s[0]}")
        if len(s) < 2:
            s = np.zeros(2, dtype=complex)
        return cls(s[1:], rho=rho, tail=tail)

    @property
    def N(self):
        return len(self.coeffs)

    @property
    def a1(self):
        return complex(self.coeffs[0])

    @property
    def series(self):
        out = np.zeros(self.N + 1, dtype=complex)
        out[1:] = self.coeffs
        return out

    def __call__(self, z):
        return evaluate(self, z)

    def scaled(self, alpha):
        return DiskMap(self.coeffs * complex(alpha), rho=self.rho, tail=self.tail * abs(alpha))

    def truncated(self, n):
        s = series.as_series(self.series, n)
        return DiskMap.from_series(s, rho=self.rho,
                                   tail=self.tail + series.tail_bound(self.series, n))

    def derivative_poly(self, order=1):
        return derivative(self, order)

    def rational(self):
        return Rational.polynomial(self.series)

    def __repr__(self):
        return f"DiskMap(N={self.N}, rho={self.rho:g}, a1={self.a1:.6g})"


@dataclass(frozen=True, eq=False)
class RationalMap:
    """Exact rational map ``num / den`` with ``num(0) = 0`` and ``den(0) != 0``.

    Not restricted to ``rho > 1``: the Koebe function lives here.
    """

    num: np.ndarray
    den: np.ndarray
    rho: float = 1.0

    def __post_init__(self):
        r = Rational(self.num, self.den)
        if abs(r.num[0]) > _EPS:
            raise ValueError("RationalMap requires f(0) = 0")
        if abs(r.den[0]) < series.PIVOT_TOL:
            raise ValueError("RationalMap has a pole at the origin")
        object.__setattr__(self, "num", _freeze(r.num))
        object.__setattr__(self, "den", _freeze(r.den))

    @property
    def rational(self):
        return Rational(self.num, self.den)

    @property
    def a1(self):
        return complex(self.taylor(1)[1])

    def __call__(self, z):
        return self.rational(z)

    def taylor(self, n):
        return series.div(self.num, self.den, n)

    def to_disk_map(self, n=DEFAULT_N, rho=None):
        s = self.taylor(2 * n)
        return DiskMap.from_series(s[: n + 1], rho=rho or self.rho,
                                   tail=series.tail_bound(s, n))


def koebe():
    """The Koebe function ``z / (1 - z)^2``."""
    return RationalMap([0.0, 1.0], [1.0, -2.0, 1.0])


def identity(n=1, rho=10.0):
    c = np.zeros(n, dtype=complex)
    c[0] = 1.0
    return DiskMap(c, rho=rho)


# ---------------------------------------------------------------- grids


@dataclass(frozen=True)
class EvaluationGrid:
    """Polar grid in the open disk.

    Ring radii are ``1 - 2**(-j / substeps)`` for ``j = 1 .. halvings*substeps``,
    so each refinement (two more halvings, twice the angles) yields a
    superset of nodes.  The origin is always a node.
    """

    halvings: int = 6
    substeps: int = 4
    n_angles: int = 32
    max_halvings: int = 40
    max_angles: int = 4096

    def __post_init__(self):
        if self.n_angles < 8:
            raise ValueError("EvaluationGrid needs at least 8 angles per ring")
        if self.halvings < 1 or self.halvings > self.max_halvings:
            raise ValueError("halvings must lie in [1, max_halvings]")

    @property
    def radii(self):
        j = np.arange(1, self.halvings * self.substeps + 1)
        return 1.0 - 2.0 ** (-j / self.substeps)

    @property
    def r_max(self):
        return float(self.radii[-1])

    @property
    def thetas(self):
        return 2 * np.pi * np.arange(self.n_angles) / self.n_angles

    @property
    def nodes(self):
        ring = np.outer(self.radii, np.exp(1j * self.thetas)).ravel()
        return np.concatenate([[0.0 + 0.0j], ring])

    @property
    def size(self):
        return 1 + len(self.radii) * self.n_angles

    def boundary_thetas(self):
        m = 16 * self.n_angles
        return 2 * np.pi * np.arange(m) / m

    def refine(self):
        return EvaluationGrid(
            halvings=min(self.halvings + 2, self.max_halvings),
            substeps=self.substeps,
            n_angles=min(2 * self.n_angles, self.max_angles),
            max_halvings=self.max_halvings,
            max_angles=self.max_angles,
        )

    def is_saturated(self):
        return self.halvings >= self.max_halvings and self.n_angles >= self.max_angles

    def describe(self):
        return {"halvings": self.halvings, "substeps": self.substeps,
                "n_angles": self.n_angles, "r_max": self.r_max, "nodes": self.size}


@dataclass(frozen=True)
class Disk:
    """Closed round disk ``|w - center| <= radius``."""

    center: complex = 0.0
    radius: float = 1.0

    def contains(self, w, margin=0.0):
        return np.abs(np.asarray(w) - self.center) <= self.radius - margin


# ---------------------------------------------------------------- operations


def evaluate(f, z):
    """Value of ``f`` at ``z``; raises :class:`DomainError` for ``|z| >= rho``."""
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) >= f.rho):
        raise DomainError(f"|z| >= rho = {f.rho}")
    out = series.evaluate(f.series, z)
    return complex(out) if out.ndim == 0 else out


def derivative(f, order=1):
    """Coefficients (constant term included) of the ``order``-th derivative."""
    if order < 1:
        raise ValueError("order must be positive")
    s = f.series if isinstance(f, DiskMap) else series.as_series(f)
    if order > len(s) - 1:
        return np.zeros(1, dtype=complex)
    return series.deriv(s, order)


@dataclass(frozen=True)
class ImageBound:
    max_modulus: float
    theta: np.ndarray
    boundary: np.ndarray

    def within(self, disk, margin=0.0):
        return bool(np.all(disk.contains(self.boundary, margin)))

    def distance_outside(self, disk):
        return float(np.max(np.abs(self.boundary - disk.center)) - disk.radius)


def image_bound(f, grid=None):
    """Boundary polyline of ``f(S^1)`` and the max modulus over the closed disk.

    By the maximum principle the modulus is maximal on the circle, which
    sits inside the domain of convergence since ``rho > 1``.
    """
    grid = grid or EvaluationGrid()
    theta = grid.boundary_thetas()
    boundary = f(np.exp(1j * theta))
    return ImageBound(float(np.max(np.abs(boundary))), theta, boundary)


# --- left composition ---------------------------------------------------


class AnalyticMap:
    """One-to-one holomorphic map ``h`` given by callables ``[h, h', h'', ...]``.

    Composition with a disk map falls back to sampling ``h(f(e^{i t}))``
    and refitting Taylor coefficients by least squares (an FFT on
    equispaced nodes).
    """

    def __init__(self, funcs, domain=None):
        self.funcs = list(funcs)
        self.domain = domain

    def __call__(self, w):
        return self.funcs[0](np.asarray(w, dtype=complex))

    def derivatives(self, w, order):
        if order >= len(self.funcs):
            raise ValueError(f"only {len(self.funcs) - 1} derivatives available")
        w = np.asarray(w, dtype=complex)
        return [fn(w) for fn in self.funcs[: order + 1]]

    def holomorphic_on(self, disk):
        if self.domain is None:
            return True
        return self.domain(disk)

    def compose_series(self, s, n):
        m = max(8 * (n + 1), 256)
        z = np.exp(2j * np.pi * np.arange(m) / m)
        vals = self(series.evaluate(s, z))
        c = np.fft.fft(vals) / m
        return series.as_series(c, n), float(np.sum(np.abs(c[n + 1: m // 2])))


class PolynomialMap(AnalyticMap):
    def __init__(self, coeffs):
        self.coeffs = series.as_series(coeffs)
        super().__init__([])

    def __call__(self, w):
        return series.evaluate(self.coeffs, w)

    def derivatives(self, w, order):
        w = np.asarray(w, dtype=complex)
        out = [series.evaluate(self.coeffs, w)]
        for k in range(1, order + 1):
            out.append(series.evaluate(derivative(self.coeffs, k), w))
        return out

    def holomorphic_on(self, disk):
        return True

    def compose_series(self, s, n):
        return series.compose(self.coeffs, s, n), 0.0


class Mobius(AnalyticMap):
    """``h(w) = (a w + b) / (c w + d)`` with ``ad - bc != 0``."""

    def __init__(self, a, b, c, d):
        self.a, self.b, self.c, self.d = (complex(x) for x in (a, b, c, d))
        if abs(self.det) < _EPS:
            raise ValueError("degenerate Moebius transformation")
        super().__init__([])

    @classmethod
    def from_matrix(cls, m):
        m = np.asarray(m, dtype=complex)
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    @property
    def matrix(self):
        return np.array([[self.a, self.b], [self.c, self.d]])

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    @property
    def pole(self):
        """Preimage of infinity (``math.inf`` for affine maps)."""
        return math.inf if self.c == 0 else -self.d / self.c

    def __call__(self, w):
        w = np.asarray(w, dtype=complex)
        return (self.a * w + self.b) / (self.c * w + self.d)

    def __matmul__(self, other):
        return Mobius.from_matrix(self.matrix @ other.matrix)

    def inverse(self):
        return Mobius(self.d, -self.b, -self.c, self.a)

    def derivatives(self, w, order):
        w = np.asarray(w, dtype=complex)
        out = [self(w)]
        den = self.c * w + self.d
        for k in range(1, order + 1):
            out.append((-1) ** (k - 1) * math.factorial(k) * self.c ** (k - 1) * self.det
                       / den ** (k + 1))
        return out

    def holomorphic_on(self, disk):
        p = self.pole
        return p is math.inf or abs(p - disk.center) > disk.radius

    def compose_series(self, s, n):
        s2 = series.as_series(s, 2 * n)
        num = self.a * s2
        num[0] += self.b
        den = self.c * s2
        den[0] += self.d
        full = series.div(num, den, 2 * n)
        return full[: n + 1], series.tail_bound(full, n)

    def __repr__(self):
        return f"Mobius({self.a:.6g}, {self.b:.6g}, {self.c:.6g}, {self.d:.6g})"


def compose_left(h, f, K=None, grid=None, check_injective=True, n=None):
    """Series of ``h o f`` truncated at degree ``n`` (default: ``f``'s degree).

    ``K`` is a :class:`Disk` containing ``f`` of the closed disk, inside the
    region where ``h`` is holomorphic and one-to-one.  Raises
    :class:`ContainmentError` when the sampled image leaves ``K``.
    """
    grid = grid or EvaluationGrid()
    if K is not None:
        ib = image_bound(f, grid)
        if not ib.within(K):
            raise ContainmentError(
                f"f(closed disk) leaves K: overshoot {ib.distance_outside(K):.3e}")
        if not h.holomorphic_on(K):
            raise ContainmentError("h is not holomorphic on K")
    h0 = h(0.0)
    if abs(h0) > 1e-12:
        raise ValueError(f"compose_left requires h(0) = 0, got {h0}")
    if check_injective:
        hp = h.derivatives(f(grid.nodes), 1)[1]
        if np.any(np.abs(hp) < 1e-12):
            warnings.warn("h' vanishes on f(grid): h o f may fail to be one-to-one",
                          RuntimeWarning, stacklevel=2)
    s, tail = h.compose_series(f.series, f.N if n is None else n)
    s[0] = 0.0
    return DiskMap.from_series(s, rho=f.rho, tail=f.tail + tail)


# --- univalence --------------------------------------------------------


@dataclass(frozen=True)
class UnivalenceReport:
    passed: bool
    reason: str = ""
    witness: tuple = field(default_factory=tuple)


def segment_crossings(pts, max_witnesses=1):
    """Index pairs ``(i, j)`` of crossing non-adjacent edges of a closed polyline."""
    p = np.asarray(pts, dtype=complex)
    q = np.roll(p, -1)
    n = len(p)
    d = q - p

    def cross(u, v):
        return u.real * v.imag - u.imag * v.real

    hits = []
    for i in range(n - 2):
        j = np.arange(i + 2, n if i > 0 else n - 1)
        if len(j) == 0:
            continue
        # bounding-box prefilter
        bx = (np.minimum(p[j].real, q[j].real) <= max(p[i].real, q[i].real)) & \
             (np.maximum(p[j].real, q[j].real) >= min(p[i].real, q[i].real)) & \
             (np.minimum(p[j].imag, q[j].imag) <= max(p[i].imag, q[i].imag)) & \
             (np.maximum(p[j].imag, q[j].imag) >= min(p[i].imag, q[i].imag))
        j = j[bx]
        if len(j) == 0:
            continue
        s1 = cross(d[i], p[j] - p[i])
        s2 = cross(d[i], q[j] - p[i])
        s3 = cross(d[j], p[i] - p[j])
        s4 = cross(d[j], q[i] - p[j])
        hit = (s1 * s2 <= 0) & (s3 * s4 <= 0)
        for jj in j[hit]:
            hits.append((i, int(jj)))
            if len(hits) >= max_witnesses:
                return hits
    return hits


def winding_number(curve, w):
    """Winding number of a closed polyline around the point(s) ``w``."""
    curve = np.asarray(curve, dtype=complex)
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    rel = curve[None, :] - w[:, None]
    ang = np.angle(np.roll(rel, -1, axis=1) / rel)
    return np.rint(ang.sum(axis=1) / (2 * np.pi)).astype(int)


def check_univalence(f, grid=None):
    """Sampled semi-decision for univalence on the closed disk.

    Fails with a critical point of ``f`` in the closed disk, or with a
    pair ``(z1, z2)`` on the circle whose boundary edges cross.  A pass
    means the sampled boundary is a simple curve winding once about
    ``f(0)``, which (argument principle) forces injectivity up to the
    sampling resolution.
    """
    grid = grid or EvaluationGrid()
    fp = derivative(f, 1)
    if len(series.trim(fp)) > 1:
        crit = np.roots(series.trim(fp)[::-1])
        inside = crit[np.abs(crit) <= 1.0 + 1e-12]
        if len(inside):
            z = complex(inside[np.argmin(np.abs(inside))])
            return UnivalenceReport(False, "derivative-zero", (z,))
    if abs(fp[0]) < 1e-14:
        return UnivalenceReport(False, "derivative-zero", (0j,))
    nodes_fp = series.evaluate(fp, grid.nodes)
    k = int(np.argmin(np.abs(nodes_fp)))
    if abs(nodes_fp[k]) < 1e-12:
        return UnivalenceReport(False, "derivative-zero", (complex(grid.nodes[k]),))
    ib = image_bound(f, grid)
    hits = segment_crossings(ib.boundary)
    if hits:
        i, j = hits[0]
        return UnivalenceReport(False, "boundary-self-intersection",
                                (complex(np.exp(1j * ib.theta[i])), complex(np.exp(1j * ib.theta[j]))))
    wn = int(winding_number(ib.boundary, 0.0)[0])
    if wn != 1:
        return UnivalenceReport(False, f"winding-number-{wn}", ())
    return UnivalenceReport(True)

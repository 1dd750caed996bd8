"""Non-overlapping tuples of disk maps into the Riemann sphere with punctures.

Points live on the extended plane (``math.inf`` is the point at infinity).
Charts are Moebius maps ``zeta_i`` sending the puncture ``p_i`` to 0; a
tuple element ``phi_i`` is stored through its chart as the disk map
``psi_i = zeta_i o phi_i``.
"""

import math
from dataclasses import dataclass, field

import numpy as np
import shapely
from shapely.geometry import Point, Polygon
from shapely.ops import nearest_points

from .curves import HolomorphicCurve, cr_residual, curve_at
from .disk_maps import (DEFAULT_N, ContainmentError, Disk, EvaluationGrid, Mobius, compose_left, image_bound,
                        winding_number)
from .operators import OneDifferential, pre_schwarzian

INF = math.inf


def is_inf(p):
    return isinstance(p, (int, float)) and math.isinf(p) or (
        isinstance(p, complex) and (math.isinf(p.real) or math.isinf(p.imag)))


def spherical_distance(z, w):
    """Great-circle distance on the unit sphere between two points of the extended plane."""
    if is_inf(z) and is_inf(w):
        return 0.0
    if is_inf(z):
        z, w = w, z
    if is_inf(w):
        return 2 * math.atan2(1.0, abs(z))
    z, w = complex(z), complex(w)
    return 2 * math.atan2(abs(z - w), abs(1 + z.conjugate() * w))


def sphere_rotation_to_zero(p):
    """Isometry of the sphere sending ``p`` to 0."""
    if is_inf(p):
        return Mobius(0, 1, 1, 0)
    p = complex(p)
    return Mobius(1, -p, p.conjugate(), 1)


def mobius_apply(T, z):
    """``T(z)`` on the extended plane, scalar ``z``."""
    if is_inf(z):
        return INF if T.c == 0 else T.a / T.c
    z = complex(z)
    den = T.c * z + T.d
    if abs(den) == 0:
        return INF
    return (T.a * z + T.b) / den


# ------------------------------------------------------------------ config


@dataclass(frozen=True)
class PuncturedSphereConfig:
    points: tuple
    separation: float

    @property
    def n(self):
        return len(self.points)


def make_config(points):
    """Validated configuration of distinct points on the sphere."""
    pts = tuple(INF if is_inf(p) else complex(p) for p in points)
    if not pts:
        raise ValueError("need at least one distinguished point")
    sep = math.inf
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            d = spherical_distance(pts[i], pts[j])
            if d <= 1e-12:
                raise ValueError(f"duplicate points {pts[i]} and {pts[j]}")
            sep = min(sep, d)
    return PuncturedSphereConfig(pts, sep)


@dataclass(frozen=True)
class LocalChart:
    """Moebius chart about ``point``.

    ``b_radius`` is the spherical radius of the round domain ``B`` about
    the point; ``K`` is the closed disk ``|w| <= k_radius`` in chart
    coordinates.
    """

    index: int
    point: object
    zeta: Mobius
    b_radius: float
    k_radius: float = 0.9

    def __post_init__(self):
        z0 = mobius_apply(self.zeta, self.point)
        if is_inf(z0) or abs(z0) > 1e-12:
            raise ValueError("chart must send its puncture to 0")

    @property
    def K(self):
        return Disk(0.0, self.k_radius)

    def inverse(self):
        return self.zeta.inverse()

    def rescaled(self, factor, k_radius=None):
        """Chart ``factor * zeta``."""
        return self.composed(Mobius(factor, 0, 0, 1), k_radius or self.k_radius * abs(factor))

    def composed(self, T, k_radius=None):
        """Chart ``T o zeta`` (``T`` must fix 0)."""
        if abs(T(0.0)) > 1e-14:
            raise ValueError("chart change must fix 0")
        return LocalChart(self.index, self.point, T @ self.zeta, self.b_radius,
                          self.k_radius if k_radius is None else k_radius)

    def same_as(self, other):
        a, b = self.zeta.matrix, other.zeta.matrix
        s = a.ravel()[np.argmax(np.abs(a))] / b.ravel()[np.argmax(np.abs(a))]
        return np.allclose(a, s * b, atol=1e-14)


def default_chart(config, i, b_factor=1.0 / 3.0, k_radius=0.9):
    """Chart ``zeta_i`` sending ``B_i`` (spherical radius ``b_factor`` times the
    distance to the nearest other point) onto the unit disk."""
    p = config.points[i]
    others = [spherical_distance(p, q) for j, q in enumerate(config.points) if j != i]
    delta = b_factor * (min(others) if others else math.pi)
    r = math.tan(delta / 2)
    zeta = Mobius(1.0 / r, 0, 0, 1) @ sphere_rotation_to_zero(p)
    return LocalChart(i, p, zeta, delta, k_radius)


def default_atlas(config, **kw):
    return [default_chart(config, i, **kw) for i in range(config.n)]


def domains_disjoint(charts):
    for a in range(len(charts)):
        for b in range(a + 1, len(charts)):
            d = spherical_distance(charts[a].point, charts[b].point)
            if d <= charts[a].b_radius + charts[b].b_radius:
                return False
    return True


# ---------------------------------------------------------------- tuples


@dataclass(frozen=True, eq=False)
class NonOverlappingTuple:
    """``maps[i]`` is ``psi_i = zeta_i o phi_i`` in ``charts[i]``."""

    charts: tuple
    maps: tuple
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if len(self.charts) != len(self.maps):
            raise ValueError("one chart per map")
        object.__setattr__(self, "charts", tuple(self.charts))
        object.__setattr__(self, "maps", tuple(self.maps))

    def check_containment(self, grid=None):
        for ch, psi in zip(self.charts, self.maps):
            if not image_bound(psi, grid).within(ch.K):
                raise ContainmentError(f"psi_{ch.index}(closed disk) leaves K_{ch.index}")

    def surface_points(self, i, theta):
        """``phi_i(e^{i theta}) = zeta_i^{-1}(psi_i(e^{i theta}))``."""
        return self.charts[i].inverse()(self.maps[i](np.exp(1j * np.asarray(theta))))

    def boundary_polylines(self, n=1024):
        key = ("poly", n)
        if key not in self._cache:
            theta = 2 * np.pi * np.arange(n) / n
            self._cache[key] = [self.surface_points(i, theta) for i in range(len(self.maps))]
        return self._cache[key]


def lift(tuple_data, atlas, grid=None):
    """Express each chart-tagged ``(chart, psi)`` in the chart of ``atlas`` with the same index."""
    out = []
    for (chart, psi), target in zip(tuple_data, atlas):
        if not image_bound(psi, grid).within(chart.K):
            raise ContainmentError(f"psi_{chart.index}(closed disk) leaves K_{chart.index}")
        out.append(psi if chart.same_as(target) else transition(chart, target, psi, grid))
    return out


def _fibonacci_sphere(n):
    k = np.arange(n) + 0.5
    zc = 1 - 2 * k / n
    ang = np.pi * (1 + 5 ** 0.5) * k
    rad = np.sqrt(1 - zc ** 2)
    # stereographic projection from the north pole
    return rad * np.exp(1j * ang) / (1 - zc)


@dataclass
class NonOverlapReport:
    status: str
    pairs: list

    @property
    def passed(self):
        return self.status == "pass"


def _polyline_error(pts, mids):
    a, b = pts, np.roll(pts, -1)
    d = b - a
    t = np.clip(np.real((mids - a) * np.conj(d)) / np.maximum(np.abs(d) ** 2, 1e-300), 0, 1)
    return float(np.max(np.abs(mids - (a + t * d))))


def check_nonoverlap(tup, n=1024):
    """Pairwise test that the closed images are disjoint.

    Works in a sphere-rotated coordinate where every image is bounded.
    A pair passes when its polygons are farther apart than the safety
    margin (twice the summed polyline discretization errors), fails when
    they still overlap after shrinking by the margin, and is otherwise
    indeterminate.
    """
    theta = 2 * np.pi * np.arange(n) / n
    mid = theta + np.pi / n
    m = len(tup.maps)
    boundaries = [tup.maps[i](np.exp(1j * theta)) for i in range(m)]
    for i, b in enumerate(boundaries):
        if not np.all(np.isfinite(b)) or np.ptp(np.abs(b)) == 0 and abs(b[0]) == 0:
            raise ValueError(f"degenerate boundary polyline for map {i}")

    def outside_all(zs):
        ok = True
        for ch, bnd in zip(tup.charts, boundaries):
            w = mobius_apply(ch.zeta, zs)
            if not is_inf(w) and winding_number(bnd, w)[0] != 0:
                ok = False
                break
        return ok

    pole = None
    for cand in [INF] + list(_fibonacci_sphere(64)):
        if outside_all(cand):
            pole = cand
            break
    if pole is None:
        raise ValueError("images cover every probe point of the sphere")
    T = Mobius(1, 0, 0, 1) if is_inf(pole) else sphere_rotation_to_zero(
        -1.0 / np.conj(pole) if pole != 0 else INF)
    Tinv = T.inverse()
    polys, errs = [], []
    for i in range(m):
        pts = T(tup.surface_points(i, theta))
        mids = T(tup.surface_points(i, mid))
        errs.append(_polyline_error(pts, mids))
        polys.append(Polygon(np.column_stack([pts.real, pts.imag])))
    pairs, worst = [], "pass"
    rank = {"pass": 0, "indeterminate": 1, "fail": 2}
    for i in range(m):
        for j in range(i + 1, m):
            margin = 2 * (errs[i] + errs[j])
            d = polys[i].distance(polys[j])
            if d > margin:
                status = "pass"
                pa, pb = nearest_points(polys[i], polys[j])
                wit = [complex(pa.x, pa.y), complex(pb.x, pb.y)]
            else:
                core = polys[i].buffer(-margin).intersection(polys[j].buffer(-margin))
                if not core.is_empty and core.area > 0:
                    status = "fail"
                    rp = core.representative_point()
                    wit = [complex(rp.x, rp.y)]
                else:
                    status = "indeterminate"
                    pa, pb = nearest_points(polys[i], polys[j])
                    wit = [complex(pa.x, pa.y), complex(pb.x, pb.y)]
            wit = [mobius_apply(Tinv, w) for w in wit]
            pairs.append({"i": i, "j": j, "status": status, "distance": float(d),
                          "margin": margin, "witness": wit})
            if rank[status] > rank[worst]:
                worst = status
    return NonOverlapReport(worst, pairs)


# ------------------------------------------------------------ transitions


def chart_change(chart, chart2):
    """``zeta' o zeta^{-1}`` as a Moebius map."""
    return chart2.zeta @ chart.zeta.inverse()


def transition(chart, chart2, psi, grid=None, check=True, n=None):
    """``zeta' o zeta^{-1} o psi``, the change of chart on the model space.

    The result has degree ``n``, by default ``psi``'s degree but at least
    ``DEFAULT_N`` when the chart change is not affine.
    """
    if n is None:
        n = psi.N if _is_affine_change(chart, chart2) else max(psi.N, DEFAULT_N)
    h = chart_change(chart, chart2)
    if abs(h(0.0)) > 1e-12:
        raise ValueError("charts must share their puncture")
    if check:
        if not h.holomorphic_on(chart.K):
            raise ContainmentError("zeta^{-1}(K) meets the pole of the target chart")
        return compose_left(h, psi, K=chart.K, grid=grid, n=n)
    return compose_left(h, psi, check_injective=False, n=n)


def _is_affine_change(chart, chart2):
    return abs(chart_change(chart, chart2).c) < 1e-15


def transition_holomorphy_check(chart, chart2, psi, directions, eps=1e-4, grid=None, n=DEFAULT_N):
    """Cauchy-Riemann residual of the transition in chi-coordinates.

    Each direction is ``(phi, dc)`` (or a bare differential, ``dc = 0``);
    the base point moves along ``chi^{-1}(A(psi) + t phi, psi'(0) + t dc)``
    and the directional derivatives along ``t`` real and imaginary are
    compared.
    """
    grid = grid or EvaluationGrid(halvings=6, n_angles=64)
    z = grid.nodes
    weight = 1 - np.abs(z) ** 2
    results = []
    for d in directions:
        phi, dc = (d, 0.0) if isinstance(d, OneDifferential) else d
        c = HolomorphicCurve(psi, phi, [psi.a1, dc]).padded(n)
        cache = {}

        def image(t, c=c, cache=cache):
            if t not in cache:
                cache[t] = transition(chart, chart2, curve_at(c, t), check=False, n=n)
            return cache[t]

        res_A = cr_residual(lambda t: pre_schwarzian(image(t)), eps, z, weight)
        a = {t: image(t).a1 for t in (eps, -eps, 1j * eps, -1j * eps)}
        d_re = (a[eps] - a[-eps]) / (2 * eps)
        d_im = (a[1j * eps] - a[-1j * eps]) / (2 * eps)
        results.append(res_A + abs(d_im - 1j * d_re))
    return {"residuals": results, "max": float(max(results)) if results else 0.0}


def point_in_image(tup, i, w):
    """Whether the surface point ``w`` lies in the closed image of ``phi_i`` (sampled)."""
    bnd = tup.maps[i](np.exp(2j * np.pi * np.arange(1024) / 1024))
    zw = mobius_apply(tup.charts[i].zeta, w)
    if is_inf(zw):
        return False
    return bool(winding_number(bnd, zw)[0] != 0) or bool(
        shapely.distance(Polygon(np.column_stack([bnd.real, bnd.imag])), Point(zw.real, zw.imag)) == 0)

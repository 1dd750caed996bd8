"""Holomorphic curves ``t -> f_t`` through a disk map and the alpha terms
that control ``A(h o f_t)``.

A curve is the chi-preimage of ``(A(f0) + t phi, q(t))``:

    f_t(z) = q(t)/f0'(0) * int_0^z f0'(u) exp(t Phi(u)) du,   Phi = int phi.

All ``t``-derivatives are taken in closed form from that formula.
"""

from dataclasses import dataclass

import numpy as np

from . import series
from .disk_maps import DiskMap, DomainError, EvaluationGrid, image_bound
from .metrics import sup_norm
from .operators import OneDifferential, pre_schwarzian


@dataclass(frozen=True, eq=False)
class HolomorphicCurve:
    f0: DiskMap
    phi: OneDifferential
    q: np.ndarray
    t_domain: float = np.inf

    def __post_init__(self):
        q = np.atleast_1d(np.asarray(self.q, dtype=complex))
        if abs(q[0] - self.f0.a1) > 1e-12 * max(1.0, abs(self.f0.a1)):
            raise ValueError("q(0) must equal f0'(0)")
        object.__setattr__(self, "q", q)

    @classmethod
    def constant_q(cls, f0, phi, t_domain=np.inf):
        return cls(f0, phi, [f0.a1], t_domain)

    @property
    def n(self):
        return self.f0.N

    def q_derivs(self, t):
        """``(q(t), q'(t), q''(t))``."""
        d1 = series.deriv(self.q, 1)
        d2 = series.deriv(self.q, 2)
        return tuple(complex(series.evaluate(c, t)) for c in (self.q, d1, d2))

    def with_domain(self, t_domain):
        return HolomorphicCurve(self.f0, self.phi, self.q, t_domain)

    def padded(self, n):
        """Same curve with the base map zero-padded to degree ``n``; ``f_t`` is
        truncated at the base degree, so a low-degree ``f0`` would freeze it."""
        if self.f0.N >= n:
            return self
        f0 = DiskMap(series.as_series(self.f0.coeffs, n - 1), rho=self.f0.rho, tail=self.f0.tail)
        return HolomorphicCurve(f0, self.phi, self.q, self.t_domain)

    def _check(self, t):
        if abs(t) >= self.t_domain:
            raise DomainError(f"|t| = {abs(t):g} outside curve domain {self.t_domain:g}")

    def _pieces(self, t):
        """Series of ``F'``, ``F_t'``, ``F_tt'`` to degree ``n - 1``."""
        n = self.n
        Phi = series.integ(series.as_series(self.phi.coeffs, n))
        e = series.exp(t * Phi, n - 1)
        fp0 = series.as_series(series.deriv(self.f0.series, 1), n - 1)
        F1 = series.mul(fp0, e, n - 1)
        Ft1 = series.mul(F1, Phi, n - 1)
        Ftt1 = series.mul(Ft1, Phi, n - 1)
        return F1, Ft1, Ftt1


def curve_at(c, t):
    """The disk map ``f_t`` truncated at the base map's degree."""
    c._check(t)
    F1, _, _ = c._pieces(t)
    qt = c.q_derivs(t)[0]
    s = qt / c.f0.a1 * series.integ(F1)
    return DiskMap.from_series(s, rho=c.f0.rho)


@dataclass(frozen=True)
class CurveJet:
    """Values at sample points ``z`` of ``f_t, f_t'`` and their first two ``t``-derivatives."""

    z: np.ndarray
    f: np.ndarray
    fp: np.ndarray
    fdot: np.ndarray
    fdotp: np.ndarray
    fddot: np.ndarray
    fddotp: np.ndarray


def curve_t_derivatives(c, t, z):
    c._check(t)
    z = np.asarray(z, dtype=complex)
    F1, Ft1, Ftt1 = c._pieces(t)
    q0, q1, q2 = c.q_derivs(t)
    a1 = c.f0.a1

    def ev(s):
        return series.evaluate(s, z)

    F, Ft, Ftt = (ev(series.integ(s)) for s in (F1, Ft1, Ftt1))
    dF, dFt, dFtt = ev(F1), ev(Ft1), ev(Ftt1)
    return CurveJet(
        z=z,
        f=q0 / a1 * F,
        fp=q0 / a1 * dF,
        fdot=(q1 * F + q0 * Ft) / a1,
        fdotp=(q1 * dF + q0 * dFt) / a1,
        fddot=(q2 * F + 2 * q1 * Ft + q0 * Ftt) / a1,
        fddotp=(q2 * dF + 2 * q1 * dFt + q0 * dFtt) / a1,
    )


# ------------------------------------------------------------------ alpha


def h_factors(h, w):
    """``(h''/h', (h''/h')', (h''/h')'')`` at ``w``, each written through ``h', ..., h''''``.

    The second derivative of ``h''/h'`` is
    ``h''''/h' - 3 h''' h''/h'^2 + 2 (h''/h')^3``.
    """
    _, h1, h2, h3, h4 = h.derivatives(w, 4)
    if np.any(np.abs(h1) < 1e-14):
        raise ZeroDivisionError("h' vanishes on the image")
    A = h2 / h1
    A1 = h3 / h1 - A ** 2
    A2 = h4 / h1 - 3 * h3 * h2 / h1 ** 2 + 2 * A ** 3
    return A, A1, A2


def alpha(h, c, t, z):
    """``alpha(t) = (h''/h') o f_t * f_t'`` sampled at ``z``."""
    j = curve_t_derivatives(c, t, z)
    A, _, _ = h_factors(h, j.f)
    return A * j.fp


def alpha_dot(h, c, t, z):
    j = curve_t_derivatives(c, t, z)
    A, A1, _ = h_factors(h, j.f)
    return A1 * j.fdot * j.fp + A * j.fdotp


def alpha_ddot(h, c, t, z):
    j = curve_t_derivatives(c, t, z)
    A, A1, A2 = h_factors(h, j.f)
    return (A2 * j.fdot ** 2 * j.fp
            + A1 * (j.fddot * j.fp + 2 * j.fdot * j.fdotp)
            + A * j.fddotp)


# ------------------------------------------------------------- domain


def containment_radius(f0, phi, q, K, t_max=1.0, n_dirs=8, grid=None, iters=40):
    """Largest ``r <= t_max`` with ``f_t`` of the closed disk inside ``K`` for sampled ``|t| <= r``.

    Bisection on ``r``; each trial checks ``n_dirs`` directions on the
    circle ``|t| = r`` and at half that radius.
    """
    grid = grid or EvaluationGrid()
    probe = HolomorphicCurve(f0, phi, q)
    dirs = np.exp(2j * np.pi * np.arange(n_dirs) / n_dirs)

    def ok(r):
        for t in np.concatenate([r * dirs, 0.5 * r * dirs]):
            if not image_bound(curve_at(probe, t), grid).within(K):
                return False
        return True

    if not image_bound(f0, grid).within(K):
        raise ValueError("base map image is not inside K")
    if ok(t_max):
        return float(t_max)
    lo, hi = 0.0, float(t_max)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if ok(mid) else (lo, mid)
    return lo


def fitted_curve(f0, phi, q, K, t_max=1.0):
    q = np.atleast_1d(np.asarray(q, dtype=complex))
    r = containment_radius(f0, phi, q, K, t_max)
    return HolomorphicCurve(f0, phi, q, r)


# --------------------------------------------------------- Gateaux check


@dataclass(frozen=True)
class GateauxReport:
    ts: np.ndarray
    residuals: np.ndarray
    slope: float
    bound_ok: bool
    bound_ratio: float
    cr_residual: float

    def rows(self):
        return [(float(abs(t)), float(r)) for t, r in zip(self.ts, self.residuals)]


def _default_check_grid():
    return EvaluationGrid(halvings=6, substeps=4, n_angles=64)


def gateaux_check(h, c, ts=(1e-2, 1e-3, 1e-4, 1e-5), grid=None, direction=1.0,
                  fd_step=1e-4, n_segment=17):
    """Difference-quotient residual of ``t -> A(h o f_t)`` against ``alpha_dot + phi``.

    ``A(h o f_t)`` is computed independently of the alpha formulas: the
    series of ``h o f_t`` is formed and its pre-Schwarzian evaluated.
    Also checks the second-order remainder bound at every grid node and
    the complex-linearity of the directional derivative at ``t = 0``.
    """
    from .disk_maps import compose_left

    grid = grid or _default_check_grid()
    z = grid.nodes
    weight = 1.0 - np.abs(z) ** 2
    direction = complex(direction) / abs(direction)
    ts = np.asarray(ts, dtype=float) * direction

    def G(t):
        return pre_schwarzian(compose_left(h, curve_at(c, t), check_injective=False))

    G0 = G(0.0)
    g0z = G0(z)
    phiz = c.phi(z)
    a0 = alpha(h, c, 0.0, z)
    residuals, ratios = [], []
    for t in ts:
        Gt = G(t)
        adot_t = alpha_dot(h, c, t, z)
        res = (Gt(z) - g0z) / t - (adot_t + phiz)

        def res_fn(zz, Gt=Gt, t=t):
            return (Gt(zz) - G0(zz)) / t - (alpha_dot(h, c, t, zz) + c.phi(zz))

        est = sup_norm(OneDifferential([0.0], res_fn), grid, max_refinements=0)
        residuals.append(max(est.value, float(np.max(weight * np.abs(res)))))

        at = alpha(h, c, t, z)
        lhs = np.abs(at - a0 - t * adot_t)
        # cancellation floor of the three-term difference
        lhs = np.where(lhs > 16 * np.finfo(float).eps * (np.abs(at) + np.abs(a0) + np.abs(t * adot_t)),
                       lhs, 0.0)
        ss = np.concatenate([np.linspace(0, 1, n_segment) * t,
                             abs(t) * np.exp(2j * np.pi * np.arange(8) / 8)])
        sup_add = np.max(np.abs(np.array([alpha_ddot(h, c, s, z) for s in ss])), axis=0)
        rhs = sup_add * abs(t) ** 2
        with np.errstate(divide="ignore", invalid="ignore"):
            r = np.where(lhs > 0, lhs / rhs, 0.0)
        ratios.append(float(np.max(r)))

    residuals = np.array(residuals)
    pos = residuals > 1e-13
    if pos.sum() >= 2:
        slope = float(np.polyfit(np.log(np.abs(ts[pos])), np.log(residuals[pos]), 1)[0])
    else:
        slope = float("nan")
    cr = cr_residual(lambda t: G(t), fd_step, z, weight)
    ratio = float(np.max(ratios)) if ratios else 0.0
    return GateauxReport(ts, residuals, slope, bool(ratio <= 1.0), ratio, cr)


def cr_residual(F, eps, z, weight):
    """Weighted sup of ``D_i - i D_1`` for central differences of ``t -> F(t)``.

    ``F(t)`` returns a callable of ``z``; zero for a complex-differentiable ``F``.
    """
    d_re = (F(eps)(z) - F(-eps)(z)) / (2 * eps)
    d_im = (F(1j * eps)(z) - F(-1j * eps)(z)) / (2 * eps)
    return float(np.max(weight * np.abs(d_im - 1j * d_re)))


# ------------------------------------------------------------ estimates


def curve_estimates(h, c, K, r1, r_prime, r2, grid=None, n_ring=12, n_bdry=256):
    """Measured constants and the three uniform estimates along a curve.

    Returns a dict with ``M1, M2, M3, C1, C2, C3`` and boolean checks for
    the Schwarz-lemma bound, the Cauchy estimate in ``s`` and the final
    bound on the weighted ``alpha''``.
    """
    if not 0 < r2 < r_prime < r1 < c.t_domain:
        raise ValueError("need 0 < r2 < r' < r1 < t_domain")
    grid = grid or _default_check_grid()
    zb = np.exp(2j * np.pi * np.arange(n_bdry) / n_bdry)
    z = np.concatenate([grid.nodes, zb])
    weight = 1.0 - np.abs(z) ** 2

    def s_samples(r):
        rings = [0.0] + [r * np.exp(2j * np.pi * np.arange(n_ring) / n_ring) * frac
                         for frac in (0.5, 1.0)]
        return np.concatenate([np.atleast_1d(x) for x in rings])

    jets1 = [curve_t_derivatives(c, s, z) for s in s_samples(r1)]
    M1 = max(float(np.max(np.abs(j.f))) for j in jets1)
    schwarz = max(float(np.max(weight * np.abs(j.fp))) for j in jets1)

    jets2 = [curve_t_derivatives(c, s, z) for s in s_samples(r2)]
    fdot_sup = max(float(np.max(np.abs(j.fdot))) for j in jets2)
    cauchy_bound = r_prime * M1 / (r_prime - r2) ** 2

    M1w = max(M1, schwarz)
    M2 = max(max(float(np.max(np.abs(j.fdot))) for j in jets2),
             max(float(np.max(weight * np.abs(j.fdotp))) for j in jets2))
    M3 = max(max(float(np.max(np.abs(j.fddot))) for j in jets2),
             max(float(np.max(weight * np.abs(j.fddotp))) for j in jets2))
    wk = K.center + K.radius * np.exp(2j * np.pi * np.arange(1024) / 1024)
    A, A1, A2 = h_factors(h, wk)
    C1, C2, C3 = (float(np.max(np.abs(x))) for x in (A2, A1, A))
    final_bound = C1 * M1w * M2 ** 2 + C2 * (M3 * M1w + 2 * M2 ** 2) + C3 * M3
    add_sup = 0.0
    for j in jets2:
        a, a1, a2 = h_factors(h, j.f)
        add = a2 * j.fdot ** 2 * j.fp + a1 * (j.fddot * j.fp + 2 * j.fdot * j.fdotp) + a * j.fddotp
        add_sup = max(add_sup, float(np.max(weight * np.abs(add))))
    return {
        "M1": M1, "M2": M2, "M3": M3, "C1": C1, "C2": C2, "C3": C3,
        "schwarz_sup": schwarz, "schwarz_ok": schwarz <= M1 + 1e-9,
        "fdot_sup": fdot_sup, "cauchy_bound": cauchy_bound, "cauchy_ok": fdot_sup <= cauchy_bound,
        "alpha_ddot_sup": add_sup, "final_bound": final_bound, "final_ok": add_sup <= final_bound,
    }

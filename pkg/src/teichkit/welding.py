"""Conformal welding of smooth near-identity circle maps.

``weld(gamma, m)`` finds ``f`` on the disk and ``g`` on the exterior disk
with ``g(exp(i gamma(theta))) = f(exp(i theta))``, ``f(0) = 0``,
``|f'(0)| = e^m``, ``g(inf) = inf`` and ``g'(inf) > 0``.  ``unweld`` goes
back: it computes the exterior map of ``f``'s image and reads ``gamma``
off the boundary correspondence.

Both directions work on Fourier coefficients sampled at equispaced angles.
"""

from dataclasses import dataclass, field

import numpy as np

from .disk_maps import DiskMap, segment_crossings, winding_number

L1_BUDGET = 0.1
MIN_MARGIN = 0.5


class AdmissibilityError(ValueError):
    """Circle map outside the supported near-identity class."""


class WeldingError(RuntimeError):
    """Solver did not reach its residual tolerance."""


@dataclass(frozen=True, eq=False)
class CircleMap:
    """Lift ``gamma(theta) = theta + u(theta)`` of a circle homeomorphism.

    ``u_coeffs[k]`` is the ``k``-th Fourier coefficient of the real
    periodic function ``u`` (``k = 0..M``; negative modes are conjugates).
    """

    u_coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.array(self.u_coeffs, dtype=complex))
        if abs(c[0].imag) > 1e-12:
            raise ValueError("constant Fourier mode of u must be real")
        c[0] = c[0].real
        c.setflags(write=False)
        object.__setattr__(self, "u_coeffs", c)
        if self.margin() <= 0:
            raise ValueError("gamma is not strictly increasing")

    @classmethod
    def identity(cls):
        return cls([0.0])

    @classmethod
    def rotation(cls, theta0):
        return cls([theta0])

    @classmethod
    def from_samples(cls, u_values, modes):
        c = np.fft.rfft(np.asarray(u_values, dtype=float)) / len(u_values)
        return cls(c[: modes + 1])

    @property
    def modes(self):
        return len(self.u_coeffs) - 1

    def u(self, theta):
        theta = np.asarray(theta, dtype=float)
        k = np.arange(1, self.modes + 1)
        osc = np.exp(1j * np.multiply.outer(theta, k)) @ self.u_coeffs[1:] if self.modes else 0.0
        return self.u_coeffs[0].real + 2 * np.real(osc)

    def du(self, theta):
        theta = np.asarray(theta, dtype=float)
        k = np.arange(1, self.modes + 1)
        if not self.modes:
            return np.zeros(theta.shape)
        return 2 * np.real(np.exp(1j * np.multiply.outer(theta, k)) @ (1j * k * self.u_coeffs[1:]))

    def __call__(self, theta):
        return np.asarray(theta, dtype=float) + self.u(theta)

    def margin(self, n=2048):
        theta = 2 * np.pi * np.arange(n) / n
        return float(np.min(1.0 + self.du(theta)))

    def l1_mass(self, include_rotation=False):
        """``sum_{k != 0} |c_k|``; the rotation mode ``c_0`` only if asked."""
        osc = 2 * float(np.sum(np.abs(self.u_coeffs[1:])))
        return osc + (abs(self.u_coeffs[0]) if include_rotation else 0.0)


@dataclass(frozen=True, eq=False)
class ExteriorMap:
    """``g(w) = b w + b0 + sum_{k>=1} coeffs[k-1] w^{-k}`` on ``|w| > 1``."""

    b: float
    b0: complex
    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", np.asarray(self.coeffs, dtype=complex))
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "b0", complex(self.b0))

    def __call__(self, w):
        w = np.asarray(w, dtype=complex)
        inv = 1.0 / w
        acc = np.zeros_like(w)
        for c in self.coeffs[::-1]:
            acc = (acc + c) * inv
        return self.b * w + self.b0 + acc

    def deriv(self, w):
        w = np.asarray(w, dtype=complex)
        k = np.arange(1, len(self.coeffs) + 1)
        out = np.full(w.shape, self.b, dtype=complex)
        for kk, c in zip(k, self.coeffs):
            out -= kk * c * w ** (-kk - 1)
        return out

    def scaled(self, s):
        return ExteriorMap(self.b * s, self.b0 * s, self.coeffs * s)


@dataclass(frozen=True, eq=False)
class WeldingPair:
    f: DiskMap
    g: ExteriorMap
    m: float
    info: dict = field(default_factory=dict)


def check_admissible(gamma, budget=L1_BUDGET, min_margin=MIN_MARGIN):
    mass, margin = gamma.l1_mass(), gamma.margin()
    if mass > budget:
        raise AdmissibilityError(f"l1 mass {mass:.4g} of u exceeds budget {budget}")
    if margin < min_margin:
        raise AdmissibilityError(f"monotonicity margin {margin:.4g} below {min_margin}")


def decay_radius(coeffs, floor=1e-13, lo=1.01, hi=10.0):
    """Radius of convergence estimated from the geometric decay of ``|a_k|``."""
    a = np.abs(np.asarray(coeffs))
    k = np.arange(1, len(a) + 1)
    keep = (a > floor * a.max()) & (k >= 2)
    if keep.sum() < 3:
        return hi
    slope = np.polyfit(k[keep], np.log(a[keep]), 1)[0]
    return float(np.clip(np.exp(-slope), lo, hi))


def _weld_system(gamma, K, n):
    theta = 2 * np.pi * np.arange(n) / n
    eg = np.exp(1j * gamma(theta))
    kf = np.arange(1, K + 1)
    Ef = np.exp(1j * np.outer(theta, kf))
    Eg = np.exp(-1j * np.outer(gamma(theta), np.arange(0, K + 1)))
    J = np.hstack([-Ef, Eg])
    return J, eg


def _solve_unit(gamma, K, tol, max_iter, x0=None):
    n = 4 * K
    J, rhs = _weld_system(gamma, K, n)
    x = np.zeros(J.shape[1], dtype=complex) if x0 is None else np.array(x0, dtype=complex)
    res = J @ x + rhs
    it = 0
    for it in range(1, max_iter + 1):
        dx = np.linalg.lstsq(J, res, rcond=None)[0]
        x = x - dx
        res = J @ x + rhs
        if np.max(np.abs(dx)) < tol:
            break
    a = x[:K]
    g = ExteriorMap(1.0, x[K], x[K + 1:])
    return a, g, it


def seam_residual(f, g, gamma, n=256, offset=0.5):
    theta = 2 * np.pi * (np.arange(n) + offset) / n
    return np.abs(g(np.exp(1j * gamma(theta))) - f(np.exp(1j * theta)))


def weld(gamma, m=0.0, n_coeffs=64, max_coeffs=512, tol=1e-10, max_iter=6,
         budget=L1_BUDGET, min_margin=MIN_MARGIN, x0=None):
    """Welding pair for ``gamma`` normalized by ``|f'(0)| = e^m``.

    The seam equation is affine in the joint coefficients once ``g'(inf)``
    is pinned to 1, so the Newton step is a least-squares solve and
    converges after one step up to round-off; the resolution ``n_coeffs``
    doubles until the seam residual on offset nodes drops below ``tol``.
    The pair is then scaled by the positive factor ``e^m / |a_1|``.
    """
    check_admissible(gamma, budget, min_margin)
    K = n_coeffs
    while True:
        start = x0 if x0 is not None and len(x0) == 2 * K + 1 else None
        a, g, iters = _solve_unit(gamma, K, tol * 1e-3, max_iter, start)
        f = DiskMap(a, rho=decay_radius(a))
        resid = float(np.max(seam_residual(f, g, gamma)))
        if resid <= tol * max(1.0, abs(a[0])) or 2 * K > max_coeffs:
            break
        K *= 2
    if resid > tol * max(1.0, abs(a[0])):
        raise WeldingError(f"seam residual {resid:.3e} above tolerance at {K} coefficients")
    if abs(a[0]) < 1e-12:
        raise WeldingError("degenerate welding solution: f'(0) = 0")
    s = np.exp(m) / abs(a[0])
    f = DiskMap(a * s, rho=f.rho)
    g = g.scaled(s)
    return WeldingPair(f, g, float(m), {"n_coeffs": K, "iterations": iters,
                                        "residual": resid * s})


def verify_welding(pair, gamma, n=1024):
    """Seam and normalization residuals of a welding pair."""
    r = seam_residual(pair.f, pair.g, gamma, n=n, offset=0.0)
    theta = 2 * np.pi * np.arange(n) / n
    boundary = pair.f(np.exp(1j * theta))
    outer = pair.g(1.05 * np.exp(1j * theta[::8]))
    inner = pair.f(0.95 * np.exp(1j * theta[::8]))
    complementary = bool(np.all(winding_number(boundary, outer) == 0)
                         and np.all(winding_number(boundary, inner) == 1))
    return {
        "sup": float(np.max(r)),
        "l2": float(np.sqrt(np.mean(r ** 2))),
        "f0": float(abs(pair.f(0.0))),
        "scale": float(abs(abs(pair.f.a1) - np.exp(pair.m))),
        "g_inf_positive": bool(pair.g.b > 0),
        "complementary": complementary,
    }


# ------------------------------------------------------------------ inverse


def _u_basis(theta, K):
    k = np.arange(1, K + 1)
    return np.hstack([np.ones((len(theta), 1)), np.cos(np.outer(theta, k)), np.sin(np.outer(theta, k))])


def unweld(f, u_modes=48, g_coeffs=96, tol=1e-12, max_iter=40, return_info=False):
    """``(gamma, m)`` with ``gamma = g^{-1} o f`` on the circle and ``m = log|f'(0)|``.

    ``g`` is the exterior map of the complement of ``f`` of the closed
    disk, normalized by ``g(inf) = inf``, ``g'(inf) > 0``.  Solved by
    Gauss-Newton on the Fourier coefficients of ``u = gamma - theta`` and
    of ``g`` jointly, starting from the rotation ``arg f'(0)``.
    """
    nb = 1024
    tb = 2 * np.pi * np.arange(nb) / nb
    if segment_crossings(f(np.exp(1j * tb))):
        raise WeldingError("f(S^1) is not a simple closed curve")
    a1 = f.a1
    Ku, Kg = u_modes, g_coeffs
    n = 4 * max(Ku, Kg)
    theta = 2 * np.pi * np.arange(n) / n
    target = f(np.exp(1j * theta))
    B = _u_basis(theta, Ku)
    nu = B.shape[1]
    up = np.zeros(nu)
    up[0] = np.angle(a1)
    b, b0, bk = abs(a1), 0j, np.zeros(Kg, dtype=complex)
    kg = np.arange(1, Kg + 1)
    it, res_max = 0, np.inf
    for it in range(1, max_iter + 1):
        gam = theta + B @ up
        w = np.exp(1j * gam)
        g = ExteriorMap(b, b0, bk)
        r = g(w) - target
        res_max = float(np.max(np.abs(r)))
        dg = g.deriv(w) * 1j * w
        Wk = np.exp(-1j * np.outer(gam, kg))
        Jc = np.hstack([dg[:, None] * B, w[:, None], np.ones((n, 1)), 1j * np.ones((n, 1)),
                        Wk, 1j * Wk])
        Jr = np.vstack([Jc.real, Jc.imag])
        rr = np.concatenate([r.real, r.imag])
        dx = np.linalg.lstsq(Jr, rr, rcond=None)[0]
        up -= dx[:nu]
        b -= dx[nu]
        b0 -= dx[nu + 1] + 1j * dx[nu + 2]
        bk = bk - (dx[nu + 3: nu + 3 + Kg] + 1j * dx[nu + 3 + Kg:])
        if np.max(np.abs(dx)) < tol:
            break
    gam = theta + B @ up
    g = ExteriorMap(b, b0, bk)
    res_max = float(np.max(np.abs(g(np.exp(1j * gam)) - target)))
    if not res_max < 1e-8 * max(1.0, abs(a1)) or b <= 0:
        raise WeldingError(f"exterior map solver failed: residual {res_max:.3e}, b = {b:.3g}")
    c = np.zeros(Ku + 1, dtype=complex)
    c[0] = up[0]
    c[1:] = 0.5 * (up[1:Ku + 1] - 1j * up[Ku + 1:])
    gamma = CircleMap(c)
    m = float(np.log(abs(a1)))
    if return_info:
        return gamma, m, {"g": g, "residual": res_max, "iterations": it}
    return gamma, m

"""Weighted sup-norms on the disk and the distances built from them."""

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .disk_maps import EvaluationGrid
from .operators import QuadDifferential, pre_schwarzian, schwarzian

NORM_TOL = 1e-6
MAX_REFINEMENTS = 14


@dataclass(frozen=True)
class NormEstimate:
    """Grid lower bound for a weighted sup-norm.

    ``history`` holds the estimate after each grid level and is
    nondecreasing; ``value`` is its last entry.
    """

    value: float
    grid: EvaluationGrid
    history: tuple
    argmax: complex = 0j
    converged: bool = True

    def report(self):
        return {"value": self.value, "grid": self.grid.describe(),
                "history": list(self.history), "argmax": [self.argmax.real, self.argmax.imag],
                "converged": self.converged}


def weighted_modulus(phi, z, weight=None):
    weight = phi.weight if weight is None else weight
    z = np.asarray(z, dtype=complex)
    return (1.0 - np.abs(z) ** 2) ** weight * np.abs(phi(z))


def _polish(phi, z0, r_max):
    """Local maximization of the weighted modulus over ``|z| <= r_max`` from ``z0``."""
    def neg(x):
        return -float(weighted_modulus(phi, x[0] * np.exp(1j * x[1])))

    x0 = np.array([abs(z0), np.angle(z0)])
    res = minimize(neg, x0, method="L-BFGS-B", bounds=[(0.0, r_max), (None, None)],
                   options={"ftol": 1e-15, "gtol": 1e-12, "maxiter": 200})
    z = res.x[0] * np.exp(1j * res.x[1])
    return -res.fun, complex(z)


def sup_norm(phi, grid=None, tol=NORM_TOL, max_refinements=MAX_REFINEMENTS, polish=True):
    """Estimate ``sup (1 - |z|^2)^w |phi(z)|`` over the disk.

    The grid is refined until the estimate changes by less than ``tol``
    relative.  Every reported number is an attained value, so the result
    is a lower bound for the true supremum.
    """
    grid = grid or EvaluationGrid()
    history = []
    best, arg = 0.0, 0j
    converged = False
    for level in range(max_refinements + 1):
        nodes = grid.nodes
        w = weighted_modulus(phi, nodes)
        order = np.argsort(w)[::-1]
        cand_val, cand_arg = float(w[order[0]]), complex(nodes[order[0]])
        if polish and cand_val > 0:
            for k in order[:3]:
                v, z = _polish(phi, complex(nodes[k]), grid.r_max)
                if v > cand_val:
                    cand_val, cand_arg = v, z
        prev = best
        if cand_val > best:
            best, arg = cand_val, cand_arg
        history.append(best)
        if level > 0 and best - prev <= tol * max(best, 1e-300):
            converged = True
            break
        if grid.is_saturated():
            break
        grid = grid.refine()
    return NormEstimate(best, grid, tuple(history), arg, converged)


def norm_A1(phi, grid=None, tol=NORM_TOL):
    """``||phi||_{1,inf} = sup (1 - |z|^2) |phi(z)|``."""
    return sup_norm(phi, grid, tol)


def norm_A2(psi, grid=None, tol=NORM_TOL):
    """``||psi||_{2,inf} = sup (1 - |z|^2)^2 |psi(z)|``."""
    if not isinstance(psi, QuadDifferential):
        raise TypeError("norm_A2 expects a QuadDifferential")
    return sup_norm(psi, grid, tol)


def d_s(f1, f2, grid=None, tol=NORM_TOL):
    return norm_A2(schwarzian(f1) - schwarzian(f2), grid, tol).value


def d_ps(f1, f2, grid=None, tol=NORM_TOL):
    return norm_A1(pre_schwarzian(f1) - pre_schwarzian(f2), grid, tol).value


def d_o(f1, f2, grid=None, tol=NORM_TOL):
    """``||A(f1) - A(f2)||_{1,inf} + |f1'(0) - f2'(0)|``."""
    return d_ps(f1, f2, grid, tol) + abs(f1.a1 - f2.a1)


def distance_report(metric, f1, f2, grid=None, tol=NORM_TOL):
    if metric == "s":
        est = norm_A2(schwarzian(f1) - schwarzian(f2), grid, tol)
        extra = 0.0
    elif metric in ("ps", "o"):
        est = norm_A1(pre_schwarzian(f1) - pre_schwarzian(f2), grid, tol)
        extra = abs(f1.a1 - f2.a1) if metric == "o" else 0.0
    else:
        raise ValueError(f"unknown metric {metric!r}")
    return {"metric": metric, "value": est.value + extra, "norm": est.report(),
            "derivative_term": extra}


# ---------------------------------------------------------------- Teichmueller


@dataclass(frozen=True, eq=False)
class BeltramiSample:
    """Complex dilatation sampled on a fixed set of nodes in the exterior disk."""

    values: np.ndarray
    nodes: np.ndarray = field(default=None)

    def __post_init__(self):
        v = np.atleast_1d(np.asarray(self.values, dtype=complex))
        object.__setattr__(self, "values", v)
        if self.k >= 1.0:
            raise ValueError(f"Beltrami coefficient must satisfy sup |mu| < 1, got {self.k}")

    @property
    def k(self):
        return float(np.max(np.abs(self.values))) if len(self.values) else 0.0


def teich_distance_upper(mu, nu):
    """``(1/2) log((1 + kappa) / (1 - kappa))`` with ``kappa = sup |(mu - nu)/(1 - conj(mu) nu)|``.

    Uses the two given extensions only, so it bounds the Teichmueller
    distance from above.
    """
    if mu.values.shape != nu.values.shape:
        raise ValueError("dilatation samples must share a grid")
    if mu.nodes is not None and nu.nodes is not None and not np.allclose(mu.nodes, nu.nodes):
        raise ValueError("dilatation samples must share a grid")
    q = (mu.values - nu.values) / (1.0 - np.conj(mu.values) * nu.values)
    kappa = float(np.max(np.abs(q))) if len(q) else 0.0
    if kappa >= 1.0:
        raise ValueError(f"invalid dilatation pair: kappa = {kappa}")
    return 0.5 * np.log((1.0 + kappa) / (1.0 - kappa))

"""Seeded random families used by the test suites and ``teichkit verify``.

Polynomial maps ``a1 (z + sum b_k z^k)`` with ``sum k |b_k| rho^(k-1) <= 0.9``
have ``Re f'/a1 > 0`` on ``|z| < rho`` and are therefore one-to-one there.
"""

import numpy as np

from . import series
from .curves import fitted_curve
from .disk_maps import Disk, DiskMap, image_bound
from .operators import OneDifferential
from .welding import CircleMap

DEFAULT_SEED = 20240611
UNIVALENCE_RADIUS = 1.2
DERIVATIVE_BUDGET = 0.9


def random_univalent_polynomial(rng, max_degree=10, radius=UNIVALENCE_RADIUS,
                                budget=DERIVATIVE_BUDGET, normalized=False):
    deg = int(rng.integers(2, max_degree + 1))
    k = np.arange(2, deg + 1)
    raw = (rng.standard_normal(len(k)) + 1j * rng.standard_normal(len(k))) / k ** 2
    weight = np.sum(k * np.abs(raw) * radius ** (k - 1))
    b = raw * budget * rng.uniform(0.2, 1.0) / weight
    if normalized:
        a1 = 1.0
    else:
        a1 = rng.uniform(0.5, 2.0) * np.exp(2j * np.pi * rng.uniform())
    return DiskMap(a1 * np.concatenate([[1.0], b]), rho=radius)


def polynomial_corpus(seed=DEFAULT_SEED, count=100, **kw):
    rng = np.random.default_rng(seed)
    return [random_univalent_polynomial(rng, **kw) for _ in range(count)]


def random_curve(rng, K=Disk(0.0, 0.3), n=24, image_radius=0.15, phi_degree=4,
                 phi_scale=0.5, t_max=1.0):
    """Curve ``f_t`` with base image well inside ``K``; ``t_domain`` is fitted to ``K``."""
    f = random_univalent_polynomial(rng, max_degree=6)
    f = f.scaled(image_radius / image_bound(f).max_modulus)
    f0 = DiskMap(series.as_series(f.coeffs, n - 1), rho=f.rho)
    d = int(rng.integers(0, phi_degree + 1))
    c = (rng.standard_normal(d + 1) + 1j * rng.standard_normal(d + 1)) / (1 + np.arange(d + 1))
    phi = OneDifferential(phi_scale * c / np.sum(np.abs(c)))
    dq = 0.1 * f0.a1 * (rng.standard_normal() + 1j * rng.standard_normal())
    return fitted_curve(f0, phi, [f0.a1, dq], K, t_max)


def curve_corpus(seed=DEFAULT_SEED, count=20, **kw):
    rng = np.random.default_rng(seed)
    return [random_curve(rng, **kw) for _ in range(count)]


def random_circle_map(rng, modes=16, l1=0.05, rotation=False):
    """Near-identity ``gamma`` with ``|c_k|`` proportional to ``1/k^2`` and ``l1_mass = l1``."""
    k = np.arange(1, modes + 1)
    c = rng.uniform(0.5, 1.0, modes) * np.exp(2j * np.pi * rng.uniform(size=modes)) / k ** 2
    c *= l1 / (2 * np.sum(np.abs(c)))
    c0 = rng.uniform(-np.pi, np.pi) if rotation else 0.0
    return CircleMap(np.concatenate([[c0], c]))


def circle_map_corpus(seed=DEFAULT_SEED, count=20, **kw):
    rng = np.random.default_rng(seed)
    return [random_circle_map(rng, **kw) for _ in range(count)]


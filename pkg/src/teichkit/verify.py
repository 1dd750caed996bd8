"""Property suites behind ``teichkit verify``.

Every suite draws its random inputs from the seeded corpora and returns a
:class:`SuiteResult`; its manifest is deterministic for a given
``RunConfig`` (no timings), so reruns replay byte for byte.
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import corpus, metrics, series
from .config import RunConfig
from .curves import curve_at, gateaux_check, curve_estimates
from .disk_maps import Disk, DiskMap, Mobius, koebe
from .operators import (DifferentialError, OneDifferential, beta, beta_hat, chi, chi_inverse,
                        pre_schwarzian, psi, psi_hat, schwarzian)
from .surface_atlas import (LocalChart, NonOverlappingTuple, check_nonoverlap, default_atlas,
                            domains_disjoint, make_config, transition, transition_holomorphy_check)
from .welding import WeldingError, unweld, verify_welding, weld

SUITES = ("identities", "metrics", "bounds", "curves", "welding", "atlas")
POLE_AT_ONE = Mobius(1, 0, -1, 1)  # w / (1 - w)


@dataclass
class Check:
    name: str
    passed: bool
    value: float = 0.0
    threshold: float = 0.0
    detail: str = ""
    lower: bool = False

    def as_dict(self):
        return {"name": self.name, "passed": bool(self.passed), "value": self.value,
                "threshold": self.threshold, "bound": "lower" if self.lower else "upper",
                "detail": self.detail}


@dataclass
class SuiteResult:
    suite: str
    seed: int
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    @property
    def failures(self):
        return [c for c in self.checks if not c.passed]

    def add(self, name, value, threshold, passed=None, detail="", lower=False):
        """Record ``value <= threshold`` (``>=`` when ``lower``) unless ``passed`` is given."""
        value = float(value)
        if passed is None:
            passed = value >= threshold if lower else value <= threshold
        self.checks.append(Check(name, bool(passed), value, float(threshold), detail, lower))

    def manifest(self):
        return {"suite": self.suite, "seed": self.seed, "passed": self.passed,
                "checks": [c.as_dict() for c in self.checks],
                "failures": [c.name for c in self.failures]}


def _max_coeff_residual(a, b):
    n = min(len(a), len(b))
    return float(np.max(np.abs(np.asarray(a)[:n] - np.asarray(b)[:n]))) if n else 0.0


# ------------------------------------------------------------- identities


def identities(cfg, maps=None):
    """``Psi o A = S``, ``Psi_hat o beta_hat = beta`` and the chi round trip."""
    res = SuiteResult("identities", cfg.seed)
    maps = corpus.polynomial_corpus(cfg.seed, 100) if maps is None else maps
    worst_s = worst_b = worst_chi = 0.0
    for i, f in enumerate(maps):
        try:
            a, s = pre_schwarzian(f), schwarzian(f)
            worst_s = max(worst_s, _max_coeff_residual(psi(a).coeffs, s.coeffs))
            b, bh = beta(f), psi_hat(beta_hat(f))
            worst_b = max(worst_b, _max_coeff_residual(bh.quad.coeffs, b.quad.coeffs), abs(bh.c - b.c))
            if f.N <= 32:
                g = chi_inverse(chi(f), rho=f.rho)
                worst_chi = max(worst_chi, _max_coeff_residual(g.coeffs, f.coeffs) / np.max(np.abs(f.coeffs)))
        except DifferentialError as exc:
            res.add(f"precondition f'(0) != 0 (map {i})", math.inf, 0.0, False, str(exc))
    res.add("Psi(A(f)) = S(f)", worst_s, 1e-9)
    res.add("Psi_hat(beta_hat(f)) = beta(f)", worst_b, 1e-9)
    res.add("chi_inverse(chi(f)) = f (relative)", worst_chi, 1e-9)
    return res


# ---------------------------------------------------------------- metrics


def _metric_pool(cfg, size=30):
    return corpus.polynomial_corpus(cfg.seed + 1, size)


def metric_axioms(cfg, n_triples=200):
    res = SuiteResult("metrics", cfg.seed)
    pool = _metric_pool(cfg)
    grid = cfg.grid
    A = [pre_schwarzian(f) for f in pool]
    S = [schwarzian(f) for f in pool]
    cache = {}

    def dist(kind, i, j):
        key = (kind, min(i, j), max(i, j))
        if key not in cache:
            if kind == "s":
                cache[key] = metrics.norm_A2(S[key[1]] - S[key[2]], grid, cfg.norm_tol).value
            elif kind == "ps":
                cache[key] = metrics.norm_A1(A[key[1]] - A[key[2]], grid, cfg.norm_tol).value
            else:
                cache[key] = dist("ps", i, j) + abs(pool[i].a1 - pool[j].a1)
        return cache[key]

    rng = np.random.default_rng(cfg.seed)
    triples = [tuple(rng.choice(len(pool), 3, replace=False)) for _ in range(n_triples)]
    for kind in ("s", "ps", "o"):
        worst = 0.0
        for i, j, k in triples:
            worst = max(worst, dist(kind, i, k) - dist(kind, i, j) - dist(kind, j, k))
        res.add(f"triangle inequality d_{kind}", worst, 1e-9)
    # symmetry: both orders evaluated independently
    asym = 0.0
    for i, j, _ in triples[:20]:
        asym = max(asym, abs(metrics.d_ps(pool[i], pool[j], grid, cfg.norm_tol)
                             - metrics.d_ps(pool[j], pool[i], grid, cfg.norm_tol)),
                   abs(metrics.d_s(pool[i], pool[j], grid, cfg.norm_tol)
                       - metrics.d_s(pool[j], pool[i], grid, cfg.norm_tol)))
    res.add("symmetry d_s, d_ps", asym, 0.0)
    res.add("identity of indiscernibles d_o(f, f)",
            max(metrics.d_o(f, f, grid) for f in pool[:10]), 0.0)
    mono, shrink = boundary_shadow(cfg)
    res.add("boundary deviation nonincreasing along d_o -> 0", mono, 1e-8)
    res.add("d_o along the family decreasing", shrink, 0.0)
    return res


def boundary_shadow(cfg, steps=10):
    """Family ``f_k = f + 2^-k (g - f)`` in the convex univalent class.

    Returns the largest increase of the boundary sup-deviation and of
    ``d_o`` between consecutive members.
    """
    f, g = corpus.polynomial_corpus(cfg.seed + 2, 2, normalized=True)
    n = max(f.N, g.N)
    fc, gc = series.as_series(f.coeffs, n - 1), series.as_series(g.coeffs, n - 1)
    theta = 2 * np.pi * np.arange(2048) / 2048
    e = np.exp(1j * theta)
    fb = f(e)
    devs, ds = [], []
    for k in range(steps):
        fk = DiskMap(fc + 2.0 ** -k * (gc - fc), rho=f.rho)
        devs.append(float(np.max(np.abs(fk(e) - fb))))
        ds.append(metrics.d_o(fk, f, cfg.grid, cfg.norm_tol))
    return (float(max(np.diff(devs).max(), 0.0)), float(max(np.diff(ds).max(), 0.0)))


# ----------------------------------------------------------------- bounds


@lru_cache(maxsize=4)
def _curves(seed, count=20):
    return tuple(corpus.curve_corpus(seed, count))


@lru_cache(maxsize=4)
def _gateaux_reports(seed, count=10):
    return tuple(gateaux_check(POLE_AT_ONE, c) for c in _curves(seed)[:count])


def bounds(cfg):
    res = SuiteResult("bounds", cfg.seed)
    k = koebe()
    a = metrics.sup_norm(pre_schwarzian(k), cfg.grid, cfg.norm_tol).value
    s = metrics.sup_norm(schwarzian(k), cfg.grid, cfg.norm_tol).value
    res.add("Koebe ||A||_1 in [6 - 1e-3, 6 + 1e-6]", a, 6 + 1e-6, passed=6 - 1e-3 <= a <= 6 + 1e-6)
    res.add("Koebe ||S||_2 = 6 +- 1e-3", abs(s - 6), 1e-3)
    worst = max(metrics.norm_A1(pre_schwarzian(f), cfg.grid, cfg.norm_tol).value
                for f in corpus.polynomial_corpus(cfg.seed, 100))
    res.add("corpus ||A(f)||_1 <= 6", worst, 6 + 1e-6)
    ratio = max(r.bound_ratio for r in _gateaux_reports(cfg.seed))
    res.add("second-order remainder |alpha(t)-alpha(0)-t alpha'(t)| / (sup|alpha''| t^2)", ratio, 1.0)
    K = Disk(0.0, 0.3)
    ok = {"schwarz_ok": True, "cauchy_ok": True, "final_ok": True}
    for c in _curves(cfg.seed)[:5]:
        r1 = 0.9 * c.t_domain
        lb = curve_estimates(POLE_AT_ONE, c, K, r1, 0.6 * r1, 0.3 * r1)
        for key in ok:
            ok[key] &= bool(lb[key])
    for key, v in ok.items():
        res.add(f"curve estimate {key[:-3]}", 0.0 if v else 1.0, 0.0)
    return res


# ----------------------------------------------------------------- curves


def curves(cfg):
    res = SuiteResult("curves", cfg.seed)
    worst = 0.0
    for c in _curves(cfg.seed):
        n = c.f0.N
        a0 = pre_schwarzian(c.f0).coeffs
        phi = series.as_series(c.phi.coeffs, n)
        for t in (c.t_domain / 2, 1j * c.t_domain / 2, -c.t_domain / 3, c.t_domain / 7 * np.exp(1j)):
            d = pre_schwarzian(curve_at(c, t)).coeffs - a0 - t * phi
            worst = max(worst, float(np.max(np.abs(d[: n - 1]))))
    res.add("A(f_t) - A(f_0) - t phi = 0 up to degree N-2", worst, 1e-10)
    reports = _gateaux_reports(cfg.seed)
    res.add("Gateaux residual log-log slope", min(r.slope for r in reports), 0.9, lower=True)
    res.add("Cauchy-Riemann residual of the directional derivative",
            max(r.cr_residual for r in reports), 1e-6)
    return res


# ---------------------------------------------------------------- welding


def welding(cfg):
    res = SuiteResult("welding", cfg.seed)
    seam = ang = merr = 0.0
    failures = []
    theta = 2 * np.pi * np.arange(1024) / 1024
    for i, gamma in enumerate(corpus.circle_map_corpus(cfg.seed, 20)):
        for m in (-0.5, 0.0, 0.5):
            try:
                pair = weld(gamma, m, tol=cfg.newton_tol)
                rep = verify_welding(pair, gamma, n=256)
                seam = max(seam, rep["sup"])
                g2, m2 = unweld(pair.f)
                ang = max(ang, float(np.max(np.abs(g2(theta) - gamma(theta)))))
                merr = max(merr, abs(m2 - m))
                if not (rep["complementary"] and rep["g_inf_positive"]):
                    failures.append(f"gamma {i}, m={m}: normalization")
            except WeldingError as exc:
                failures.append(f"gamma {i}, m={m}: {exc}")
    res.add("Newton convergence", len(failures), 0, detail="; ".join(failures))
    res.add("seam residual sup (256 samples)", seam, 1e-6)
    res.add("unweld(weld(gamma)) angle error", ang, 1e-4)
    res.add("unweld(weld(gamma)) |m_hat - m|", merr, 1e-6)
    return res


# ------------------------------------------------------------------ atlas


def tangent_disks(eps):
    p = 0.5 + eps
    charts = [LocalChart(0, p, Mobius(1, -p, 0, 1), 0.25), LocalChart(1, -p, Mobius(1, p, 0, 1), 0.25)]
    return NonOverlappingTuple(charts, [DiskMap([0.5]), DiskMap([0.5])])


def atlas(cfg):
    res = SuiteResult("atlas", cfg.seed)
    cfgs = [make_config([0, 1, math.inf]), make_config([0, 1, 1j, -1]),
            make_config([0.3 + 0.2j, -2, 5j, math.inf])]
    res.add("default B_i pairwise disjoint", 0.0 if all(domains_disjoint(default_atlas(c)) for c in cfgs) else 1.0, 0.0)
    rng = np.random.default_rng(cfg.seed)
    worst_cocycle = worst_inverse = worst_cr = 0.0
    for conf in cfgs:
        for c1 in default_atlas(conf):
            c2 = c1.composed(Mobius(1.3 * np.exp(0.4j), 0, 0.25, 1), k_radius=0.6)
            c3 = c1.composed(Mobius(0.8, 0, -0.3j, 1), k_radius=0.6)
            psi0 = corpus.random_univalent_polynomial(rng, max_degree=6)
            psi0 = DiskMap(series.as_series(psi0.scaled(0.2 / np.max(np.abs(psi0(np.exp(
                2j * np.pi * np.arange(512) / 512))))).coeffs, cfg.N - 1), rho=psi0.rho)
            p12 = transition(c1, c2, psi0, n=cfg.N)
            p13 = transition(c1, c3, psi0, n=cfg.N)
            p123 = transition(c2, c3, p12, n=cfg.N)
            worst_cocycle = max(worst_cocycle, _max_coeff_residual(p123.coeffs, p13.coeffs))
            back = transition(c2, c1, p12, n=cfg.N)
            worst_inverse = max(worst_inverse, _max_coeff_residual(back.coeffs, psi0.coeffs))
    res.add("transition cocycle", worst_cocycle, 1e-8)
    res.add("transition inverse", worst_inverse, 1e-8)
    base = LocalChart(0, 0, Mobius(1, 0, 0, 1), 1.0, 0.3)
    for h in (Mobius(1, 0, 0, 1), Mobius(2, 0, 0, 1), POLE_AT_ONE):
        rep = transition_holomorphy_check(base, base.composed(h), DiskMap([0.2]),
                                          [OneDifferential([1.0]), OneDifferential([0.0, 1.0])],
                                          eps=cfg.fd_step)
        worst_cr = max(worst_cr, rep["max"])
    res.add("transition Cauchy-Riemann residual", worst_cr, 1e-6)
    pos, neg = check_nonoverlap(tangent_disks(1e-3)).status, check_nonoverlap(tangent_disks(-1e-3)).status
    res.add("tangent disks eps=+1e-3 pass", 0.0 if pos == "pass" else 1.0, 0.0, detail=pos)
    res.add("tangent disks eps=-1e-3 fail", 0.0 if neg == "fail" else 1.0, 0.0, detail=neg)
    same = NonOverlappingTuple(list(tangent_disks(1e-3).charts[:1]) * 2, [DiskMap([0.5])] * 2)
    res.add("identical maps overlap", 0.0 if check_nonoverlap(same).status == "fail" else 1.0, 0.0)
    conf = cfgs[2]
    charts = default_atlas(conf)
    maps = [DiskMap([0.5 * np.exp(1j * k), 0.1]) for k in range(conf.n)]
    rep = check_nonoverlap(NonOverlappingTuple(charts, maps))
    perm = [2, 0, 3, 1]
    rep2 = check_nonoverlap(NonOverlappingTuple([charts[i] for i in perm], [maps[i] for i in perm]))
    st1 = {frozenset((p["i"], p["j"])): p["status"] for p in rep.pairs}
    st2 = {frozenset((perm[p["i"]], perm[p["j"]])): p["status"] for p in rep2.pairs}
    res.add("nonoverlap invariant under relabeling", 0.0 if st1 == st2 and rep.status == "pass" else 1.0, 0.0)
    # Hausdorff shadow: distinct tuples have distinct lifts
    c1 = charts[0]
    c2 = c1.composed(Mobius(1.1, 0, 0.2, 1), k_radius=0.6)
    gap = math.inf
    for k in range(5):
        f = DiskMap(series.as_series(maps[0].coeffs, 7))
        g = DiskMap(f.coeffs + 1e-8 * 10 ** (-k / 4) * np.exp(1j * k) * (np.arange(8) == (k % 3 + 1)))
        gap = min(gap, metrics.d_o(transition(c1, c2, f, n=cfg.N), transition(c1, c2, g, n=cfg.N)))
    res.add("distinct tuples have positive lifted distance", gap, 0.0, passed=gap > 0, lower=True)
    return res


_RUNNERS = {"identities": identities, "metrics": metric_axioms, "bounds": bounds,
            "curves": curves, "welding": welding, "atlas": atlas}


def run(suite, cfg=None, **kw):
    """Run one suite, or all of them for ``suite == "all"``; returns a list of results."""
    cfg = cfg or RunConfig()
    if suite == "all":
        return [_RUNNERS[s](cfg) for s in SUITES]
    if suite not in _RUNNERS:
        raise KeyError(f"unknown suite {suite!r}; choose from {', '.join(SUITES + ('all',))}")
    return [_RUNNERS[suite](cfg, **kw)]


def manifest(results):
    return {"passed": all(r.passed for r in results), "seed": results[0].seed if results else None,
            "suites": [r.manifest() for r in results]}

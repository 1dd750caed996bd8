import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import minimize_scalar

from teichkit.corpus import polynomial_corpus, random_univalent_polynomial
from teichkit.disk_maps import DiskMap, EvaluationGrid, Mobius, identity, koebe
from teichkit.metrics import (BeltramiSample, d_o, d_ps, d_s, distance_report, norm_A1, norm_A2,
                              sup_norm, teich_distance_upper)
from teichkit.operators import OneDifferential, QuadDifferential, mobius_image, pre_schwarzian, schwarzian

F = DiskMap([1.0, 0.2])


def radial_max(fn):
    """Oracle: maximize a function of r on [0, 1] by bounded scalar search."""
    res = minimize_scalar(lambda r: -fn(r), bounds=(0, 1), method="bounded",
                          options={"xatol": 1e-12})
    return -res.fun


def test_norm_A1_examples():
    b = 0.3 - 0.4j
    assert norm_A1(OneDifferential([b])).value == pytest.approx(abs(b))
    assert norm_A1(OneDifferential([0.0, 1.0])).value == pytest.approx(2 / (3 * math.sqrt(3)), abs=1e-9)
    assert radial_max(lambda r: r * (1 - r * r)) == pytest.approx(2 / (3 * math.sqrt(3)))


def test_norm_of_koebe_pre_schwarzian_is_sharp():
    est = norm_A1(pre_schwarzian(koebe()))
    assert 6 - 1e-3 <= est.value <= 6 + 1e-6
    assert est.converged


def test_norm_A2_examples():
    assert norm_A2(QuadDifferential([2j])).value == pytest.approx(2.0)
    assert norm_A2(QuadDifferential([0.0])).value == 0.0
    assert norm_A2(schwarzian(koebe())).value == pytest.approx(6.0, abs=1e-3)
    with pytest.raises(TypeError):
        norm_A2(OneDifferential([1.0]))


def test_history_is_monotone_and_ends_at_value():
    est = sup_norm(pre_schwarzian(koebe()), EvaluationGrid(halvings=2, n_angles=8))
    assert all(b >= a for a, b in zip(est.history, est.history[1:]))
    assert est.value == est.history[-1]
    assert len(est.history) > 1


def test_cached_norm_matches_norm_A1():
    a = pre_schwarzian(F)
    assert a.norm == norm_A1(a).value


def test_d_s_d_ps_examples():
    assert d_s(F, F) == 0.0
    oracle = radial_max(lambda r: (1 - r * r) * 0.4 / (1 - 0.4 * r))
    assert d_ps(identity(), F) == pytest.approx(oracle, rel=1e-9)
    T = Mobius(1, 0, -0.3, 1)
    assert d_s(F, mobius_image(T, F)) <= 1e-9


def test_d_o_examples():
    assert d_o(F, F) == 0.0
    assert d_o(identity(), DiskMap([2.0])) == pytest.approx(1.0)
    assert d_o(identity(), F) == d_ps(identity(), F)


def test_distance_report_fields():
    rep = distance_report("o", identity(), DiskMap([2.0]))
    assert rep["value"] == pytest.approx(1.0) and rep["derivative_term"] == pytest.approx(1.0)
    assert rep["norm"]["grid"]["n_angles"] >= 8
    with pytest.raises(ValueError):
        distance_report("x", F, F)


@given(st.integers(0, 10_000))
def test_metric_axioms_on_random_triples(seed):
    rng = np.random.default_rng(seed)
    f, g, h = (random_univalent_polynomial(rng) for _ in range(3))
    for d in (d_s, d_ps, d_o):
        assert d(f, g) == d(g, f)
        assert d(f, h) <= d(f, g) + d(g, h) + 1e-9
        assert d(f, f) <= 1e-9


def test_corpus_pre_schwarzian_norms_below_six():
    for f in polynomial_corpus(3, 30):
        assert norm_A1(pre_schwarzian(f)).value <= 6 + 1e-6


def test_teich_distance_upper_examples():
    mu = BeltramiSample(np.full(16, 0.5))
    zero = BeltramiSample(np.zeros(16))
    assert teich_distance_upper(mu, mu) == 0.0
    assert teich_distance_upper(mu, zero) == pytest.approx(0.5 * math.log(3))
    rng = np.random.default_rng(0)
    a = BeltramiSample(0.6 * rng.uniform(size=32) * np.exp(2j * np.pi * rng.uniform(size=32)))
    b = BeltramiSample(0.6 * rng.uniform(size=32) * np.exp(2j * np.pi * rng.uniform(size=32)))
    assert teich_distance_upper(a, b) == pytest.approx(teich_distance_upper(b, a), rel=1e-15)


def test_teich_distance_errors():
    with pytest.raises(ValueError):
        BeltramiSample([1.0])
    with pytest.raises(ValueError):
        teich_distance_upper(BeltramiSample([0.1, 0.2]), BeltramiSample([0.1]))

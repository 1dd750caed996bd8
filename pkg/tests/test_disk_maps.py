import numpy as np
import pytest
import sympy as sp
from conftest import sympy_taylor
from hypothesis import given
from hypothesis import strategies as st

from teichkit import series
from teichkit.corpus import random_univalent_polynomial
from teichkit.disk_maps import (ContainmentError, Disk, DiskMap, DomainError, EvaluationGrid, Mobius,
                                PolynomialMap, check_univalence, compose_left, derivative, evaluate,
                                identity, image_bound, koebe, segment_crossings, winding_number)

F = DiskMap([1.0, 0.2])


def test_evaluate_examples():
    assert evaluate(identity(), 0.5) == pytest.approx(0.5)
    assert evaluate(F, 0.5) == pytest.approx(0.55)


def test_evaluate_truncated_koebe_within_tail_bound():
    s = koebe().taylor(400)
    f = DiskMap.from_series(s[:65], rho=1.5)
    tail = series.tail_bound(s, 64, radius=0.5)
    assert abs(evaluate(f, 0.5) - 2.0) <= tail + 8 * np.finfo(float).eps


def test_evaluate_outside_domain_raises():
    with pytest.raises(DomainError):
        evaluate(F, 1.25)


def test_diskmap_rejects_small_radius():
    with pytest.raises(ValueError):
        DiskMap([1.0], rho=1.0)


def test_derivative_examples():
    assert np.allclose(derivative(F, 1), [1.0, 0.4])
    assert np.allclose(derivative(identity(), 2), 0)
    c = np.array([2.0, -1j, 0.5, 3.0])
    assert np.allclose(derivative(DiskMap(c), 1), np.arange(1, 5) * c)


def test_compose_left_examples():
    g = compose_left(Mobius(2, 0, 0, 1), F)
    assert np.allclose(g.coeffs, [2.0, 0.4])
    assert np.array_equal(compose_left(Mobius(1, 0, 0, 1), F).coeffs, F.coeffs)
    assert np.array_equal(compose_left(PolynomialMap([0, 1]), F).coeffs, F.coeffs)


def test_compose_left_mobius_matches_symbolic_oracle():
    z = sp.symbols("z")
    eps = sp.Rational(1, 10)
    oracle = sympy_taylor(eps * z / (1 - eps * z), z, 12)
    f = DiskMap(series.as_series([0.1], 11))
    g = compose_left(Mobius(1, 0, -1, 1), f, K=Disk(0, 0.3))
    assert np.allclose(g.series, oracle, atol=1e-15)


def test_compose_left_polynomial_h_matches_symbolic_oracle():
    z = sp.symbols("z")
    fz = z + sp.Rational(1, 5) * z ** 2
    oracle = sympy_taylor(fz + fz ** 2 / 3 - fz ** 3 / 7, z, 6)
    g = compose_left(PolynomialMap([0, 1, 1 / 3, -1 / 7]), DiskMap(series.as_series([1, 0.2], 5)))
    assert np.allclose(g.series, oracle, atol=1e-14)


def test_compose_left_containment_violation():
    with pytest.raises(ContainmentError):
        compose_left(Mobius(1, 0, -1, 1), DiskMap([0.5]), K=Disk(0, 0.3))


def test_compose_left_rejects_h_with_pole_in_K():
    with pytest.raises(ContainmentError):
        compose_left(Mobius(1, 0, -4, 1), DiskMap([0.2]), K=Disk(0, 0.3))


def test_compose_left_warns_when_h_prime_vanishes():
    with pytest.warns(RuntimeWarning):
        compose_left(PolynomialMap([0, 0, 1]), F)


def test_compose_left_associativity_on_grid():
    f = DiskMap(series.as_series([0.2, 0.03j], 40))
    h1, h2 = Mobius(1, 0, -1, 1), Mobius(2, 0, 0.5, 1)
    lhs = compose_left(h2, compose_left(h1, f, check_injective=False), check_injective=False)
    rhs = compose_left(h2 @ h1, f, check_injective=False)
    z = EvaluationGrid().nodes
    assert np.max(np.abs(lhs(z) - rhs(z))) < 1e-12


def test_compose_left_generic_analytic_map_matches_exact_series():
    from teichkit.disk_maps import AnalyticMap
    h = AnalyticMap([np.expm1, np.exp])
    f = DiskMap(series.as_series([0.3], 30))
    g = compose_left(h, f, check_injective=False)
    import math
    assert np.allclose(g.series[:20], [0] + [0.3 ** k / math.factorial(k) for k in range(1, 20)], atol=1e-14)


def test_mobius_derivatives_match_closed_form():
    T = Mobius(1, 0, -1, 1)
    w = np.array([0.1, -0.2j])
    d = T.derivatives(w, 3)
    assert np.allclose(d[1], 1 / (1 - w) ** 2)
    assert np.allclose(d[2], 2 / (1 - w) ** 3)
    assert np.allclose(d[3], 6 / (1 - w) ** 4)
    assert np.allclose((T.inverse() @ T)(w), w)


def test_image_bound_examples():
    ib = image_bound(identity())
    assert ib.max_modulus == pytest.approx(1.0)
    assert np.allclose(np.abs(ib.boundary), 1.0)
    assert image_bound(DiskMap([0.5])).max_modulus == pytest.approx(0.5)
    # dense boundary oracle: |z + 0.2 z^2| on the circle peaks at z = 1
    theta = np.linspace(0, 2 * np.pi, 200001)
    dense = np.max(np.abs(np.exp(1j * theta) + 0.2 * np.exp(2j * theta)))
    assert image_bound(F).max_modulus == pytest.approx(dense, abs=1e-12)
    assert dense == pytest.approx(1.2)


def test_image_bound_monotone_under_refinement(rng):
    f = random_univalent_polynomial(rng)
    g = EvaluationGrid(n_angles=8)
    values = []
    for _ in range(5):
        values.append(image_bound(f, g).max_modulus)
        g = g.refine()
    assert all(b >= a for a, b in zip(values, values[1:]))


def test_grid_invariants():
    g = EvaluationGrid()
    for _ in range(6):
        assert np.all(np.abs(g.nodes) < 1)
        assert g.r_max < 1 and g.n_angles >= 8
        assert len(g.nodes) == g.size
        g = g.refine()


def test_check_univalence_examples():
    assert check_univalence(identity()).passed
    assert check_univalence(F).passed
    bad = check_univalence(DiskMap([1.0, 1.0]))
    assert not bad.passed and bad.reason == "derivative-zero"
    assert bad.witness[0] == pytest.approx(-0.5)


def test_check_univalence_self_intersection_witness():
    # (e^{4z} - 1)/4 has no critical points, but arg e^{4z} sweeps more than 2 pi on the circle
    import math
    f = DiskMap([4.0 ** (k - 1) / math.factorial(k) for k in range(1, 41)])
    rep = check_univalence(f)
    assert not rep.passed and rep.reason == "boundary-self-intersection"
    z1, z2 = rep.witness
    assert abs(z1 - z2) > 1e-3
    # the witnesses start two crossing boundary edges
    step = np.exp(2j * np.pi / len(EvaluationGrid().boundary_thetas()))
    edges = abs(f(z1 * step) - f(z1)) + abs(f(z2 * step) - f(z2))
    assert abs(f(z1) - f(z2)) <= edges


def test_segment_crossings_and_winding():
    square = np.array([0, 1, 1 + 1j, 1j])
    assert segment_crossings(square) == []
    bowtie = np.array([0, 1 + 1j, 1, 1j])
    assert segment_crossings(bowtie)
    assert winding_number(square, 0.5 + 0.5j)[0] == 1
    assert winding_number(square, 2.0)[0] == 0


@given(st.integers(0, 10_000))
def test_corpus_maps_pass_univalence(seed):
    f = random_univalent_polynomial(np.random.default_rng(seed))
    assert check_univalence(f).passed

import numpy as np
import pytest
import sympy as sp
from conftest import sympy_taylor
from hypothesis import given
from hypothesis import strategies as st

from teichkit import series
from teichkit.corpus import polynomial_corpus, random_univalent_polynomial
from teichkit.disk_maps import DiskMap, Mobius, RationalMap, identity, koebe
from teichkit.operators import (BersPoint, ChiPoint, DifferentialError, OneDifferential, QuadDifferential,
                                beta, beta_hat, chi, chi_inverse, mobius_image, normalize, pre_schwarzian,
                                psi, psi_hat, schwarzian)

Z = sp.symbols("z")
F = DiskMap([1.0, 0.2])
F_SYM = Z + sp.Rational(1, 5) * Z ** 2


def sym_pre_schwarzian(expr, n):
    return sympy_taylor(sp.diff(expr, Z, 2) / sp.diff(expr, Z), Z, n)


def sym_schwarzian(expr, n):
    d1, d2, d3 = (sp.diff(expr, Z, k) for k in (1, 2, 3))
    return sympy_taylor(d3 / d1 - sp.Rational(3, 2) * (d2 / d1) ** 2, Z, n)


def seeded_maps():
    return polynomial_corpus(7, 100)


def test_pre_schwarzian_examples():
    assert np.allclose(pre_schwarzian(identity()).coeffs, 0)
    a = pre_schwarzian(F, 12)
    assert np.allclose(a.coeffs, sym_pre_schwarzian(F_SYM, 12), atol=1e-15)
    assert np.allclose(a.coeffs[:3], [0.4, -0.16, 0.064])
    # closed form 2a/(1 + 2az) pointwise, through the exact evaluator
    z = np.array([0.9, -0.99j, 0.5 + 0.5j])
    assert np.allclose(a(z), 0.4 / (1 + 0.4 * z))


def test_pre_schwarzian_koebe_closed_form():
    a = pre_schwarzian(koebe(), 20)
    assert np.allclose(a.coeffs, sympy_taylor((4 + 2 * Z) / (1 - Z ** 2), Z, 20))
    z = np.array([0.999, -0.5j, 0.9999 * np.exp(0.3j)])
    assert np.allclose(a(z), (4 + 2 * z) / (1 - z ** 2), rtol=1e-10)


def test_schwarzian_examples():
    s = schwarzian(F, 12)
    assert np.allclose(s.coeffs, sym_schwarzian(F_SYM, 12), atol=1e-15)
    assert np.allclose(s.coeffs[:2], [-0.24, 0.192])
    k = schwarzian(koebe(), 20)
    assert np.allclose(k.coeffs, sympy_taylor(-6 / (1 - Z ** 2) ** 2, Z, 20))
    z = np.array([0.999, 0.3j])
    assert np.allclose(k(z), -6 / (1 - z ** 2) ** 2, rtol=1e-10)


def test_schwarzian_of_truncated_mobius_vanishes_within_tail():
    f = RationalMap([0, 1], [1, -0.5]).to_disk_map(40, rho=1.5)
    s = schwarzian(f)
    assert np.max(np.abs(s.coeffs[:20])) < 1e-9


def test_psi_examples():
    assert np.allclose(psi(OneDifferential([0.0])).coeffs, 0)
    b = 0.7 - 0.2j
    assert psi(OneDifferential([b, 0, 0])).coeffs[0] == pytest.approx(-b * b / 2)
    p = psi(pre_schwarzian(F, 12))
    assert np.allclose(p.coeffs, sym_schwarzian(F_SYM, 11), atol=1e-15)


def test_psi_hat_examples():
    z = psi_hat(OneDifferential([0.0, 0.0]))
    assert np.allclose(z.quad.coeffs, 0) and z.c == 0
    b = 0.3j
    p = psi_hat(OneDifferential([b, 0.0]))
    assert p.quad.coeffs[0] == pytest.approx(-b * b / 2) and p.c == pytest.approx(b / 2)
    bf, ph = beta(F, 12), psi_hat(beta_hat(F, 12))
    assert np.allclose(ph.quad.coeffs, bf.quad.coeffs[:12]) and ph.c == pytest.approx(bf.c)


def test_beta_examples():
    b = beta(identity())
    assert np.allclose(b.quad.coeffs, 0) and b.c == 0
    assert np.allclose(beta_hat(identity()).coeffs, 0)
    b = beta(F, 6)
    assert b.c == pytest.approx(0.2)
    assert np.allclose(b.quad.coeffs[:2], [-0.24, 0.192])
    assert np.allclose(beta_hat(F, 6).coeffs[:2], [0.4, -0.16])


def test_identities_on_seeded_corpus():
    for f in seeded_maps():
        a, s = pre_schwarzian(f), schwarzian(f)
        p = psi(a).coeffs
        assert np.max(np.abs(p - s.coeffs[: len(p)])) <= 1e-9
        b, ph = beta(f), psi_hat(beta_hat(f))
        assert np.max(np.abs(ph.quad.coeffs - b.quad.coeffs[: len(p)])) <= 1e-9
        assert abs(ph.c - b.c) <= 1e-15


def test_chi_examples():
    p = chi(identity())
    assert np.allclose(p.one.coeffs, 0) and p.c == 1
    p = chi(DiskMap([2.0]))
    assert np.allclose(p.one.coeffs, 0) and p.c == 2
    p = chi(F, 10)
    assert np.allclose(p.one.coeffs, sympy_taylor(sp.Rational(2, 5) / (1 + sp.Rational(2, 5) * Z), Z, 10))
    assert p.c == 1
    with pytest.raises(DifferentialError):
        chi(DiskMap([0.0, 1.0]))


def test_chi_inverse_examples():
    f = chi_inverse(ChiPoint(OneDifferential([0.0] * 8), 0.5 + 1j))
    assert np.allclose(f.coeffs, series.as_series([0.5 + 1j], 6))
    b = 0.4 - 0.3j
    f = chi_inverse(ChiPoint(OneDifferential(series.as_series([b], 15)), 1.0))
    bs = sp.Rational(2, 5) - sp.Rational(3, 10) * sp.I
    assert np.allclose(f.series, sympy_taylor((sp.exp(bs * Z) - 1) / bs, Z, 15), atol=1e-15)
    with pytest.raises(DifferentialError):
        chi_inverse(ChiPoint(OneDifferential([1.0]), 0.0))


def test_chi_round_trip_on_corpus():
    for f in seeded_maps():
        g = chi_inverse(chi(f))
        rel = np.max(np.abs(g.coeffs - f.coeffs)) / np.max(np.abs(f.coeffs))
        assert rel <= 1e-9


def test_chi_of_chi_inverse_on_sampled_points(rng):
    for _ in range(20):
        phi = (rng.standard_normal(12) + 1j * rng.standard_normal(12)) / (1 + np.arange(12)) ** 2
        c = rng.standard_normal() + 1j * rng.standard_normal()
        f = chi_inverse(ChiPoint(OneDifferential(phi), c))
        back = chi(f)
        assert back.c == pytest.approx(c)
        # a degree-N map determines f''/f' through degree N - 2
        assert np.allclose(back.one.coeffs[: f.N - 1], phi[: f.N - 1], atol=1e-12)


def test_chi_injectivity_witness():
    maps = seeded_maps()
    for f, g in zip(maps[:20], maps[1:21]):
        pf, pg = chi(f), chi(g)
        n = min(pf.one.N, pg.one.N)
        same = np.allclose(pf.one.coeffs[:n], pg.one.coeffs[:n], atol=1e-12) and abs(pf.c - pg.c) < 1e-12
        assert not same
    pf, pg = chi(maps[0]), chi(DiskMap(maps[0].coeffs.copy()))
    assert np.array_equal(pf.one.coeffs, pg.one.coeffs)


def test_normalize_examples():
    assert np.allclose(normalize(DiskMap([2.0])).coeffs, [1.0])
    assert np.allclose(normalize(DiskMap([2.0, 0.4])).coeffs, [1.0, 0.2])
    for f in seeded_maps()[:20]:
        assert np.allclose(pre_schwarzian(normalize(f)).coeffs, pre_schwarzian(f).coeffs,
                           rtol=1e-14, atol=1e-15)
    with pytest.raises(DifferentialError):
        normalize(DiskMap([0.0, 1.0]))


@given(st.integers(0, 10_000), st.complex_numbers(min_magnitude=0.1, max_magnitude=10,
                                                    allow_nan=False, allow_infinity=False))
def test_pre_schwarzian_scaling_invariance(seed, alpha):
    f = random_univalent_polynomial(np.random.default_rng(seed))
    a, b = pre_schwarzian(f).coeffs, pre_schwarzian(f.scaled(alpha)).coeffs
    assert np.allclose(a, b, rtol=1e-13, atol=1e-13)


@given(st.integers(0, 10_000))
def test_schwarzian_mobius_invariance(seed):
    f = random_univalent_polynomial(np.random.default_rng(seed))
    bound = np.max(np.abs(f(np.exp(2j * np.pi * np.arange(512) / 512))))
    T = Mobius(1.5, 0, 0.5 / bound, 1)  # pole at |w| = 2 bound, off the image
    g = mobius_image(T, f)
    z = np.array([0.0, 0.3, 0.5j, -0.7 + 0.2j, 0.95])
    assert np.allclose(schwarzian(g)(z), schwarzian(f)(z), rtol=1e-9, atol=1e-9)


def test_differential_arithmetic_and_types():
    a = OneDifferential([1.0, 2.0])
    b = OneDifferential([0.5])
    assert np.allclose((a - b).coeffs, [0.5, 2.0])
    assert np.allclose((2 * a).coeffs, [2.0, 4.0])
    assert isinstance(a - b, OneDifferential)
    z = np.array([0.2, 0.3j])
    assert np.array_equal((a - b)(z), -((b - a)(z)))
    assert QuadDifferential([1.0]).weight == 2 and a.weight == 1
    assert isinstance(beta(F), BersPoint)
    with pytest.raises(ValueError):
        OneDifferential([np.nan])

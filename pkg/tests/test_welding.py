import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from teichkit.corpus import random_circle_map
from teichkit.disk_maps import DiskMap
from teichkit.welding import (AdmissibilityError, CircleMap, ExteriorMap, WeldingError, WeldingPair,
                              check_admissible, decay_radius, unweld, verify_welding, weld)

THETA = 2 * np.pi * np.arange(1024) / 1024
# gamma(theta) = theta + 0.1 sin(theta)
SINE = CircleMap([0.0, -0.05j])


def test_circle_map_basics():
    assert np.allclose(SINE(THETA), THETA + 0.1 * np.sin(THETA))
    assert np.allclose(SINE.du(THETA), 0.1 * np.cos(THETA))
    assert SINE.l1_mass() == pytest.approx(0.1)
    assert SINE.margin() == pytest.approx(0.9)
    assert CircleMap.rotation(0.3).l1_mass() == 0.0
    assert CircleMap.rotation(0.3).l1_mass(include_rotation=True) == pytest.approx(0.3)
    back = CircleMap.from_samples(SINE.u(THETA), 4)
    assert np.allclose(back.u_coeffs, [0, -0.05j, 0, 0, 0], atol=1e-15)


def test_circle_map_rejects_non_monotone():
    with pytest.raises(ValueError):
        CircleMap([0.0, -0.6j])
    with pytest.raises(ValueError):
        CircleMap([0.1j])


def test_admissibility_errors():
    with pytest.raises(AdmissibilityError):
        check_admissible(CircleMap([0.0, 0.1, 0.1]))
    with pytest.raises(AdmissibilityError):
        check_admissible(CircleMap([0.0, -0.3j]), budget=1.0)
    with pytest.raises(AdmissibilityError):
        weld(CircleMap([0.0, 0.2]))


def test_weld_identity_and_scale():
    pair = weld(CircleMap.identity())
    assert np.allclose(pair.f.coeffs[:3], [1, 0, 0], atol=1e-14)
    w = 2 * np.exp(1j * THETA[:16])
    assert np.allclose(pair.g(w), w, atol=1e-14)
    pair = weld(CircleMap.identity(), m=0.5)
    assert pair.f.a1 == pytest.approx(math.exp(0.5))
    assert pair.g.b == pytest.approx(math.exp(0.5))


def test_weld_rotation():
    theta0 = 0.7
    pair = weld(CircleMap.rotation(theta0))
    assert pair.f.a1 == pytest.approx(np.exp(1j * theta0))
    assert np.max(np.abs(pair.f.coeffs[1:])) < 1e-12
    assert pair.g.b == pytest.approx(1.0) and abs(pair.g.b0) < 1e-12


def test_verify_welding_detects_wrong_pair():
    naive = WeldingPair(DiskMap([1.0]), ExteriorMap(1.0, 0.0, []), 0.0)
    rep = verify_welding(naive, SINE)
    # sup |e^{i(theta + 0.1 sin theta)} - e^{i theta}| = 2 sin(0.05)
    assert rep["sup"] == pytest.approx(2 * math.sin(0.05), rel=1e-12)
    assert rep["complementary"]


def test_weld_sine_perturbation():
    pair = weld(SINE, 0.2)
    rep = verify_welding(pair, SINE)
    assert rep["sup"] <= 1e-9
    assert rep["f0"] <= 1e-12 and rep["scale"] <= 1e-12
    assert rep["g_inf_positive"] and rep["complementary"]


def test_weld_scale_equivariance():
    a, b = weld(SINE, 0.0), weld(SINE, 0.7)
    z = 0.9 * np.exp(1j * THETA[::32])
    assert np.allclose(b.f(z), math.exp(0.7) * a.f(z), atol=1e-12)
    assert b.g.b == pytest.approx(math.exp(0.7) * a.g.b)


def test_weld_unique_from_different_starts(rng):
    base = weld(SINE)
    K = base.info["n_coeffs"]
    x0 = rng.standard_normal(2 * K + 1) + 1j * rng.standard_normal(2 * K + 1)
    other = weld(SINE, x0=x0)
    assert np.allclose(other.f.coeffs, base.f.coeffs, atol=1e-10)


def test_unweld_identity():
    gamma, m = unweld(DiskMap([1.0]))
    assert np.allclose(gamma(THETA), THETA, atol=1e-12)
    assert m == pytest.approx(0.0)
    gamma, m = unweld(DiskMap([2j]))
    assert np.allclose(gamma(THETA), THETA + np.pi / 2, atol=1e-12)
    assert m == pytest.approx(math.log(2))


def test_unweld_rejects_self_intersecting_boundary():
    f = DiskMap([4.0 ** (k - 1) / math.factorial(k) for k in range(1, 41)])
    with pytest.raises(WeldingError):
        unweld(f)


@settings(max_examples=8)
@given(st.integers(0, 10_000), st.floats(-0.5, 0.5))
def test_weld_unweld_round_trip(seed, m):
    gamma = random_circle_map(np.random.default_rng(seed))
    pair = weld(gamma, m)
    g2, m2 = unweld(pair.f)
    assert np.max(np.abs(g2(THETA) - gamma(THETA))) <= 1e-4
    assert abs(m2 - m) <= 1e-6


def test_decay_radius_examples():
    assert decay_radius(0.5 ** np.arange(40)) == pytest.approx(2.0, rel=1e-9)
    assert decay_radius([1.0, 0.0]) == 10.0

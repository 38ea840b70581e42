import math

import numpy as np
import pytest

import interplab as il


def test_version():
    assert il.__version__


def scalar_couple(a=1.0, b=1.0):
    return il.Couple(il.Space(2.0, np.array([a])), il.Space(2.0, np.array([b])))


def test_space_norm_euclidean():
    s = il.Space(2.0, np.array([1.0, 1.0]))
    assert s.dim == 2
    assert s.norm(np.array([3.0 + 0j, 4.0 + 0j])) == pytest.approx(5.0, rel=1e-14)


def test_space_rejects_bad_weights():
    with pytest.raises(ValueError):
        il.Space(2.0, np.array([1.0, -1.0]))


def test_k_functional_equal_couple_is_min_norm():
    c = il.Couple(il.Space(1.0, np.array([1.0, 1.0])), il.Space(1.0, np.array([1.0, 1.0])))
    x = np.array([1.0 + 0j, 1.0 + 0j])
    value, x0, x1 = il.k_functional(c, x, 1.0)
    assert value == pytest.approx(2.0, rel=1e-8)
    assert np.allclose(x0 + x1, x)
    # against the exhaustive oracle
    assert value == pytest.approx(il.k_oracle(c, x, 1.0), rel=1e-4)


def test_interp_norm_scalar_closed_form():
    prm = il.Params(theta=0.5, p0=2.0, p1=2.0)
    got = il.interp_norm(scalar_couple(), prm, np.array([1.0 + 0j]))
    assert got == pytest.approx(math.sqrt(2.0), rel=1e-6)


def test_strip_upper_dominates_within_band():
    prm = il.Params(theta=0.5, p0=2.0, p1=2.0)
    c = scalar_couple(1.0, 4.0)
    x = np.array([1.0 + 0j])
    upper = il.strip_norm_upper(c, prm, x, L=60.0, h=0.1, max_iters=2000)
    real = il.interp_norm(c, prm, x)
    assert math.isfinite(upper) and upper > 0.0
    assert upper / real < 25.0


def test_rademacher_scalars_exact():
    s = il.Space(2.0, np.array([1.0]))
    xs = [np.array([3.0 + 0j]), np.array([4.0 + 0j])]
    assert il.rademacher_average(s, xs) == 5.0


def test_r_bound_single_operator():
    s = il.Space(2.0, np.array([1.0, 1.0]))
    T = np.diag([2.0 + 0j, -3.0 + 0j])
    assert il.r_bound_lower([T], s, trials=10, seed=3) == pytest.approx(3.0, abs=1e-12)


def test_resolvent_sup_identity():
    s = il.Space(2.0, np.array([1.0, 1.0]))
    eye = np.eye(2, dtype=complex)
    assert il.resolvent_sup(eye, s, math.pi / 6) == pytest.approx(2.0, abs=1e-3)
    assert il.resolvent_sup(eye, s, math.pi / 2) == pytest.approx(1.0, abs=1e-3)


def test_sectoriality_angle_diagonal():
    s = il.Space(2.0, np.array([1.0, 1.0]))
    A = np.diag([1.0, np.exp(1j * math.pi / 4)])
    omega, not_sectorial = il.sectoriality_angle(A, s)
    assert not not_sectorial
    assert omega == pytest.approx(math.pi / 4, abs=1e-3)


def test_weighted_equivalence_small_suite():
    rep = il.weighted_equivalence_check(
        2, 1.0, 2.0, np.array([1.0, 0.5]), np.array([2.0, 1.5]), 0.5, samples=12, seed=5
    )
    assert rep["pass"]
    assert rep["max_ratio"] / rep["min_ratio"] <= 10.0

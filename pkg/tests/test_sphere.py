import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_invertible, translation_with_pullback
from sphere_distal import (
    AffineSphereMap,
    DegenerateMap,
    InvalidTranslation,
    NonInjectiveWarning,
    Regime,
    ZeroTranslation,
    affine_inverse_image,
    affine_is_homeomorphism,
    apply_affine,
    apply_projective,
    orbit,
    rotation,
)


def test_apply_projective_eigendirection():
    out = apply_projective(np.diag([2.0, 1.0]), [1.0, 0.0])
    assert np.allclose(out, [1.0, 0.0])


def test_apply_projective_normalizes():
    x = np.array([1.0, 1.0]) / math.sqrt(2.0)
    out = apply_projective(np.diag([2.0, 1.0]), x)
    assert np.allclose(out, np.array([2.0, 1.0]) / math.sqrt(5.0))


def test_apply_projective_shear():
    out = apply_projective([[1.0, 1.0], [0.0, 1.0]], [0.0, 1.0])
    assert np.allclose(out, np.array([1.0, 1.0]) / math.sqrt(2.0))


def test_positive_scale_equivariance_exact():
    rng = np.random.default_rng(1)
    for _ in range(25):
        T = random_invertible(rng, 2)
        x = rng.standard_normal(2)
        x /= np.linalg.norm(x)
        base = apply_projective(T, x)
        for beta in (0.5, 2.0, 1024.0):
            assert np.array_equal(apply_projective(beta * T, x), base)


def test_affine_scale_equivariance():
    # the affine map built from (beta*T, beta*a) is the same map
    rng = np.random.default_rng(2)
    for _ in range(25):
        T = random_invertible(rng, 2)
        a = translation_with_pullback(rng, T, 0.5)
        x = rng.standard_normal(2)
        x /= np.linalg.norm(x)
        base = apply_affine(AffineSphereMap.create(T, a), x)
        for beta in (0.5, 2.0, 8.0):
            m = AffineSphereMap.create(beta * T, beta * a)
            assert np.array_equal(apply_affine(m, x), base)


def test_apply_affine_fixed_point_example():
    m = AffineSphereMap.create(np.diag([2.0, 0.5]), [0.0, 0.2])
    out = apply_affine(m, [0.0, 1.0])
    assert np.allclose(out, [0.0, 1.0], atol=1e-15)


def test_apply_affine_identity():
    m = AffineSphereMap.create(np.eye(2))
    x = np.array([0.6, 0.8])
    assert np.allclose(apply_affine(m, x), x)


def test_apply_affine_minus_id_period2():
    m = AffineSphereMap.create(-np.eye(2), [0.6, 0.0])
    out = apply_affine(m, [1.0, 0.0])
    assert np.allclose(out, [-1.0, 0.0])  # (0.6 - 1, 0) / 0.4


def test_regime_homeomorphism():
    report = affine_is_homeomorphism(np.diag([2.0, 0.5]), [0.0, 0.2])
    assert report.regime is Regime.HOMEOMORPHISM
    assert report.pullback_norm == pytest.approx(0.4)


def test_regime_non_injective_witness():
    report = affine_is_homeomorphism(np.eye(2), [3.0, 0.0])
    assert report.regime is Regime.NON_INJECTIVE
    assert report.pullback_norm == pytest.approx(3.0)
    x, minus_x = report.witness
    assert np.allclose(x, -minus_x)
    m = AffineSphereMap.create(np.eye(2), [3.0, 0.0])
    with pytest.warns(NonInjectiveWarning):
        image_plus = apply_affine(m, x)
    with pytest.warns(NonInjectiveWarning):
        image_minus = apply_affine(m, minus_x)
    a_bar = np.array([1.0, 0.0])
    assert np.linalg.norm(image_plus - a_bar) < 1e-9
    assert np.linalg.norm(image_minus - a_bar) < 1e-9


def test_regime_degenerate():
    report = affine_is_homeomorphism(np.eye(2), [1.0, 0.0])
    assert report.regime is Regime.DEGENERATE
    m = AffineSphereMap.create(np.eye(2), [1.0, 0.0])
    with pytest.raises(DegenerateMap):
        apply_affine(m, [0.0, 1.0])


def test_regime_zero_translation():
    with pytest.raises(ZeroTranslation):
        affine_is_homeomorphism(np.eye(2), [0.0, 0.0])


def test_noninjective_witness_random():
    rng = np.random.default_rng(3)
    for d in (2, 3):
        for _ in range(50):
            T = random_invertible(rng, d)
            a = translation_with_pullback(rng, T, rng.uniform(1.05, 3.0))
            report = affine_is_homeomorphism(T, a)
            assert report.regime is Regime.NON_INJECTIVE
            m = AffineSphereMap.create(T, a)
            a_bar = a / np.linalg.norm(a)
            with pytest.warns(NonInjectiveWarning):
                for w in report.witness:
                    assert np.linalg.norm(apply_affine(m, w) - a_bar) < 1e-9


def test_inverse_image_quadratic_example():
    # Psi(t) = |t - 0.5| crosses 1 at t0 = 1.5, so the preimage is (1, 0)
    m = AffineSphereMap.create(np.eye(2), [0.5, 0.0])
    x = affine_inverse_image(m, [1.0, 0.0])
    assert np.allclose(x, [1.0, 0.0], atol=1e-12)
    assert np.allclose(apply_affine(m, x), [1.0, 0.0], atol=1e-12)


def test_inverse_image_projective_reduction():
    T = np.array([[2.0, 1.0], [0.0, 1.0]])
    m = AffineSphereMap.create(T)
    y = np.array([0.6, 0.8])
    x = affine_inverse_image(m, y)
    Tinv_y = np.linalg.solve(T, y)
    assert np.allclose(x, Tinv_y / np.linalg.norm(Tinv_y))


@settings(max_examples=60, deadline=None)
@given(
    seed=st.integers(0, 10_000),
    c=st.floats(0.02, 0.93),
    d=st.sampled_from([2, 3]),
)
def test_inverse_forward_round_trip(seed, c, d):
    rng = np.random.default_rng(seed)
    T = random_invertible(rng, d)
    a = translation_with_pullback(rng, T, c)
    m = AffineSphereMap.create(T, a)
    assert m.regime is Regime.HOMEOMORPHISM
    y = rng.standard_normal(d)
    y /= np.linalg.norm(y)
    x = affine_inverse_image(m, y)
    assert abs(np.linalg.norm(x) - 1.0) < 1e-9
    assert np.linalg.norm(apply_affine(m, x) - y) < 1e-8
    # and the other composition order
    forward = apply_affine(m, y)
    back = affine_inverse_image(m, forward)
    assert np.linalg.norm(back - y) < 1e-8


def test_orbit_rotation_order4():
    m = AffineSphereMap.create(rotation(math.pi / 2))
    record = orbit(m, [1.0, 0.0], 4)
    assert record.length == 5
    assert np.allclose(record.points[4], record.points[0], atol=1e-12)


def test_orbit_shear_converges_to_pole():
    # iterates of (0, 1) under the shear are (n, 1)/sqrt(n^2 + 1)
    m = AffineSphereMap.create([[1.0, 1.0], [0.0, 1.0]])
    record = orbit(m, [0.0, 1.0], 40)
    for n in range(41):
        expected = np.array([n, 1.0]) / math.hypot(n, 1.0)
        assert np.allclose(record.points[n], expected, atol=1e-12)
    assert np.linalg.norm(record.points[-1] - [1.0, 0.0]) < 0.05


def test_orbit_zero_steps():
    m = AffineSphereMap.create(np.eye(2))
    record = orbit(m, [0.0, 1.0], 0)
    assert record.points.shape == (1, 2)


def test_orbit_step_invariant():
    rng = np.random.default_rng(4)
    T = random_invertible(rng, 3)
    a = translation_with_pullback(rng, T, 0.4)
    m = AffineSphereMap.create(T, a)
    record = orbit(m, np.array([1.0, 0.0, 0.0]), 25)
    for k in range(25):
        step = apply_affine(m, record.points[k])
        assert np.linalg.norm(record.points[k + 1] - step) < 1e-9
        assert abs(np.linalg.norm(record.points[k + 1]) - 1.0) < 1e-9


def test_orbit_rejects_bad_regime():
    m = AffineSphereMap.create(np.eye(2), [2.0, 0.0])
    with pytest.raises(InvalidTranslation):
        orbit(m, [1.0, 0.0], 3)

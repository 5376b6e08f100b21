import math

import numpy as np
import pytest

from helpers import random_conjugator, random_invertible
from sphere_distal import (
    ComplexPair,
    JordanBlock,
    RealDiagonalizable,
    RealSpectrum,
    SingularMatrix,
    conjugate_to_large_norm,
    contraction_subspace,
    normalize_to_unimodular,
    operator_norm,
    real_schur_2x2,
    rotation,
)
from sphere_distal.linalg import (
    as_matrix,
    eigenvalues_3x3,
    matrix_inverse,
    spectral_summary,
)


def test_normalize_forced_by_unit_det():
    nm = normalize_to_unimodular(np.diag([2.0, 2.0]))
    assert nm.scale == pytest.approx(0.5)
    assert np.allclose(nm.unit, np.eye(2))


def test_normalize_already_unimodular():
    T = np.diag([2.0, 0.5])
    nm = normalize_to_unimodular(T)
    assert nm.scale == pytest.approx(1.0)
    assert np.array_equal(nm.unit, T)


def test_normalize_derived_example():
    # alpha = |det|^(-1/2) = 4^(-1/2) = 1/2
    nm = normalize_to_unimodular(np.diag([4.0, 1.0]))
    assert nm.scale == pytest.approx(0.5)
    assert np.allclose(nm.unit, np.diag([2.0, 0.5]))
    det_unit = nm.unit[0, 0] * nm.unit[1, 1] - nm.unit[0, 1] * nm.unit[1, 0]
    assert abs(abs(det_unit) - 1.0) < 1e-12


def test_normalize_rejects_singular():
    with pytest.raises(SingularMatrix):
        normalize_to_unimodular([[1.0, 1.0], [1.0, 1.0]])


def test_normalize_projectively_neutral_dyadic():
    # power-of-two determinant: the rescaling is exact, directions match bitwise
    rng = np.random.default_rng(3)
    T = np.array([[2.0, 1.0], [1.0, 2.5]])
    assert T[0, 0] * T[1, 1] - T[0, 1] * T[1, 0] == 4.0
    unit = normalize_to_unimodular(T).unit
    for _ in range(20):
        x = rng.standard_normal(2)
        x /= np.linalg.norm(x)
        u = T @ x
        w = unit @ x
        assert np.array_equal(u / np.linalg.norm(u), w / np.linalg.norm(w))


def test_normalize_projectively_neutral_generic():
    rng = np.random.default_rng(4)
    for _ in range(50):
        T = random_invertible(rng, 2)
        x = rng.standard_normal(2)
        x /= np.linalg.norm(x)
        u = T @ x
        w = normalize_to_unimodular(T).unit @ x
        assert np.allclose(u / np.linalg.norm(u), w / np.linalg.norm(w), atol=5e-15)


def test_schur_shear_is_defective():
    es = real_schur_2x2([[1.0, 1.0], [0.0, 1.0]])
    assert isinstance(es.kind, JordanBlock)
    assert es.kind.eigenvalue == pytest.approx(1.0)
    assert es.semisimple is False


def test_schur_rotation_is_complex_pair():
    es = real_schur_2x2(rotation(math.pi / 3))
    assert isinstance(es.kind, ComplexPair)
    assert es.kind.modulus == pytest.approx(1.0)
    assert es.kind.angle == pytest.approx(math.pi / 3)
    assert es.conditioning == pytest.approx(1.0)


def test_schur_complex_reconstruction():
    T = np.array([[0.0, -4.0], [1.0, 0.0]])
    es = real_schur_2x2(T)
    assert isinstance(es.kind, ComplexPair)
    assert es.kind.modulus == pytest.approx(2.0)
    assert es.kind.angle == pytest.approx(math.pi / 2)
    assert np.allclose(es.reconstruct(), T, atol=1e-10)
    assert abs(abs(np.linalg.det(es.kind.basis)) - 1.0) < 1e-12


@pytest.mark.parametrize("seed", range(4))
def test_schur_reconstruction_random(seed):
    rng = np.random.default_rng(100 + seed)
    for kind in ("diag", "jordan", "complex"):
        A = random_conjugator(rng)
        if kind == "diag":
            B = np.diag([rng.uniform(0.3, 2.0), -rng.uniform(0.3, 2.0)])
        elif kind == "jordan":
            lam = rng.uniform(0.5, 1.5)
            B = np.array([[lam, 1.0], [0.0, lam]])
        else:
            B = rng.uniform(0.5, 2.0) * rotation(rng.uniform(0.1, 3.0))
        T = A @ B @ matrix_inverse(A)
        es = real_schur_2x2(T)
        assert np.allclose(es.reconstruct(), T, atol=1e-9 * operator_norm(T))
        assert es.conditioning >= 1.0


def test_operator_norm_values():
    assert operator_norm(np.eye(2)) == 1.0
    assert operator_norm(np.diag([3.0, 1.0 / 3.0])) == pytest.approx(3.0)
    # largest eigenvalue of T^T T for the shear, via the quadratic formula
    expected = math.sqrt((3.0 + math.sqrt(5.0)) / 2.0)
    assert operator_norm([[1.0, 1.0], [0.0, 1.0]]) == pytest.approx(expected, abs=1e-14)


def test_operator_norm_matches_svd():
    rng = np.random.default_rng(5)
    for d in (2, 3, 4):
        for _ in range(20):
            T = rng.standard_normal((d, d))
            assert operator_norm(T) == pytest.approx(
                np.linalg.svd(T, compute_uv=False)[0], rel=1e-12
            )


def test_eigenvalue_norm_bounds():
    rng = np.random.default_rng(6)
    for d in (2, 3):
        for _ in range(30):
            T = random_invertible(rng, d)
            eigs = np.linalg.eigvals(T)
            hi = operator_norm(T) + 1e-9
            lo = 1.0 / operator_norm(matrix_inverse(T)) - 1e-9
            assert all(lo <= abs(lam) <= hi for lam in eigs)


def test_contraction_subspace_rotation_empty():
    basis = contraction_subspace(rotation(1.0))
    assert basis.shape == (2, 0)


def test_contraction_subspace_split_diag():
    basis = contraction_subspace(np.diag([2.0, 0.5]))
    assert basis.shape == (2, 1)
    assert abs(abs(basis[1, 0]) - 1.0) < 1e-12


def test_contraction_subspace_full_space():
    T = np.array([[0.0, -4.0], [1.0, 0.0]]) / 4.0  # eigen moduli 1/2
    basis = contraction_subspace(T)
    assert basis.shape == (2, 2)
    # iterates of the basis vectors actually contract
    for k in range(basis.shape[1]):
        v = basis[:, k]
        for _ in range(40):
            v = T @ v
        assert np.linalg.norm(v) < 1e-10


def test_contraction_sum_trivial_iff_unimodular_spectrum():
    rng = np.random.default_rng(7)
    for d in (2, 3):
        # semisimple with all moduli 1: conjugated isometry
        Q, _ = np.linalg.qr(rng.standard_normal((d, d)))
        A = random_invertible(rng, d, max_cond=10)
        T = A @ Q @ np.linalg.inv(A)
        both = (
            contraction_subspace(T).shape[1]
            + contraction_subspace(matrix_inverse(T)).shape[1]
        )
        assert both == 0
        # split moduli: at least one side is nontrivial
        D = np.diag(np.linspace(2.0, 0.5, d))
        S = A @ D @ np.linalg.inv(A)
        split = (
            contraction_subspace(S).shape[1]
            + contraction_subspace(matrix_inverse(S)).shape[1]
        )
        assert split > 0


def test_conjugate_to_large_norm_bound():
    S = conjugate_to_large_norm(rotation(math.pi / 2), 3.0)
    # norm grows at least like beta^2 * |t sin(theta)| = 9
    assert operator_norm(S) >= 9.0 - 1e-9
    assert operator_norm(S) > 5.0


def test_conjugate_beta_one_is_identity_conjugation():
    T = rotation(math.pi / 2)
    S = conjugate_to_large_norm(T, 1.0)
    assert np.allclose(S, T, atol=1e-12)
    assert operator_norm(S) == pytest.approx(1.0, abs=1e-12)


def test_conjugate_preserves_spectrum():
    T = 2.0 * rotation(math.pi / 3)
    S = conjugate_to_large_norm(T, 4.0)
    # characteristic polynomial comparison: trace and determinant
    assert np.trace(S) == pytest.approx(np.trace(T), abs=1e-10)
    assert np.linalg.det(S) == pytest.approx(np.linalg.det(T), abs=1e-10)


def test_conjugate_rejects_real_spectrum():
    with pytest.raises(RealSpectrum):
        conjugate_to_large_norm(np.diag([2.0, 0.5]), 3.0)


def test_eigenvalues_3x3_against_numpy():
    rng = np.random.default_rng(8)
    for _ in range(40):
        T = random_invertible(rng, 3)
        mine = sorted(eigenvalues_3x3(T), key=lambda z: (z.real, z.imag))
        ref = sorted(np.linalg.eigvals(T), key=lambda z: (z.real, z.imag))
        for a, b in zip(mine, ref):
            assert a == pytest.approx(b, abs=1e-8 * max(1.0, operator_norm(T)))


def test_spectral_summary_3x3_defective():
    T = np.array([[1.0, 1.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    summary = spectral_summary(T)
    assert summary.semisimple is False
    assert spectral_summary(np.diag([1.0, 2.0, 3.0])).semisimple is True


def test_as_matrix_rejects_nonfinite():
    with pytest.raises(SingularMatrix):
        as_matrix([[1.0, np.inf], [0.0, 1.0]])

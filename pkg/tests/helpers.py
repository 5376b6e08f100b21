"""Shared random-matrix builders for the test suite."""

import numpy as np

from sphere_distal import rotation
from sphere_distal.linalg import matrix_inverse, operator_norm, real_schur_2x2


def random_conjugator(rng, max_cond=8.0):
    """A well-conditioned 2x2 change of basis."""
    while True:
        A = rng.standard_normal((2, 2))
        det = A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
        if abs(det) < 0.3:
            continue
        if operator_norm(A) * operator_norm(matrix_inverse(A)) <= max_cond:
            return A


def random_invertible(rng, d, max_cond=50.0):
    while True:
        T = rng.standard_normal((d, d))
        sv = np.linalg.svd(T, compute_uv=False)
        if sv[-1] > 1e-3 and sv[0] / sv[-1] <= max_cond:
            return T


def random_positive_real_2x2(rng, defective=False):
    """2x2 matrix with a positive real eigenvalue (defective on request)."""
    A = random_conjugator(rng)
    if defective:
        lam = rng.uniform(0.3, 2.0)
        B = np.array([[lam, 1.0], [0.0, lam]])
    else:
        t = rng.uniform(0.3, 2.5)
        s = rng.uniform(0.3, 2.5) * rng.choice([-1.0, 1.0])
        B = np.diag([t, s])
    return A @ B @ matrix_inverse(A)


def random_complex_2x2(rng, max_kappa_sine=0.8):
    """Complex-spectrum matrix whose conditioning * |sin| stays feasible."""
    for _ in range(200):
        A = random_conjugator(rng)
        theta = rng.uniform(0.02, 1.4)
        t = rng.uniform(0.5, 2.0)
        T = t * (A @ rotation(theta) @ matrix_inverse(A))
        es = real_schur_2x2(T / np.sqrt(abs(np.linalg.det(T))))
        if es.conditioning * abs(np.sin(es.kind.angle)) <= max_kappa_sine:
            return T, es
    raise RuntimeError("could not sample a feasible complex matrix")


def translation_with_pullback(rng, T, c):
    """A translation with ||T^-1 a|| exactly c, in a random direction."""
    u = rng.standard_normal(T.shape[0])
    u = u / np.linalg.norm(u)
    return T @ (c * u)


def random_orthogonal_3x3(rng, flip=False):
    Q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
    if flip:
        Q = Q.copy()
        Q[:, 0] = -Q[:, 0]
    return Q

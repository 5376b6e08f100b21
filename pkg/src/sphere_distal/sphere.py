"""Projective and affine actions of invertible matrices on the unit sphere.

The projective action sends x to T(x)/||T(x)||; the affine action sends
x to (a + T(x))/||a + T(x)||.  The affine map is a homeomorphism exactly
when ||T^-1(a)|| < 1, which drives the regime classification below.
All maps re-normalize their output, so long orbits do not drift off the
sphere.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_CONFIG, Config
from .errors import (
    DegenerateMap,
    DimensionMismatch,
    InvalidTranslation,
    NonInjectiveWarning,
    ZeroTranslation,
)
from .linalg import as_matrix, matrix_inverse


def unit_vector(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    n = float(np.linalg.norm(v))
    if n == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return v / n


def _safe_sqrt(x: float) -> float:
    # guards tiny negative round-off under a radical
    return float(np.sqrt(max(x, 0.0)))


def as_sphere_point(x, d: int | None = None, config: Config = DEFAULT_CONFIG) -> np.ndarray:
    """Validate a near-unit vector and return it re-normalized."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise DimensionMismatch("sphere points are 1-d vectors")
    if d is not None and x.shape[0] != d:
        raise DimensionMismatch(f"expected a point in dimension {d}, got {x.shape[0]}")
    n = float(np.linalg.norm(x))
    if abs(n - 1.0) > config.unit_norm_tol:
        raise ValueError(f"|norm - 1| = {abs(n - 1):.3e} exceeds the unit tolerance")
    return x / n


class Regime(enum.Enum):
    PROJECTIVE = "projective"
    HOMEOMORPHISM = "homeomorphism"
    NON_INJECTIVE = "non-injective"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class RegimeReport:
    """Classification of an affine sphere map by its pullback norm ||T^-1 a||.

    For the non-injective regime the two antipodal witness points
    +/- T^-1(a)/||T^-1(a)|| are attached; both map to a/||a||.
    """

    regime: Regime
    pullback_norm: float
    witness: np.ndarray | None  # shape (2, d) when regime is NON_INJECTIVE


def affine_is_homeomorphism(T, a, config: Config = DEFAULT_CONFIG) -> RegimeReport:
    """Classify the affine sphere map built from (T, a).

    The map is a homeomorphism iff ||T^-1(a)|| < 1.  Values within the
    classification band of 1 are Degenerate: the map can annihilate a
    point exactly there, so no side is guessed.
    """
    T = as_matrix(T)
    a = np.asarray(a, dtype=float)
    if a.shape != (T.shape[0],):
        raise DimensionMismatch("translation must match the matrix dimension")
    if float(np.linalg.norm(a)) == 0.0:
        raise ZeroTranslation("use the projective action for a = 0")
    pullback = matrix_inverse(T, config) @ a
    rho = float(np.linalg.norm(pullback))
    if abs(rho - 1.0) <= config.classify_tol:
        return RegimeReport(Regime.DEGENERATE, rho, None)
    if rho < 1.0:
        return RegimeReport(Regime.HOMEOMORPHISM, rho, None)
    x = pullback / rho
    return RegimeReport(Regime.NON_INJECTIVE, rho, np.stack([x, -x]))


@dataclass(frozen=True)
class AffineSphereMap:
    """An invertible matrix with a translation, acting on the unit sphere."""

    matrix: np.ndarray
    translation: np.ndarray
    regime: Regime
    pullback_norm: float

    @classmethod
    def create(cls, T, a=None, config: Config = DEFAULT_CONFIG) -> "AffineSphereMap":
        T = as_matrix(T)
        d = T.shape[0]
        if a is None:
            a = np.zeros(d)
        a = np.asarray(a, dtype=float)
        if a.shape != (d,):
            raise DimensionMismatch("translation must match the matrix dimension")
        if float(np.linalg.norm(a)) == 0.0:
            matrix_inverse(T, config)  # invertibility gate
            return cls(T, a, Regime.PROJECTIVE, 0.0)
        report = affine_is_homeomorphism(T, a, config)
        return cls(T, a, report.regime, report.pullback_norm)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def describe(self) -> dict:
        return {
            "matrix": self.matrix.tolist(),
            "translation": self.translation.tolist(),
            "regime": self.regime.value,
            "pullback_norm": self.pullback_norm,
        }


def apply_projective(T, x, config: Config = DEFAULT_CONFIG) -> np.ndarray:
    """The induced sphere map x -> T(x)/||T(x)||.

    Invariant under positive rescaling of T: any beta > 0 gives the same
    direction, bit-exactly when beta*T is exactly representable.
    """
    T = as_matrix(T)
    x = as_sphere_point(x, T.shape[0], config)
    return unit_vector(T @ x)


def apply_affine(m: AffineSphereMap, x, config: Config = DEFAULT_CONFIG) -> np.ndarray:
    """The affine sphere map x -> (a + T(x))/||a + T(x)||.

    Raises DegenerateMap in the degenerate regime.  In the non-injective
    regime a NonInjectiveWarning is emitted and the image is still
    computed, unless the image vector collapses below tolerance.
    """
    if m.regime is Regime.DEGENERATE:
        raise DegenerateMap("pullback norm within tolerance of 1")
    x = as_sphere_point(x, m.dim, config)
    if m.regime is Regime.NON_INJECTIVE:
        warnings.warn(
            "applying a non-injective affine sphere map", NonInjectiveWarning, stacklevel=2
        )
    v = m.translation + m.matrix @ x
    n = float(np.linalg.norm(v))
    if n <= config.classify_tol:
        raise DegenerateMap("map annihilates this point")
    return v / n


def apply_many(m: AffineSphereMap, X: np.ndarray) -> np.ndarray:
    """Vectorized map application on rows of X (no per-point validation)."""
    V = X @ m.matrix.T + m.translation
    return V / np.linalg.norm(V, axis=1, keepdims=True)


def affine_inverse_image(m: AffineSphereMap, y, config: Config = DEFAULT_CONFIG) -> np.ndarray:
    """The unique preimage of y under a homeomorphism-regime affine map.

    Solves ||t * T^-1(y) - T^-1(a)|| = 1 for t > 0; the square of the
    left side is an exact quadratic in t whose constant term
    ||T^-1(a)||^2 - 1 is negative, so there is exactly one positive root
    and no iteration is needed.  The preimage is t0*T^-1(y) - T^-1(a).
    """
    y = as_sphere_point(y, m.dim, config)
    T_inv = matrix_inverse(m.matrix, config)
    u = T_inv @ y
    if m.regime is Regime.PROJECTIVE:
        return unit_vector(u)
    if m.regime is not Regime.HOMEOMORPHISM:
        raise DegenerateMap("inverse image requires the homeomorphism regime")
    w = T_inv @ m.translation
    uu = float(np.dot(u, u))
    uw = float(np.dot(u, w))
    ww = float(np.dot(w, w))
    # uu*t^2 - 2*uw*t + (ww - 1) = 0, ww < 1
    t0 = (uw + _safe_sqrt(uw * uw - uu * (ww - 1.0))) / uu
    return t0 * u - w


@dataclass(frozen=True)
class OrbitRecord:
    """Forward orbit of a point: points[k+1] = map(points[k])."""

    points: np.ndarray  # (length, d)
    map: AffineSphereMap
    length: int


def orbit(m: AffineSphereMap, x, steps: int, config: Config = DEFAULT_CONFIG) -> OrbitRecord:
    """Record steps+1 orbit points starting at x."""
    if steps < 0:
        raise ValueError("steps must be non-negative")
    if m.regime not in (Regime.PROJECTIVE, Regime.HOMEOMORPHISM):
        raise InvalidTranslation(f"orbit requires an invertible regime, got {m.regime.value}")
    x = as_sphere_point(x, m.dim, config)
    pts = np.empty((steps + 1, m.dim))
    pts[0] = x
    for k in range(steps):
        pts[k + 1] = apply_affine(m, pts[k], config)
    return OrbitRecord(points=pts, map=m, length=steps + 1)

"""Matrix Lie-group primitives for SO(3) and SE(3).

Conventions used throughout the package:

* 6-vectors put the angular block first: a twist stacks as (omega, v) and
  a wrench as (torque, force).
* The group adjoint of a pose (R, p) is the block matrix
  ``[[R, 0], [hat(p) R, R]]`` and the algebra adjoint of a twist is
  ``[[hat(w), 0], [hat(v), hat(w)]]``; the coadjoint is its transpose.
* Rotations are plain 3x3 arrays wrapped in :class:`Rotation`, which
  enforces orthonormality and unit determinant on construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "AngleNearPi",
    "DegenerateRotation",
    "Rotation",
    "Pose",
    "Twist",
    "hat3",
    "vee3",
    "exp_so3",
    "log_so3",
    "adjoint_group",
    "adjoint_algebra",
    "coadjoint",
    "reorthonormalize",
]

# Below this rotation angle, Rodrigues' sinc coefficients switch to their
# second-order Taylor expansions to avoid 0/0.
SMALL_ANGLE = 1e-8

_ORTHO_TOL = 1e-9
_DET_TOL = 1e-9


class AngleNearPi(ValueError):
    """Rotation logarithm could not be resolved in the branch near pi."""


class DegenerateRotation(ValueError):
    """Matrix cannot be repaired into a rotation (determinant <= 0)."""


def _as_vec(x, n: int) -> np.ndarray:
    v = np.asarray(x, dtype=float).reshape(-1)
    if v.shape != (n,):
        raise ValueError(f"expected length-{n} vector, got shape {np.shape(x)}")
    return v


def _cross3(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Cross product without numpy's generic-axis dispatch overhead."""
    return np.array(
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    )


def _det3(m: np.ndarray) -> float:
    return float(
        m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
        - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
        + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0])
    )


@dataclass(frozen=True, eq=False)
class Rotation:
    """Element of SO(3), validated at construction.

    Orthonormality is checked to 1e-9 in Frobenius norm and the
    determinant to 1e-9, so integrator output must be repaired with
    :func:`reorthonormalize` before wrapping.
    """

    m: np.ndarray

    def __post_init__(self):
        m = np.array(self.m, dtype=float)
        if m.shape != (3, 3):
            raise ValueError(f"rotation must be 3x3, got {m.shape}")
        if not np.isfinite(m).all():
            raise ValueError("rotation has non-finite entries")
        err = m.T @ m
        err[0, 0] -= 1.0
        err[1, 1] -= 1.0
        err[2, 2] -= 1.0
        if float((err * err).sum()) > _ORTHO_TOL**2:
            raise ValueError("matrix is not orthonormal to 1e-9")
        if abs(_det3(m) - 1.0) > _DET_TOL:
            raise ValueError("matrix determinant is not 1 to 1e-9")
        m.flags.writeable = False
        object.__setattr__(self, "m", m)

    @staticmethod
    def identity() -> "Rotation":
        return Rotation(np.eye(3))


@dataclass(frozen=True, eq=False)
class Pose:
    """Rigid-body configuration (rotation, position) on SE(3)."""

    rotation: Rotation
    position: np.ndarray

    def __post_init__(self):
        p = _as_vec(self.position, 3).copy()
        if not np.isfinite(p).all():
            raise ValueError("position has non-finite entries")
        p.flags.writeable = False
        object.__setattr__(self, "position", p)

    @staticmethod
    def identity() -> "Pose":
        return Pose(Rotation.identity(), np.zeros(3))

    def compose(self, other: "Pose") -> "Pose":
        """Group product self * other."""
        r = self.rotation.m @ other.rotation.m
        p = self.position + self.rotation.m @ other.position
        return Pose(Rotation(r), p)

    def inverse(self) -> "Pose":
        rt = self.rotation.m.T
        return Pose(Rotation(rt.copy()), -(rt @ self.position))


@dataclass(frozen=True, eq=False)
class Twist:
    """Body-frame velocity (omega [rad/s], linear [m/s]); angular first."""

    omega: np.ndarray
    linear: np.ndarray

    def __post_init__(self):
        w = _as_vec(self.omega, 3).copy()
        v = _as_vec(self.linear, 3).copy()
        if not (np.isfinite(w).all() and np.isfinite(v).all()):
            raise ValueError("twist has non-finite entries")
        w.flags.writeable = False
        v.flags.writeable = False
        object.__setattr__(self, "omega", w)
        object.__setattr__(self, "linear", v)

    @staticmethod
    def zero() -> "Twist":
        return Twist(np.zeros(3), np.zeros(3))

    @staticmethod
    def from_vec6(xi) -> "Twist":
        xi = _as_vec(xi, 6)
        return Twist(xi[:3], xi[3:])

    def vec6(self) -> np.ndarray:
        return np.concatenate([self.omega, self.linear])


def hat3(w) -> np.ndarray:
    """Skew-symmetric matrix of w: hat3(w) @ x == cross(w, x)."""
    w = _as_vec(w, 3)
    return np.array(
        [
            [0.0, -w[2], w[1]],
            [w[2], 0.0, -w[0]],
            [-w[1], w[0], 0.0],
        ]
    )


def vee3(m) -> np.ndarray:
    """Inverse of hat3; for non-skew input, vee of the skew part of m."""
    m = np.asarray(m, dtype=float)
    if m.shape != (3, 3):
        raise ValueError(f"expected 3x3 matrix, got {m.shape}")
    s = 0.5 * (m - m.T)
    return np.array([s[2, 1], s[0, 2], s[1, 0]])


def exp_so3(w) -> Rotation:
    """Rodrigues exponential of a rotation vector."""
    w = _as_vec(w, 3)
    theta2 = float(w @ w)
    theta = math.sqrt(theta2)
    k = hat3(w)
    k2 = k @ k
    if theta < SMALL_ANGLE:
        a = 1.0 - theta2 / 6.0
        b = 0.5 - theta2 / 24.0
    else:
        a = math.sin(theta) / theta
        b = (1.0 - math.cos(theta)) / theta2
    return Rotation(np.eye(3) + a * k + b * k2)


def log_so3(r: Rotation) -> np.ndarray:
    """Rotation vector of r; exp_so3(log_so3(r)) == r.

    Near a half-turn the usual (R - R^T) formula degenerates, so the axis
    is recovered from the symmetric part R + R^T instead; at exactly pi
    the sign of the returned axis is an arbitrary but fixed choice.
    """
    m = r.m
    trace = float(np.trace(m))
    cos_theta = max(-1.0, min(1.0, 0.5 * (trace - 1.0)))
    theta = math.acos(cos_theta)

    if theta < SMALL_ANGLE:
        return vee3(m)

    if trace <= -1.0 + 1e-6:
        # Axis from the dominant column of (R + I)/2 = a a^T near theta=pi.
        b = 0.5 * (m + np.eye(3))
        k = int(np.argmax(np.diag(b)))
        if b[k, k] <= 1e-12:
            raise AngleNearPi("cannot extract a rotation axis near pi")
        axis = b[:, k] / math.sqrt(b[k, k])
        axis = axis / np.linalg.norm(axis)
        # Fix the sign using the residual skew part when it is informative.
        w_skew = vee3(m)
        if np.linalg.norm(w_skew) > 1e-12 and float(w_skew @ axis) < 0.0:
            axis = -axis
        return theta * axis

    return (theta / (2.0 * math.sin(theta))) * np.array(
        [m[2, 1] - m[1, 2], m[0, 2] - m[2, 0], m[1, 0] - m[0, 1]]
    )


def _adjoint_group_raw(r: np.ndarray, p: np.ndarray) -> np.ndarray:
    out = np.zeros((6, 6))
    out[:3, :3] = r
    out[3:, :3] = hat3(p) @ r
    out[3:, 3:] = r
    return out


def adjoint_group(g: Pose) -> np.ndarray:
    """6x6 group adjoint [[R, 0], [hat(p) R, R]] of a pose."""
    return _adjoint_group_raw(g.rotation.m, g.position)


def adjoint_algebra(xi: Twist) -> np.ndarray:
    """6x6 algebra adjoint [[hat(w), 0], [hat(v), hat(w)]] of a twist."""
    hw = hat3(xi.omega)
    out = np.zeros((6, 6))
    out[:3, :3] = hw
    out[3:, :3] = hat3(xi.linear)
    out[3:, 3:] = hw
    return out


def _coadjoint_apply_raw(xi6: np.ndarray, mu6: np.ndarray) -> np.ndarray:
    """Block-transpose action ad_xi^T mu without assembling the 6x6.

    With xi = (w, v) and mu = (a, b): top = -hat(w) a - hat(v) b,
    bottom = -hat(w) b, expanded componentwise.
    """
    w0, w1, w2, v0, v1, v2 = xi6
    a0, a1, a2, b0, b1, b2 = mu6
    return np.array(
        [
            a1 * w2 - a2 * w1 + b1 * v2 - b2 * v1,
            a2 * w0 - a0 * w2 + b2 * v0 - b0 * v2,
            a0 * w1 - a1 * w0 + b0 * v1 - b1 * v0,
            b1 * w2 - b2 * w1,
            b2 * w0 - b0 * w2,
            b0 * w1 - b1 * w0,
        ]
    )


def coadjoint(xi: Twist) -> np.ndarray:
    """Dual algebra adjoint; the transpose of adjoint_algebra."""
    return adjoint_algebra(xi).T


def reorthonormalize(m) -> Rotation:
    """Repair a nearly orthonormal matrix into a valid Rotation.

    Uses the Newton iteration for the orthogonal polar factor,
    X <- (X + X^-T)/2, which leaves exact rotations fixed and converges
    quadratically for integrator-drift-sized errors.
    """
    x = np.array(m.m if isinstance(m, Rotation) else m, dtype=float)
    if x.shape != (3, 3):
        raise ValueError(f"expected 3x3 matrix, got {x.shape}")
    if not np.isfinite(x).all():
        raise DegenerateRotation("matrix has non-finite entries")
    if _det3(x) <= 1e-9:
        raise DegenerateRotation("determinant <= 1e-9, no nearby rotation")
    err = x.T @ x
    err[0, 0] -= 1.0
    err[1, 1] -= 1.0
    err[2, 2] -= 1.0
    if float((err * err).sum()) < 1e-28:
        return Rotation(x)
    for _ in range(20):
        xt_inv = np.linalg.inv(x).T
        nxt = 0.5 * (x + xt_inv)
        if np.linalg.norm(nxt - x) < 1e-15:
            x = nxt
            break
        x = nxt
    return Rotation(x)

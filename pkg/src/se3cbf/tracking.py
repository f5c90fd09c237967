"""Geometric tracking controller and waypoint reference trajectories.

The nominal wrench is u_des = f_P + f_D + f_F with

    f_P = -[ vee(skew(K1 Rd^T R)) ;
             R^T (R + Rd) K2 (R^T + Rd^T) (p - pd) ]
    f_D = -Kd [ w - R^T Rd wd ;
                v - R^T Rd (vd + wd x (R^T (p - pd))) ]
    f_F = -ad_xi^T II Ad_{g^-1 gd} xi_d  +  II Ad_{g^-1 gd} xi_d_dot

where skew(M) = (M - M^T)/2 and (Rd, pd, xi_d) is the reference.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dynamics import InertiaTensor, State, Wrench
from .liealg import (
    Pose,
    Rotation,
    Twist,
    _adjoint_group_raw,
    _coadjoint_apply_raw,
    _cross3,
    vee3,
)

__all__ = [
    "Gains",
    "ReferencePoint",
    "ReferenceTrajectory",
    "control",
]


def _check_spd(m: np.ndarray, name: str) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square")
    if np.linalg.norm(m - m.T) > 1e-9:
        raise ValueError(f"{name} must be symmetric")
    if np.min(np.linalg.eigvalsh(m)) <= 0.0:
        raise ValueError(f"{name} must be positive definite")
    return m.copy()


@dataclass(frozen=True, eq=False)
class Gains:
    """Controller gains: attitude K1 (3x3), position K2 (3x3), damping Kd (6x6)."""

    k1: np.ndarray
    k2: np.ndarray
    kd: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "k1", _check_spd(self.k1, "k1"))
        object.__setattr__(self, "k2", _check_spd(self.k2, "k2"))
        object.__setattr__(self, "kd", _check_spd(self.kd, "kd"))
        if self.k1.shape != (3, 3) or self.k2.shape != (3, 3) or self.kd.shape != (6, 6):
            raise ValueError("k1, k2 must be 3x3 and kd 6x6")

    @classmethod
    def diagonal(cls, attitude: float, position: float, damping) -> "Gains":
        """Isotropic K1/K2 plus a diagonal 6-vector damping."""
        d = np.asarray(damping, dtype=float).reshape(-1)
        if d.shape != (6,):
            raise ValueError("damping must have 6 entries")
        return cls(attitude * np.eye(3), position * np.eye(3), np.diag(d))


@dataclass(frozen=True, eq=False)
class ReferencePoint:
    """Reference pose, body-frame reference twist, and its time derivative."""

    pose_d: Pose
    twist_d: Twist
    twist_d_dot: np.ndarray


def _hermite(p0, p1, v0, v1, h, s):
    """Cubic Hermite position/velocity/acceleration at normalized s in [0, 1]."""
    s2, s3 = s * s, s * s * s
    pos = (
        (2 * s3 - 3 * s2 + 1) * p0
        + (s3 - 2 * s2 + s) * h * v0
        + (-2 * s3 + 3 * s2) * p1
        + (s3 - s2) * h * v1
    )
    vel = (
        (6 * s2 - 6 * s) * p0
        + (3 * s2 - 4 * s + 1) * h * v0
        + (-6 * s2 + 6 * s) * p1
        + (3 * s2 - 2 * s) * h * v1
    ) / h
    acc = (
        (12 * s - 6) * p0
        + (6 * s - 4) * h * v0
        + (-12 * s + 6) * p1
        + (6 * s - 2) * h * v1
    ) / (h * h)
    return pos, vel, acc


@dataclass(frozen=True, eq=False)
class ReferenceTrajectory:
    """Piecewise cubic Hermite position path with a fixed attitude.

    Knot velocities default to centered finite differences (one-sided at
    the ends), which reproduces straight-line constant-speed data exactly.
    Outside [times[0], times[-1]] the trajectory clamps to the end poses
    with zero reference twist.  Construction cross-checks the analytic
    twist against finite differences of the interpolant.
    """

    times: np.ndarray
    positions: np.ndarray
    attitude: Rotation = field(default_factory=Rotation.identity)
    velocities: np.ndarray | None = None

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float).reshape(-1)
        p = np.asarray(self.positions, dtype=float)
        if p.ndim != 2 or p.shape[1] != 3 or p.shape[0] != t.shape[0]:
            raise ValueError("positions must be (n, 3) matching times")
        if t.shape[0] < 1:
            raise ValueError("need at least one waypoint")
        if np.any(np.diff(t) <= 0.0):
            raise ValueError("times must be strictly increasing")
        if self.velocities is None:
            v = np.zeros_like(p)
            if t.shape[0] > 1:
                v[0] = (p[1] - p[0]) / (t[1] - t[0])
                v[-1] = (p[-1] - p[-2]) / (t[-1] - t[-2])
                for i in range(1, t.shape[0] - 1):
                    v[i] = (p[i + 1] - p[i - 1]) / (t[i + 1] - t[i - 1])
        else:
            v = np.asarray(self.velocities, dtype=float)
            if v.shape != p.shape:
                raise ValueError("velocities must match positions shape")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "positions", p)
        object.__setattr__(self, "velocities", v)
        self._validate_derivatives()

    @classmethod
    def constant(cls, pose: Pose) -> "ReferenceTrajectory":
        return cls(np.array([0.0]), pose.position.reshape(1, 3), pose.rotation)

    def _eval(self, t: float):
        times, pos, vel = self.times, self.positions, self.velocities
        if times.shape[0] == 1 or t <= times[0]:
            idx = 0 if t <= times[0] else -1
            return pos[idx].copy(), np.zeros(3), np.zeros(3)
        if t >= times[-1]:
            return pos[-1].copy(), np.zeros(3), np.zeros(3)
        i = int(np.searchsorted(times, t, side="right") - 1)
        h = times[i + 1] - times[i]
        s = (t - times[i]) / h
        return _hermite(pos[i], pos[i + 1], vel[i], vel[i + 1], h, s)

    def _validate_derivatives(self):
        if self.times.shape[0] < 2:
            return
        eps = 1e-6
        for i in range(self.times.shape[0] - 1):
            for frac in (0.2, 0.5, 0.8):
                t = self.times[i] + frac * (self.times[i + 1] - self.times[i])
                _, dp, ddp = self._eval(t)
                p_plus, dp_plus, _ = self._eval(t + eps)
                p_minus, dp_minus, _ = self._eval(t - eps)
                fd_v = (p_plus - p_minus) / (2 * eps)
                fd_a = (dp_plus - dp_minus) / (2 * eps)
                if np.max(np.abs(fd_v - dp)) > 1e-6 * max(1.0, np.max(np.abs(dp))):
                    raise ValueError("interpolant velocity fails finite-difference check")
                if np.max(np.abs(fd_a - ddp)) > 1e-4 * max(1.0, np.max(np.abs(ddp))):
                    raise ValueError("interpolant acceleration fails finite-difference check")

    def sample(self, t: float) -> ReferencePoint:
        """Reference point at time t (clamped to the trajectory horizon)."""
        p, dp, ddp = self._eval(float(t))
        rt = self.attitude.m.T
        twist_d = Twist(np.zeros(3), rt @ dp)
        twist_d_dot = np.concatenate([np.zeros(3), rt @ ddp])
        return ReferencePoint(Pose(self.attitude, p), twist_d, twist_d_dot)

    @property
    def horizon(self) -> float:
        return float(self.times[-1])


def control(state: State, ref: ReferencePoint, gains: Gains, inertia: InertiaTensor) -> Wrench:
    """Nominal tracking wrench u_des = f_P + f_D + f_F."""
    r = state.pose.rotation.m
    p = state.pose.position
    rd = ref.pose_d.rotation.m
    pd = ref.pose_d.position
    w = state.twist.omega
    v = state.twist.linear
    wd = ref.twist_d.omega
    vd = ref.twist_d.linear

    perr = p - pd
    rdt_r = rd.T @ r
    m = gains.k1 @ rdt_r
    fp_torque = -vee3(0.5 * (m - m.T))
    fp_force = -(r.T @ (r + rd) @ gains.k2 @ (r.T + rd.T) @ perr)

    rt_rd = r.T @ rd
    verr = np.concatenate(
        [
            w - rt_rd @ wd,
            v - rt_rd @ (vd + _cross3(wd, r.T @ perr)),
        ]
    )
    fd = -(gains.kd @ verr)

    # Relative pose g^-1 gd = (R^T Rd, R^T (pd - p)), assembled directly.
    ad_rel = _adjoint_group_raw(rt_rd, r.T @ (pd - p))
    xi_d = ad_rel @ ref.twist_d.vec6()
    xi6 = state.twist.vec6()
    ff = -_coadjoint_apply_raw(xi6, inertia.diag6 * xi_d) + inertia.diag6 * (
        ad_rel @ ref.twist_d_dot
    )

    total = np.concatenate([fp_torque, fp_force]) + fd + ff
    return Wrench(total[:3], total[3:])

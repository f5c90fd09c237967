"""Rigid-body equations of motion on SE(3) and a fixed-step integrator.

The model is the reduced fully actuated system

    g_dot = g hat(xi),        II xi_dot = u + ad_xi^T (II xi),

with configuration-independent kinetic energy E = 0.5 xi^T II xi.  There
is no potential term; gravity, if wanted, must enter through the applied
wrench.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .liealg import (
    Pose,
    Twist,
    _as_vec,
    _coadjoint_apply_raw,
    exp_so3,
    reorthonormalize,
)

__all__ = [
    "NonFiniteState",
    "InertiaTensor",
    "State",
    "Wrench",
    "acceleration",
    "kinetic_energy",
    "step",
]


class NonFiniteState(RuntimeError):
    """Integration produced NaN or Inf in the state."""


@dataclass(frozen=True, eq=False)
class InertiaTensor:
    """Diagonal rotational inertia [kg m^2] plus scalar mass [kg].

    The assembled 6x6 tensor is diag(J, mass * I3) in (omega, v) ordering.
    """

    j: np.ndarray
    mass: float
    diag6: np.ndarray = field(init=False, repr=False)
    inv_diag6: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        j = np.asarray(self.j, dtype=float)
        if j.shape == (3,):
            j = np.diag(j)
        if j.shape != (3, 3):
            raise ValueError(f"rotational inertia must be 3x3 or length 3, got {j.shape}")
        if np.any(j - np.diag(np.diag(j)) != 0.0):
            raise ValueError("rotational inertia must be diagonal")
        jd = np.diag(j).copy()
        if np.any(jd <= 0.0) or not self.mass > 0.0:
            raise ValueError("inertia diagonal and mass must be positive")
        diag6 = np.concatenate([jd, np.full(3, float(self.mass))])
        object.__setattr__(self, "j", np.diag(jd))
        object.__setattr__(self, "mass", float(self.mass))
        object.__setattr__(self, "diag6", diag6)
        object.__setattr__(self, "inv_diag6", 1.0 / diag6)

    @classmethod
    def disk(cls, radius: float, mass: float) -> "InertiaTensor":
        """Uniform thin disk: J = diag(m r^2 / 4, m r^2 / 4, m r^2 / 2)."""
        jx = 0.25 * mass * radius**2
        return cls(np.array([jx, jx, 2.0 * jx]), mass)

    def matrix6(self) -> np.ndarray:
        return np.diag(self.diag6)

    def apply(self, xi6: np.ndarray) -> np.ndarray:
        return self.diag6 * xi6

    def inv_apply(self, f6: np.ndarray) -> np.ndarray:
        return self.inv_diag6 * f6


@dataclass(frozen=True, eq=False)
class State:
    """Full dynamic state: pose on SE(3) plus body-frame twist."""

    pose: Pose
    twist: Twist


@dataclass(frozen=True, eq=False)
class Wrench:
    """Body-frame torque [N m] and force [N]; angular block first."""

    torque: np.ndarray
    force: np.ndarray

    def __post_init__(self):
        t = _as_vec(self.torque, 3).copy()
        f = _as_vec(self.force, 3).copy()
        if not (np.isfinite(t).all() and np.isfinite(f).all()):
            raise ValueError("wrench has non-finite entries")
        t.flags.writeable = False
        f.flags.writeable = False
        object.__setattr__(self, "torque", t)
        object.__setattr__(self, "force", f)

    @staticmethod
    def zero() -> "Wrench":
        return Wrench(np.zeros(3), np.zeros(3))

    @staticmethod
    def from_vec6(u) -> "Wrench":
        u = _as_vec(u, 6)
        return Wrench(u[:3], u[3:])

    def vec6(self) -> np.ndarray:
        return np.concatenate([self.torque, self.force])


def _twist_rate(xi6: np.ndarray, u6: np.ndarray, inertia: InertiaTensor) -> np.ndarray:
    """xi_dot = II^-1 (u + ad_xi^T II xi); pose does not enter."""
    mom = inertia.diag6 * xi6
    drift = _coadjoint_apply_raw(xi6, mom)
    return inertia.inv_diag6 * (u6 + drift)


def acceleration(state: State, u: Wrench, inertia: InertiaTensor) -> np.ndarray:
    """Body-frame twist rate (omega_dot, v_dot) as a 6-vector."""
    return _twist_rate(state.twist.vec6(), u.vec6(), inertia)


def kinetic_energy(xi: Twist, inertia: InertiaTensor) -> float:
    """E = 0.5 xi^T II xi [J]; zero iff the twist is zero."""
    xi6 = xi.vec6()
    return 0.5 * float(xi6 @ (inertia.diag6 * xi6))


def step(state: State, u: Wrench, inertia: InertiaTensor, dt: float) -> State:
    """Advance the state by one step of length dt under a held wrench.

    The twist is integrated with classical fourth-order Runge-Kutta (the
    twist equation is self-contained).  The pose then advances along the
    Simpson-weighted average of the stage twists:

        R <- R exp_so3(dt * w_bar),   p <- p + dt * R v_bar,

    followed by a reorthonormalization of R.  Deterministic: identical
    inputs produce bit-identical output.
    """
    if not dt > 0.0:
        raise ValueError("dt must be positive")
    xi0 = state.twist.vec6()
    u6 = u.vec6()

    # Overflow here is caught by the finiteness gate below, not warned.
    with np.errstate(over="ignore", invalid="ignore"):
        k1 = _twist_rate(xi0, u6, inertia)
        xa = xi0 + (0.5 * dt) * k1
        k2 = _twist_rate(xa, u6, inertia)
        xb = xi0 + (0.5 * dt) * k2
        k3 = _twist_rate(xb, u6, inertia)
        xc = xi0 + dt * k3
        k4 = _twist_rate(xc, u6, inertia)

        xi1 = xi0 + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        xi_bar = (xi0 + 2.0 * xa + 2.0 * xb + xc) / 6.0
    if not (np.isfinite(xi1).all() and np.isfinite(xi_bar).all()):
        raise NonFiniteState("twist update produced non-finite values")

    r_old = state.pose.rotation.m
    r_new = reorthonormalize(r_old @ exp_so3(dt * xi_bar[:3]).m)
    p_new = state.pose.position + dt * (r_old @ xi_bar[3:])
    if not np.isfinite(p_new).all():
        raise NonFiniteState("position update produced non-finite values")

    return State(Pose(r_new, p_new), Twist(xi1[:3], xi1[3:]))

"""Barrier functions emitting affine wrench-space safety constraints.

Two families are provided, both of relative degree one:

* Energy-augmented barriers H(g, xi) = alpha_e * h(g) - E(xi) built on a
  kinematic barrier h.  The slit barrier keeps an oriented disk inside a
  plane-pair corridor; the constant barrier encodes a total kinetic
  energy bound.  The safety constraint is

      xi^T u <= alpha_e * L_f h(g) + alphaK(H).

* Directional kinetic-energy barriers H = E_max - E_dir with
  E_dir = 0.5 xi^T sym(P(g) II) xi, where P(g) projects the twist onto
  body-frame images of fixed world-frame directions.  Differentiating
  E_dir along the flow (using P_dot = P Omega - Omega P with
  Omega = diag(hat(w), hat(w))) yields the constraint

      a^T u <= alphaK(H) - drift,
      a = II^-1 sym(P II) xi,
      drift = xi^T sym(P II) II^-1 ad_xi^T II xi
              + 0.5 xi^T sym(P_dot II) xi.

Every constraint is an inequality a^T u <= b and carries its barrier
values for logging.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import InertiaTensor, State, kinetic_energy
from .liealg import Pose, Twist, _as_vec, _coadjoint_apply_raw, _cross3, hat3

__all__ = [
    "SupportSingularity",
    "ClassK",
    "BarrierConstraint",
    "SlitSpec",
    "ConstantBarrier",
    "EnergyAugmentedCBF",
    "DirectionalEnergyCBF",
    "slit_h",
    "slit_h_rate",
    "constant_h",
    "energy_augmented_constraint",
    "projection_matrix",
    "directional_energy",
    "directional_constraint",
]

# Support-function clamp: (a . b)^2 is kept <= 1 - SUPPORT_EPS so the slit
# barrier value stays smooth; the rate is refused inside the clamp band.
SUPPORT_EPS = 1e-9

_UNIT_TOL = 1e-12


class SupportSingularity(ArithmeticError):
    """Disk reach s(R) is not differentiable: |a . b| at its clamp."""


@dataclass(frozen=True, eq=False)
class ClassK:
    """Linear extended class-K function alphaK(s) = coefficient * s."""

    coefficient: float

    def __post_init__(self):
        if not self.coefficient > 0.0:
            raise ValueError("class-K coefficient must be positive")

    def __call__(self, s: float) -> float:
        return self.coefficient * s


@dataclass(frozen=True, eq=False)
class BarrierConstraint:
    """Affine wrench constraint a^T u <= b plus logging diagnostics.

    For kind "energy_augmented", h_value/H_value hold (h, H); for kind
    "directional" they hold (E_dir, H_dir).
    """

    a: np.ndarray
    b: float
    label: str
    kind: str
    h_value: float
    H_value: float

    def __post_init__(self):
        a = _as_vec(self.a, 6).copy()
        if not (np.all(np.isfinite(a)) and math.isfinite(self.b)):
            raise ValueError("constraint has non-finite entries")
        a.flags.writeable = False
        object.__setattr__(self, "a", a)


def _unit(v, name: str) -> np.ndarray:
    v = _as_vec(v, 3).copy()
    if abs(np.linalg.norm(v) - 1.0) > _UNIT_TOL:
        raise ValueError(f"{name} must be a unit vector to 1e-12")
    v.flags.writeable = False
    return v


@dataclass(frozen=True, eq=False)
class SlitSpec:
    """Oriented-disk clearance barrier for a plane-pair corridor.

    The corridor is bounded by two parallel planes through c_left and
    c_right whose outward normals are +n and -n.  Signed clearances

        psi_L = n . (p - c_left) - s(R) - margin
        psi_R = -n . (p - c_right) - s(R) - margin

    use the disk reach s(R) = radius * sqrt(1 - (a . b)^2) with
    a = R^T n and b the body-fixed disk normal.  The raw barrier is the
    log-sum-exp smooth minimum

        h_o = -(1/beta) log(exp(-beta psi_L) + exp(-beta psi_R)),

    blended toward the ceiling far from the slit by a Gaussian gate
    chi(p) = exp(-0.5 |p - c|^2 / sigma^2) centered at the corridor
    midpoint plus gate_offset:

        h = (1 - chi) * ceiling + chi * h_o.
    """

    normal: np.ndarray
    c_left: np.ndarray
    c_right: np.ndarray
    disk_radius: float
    body_normal: np.ndarray
    margin: float
    sharpness: float
    gate_sigma: float
    gate_offset: np.ndarray
    gate_ceiling: float

    def __post_init__(self):
        object.__setattr__(self, "normal", _unit(self.normal, "normal"))
        object.__setattr__(self, "body_normal", _unit(self.body_normal, "body_normal"))
        for name in ("c_left", "c_right", "gate_offset"):
            v = _as_vec(getattr(self, name), 3).copy()
            v.flags.writeable = False
            object.__setattr__(self, name, v)
        if not self.disk_radius > 0.0:
            raise ValueError("disk_radius must be positive")
        if self.margin < 0.0:
            raise ValueError("margin must be nonnegative")
        for name in ("sharpness", "gate_sigma", "gate_ceiling"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive")

    @classmethod
    def from_center(
        cls,
        center,
        normal,
        width: float,
        disk_radius: float,
        body_normal,
        margin: float,
        sharpness: float,
        gate_sigma: float,
        gate_offset,
        gate_ceiling: float,
    ) -> "SlitSpec":
        """Build the plane pair from a corridor center and total width."""
        center = _as_vec(center, 3)
        n = _as_vec(normal, 3)
        half = 0.5 * float(width) * n
        return cls(
            normal=n,
            c_left=center - half,
            c_right=center + half,
            disk_radius=disk_radius,
            body_normal=body_normal,
            margin=margin,
            sharpness=sharpness,
            gate_sigma=gate_sigma,
            gate_offset=gate_offset,
            gate_ceiling=gate_ceiling,
        )

    @property
    def gate_center(self) -> np.ndarray:
        return 0.5 * (self.c_left + self.c_right) + self.gate_offset


def _slit_terms(spec: SlitSpec, g: Pose):
    r = g.rotation.m
    p = g.position
    n = spec.normal
    a_body = r.T @ n
    cos_ab = float(a_body @ spec.body_normal)
    cos2 = min(cos_ab * cos_ab, 1.0 - SUPPORT_EPS)
    root = math.sqrt(1.0 - cos2)
    s = spec.disk_radius * root

    psi_l = float(n @ (p - spec.c_left)) - s - spec.margin
    psi_r = float(-(n @ (p - spec.c_right))) - s - spec.margin

    # Stable two-term log-sum-exp softmin and its weights.
    beta = spec.sharpness
    m = min(psi_l, psi_r)
    e_l = math.exp(-beta * (psi_l - m))
    e_r = math.exp(-beta * (psi_r - m))
    z = e_l + e_r
    h_o = m - math.log(z) / beta
    w_l, w_r = e_l / z, e_r / z

    d = p - spec.gate_center
    chi = math.exp(-0.5 * float(d @ d) / spec.gate_sigma**2)
    h = (1.0 - chi) * spec.gate_ceiling + chi * h_o
    return a_body, cos_ab, cos2, root, psi_l, psi_r, h_o, w_l, w_r, d, chi, h


def slit_h(spec: SlitSpec, g: Pose) -> float:
    """Gated smooth-minimum clearance of the disk inside the corridor."""
    return _slit_terms(spec, g)[-1]


def slit_h_rate(spec: SlitSpec, g: Pose, xi: Twist) -> float:
    """Time derivative of slit_h along the kinematic flow g_dot = g hat(xi).

    Raises SupportSingularity when (a . b)^2 >= 1 - 1e-9, where the disk
    reach s(R) has no derivative (disk face-on to the slit planes).  A
    stationary state is the exception: zero flow has zero rate anywhere.
    """
    if not (np.any(xi.omega) or np.any(xi.linear)):
        return 0.0
    a_body, cos_ab, cos2, root, _, _, h_o, w_l, w_r, d, chi, _ = _slit_terms(spec, g)
    if cos2 >= 1.0 - SUPPORT_EPS:
        raise SupportSingularity("disk reach not differentiable: |a . b| at clamp")

    r = g.rotation.m
    w = xi.omega
    p_dot = r @ xi.linear
    n_dot_pdot = float(spec.normal @ p_dot)

    # s = radius * sqrt(1 - cos^2), d(cos)/dt = b . (a x w).
    cos_rate = float(spec.body_normal @ _cross3(a_body, w))
    s_rate = -spec.disk_radius * cos_ab * cos_rate / root

    psi_l_rate = n_dot_pdot - s_rate
    psi_r_rate = -n_dot_pdot - s_rate
    h_o_rate = w_l * psi_l_rate + w_r * psi_r_rate

    chi_rate = chi * (-float(d @ p_dot) / spec.gate_sigma**2)
    return chi_rate * (h_o - spec.gate_ceiling) + chi * h_o_rate


def constant_h(e_max: float, alpha_e: float) -> float:
    """Constant kinematic barrier encoding a total energy bound E_max."""
    if not (e_max > 0.0 and alpha_e > 0.0):
        raise ValueError("e_max and alpha_e must be positive")
    return e_max / alpha_e


@dataclass(frozen=True, eq=False)
class ConstantBarrier:
    """Configuration-independent kinematic barrier h(g) = value."""

    value: float

    def __post_init__(self):
        if not self.value > 0.0:
            raise ValueError("constant barrier value must be positive")


@dataclass(frozen=True, eq=False)
class EnergyAugmentedCBF:
    """H(g, xi) = alpha_e * h(g) - E(xi) over a kinematic barrier h."""

    kinematic: SlitSpec | ConstantBarrier
    alpha_e: float
    classk: ClassK
    label: str

    def __post_init__(self):
        if not self.alpha_e > 0.0:
            raise ValueError("alpha_e must be positive")

    kind = "energy_augmented"

    def h(self, g: Pose) -> float:
        if isinstance(self.kinematic, ConstantBarrier):
            return self.kinematic.value
        return slit_h(self.kinematic, g)

    def h_rate(self, g: Pose, xi: Twist) -> float:
        if isinstance(self.kinematic, ConstantBarrier):
            return 0.0
        return slit_h_rate(self.kinematic, g, xi)

    def constraint(self, state: State, inertia: InertiaTensor) -> BarrierConstraint:
        return energy_augmented_constraint(self, state, inertia)


def energy_augmented_constraint(
    cbf: EnergyAugmentedCBF, state: State, inertia: InertiaTensor
) -> BarrierConstraint:
    """Constraint xi^T u <= alpha_e * L_f h + alphaK(H); vacuous at rest."""
    h = cbf.h(state.pose)
    energy = kinetic_energy(state.twist, inertia)
    big_h = cbf.alpha_e * h - energy
    rate = cbf.h_rate(state.pose, state.twist)
    return BarrierConstraint(
        a=state.twist.vec6(),
        b=cbf.alpha_e * rate + cbf.classk(big_h),
        label=cbf.label,
        kind="energy_augmented",
        h_value=h,
        H_value=big_h,
    )


@dataclass(frozen=True, eq=False)
class DirectionalEnergyCBF:
    """Bound on kinetic energy along fixed world-frame directions.

    n_v limits translation along a world direction, n_omega rotation
    about a world axis; either may be disabled by passing None.
    """

    e_max: float
    classk: ClassK
    label: str
    n_v: np.ndarray | None = None
    n_omega: np.ndarray | None = None

    def __post_init__(self):
        if self.n_v is None and self.n_omega is None:
            raise ValueError("enable at least one direction")
        if self.n_v is not None:
            object.__setattr__(self, "n_v", _unit(self.n_v, "n_v"))
        if self.n_omega is not None:
            object.__setattr__(self, "n_omega", _unit(self.n_omega, "n_omega"))
        if not self.e_max > 0.0:
            raise ValueError("e_max must be positive")

    kind = "directional"

    def projection(self, g: Pose) -> np.ndarray:
        return projection_matrix(self, g)

    def energy(self, state: State, inertia: InertiaTensor) -> float:
        return directional_energy(self, state, inertia)

    def constraint(self, state: State, inertia: InertiaTensor) -> BarrierConstraint:
        return directional_constraint(self, state, inertia)


def projection_matrix(cbf: DirectionalEnergyCBF, g: Pose) -> np.ndarray:
    """Block-diagonal projector onto the body-frame direction images.

    P = diag(n_wB n_wB^T, n_vB n_vB^T) with n_B = R^T n_world; disabled
    blocks are zero.  P is symmetric and idempotent, and along the flow
    satisfies P_dot = P Omega - Omega P with Omega = diag(hat(w), hat(w)).
    """
    rt = g.rotation.m.T
    out = np.zeros((6, 6))
    if cbf.n_omega is not None:
        nb = rt @ cbf.n_omega
        out[:3, :3] = np.outer(nb, nb)
    if cbf.n_v is not None:
        nb = rt @ cbf.n_v
        out[3:, 3:] = np.outer(nb, nb)
    return out


def directional_energy(cbf: DirectionalEnergyCBF, state: State, inertia: InertiaTensor) -> float:
    """E_dir = 0.5 xi^T sym(P II) xi [J].

    The symmetrized quadratic form matters only when the rotational block
    is enabled with anisotropic inertia; for a translational-only barrier
    it reduces to 0.5 m (n_vB . v)^2.
    """
    xi6 = state.twist.vec6()
    pm = projection_matrix(cbf, state.pose) * inertia.diag6  # P @ diag(II)
    sym = 0.5 * (pm + pm.T)
    return 0.5 * float(xi6 @ (sym @ xi6))


def directional_constraint(
    cbf: DirectionalEnergyCBF, state: State, inertia: InertiaTensor
) -> BarrierConstraint:
    """Affine constraint keeping E_dir below e_max along the closed loop.

    With M = sym(P II):

        E_dir_dot = a^T u + drift,
        a = II^-1 M xi,
        drift = xi^T M II^-1 ad_xi^T II xi + 0.5 xi^T sym(P_dot II) xi,

    and the emitted inequality is a^T u <= alphaK(E_max - E_dir) - drift.
    For a translational-only barrier the two drift pieces cancel exactly
    (the gyroscopic force does no work along the projected direction).
    """
    xi6 = state.twist.vec6()
    p = projection_matrix(cbf, state.pose)
    pm = p * inertia.diag6
    m = 0.5 * (pm + pm.T)

    e_dir = 0.5 * float(xi6 @ (m @ xi6))
    big_h = cbf.e_max - e_dir

    a = inertia.inv_diag6 * (m @ xi6)

    gyro = _coadjoint_apply_raw(xi6, inertia.diag6 * xi6)
    drift = float(xi6 @ (m @ (inertia.inv_diag6 * gyro)))

    hw = hat3(state.twist.omega)
    omega_blk = np.zeros((6, 6))
    omega_blk[:3, :3] = hw
    omega_blk[3:, 3:] = hw
    p_dot = p @ omega_blk - omega_blk @ p
    pdm = p_dot * inertia.diag6
    drift += 0.5 * float(xi6 @ (0.5 * (pdm + pdm.T) @ xi6))

    return BarrierConstraint(
        a=a,
        b=cbf.classk(big_h) - drift,
        label=cbf.label,
        kind="directional",
        h_value=e_dir,
        H_value=big_h,
    )

"""Built-in oracle and property checks behind the `verify` subcommand.

These are trimmed-down versions of the test-suite oracles: algebra
identities, energy conservation, integrator order, finite-difference
consistency of the barrier rates, and KKT certification of the filter
QP.  Each check prints one PASS/FAIL line; the command exits nonzero if
any check fails.
"""

from __future__ import annotations

import math

import numpy as np

from .barriers import (
    ClassK,
    DirectionalEnergyCBF,
    EnergyAugmentedCBF,
    SlitSpec,
    slit_h,
    slit_h_rate,
)
from .dynamics import InertiaTensor, State, Wrench, kinetic_energy, step
from .liealg import Pose, Twist, adjoint_group, coadjoint, exp_so3, hat3, log_so3
from .qp import QPProblem, solve
from .barriers import BarrierConstraint

__all__ = ["run_verification"]


def _random_rotation(rng):
    axis = rng.normal(size=3)
    axis /= np.linalg.norm(axis)
    return exp_so3(axis * rng.uniform(0.0, math.pi - 0.2))


def _random_state(rng, span=5.0, speed=2.0):
    pose = Pose(_random_rotation(rng), rng.uniform(-span, span, size=3))
    twist = Twist(rng.uniform(-speed, speed, size=3), rng.uniform(-speed, speed, size=3))
    return State(pose, twist)


def _check_algebra(rng) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(200):
        w = rng.normal(size=3)
        r = _random_rotation(rng)
        worst = max(worst, float(np.max(np.abs(exp_so3(log_so3(r)).m - r.m))))
        x = rng.normal(size=3)
        worst = max(worst, float(np.max(np.abs(hat3(w) @ x - np.cross(w, x)))))
        g1 = Pose(_random_rotation(rng), rng.normal(size=3))
        g2 = Pose(_random_rotation(rng), rng.normal(size=3))
        morph = adjoint_group(g1.compose(g2)) - adjoint_group(g1) @ adjoint_group(g2)
        worst = max(worst, float(np.max(np.abs(morph))))
        xi = Twist(rng.normal(size=3), rng.normal(size=3))
        inertia = InertiaTensor.disk(rng.uniform(0.5, 4.0), rng.uniform(0.5, 4.0))
        xi6 = xi.vec6()
        power = float(xi6 @ (coadjoint(xi) @ (inertia.diag6 * xi6)))
        worst = max(worst, abs(power))
    return worst < 1e-8, f"max residual {worst:.2e}"


def _check_passivity(rng) -> tuple[bool, str]:
    inertia = InertiaTensor.disk(3.0, 3.0)
    state = State(
        Pose(_random_rotation(rng), np.zeros(3)),
        Twist(np.array([1.2, -0.7, 2.0]), np.array([0.5, 0.4, -0.3])),
    )
    e0 = kinetic_energy(state.twist, inertia)
    u = Wrench.zero()
    for _ in range(2000):
        state = step(state, u, inertia, 1e-3)
    drift = abs(kinetic_energy(state.twist, inertia) - e0) / e0
    return drift < 1e-9, f"relative energy drift {drift:.2e}"


def _check_order(rng) -> tuple[bool, str]:
    inertia = InertiaTensor.disk(3.0, 3.0)
    u = Wrench(np.array([0.3, -0.2, 0.1]), np.array([0.5, 0.2, -0.4]))
    start = State(
        Pose.identity(), Twist(np.array([0.4, -0.3, 0.5]), np.array([0.3, 0.2, -0.1]))
    )

    def integrate(dt):
        state = start
        for _ in range(int(round(1.0 / dt))):
            state = step(state, u, inertia, dt)
        return state.twist.vec6()

    coarse, mid, fine = integrate(0.02), integrate(0.01), integrate(0.005)
    err1 = np.linalg.norm(coarse - fine)
    err2 = np.linalg.norm(mid - fine)
    order = math.log2(err1 / err2)
    return order >= 3.5, f"observed order {order:.2f}"


def _slit_for_checks(alpha_e=150.0):
    return SlitSpec.from_center(
        center=(2.8, 1.0, 1.6),
        normal=(0.0, 0.0, 1.0),
        width=0.3,
        disk_radius=3.0,
        body_normal=(0.0, 0.0, 1.0),
        margin=0.02,
        sharpness=25.0,
        gate_sigma=12.0,
        gate_offset=(0.0, 0.5, 0.0),
        gate_ceiling=alpha_e / 2.0,
    )


def _flow_fd(value_fn, state, u, inertia, delta=1e-5):
    """Central difference of a state function along the controlled flow.

    The backward point comes from time reversal: flipping the twist and
    integrating forward with the same wrench traces the trajectory
    backwards (the coadjoint drift is quadratic in the twist).
    """
    plus = step(state, u, inertia, delta)
    minus_twist = Twist(-state.twist.omega, -state.twist.linear)
    minus = step(State(state.pose, minus_twist), u, inertia, delta)
    minus = State(minus.pose, Twist(-minus.twist.omega, -minus.twist.linear))
    return (value_fn(plus) - value_fn(minus)) / (2.0 * delta)


def _check_slit_rate(rng) -> tuple[bool, str]:
    spec = _slit_for_checks()
    worst = 0.0
    for _ in range(200):
        state = _random_state(rng)
        cos_ab = abs(float((state.pose.rotation.m.T @ spec.normal) @ spec.body_normal))
        if cos_ab > 0.99:
            continue
        analytic = slit_h_rate(spec, state.pose, state.twist)
        fd = _flow_fd(
            lambda s: slit_h(spec, s.pose), state, Wrench.zero(), InertiaTensor.disk(3.0, 3.0)
        )
        err = abs(analytic - fd) / max(1.0, abs(analytic))
        worst = max(worst, err)
    return worst < 1e-4, f"max relative mismatch {worst:.2e}"


def _check_directional_rate(rng) -> tuple[bool, str]:
    inertia = InertiaTensor.disk(3.0, 3.0)
    cbf = DirectionalEnergyCBF(
        e_max=1.5,
        classk=ClassK(1.0),
        label="chk",
        n_v=np.array([0.0, 0.0, 1.0]),
        n_omega=np.array([1.0, 0.0, 0.0]),
    )
    worst = 0.0
    for _ in range(200):
        state = _random_state(rng)
        u = Wrench(rng.uniform(-3, 3, size=3), rng.uniform(-3, 3, size=3))
        con = cbf.constraint(state, inertia)
        analytic = -float(con.a @ u.vec6()) + (con.b - cbf.classk(con.H_value))
        fd = _flow_fd(lambda s: cbf.e_max - cbf.energy(s, inertia), state, u, inertia)
        err = abs(analytic - fd) / max(1.0, abs(analytic))
        worst = max(worst, err)
    return worst < 1e-4, f"max relative mismatch {worst:.2e}"


def _check_qp(rng) -> tuple[bool, str]:
    worst_kkt = 0.0
    for _ in range(200):
        ud = rng.normal(size=6)
        m = rng.integers(1, 4)
        constraints = tuple(
            BarrierConstraint(
                a=rng.normal(size=6),
                b=float(rng.normal()),
                label=f"c{i}",
                kind="energy_augmented",
                h_value=0.0,
                H_value=0.0,
            )
            for i in range(m)
        )
        sol = solve(QPProblem(Wrench.from_vec6(ud), constraints))
        u = sol.u_star.vec6()
        rows = np.array([c.a for c in constraints])
        rhs = np.array([c.b for c in constraints])
        primal = float(np.max(rows @ u - rhs)) if m else 0.0
        worst_kkt = max(worst_kkt, primal)
        if sol.active_set:
            a_act = rows[list(sol.active_set)]
            lam = np.linalg.lstsq(a_act.T, ud - u, rcond=None)[0]
            stat = np.linalg.norm(u - ud + a_act.T @ lam)
            worst_kkt = max(worst_kkt, float(stat), float(-np.min(lam)))
    return worst_kkt < 1e-8, f"max KKT residual {worst_kkt:.2e}"


def _check_set_inclusion(rng) -> tuple[bool, str]:
    spec = _slit_for_checks()
    inertia = InertiaTensor.disk(3.0, 3.0)
    cbf = EnergyAugmentedCBF(kinematic=spec, alpha_e=150.0, classk=ClassK(1.0), label="chk")
    bad = 0
    for _ in range(2000):
        state = _random_state(rng)
        h = cbf.h(state.pose)
        big_h = 150.0 * h - kinetic_energy(state.twist, inertia)
        if big_h >= 0.0 and h < 0.0:
            bad += 1
    return bad == 0, f"{bad} counterexamples"


def run_verification() -> int:
    checks = [
        ("lie-algebra identities", _check_algebra),
        ("drift passivity", _check_passivity),
        ("integrator order", _check_order),
        ("slit rate vs finite differences", _check_slit_rate),
        ("directional rate vs finite differences", _check_directional_rate),
        ("filter QP KKT", _check_qp),
        ("safe-set inclusion", _check_set_inclusion),
    ]
    failures = 0
    for name, fn in checks:
        rng = np.random.default_rng(0)
        ok, detail = fn(rng)
        print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
        failures += 0 if ok else 1
    return 0 if failures == 0 else 1

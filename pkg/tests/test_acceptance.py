"""Acceptance gate: every shipped guarantee at its stated tolerance.

Each test prints one PASS line with the measured margin so a plain
`pytest -s tests/test_acceptance.py` reads as a checklist.
"""

import math
import time

import numpy as np
import pytest

from se3cbf.barriers import (
    BarrierConstraint,
    ClassK,
    DirectionalEnergyCBF,
    directional_constraint,
    directional_energy,
    projection_matrix,
    slit_h,
    slit_h_rate,
)
from se3cbf.cli import main as cli_main
from se3cbf.dynamics import InertiaTensor, State, Wrench, kinetic_energy, step
from se3cbf.liealg import Pose, Twist, exp_so3, hat3
from se3cbf.qp import Infeasible, QPProblem, solve
from se3cbf.scenarios import build_scenario_landing, build_scenario_slit, run

DISK = InertiaTensor.disk(3.0, 3.0)


def report(name, detail):
    print(f"[PASS] {name}: {detail}")


def random_state(rng, span=6.0, speed=2.0, avoid_spec=None):
    while True:
        axis = rng.normal(size=3)
        axis /= np.linalg.norm(axis)
        pose = Pose(exp_so3(axis * rng.uniform(0.0, math.pi - 0.1)), rng.uniform(-span, span, 3))
        if avoid_spec is not None:
            cos_ab = float((pose.rotation.m.T @ avoid_spec.normal) @ avoid_spec.body_normal)
            if cos_ab * cos_ab > 0.98:
                continue
        return State(pose, Twist(rng.uniform(-speed, speed, 3), rng.uniform(-speed, speed, 3)))


def flow_fd(value_fn, state, u, inertia, delta=1e-5):
    plus = step(state, u, inertia, delta)
    minus = step(
        State(state.pose, Twist(-state.twist.omega, -state.twist.linear)), u, inertia, delta
    )
    minus = State(minus.pose, Twist(-minus.twist.omega, -minus.twist.linear))
    return (value_fn(plus) - value_fn(minus)) / (2.0 * delta)


# -- shared scenario runs -------------------------------------------------


@pytest.fixture(scope="module")
def slit_runs():
    out = {}
    for alpha_e in (50.0, 150.0):
        t0 = time.perf_counter()
        records, summary = run(build_scenario_slit(alpha_e))
        out[alpha_e] = (records, summary, time.perf_counter() - t0)
    return out


@pytest.fixture(scope="module")
def landing_runs():
    import dataclasses

    out = {}
    for alpha in (0.5, 1.0, 2.0):
        t0 = time.perf_counter()
        records, summary = run(build_scenario_landing(alpha))
        out[alpha] = (records, summary, time.perf_counter() - t0)
    nominal = dataclasses.replace(build_scenario_landing(1.0), filter_enabled=False)
    t0 = time.perf_counter()
    records, summary = run(nominal)
    out["nominal"] = (records, summary, time.perf_counter() - t0)
    return out


# -- criterion 1: corridor scenario safety --------------------------------


def test_slit_scenario_safety(slit_runs):
    margins = {}
    for alpha_e, (records, summary, elapsed) in slit_runs.items():
        assert summary.steps == 15_000
        for label in ("slit1", "slit2"):
            assert summary.min_augmented[label] >= -1e-6
            assert summary.min_primary[label] >= -1e-6
        assert elapsed < 10.0
        margins[alpha_e] = min(summary.min_augmented.values())
    report(
        "scenario-1 safety",
        f"min H over both corridors: {margins[50.0]:.3f} J (alpha_e=50), "
        f"{margins[150.0]:.3f} J (alpha_e=150); runtime < 10 s each",
    )


def test_slit_clearance_monotone_in_alpha_e(slit_runs):
    # Shipped-config regression: stronger energy augmentation keeps the
    # disk at least as clear of each corridor.
    _, s50, _ = slit_runs[50.0]
    _, s150, _ = slit_runs[150.0]
    for label in ("slit1", "slit2"):
        assert s150.min_primary[label] >= s50.min_primary[label]
    report("alpha_e clearance regression", "min h nondecreasing from 50 to 150")


def test_slit_filter_exercised(slit_runs):
    for alpha_e, (records, summary, _) in slit_runs.items():
        assert any(any(r.active) for r in records)
        assert summary.max_correction > 1.0
    report("scenario-1 filter activity", "corrections applied at both gains")


# -- criterion 2: landing energy bound ------------------------------------


def test_landing_energy_bound(landing_runs):
    for alpha in (0.5, 1.0, 2.0):
        records, summary, elapsed = landing_runs[alpha]
        assert summary.max_edir <= 1.5 + 1e-3, f"alpha={alpha}"
        assert elapsed < 10.0
    _, nominal, elapsed = landing_runs["nominal"]
    assert nominal.max_edir > 1.5
    assert elapsed < 10.0
    excesses = [landing_runs[a][1].max_edir - 1.5 for a in (0.5, 1.0, 2.0)]
    report(
        "scenario-2 energy bound",
        f"filtered excess max {max(excesses):+.2e} J <= 1e-3; "
        f"nominal peak {nominal.max_edir:.2f} J > 1.5",
    )


# -- criterion 3: safe-set inclusion --------------------------------------


def test_set_inclusion():
    rng = np.random.default_rng(100)
    cfg = build_scenario_slit(150.0)
    specs = [s.to_spec(cfg.radius) for s in cfg.slits]
    counterexamples = 0
    for i in range(10_000):
        state = random_state(rng)
        spec = specs[i % 2]
        h = slit_h(spec, state.pose)
        big_h = 150.0 * h - kinetic_energy(state.twist, DISK)
        if big_h >= 0.0 and h < 0.0:
            counterexamples += 1
    assert counterexamples == 0
    report("set inclusion", "10^4 random states, H >= 0 implies h >= 0, 0 counterexamples")


# -- criterion 4: drift algebra vs finite differences ----------------------


def test_drift_algebra_energy_family():
    rng = np.random.default_rng(101)
    cfg = build_scenario_slit(150.0)
    spec = cfg.slits[0].to_spec(cfg.radius)
    worst = 0.0
    for _ in range(1000):
        state = random_state(rng, avoid_spec=spec)
        u = Wrench(rng.uniform(-3, 3, 3), rng.uniform(-3, 3, 3))
        rate = slit_h_rate(spec, state.pose, state.twist)
        analytic = 150.0 * rate - float(state.twist.vec6() @ u.vec6())
        fd = flow_fd(
            lambda s: 150.0 * slit_h(spec, s.pose) - kinetic_energy(s.twist, DISK),
            state,
            u,
            DISK,
        )
        err = abs(analytic - fd)
        assert err <= max(1e-5, 1e-3 * abs(analytic))
        worst = max(worst, err / max(1e-5 / 1e-3, abs(analytic)))
    report("drift algebra (energy-augmented)", f"worst scaled mismatch {worst:.2e} <= 1e-3")


def test_drift_algebra_directional_family():
    rng = np.random.default_rng(102)
    cbf = DirectionalEnergyCBF(
        e_max=1.5,
        classk=ClassK(1.0),
        label="pad",
        n_v=np.array([0.0, 0.0, 1.0]),
        n_omega=np.array([1.0, 0.0, 0.0]),
    )
    worst = 0.0
    for _ in range(1000):
        state = random_state(rng)
        u = Wrench(rng.uniform(-3, 3, 3), rng.uniform(-3, 3, 3))
        con = directional_constraint(cbf, state, DISK)
        analytic = -float(con.a @ u.vec6()) + (con.b - cbf.classk(con.H_value))
        fd = flow_fd(
            lambda s: cbf.e_max - directional_energy(cbf, s, DISK), state, u, DISK
        )
        err = abs(analytic - fd)
        assert err <= max(1e-5, 1e-3 * abs(analytic))
        worst = max(worst, err / max(1e-5 / 1e-3, abs(analytic)))
    report("drift algebra (directional)", f"worst scaled mismatch {worst:.2e} <= 1e-3")


def test_projection_rate_identity():
    rng = np.random.default_rng(103)
    cbf = DirectionalEnergyCBF(
        e_max=1.5,
        classk=ClassK(1.0),
        label="pad",
        n_v=np.array([0.0, 0.0, 1.0]),
        n_omega=np.array([0.0, 1.0, 0.0]),
    )
    worst = 0.0
    for _ in range(200):
        state = random_state(rng)
        hw = hat3(state.twist.omega)
        omega_blk = np.zeros((6, 6))
        omega_blk[:3, :3] = hw
        omega_blk[3:, 3:] = hw
        p = projection_matrix(cbf, state.pose)
        analytic = p @ omega_blk - omega_blk @ p
        delta = 1e-6
        plus = step(state, Wrench.zero(), DISK, delta)
        minus = step(
            State(state.pose, Twist(-state.twist.omega, -state.twist.linear)),
            Wrench.zero(),
            DISK,
            delta,
        )
        fd = (projection_matrix(cbf, plus.pose) - projection_matrix(cbf, minus.pose)) / (
            2.0 * delta
        )
        err = float(np.max(np.abs(fd - analytic)))
        assert err <= 1e-6
        worst = max(worst, err)
    report("projection rate identity", f"worst |FD - commutator| {worst:.2e} <= 1e-6")


# -- criterion 5: QP optimality --------------------------------------------


def test_qp_optimality_oracle():
    rng = np.random.default_rng(104)
    solved = 0
    worst_kkt = 0.0
    while solved < 1000:
        m = int(rng.integers(1, 4))
        ud = rng.normal(size=6)
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
        try:
            sol = solve(QPProblem(Wrench.from_vec6(ud), constraints))
        except Infeasible:
            continue
        solved += 1
        rows = np.array([c.a for c in constraints])
        rhs = np.array([c.b for c in constraints])
        u = sol.u_star.vec6()

        residual = max(0.0, float(np.max(rows @ u - rhs)))
        if sol.active_set:
            a_act = rows[list(sol.active_set)]
            lam, *_ = np.linalg.lstsq(a_act.T, ud - u, rcond=None)
            residual = max(residual, float(np.linalg.norm(ud - u - a_act.T @ lam)))
            residual = max(residual, float(max(0.0, -np.min(lam))))
            residual = max(residual, float(np.max(np.abs(a_act @ u - rhs[list(sol.active_set)]))))
        else:
            residual = max(residual, float(np.linalg.norm(u - ud)))
        assert residual < 1e-10
        worst_kkt = max(worst_kkt, residual)

        # Sampled feasible points never beat the projection.
        cand = rng.normal(size=(400, 6)) * 3.0
        feasible = cand[np.all(cand @ rows.T <= rhs, axis=1)][:50]
        if feasible.shape[0]:
            dists = np.linalg.norm(feasible - ud, axis=1)
            assert np.all(dists >= sol.correction_norm - 1e-9)
    report("qp optimality", f"10^3 instances, worst KKT residual {worst_kkt:.2e} < 1e-10")


# -- criterion 6: conservation and passivity --------------------------------


def test_conservation_and_passivity():
    state = State(
        Pose.identity(),
        Twist(np.array([1.2, -0.7, 2.0]), np.array([0.5, 0.4, -0.3])),
    )
    e0 = kinetic_energy(state.twist, DISK)
    for _ in range(10_000):
        state = step(state, Wrench.zero(), DISK, 1e-3)
    drift = abs(kinetic_energy(state.twist, DISK) - e0) / e0
    assert drift < 1e-9

    rng = np.random.default_rng(105)
    worst = 0.0
    for _ in range(1000):
        xi6 = rng.normal(size=6)
        a = rng.normal(size=(6, 6))
        spd = a.T @ a + np.eye(6)
        mom = spd @ xi6
        hw = hat3(xi6[:3])
        hv = hat3(xi6[3:])
        coad = np.zeros((6, 6))
        coad[:3, :3] = -hw
        coad[:3, 3:] = -hv
        coad[3:, 3:] = -hw
        rel = abs(float(xi6 @ (coad @ mom))) / max(1.0, abs(float(xi6 @ mom)))
        assert rel <= 1e-12
        worst = max(worst, rel)
    report(
        "conservation/passivity",
        f"10^4-step relative energy drift {drift:.2e} < 1e-9; "
        f"coadjoint power identity worst {worst:.2e} <= 1e-12",
    )


# -- criterion 7: integrator order ------------------------------------------


def test_integrator_order():
    u = Wrench(np.array([0.3, -0.2, 0.1]), np.array([0.5, 0.2, -0.4]))
    start = State(
        Pose.identity(), Twist(np.array([0.4, -0.3, 0.5]), np.array([0.3, 0.2, -0.1]))
    )

    def integrate(dt):
        s = start
        for _ in range(int(round(1.0 / dt))):
            s = step(s, u, DISK, dt)
        return s.twist.vec6()

    coarse, mid, fine = integrate(0.02), integrate(0.01), integrate(0.005)
    order = math.log2(np.linalg.norm(coarse - fine) / np.linalg.norm(mid - fine))
    assert order >= 3.5
    report("integrator order", f"Richardson self-convergence order {order:.2f} >= 3.5")


# -- criterion 8: determinism -----------------------------------------------


def test_run_invocations_byte_identical(tmp_path, capsys):
    for sub in ("a", "b"):
        code = cli_main(
            ["run", "--preset", "slit", "--alpha-e", "150", "--out", str(tmp_path / sub)]
        )
        assert code == 0
    capsys.readouterr()
    csv_a = (tmp_path / "a" / "slit.csv").read_bytes()
    csv_b = (tmp_path / "b" / "slit.csv").read_bytes()
    assert csv_a == csv_b
    report("determinism", f"two CLI runs byte-identical ({len(csv_a)} bytes)")

import numpy as np
import pytest

from se3cbf.barriers import BarrierConstraint, ClassK, DirectionalEnergyCBF
from se3cbf.dynamics import InertiaTensor, State, Wrench
from se3cbf.liealg import Pose, Twist
from se3cbf.qp import Infeasible, QPProblem, filter_wrench, solve


def constraint(a, b, label="c"):
    return BarrierConstraint(
        a=np.asarray(a, dtype=float),
        b=float(b),
        label=label,
        kind="energy_augmented",
        h_value=0.0,
        H_value=0.0,
    )


def random_problem(rng, m):
    ud = rng.normal(size=6)
    cons = tuple(constraint(rng.normal(size=6), rng.normal(), f"c{i}") for i in range(m))
    return QPProblem(Wrench.from_vec6(ud), cons)


def sample_feasible(rng, rows, rhs, n=200):
    """Rejection-sample feasible points near the constraint set."""
    points = np.empty((0, 6))
    while points.shape[0] < n:
        cand = rng.normal(size=(4 * n, 6)) * 3.0
        mask = np.all(cand @ rows.T <= rhs, axis=1)
        points = np.vstack([points, cand[mask]])
    return points[:n]


def kkt_residual(ud, sol, rows, rhs):
    u = sol.u_star.vec6()
    residual = max(0.0, float(np.max(rows @ u - rhs)))
    if sol.active_set:
        a_act = rows[list(sol.active_set)]
        lam, *_ = np.linalg.lstsq(a_act.T, ud - u, rcond=None)
        residual = max(residual, float(np.linalg.norm(ud - u - a_act.T @ lam)))
        residual = max(residual, float(max(0.0, -np.min(lam))))
        slack = rhs[list(sol.active_set)] - a_act @ u
        residual = max(residual, float(np.max(np.abs(slack))))
    else:
        residual = max(residual, float(np.linalg.norm(u - ud)))
    return residual


def test_interior_point_untouched():
    rng = np.random.default_rng(0)
    for _ in range(50):
        ud = rng.normal(size=6)
        cons = (constraint(rng.normal(size=6), 1e3),)
        sol = solve(QPProblem(Wrench.from_vec6(ud), cons))
        np.testing.assert_array_equal(sol.u_star.vec6(), ud)
        assert sol.active_set == ()
        assert sol.correction_norm == 0.0


def test_single_constraint_closed_form():
    rng = np.random.default_rng(1)
    for _ in range(200):
        ud = rng.normal(size=6)
        a = rng.normal(size=6)
        b = float(a @ ud) - abs(rng.normal()) - 0.1  # force violation
        sol = solve(QPProblem(Wrench.from_vec6(ud), (constraint(a, b),)))
        expected = ud - ((a @ ud - b) / (a @ a)) * a
        np.testing.assert_allclose(sol.u_star.vec6(), expected, atol=1e-12)
        assert sol.active_set == (0,)
        # No sampled feasible point is closer.
        rows, rhs = a.reshape(1, 6), np.array([b])
        for u in sample_feasible(rng, rows, rhs, n=50):
            assert np.linalg.norm(u - ud) >= sol.correction_norm - 1e-9


def test_two_constraint_projection_against_lattice_oracle():
    # Brute-force oracle: search the 2-plane spanned by the constraint
    # normals on a progressively refined lattice (the optimum offset lies
    # in that plane), fully independent of any KKT reasoning.
    rng = np.random.default_rng(2)
    grid_1d = np.linspace(-1.0, 1.0, 201)
    offsets = np.stack(np.meshgrid(grid_1d, grid_1d), axis=-1).reshape(-1, 2)
    for _ in range(20):
        ud = rng.normal(size=6)
        a1, a2 = rng.normal(size=6), rng.normal(size=6)
        b1 = float(a1 @ ud) - abs(rng.normal()) - 0.2
        b2 = float(a2 @ ud) - abs(rng.normal()) - 0.2
        sol = solve(QPProblem(Wrench.from_vec6(ud), (constraint(a1, b1), constraint(a2, b2))))

        basis = np.linalg.qr(np.stack([a1, a2], axis=1))[0][:, :2]
        rows = np.stack([a1, a2])
        rhs = np.array([b1, b2])
        center = np.zeros(2)
        width = 6.0
        best = None
        for _ in range(22):
            pts = center + width * offsets
            u = ud + pts @ basis.T
            feasible = np.all(u @ rows.T <= rhs + 1e-12, axis=1)
            if np.any(feasible):
                d = np.linalg.norm(u[feasible] - ud, axis=1)
                k = int(np.argmin(d))
                if best is None or d[k] < best[0]:
                    best = (float(d[k]), pts[feasible][k])
            if best is not None:
                center = best[1]
            width = width / 2.5
        assert best is not None
        assert sol.correction_norm <= best[0] + 1e-9
        assert best[0] - sol.correction_norm < 1e-6
        u_best = ud + basis @ best[1]
        np.testing.assert_allclose(sol.u_star.vec6(), u_best, atol=1e-3)


def test_projection_optimality_and_kkt_random():
    rng = np.random.default_rng(3)
    for _ in range(300):
        m = int(rng.integers(1, 4))
        qp = random_problem(rng, m)
        try:
            sol = solve(qp)
        except Infeasible:
            continue
        rows = np.array([c.a for c in qp.constraints])
        rhs = np.array([c.b for c in qp.constraints])
        ud = qp.u_des.vec6()
        assert kkt_residual(ud, sol, rows, rhs) < 1e-10
        for u in sample_feasible(rng, rows, rhs, n=100):
            assert np.linalg.norm(u - ud) >= sol.correction_norm - 1e-9


def test_idempotence():
    rng = np.random.default_rng(4)
    for _ in range(100):
        qp = random_problem(rng, 2)
        try:
            sol = solve(qp)
        except Infeasible:
            continue
        again = solve(QPProblem(sol.u_star, qp.constraints))
        assert np.linalg.norm(again.u_star.vec6() - sol.u_star.vec6()) < 1e-10


def test_relaxing_bound_never_increases_correction():
    rng = np.random.default_rng(5)
    for _ in range(100):
        ud = rng.normal(size=6)
        a = rng.normal(size=6)
        b = float(a @ ud) - 1.0
        base = solve(QPProblem(Wrench.from_vec6(ud), (constraint(a, b),)))
        for relax in (0.25, 0.5, 1.0, 2.0):
            relaxed = solve(QPProblem(Wrench.from_vec6(ud), (constraint(a, b + relax),)))
            assert relaxed.correction_norm <= base.correction_norm + 1e-12
            base = relaxed


def test_continuity_under_small_perturbations():
    rng = np.random.default_rng(6)
    for _ in range(50):
        ud = rng.normal(size=6)
        a = rng.normal(size=6)
        b = float(a @ ud) - 1.0
        sol = solve(QPProblem(Wrench.from_vec6(ud), (constraint(a, b),)))
        for _ in range(5):
            du = rng.normal(size=6) * 1e-6
            sol_p = solve(QPProblem(Wrench.from_vec6(ud + du), (constraint(a, b),)))
            assert np.linalg.norm(sol_p.u_star.vec6() - sol.u_star.vec6()) < 1e-4


def test_parallel_constraints_resolved_by_smaller_subset():
    # Two constraints sharing the same gradient: the tighter one alone is
    # the optimal active set; no rank-deficiency is reported.
    ud = np.zeros(6)
    a = np.array([1.0, 0.0, 0.0, 0.0, 0.0, 0.0])
    sol = solve(
        QPProblem(
            Wrench.from_vec6(ud + 2.0 * a),
            (constraint(a, 1.0, "loose"), constraint(a, 0.5, "tight")),
        )
    )
    assert sol.active_set == (1,)
    assert not sol.rank_deficient
    np.testing.assert_allclose(sol.u_star.vec6(), 0.5 * a, atol=1e-14)


def test_vacuous_constraints():
    ud = np.ones(6)
    ok = solve(QPProblem(Wrench.from_vec6(ud), (constraint(np.zeros(6), 0.0),)))
    np.testing.assert_array_equal(ok.u_star.vec6(), ud)
    with pytest.raises(Infeasible):
        solve(QPProblem(Wrench.from_vec6(ud), (constraint(np.zeros(6), -1.0),)))


def test_infeasible_reports_least_violating_point():
    ud = np.zeros(6)
    a = np.array([1.0, 0.0, 0.0, 0.0, 0.0, 0.0])
    cons = (constraint(a, -1.0), constraint(-a, -1.0))  # x <= -1 and x >= 1
    with pytest.raises(Infeasible) as exc_info:
        solve(QPProblem(Wrench.from_vec6(ud), cons))
    exc = exc_info.value
    assert exc.max_violation == pytest.approx(1.0, abs=1e-6)
    # The minimax point splits the difference: x = 0.
    assert abs(exc.least_violating[0]) < 1e-6


def test_filter_wrench_passthrough_and_diagnostics():
    inertia = InertiaTensor.disk(3.0, 3.0)
    state = State(Pose.identity(), Twist(np.zeros(3), np.array([0.0, 0.0, 1.5])))
    u_des = Wrench(np.zeros(3), np.array([0.0, 0.0, 40.0]))

    u_out, diag = filter_wrench(state, u_des, (), inertia)
    assert u_out is u_des
    assert diag.constraints == ()

    cbf = DirectionalEnergyCBF(
        e_max=1.5, classk=ClassK(1.0), label="pad", n_v=np.array([0.0, 0.0, 1.0])
    )
    u_out, diag = filter_wrench(state, u_des, (cbf,), inertia)
    assert diag.active == (True,)
    con = diag.constraints[0]
    assert float(con.a @ u_out.vec6()) == pytest.approx(con.b, abs=1e-9)
    assert diag.correction_norm > 0.0

    # Disabled filter still evaluates diagnostics but passes the wrench.
    u_off, diag_off = filter_wrench(state, u_des, (cbf,), inertia, enabled=False)
    assert u_off is u_des
    assert diag_off.active == (False,)
    assert diag_off.constraints[0].h_value == pytest.approx(con.h_value)

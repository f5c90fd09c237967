"""Minimum-norm safety filter: project a wrench onto affine constraints.

Solves

    min ||u - u_des||^2   s.t.   a_i^T u <= b_i,   i = 1..m  (m small)

by exact enumeration of candidate active sets ordered by size and then
lexicographic index, returning the first KKT-certified point.  The
projection onto a nonempty polyhedron is unique, so the ordering only
breaks ties between degenerate certificates.  No iterative solver, no
tolerance tuning: the result is bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .barriers import BarrierConstraint
from .dynamics import InertiaTensor, State, Wrench

__all__ = [
    "Infeasible",
    "QPProblem",
    "QPSolution",
    "FilterDiagnostics",
    "solve",
    "filter_wrench",
]

# A constraint row with |a| below this is treated as vacuous (0 <= b).
VACUOUS_NORM = 1e-10
_DUAL_TOL = 1e-10
_PRIMAL_TOL = 1e-9


class Infeasible(RuntimeError):
    """Constraint polyhedron is empty.

    Carries the least-violating input (minimizer of the maximum
    constraint violation) so a caller may log and continue.
    """

    def __init__(self, message: str, least_violating: np.ndarray, max_violation: float):
        super().__init__(message)
        self.least_violating = least_violating
        self.max_violation = max_violation


@dataclass(frozen=True, eq=False)
class QPProblem:
    u_des: Wrench
    constraints: tuple[BarrierConstraint, ...]

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))


@dataclass(frozen=True, eq=False)
class QPSolution:
    """Projected wrench, tight-constraint indices, and correction size."""

    u_star: Wrench
    active_set: tuple[int, ...]
    correction_norm: float
    rank_deficient: bool = False


@dataclass(frozen=True, eq=False)
class FilterDiagnostics:
    """Per-step filter report used by the simulation logger."""

    constraints: tuple[BarrierConstraint, ...]
    active: tuple[bool, ...]
    correction_norm: float
    rank_deficient: bool


def _least_violating(rows: np.ndarray, rhs: np.ndarray) -> tuple[np.ndarray, float]:
    """Minimize max_i (a_i^T u - b_i) via a small LP in (u, t)."""
    from scipy.optimize import linprog

    m = rows.shape[0]
    c = np.zeros(7)
    c[6] = 1.0
    a_ub = np.hstack([rows, -np.ones((m, 1))])
    res = linprog(c, A_ub=a_ub, b_ub=rhs, bounds=[(None, None)] * 7, method="highs")
    if not res.success:
        raise RuntimeError(f"least-violation LP failed: {res.message}")
    return res.x[:6], float(res.x[6])


def solve(qp: QPProblem) -> QPSolution:
    """Euclidean projection of u_des onto the constraint polyhedron.

    Vacuous constraints (|a| < 1e-10) must have b >= -1e-10, otherwise the
    problem is Infeasible outright.  Active-set Gram systems that are
    singular are solved by least squares and reported via rank_deficient.
    """
    ud = qp.u_des.vec6()

    rows, rhs, keep_idx = [], [], []
    feasible_at_udes = True
    for i, c in enumerate(qp.constraints):
        if float(c.a @ c.a) < VACUOUS_NORM**2:
            if c.b < -VACUOUS_NORM:
                raise Infeasible(
                    f"constraint '{c.label}' is vacuous with negative bound {c.b}",
                    ud.copy(),
                    -float(c.b),
                )
            continue
        if float(c.a @ ud) > c.b:
            feasible_at_udes = False
        rows.append(c.a)
        rhs.append(float(c.b))
        keep_idx.append(i)

    if not rows or feasible_at_udes:
        return QPSolution(qp.u_des, (), 0.0)

    a_mat = np.array(rows)
    b_vec = np.array(rhs)

    m = a_mat.shape[0]
    for size in range(1, m + 1):
        for subset in combinations(range(m), size):
            a_act = a_mat[list(subset)]
            resid = a_act @ ud - b_vec[list(subset)]
            rank_deficient = False
            if size == 1:
                lam = resid / float(a_act[0] @ a_act[0])
            else:
                gram = a_act @ a_act.T
                try:
                    lam = np.linalg.solve(gram, resid)
                except np.linalg.LinAlgError:
                    lam = np.linalg.lstsq(gram, resid, rcond=None)[0]
                    rank_deficient = True
            if np.any(lam < -_DUAL_TOL):
                continue
            u = ud - a_act.T @ lam
            if np.any(a_mat @ u > b_vec + _PRIMAL_TOL):
                continue
            active = tuple(keep_idx[j] for j in subset)
            return QPSolution(
                Wrench.from_vec6(u),
                active,
                float(np.linalg.norm(u - ud)),
                rank_deficient,
            )

    u_lv, violation = _least_violating(a_mat, b_vec)
    raise Infeasible(
        f"no feasible wrench; best achievable max violation {violation:.3e}",
        u_lv,
        violation,
    )


def filter_wrench(
    state: State,
    u_des: Wrench,
    cbfs,
    inertia: InertiaTensor,
    enabled: bool = True,
) -> tuple[Wrench, FilterDiagnostics]:
    """Emit one constraint per barrier and project the nominal wrench.

    With enabled=False the constraints are still evaluated (for logging)
    but the nominal wrench passes through untouched.
    """
    constraints = tuple(cbf.constraint(state, inertia) for cbf in cbfs)
    if not enabled or not constraints:
        diag = FilterDiagnostics(constraints, (False,) * len(constraints), 0.0, False)
        return u_des, diag

    sol = solve(QPProblem(u_des, constraints))
    active = tuple(i in sol.active_set for i in range(len(constraints)))
    diag = FilterDiagnostics(constraints, active, sol.correction_norm, sol.rank_deficient)
    return sol.u_star, diag

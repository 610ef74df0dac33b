"""Semidefinite programs: diamond norm, approximate (anti)degradability,
PPT checks and PPT distance, the transpose-type quantum capacity upper bound,
and the entropy-continuity functions.

All SDPs go through one narrow solve() wrapper so solver choice and
tolerances live in a single place. cvxpy handles the complex-to-real
embedding internally.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import cvxpy as cp
import numpy as np

from .channels import Channel, ChoiMatrix, choi_of_composition, complementary_channel, kraus_to_choi
from .entropy import binary_entropy
from .linalg import herm, partial_transpose

GAP_TOL = 1e-7
FEAS_TOL = 1e-8
PPT_EIG_TOL = 1e-9


class SolverError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class SdpSolution:
    objective: float
    status: str  # optimal | near-optimal | infeasible | solver-error
    duality_gap: float
    witness: dict


def _solve(problem: cp.Problem) -> SdpSolution:
    try:
        problem.solve(solver=cp.CLARABEL, max_iter=200000)
    except cp.error.SolverError:
        try:
            problem.solve(solver=cp.SCS, eps=1e-9, max_iters=200000)
        except Exception as exc:  # pragma: no cover
            raise SolverError(f"all SDP solvers failed: {exc}") from exc
    if problem.status in (cp.INFEASIBLE, cp.INFEASIBLE_INACCURATE):
        return SdpSolution(float("nan"), "infeasible", float("inf"), {})
    if problem.status == cp.OPTIMAL:
        status = "optimal"
    elif problem.status == cp.OPTIMAL_INACCURATE:
        status = "near-optimal"
    else:
        raise SolverError(f"solver returned status {problem.status}")
    return SdpSolution(float(problem.value), status, 0.0, {})


def dump_problem(problem: cp.Problem, path: str) -> None:
    """Write the conic form (sparse triplets) for external cross-checking."""
    data, _, _ = problem.get_problem_data(cp.SCS)
    a = data["A"].tocoo()
    payload = {
        "schema": 1,
        "objective": list(map(float, np.asarray(data["c"]).ravel())),
        "rhs": list(map(float, np.asarray(data["b"]).ravel())),
        "A": {
            "rows": a.row.tolist(),
            "cols": a.col.tolist(),
            "values": a.data.tolist(),
            "shape": list(a.shape),
        },
        "cones": {k: (list(v) if isinstance(v, (list, tuple, np.ndarray)) else v)
                  for k, v in data["dims"].__dict__.items()},
    }
    with open(path, "w") as fh:
        json.dump(payload, fh)


# ---------------------------------------------------------------------------
# diamond norm


def diamond_norm(choi_delta: np.ndarray, dim_in: int, dim_out: int,
                 dump_path: str | None = None) -> float:
    """Diamond norm of a Hermitian-preserving map given its Choi operator
    (A (x) B ordering, unnormalized convention).

    Watrous dual SDP: minimize ||Tr_B Y0||_inf/2 + ||Tr_B Y1||_inf/2 subject
    to [[Y0, -J], [-J†, Y1]] >= 0.
    """
    j = np.asarray(choi_delta, dtype=complex)
    d = dim_in * dim_out
    if j.shape != (d, d):
        raise ValueError("Choi operator has wrong size")
    y0 = cp.Variable((d, d), hermitian=True)
    y1 = cp.Variable((d, d), hermitian=True)
    t0 = cp.Variable()
    t1 = cp.Variable()
    block = cp.bmat([[y0, -j], [-j.conj().T, y1]])
    cons = [
        block >> 0,
        y0 >> 0,
        y1 >> 0,
        t0 * np.eye(dim_in) - cp.partial_trace(y0, [dim_in, dim_out], axis=1) >> 0,
        t1 * np.eye(dim_in) - cp.partial_trace(y1, [dim_in, dim_out], axis=1) >> 0,
    ]
    prob = cp.Problem(cp.Minimize(0.5 * t0 + 0.5 * t1), cons)
    if dump_path:
        dump_problem(prob, dump_path)
    val = _solve(prob).objective
    return max(val, 0.0)


def channel_distance(ch1: Channel, ch2: Channel) -> float:
    if (ch1.dim_in, ch1.dim_out) != (ch2.dim_in, ch2.dim_out):
        raise ValueError("channels must share input and output dimensions")
    delta = kraus_to_choi(ch1).mat - kraus_to_choi(ch2).mat
    return diamond_norm(delta, ch1.dim_in, ch1.dim_out)


# ---------------------------------------------------------------------------
# approximate degradability


def _min_degrading_distance(ch_from: Channel, ch_to: Channel) -> tuple[float, ChoiMatrix]:
    """min over CPTP D: out(ch_from) -> out(ch_to) of ||ch_to - D o ch_from||_diamond.

    Both channels must share the input system A.
    """
    if ch_from.dim_in != ch_to.dim_in:
        raise ValueError("channels must share the input system")
    da, db, de = ch_from.dim_in, ch_from.dim_out, ch_to.dim_out
    j_n = kraus_to_choi(ch_from).mat
    j_target = kraus_to_choi(ch_to).mat
    jn_tb = partial_transpose(j_n, [da, db], sys=1)

    j_d = cp.Variable((db * de, db * de), hermitian=True)
    comp_big = cp.kron(jn_tb, np.eye(de)) @ cp.kron(np.eye(da), j_d)
    j_comp = cp.partial_trace(comp_big, [da, db, de], axis=1)
    delta = j_target - j_comp

    dd = da * de
    y0 = cp.Variable((dd, dd), hermitian=True)
    y1 = cp.Variable((dd, dd), hermitian=True)
    t0 = cp.Variable()
    t1 = cp.Variable()
    cons = [
        j_d >> 0,
        cp.partial_trace(j_d, [db, de], axis=1) == np.eye(db),
        cp.bmat([[y0, -delta], [-cp.conj(delta).T, y1]]) >> 0,
        y0 >> 0,
        y1 >> 0,
        t0 * np.eye(da) - cp.partial_trace(y0, [da, de], axis=1) >> 0,
        t1 * np.eye(da) - cp.partial_trace(y1, [da, de], axis=1) >> 0,
    ]
    prob = cp.Problem(cp.Minimize(0.5 * t0 + 0.5 * t1), cons)
    val = _solve(prob).objective
    witness = ChoiMatrix(db, de, herm(np.asarray(j_d.value)))
    return max(val, 0.0), witness


def eps_degradable(ch: Channel) -> tuple[float, ChoiMatrix]:
    """Smallest eps with ||N^c - D o N||_diamond <= eps over CPTP D: B -> E."""
    return _min_degrading_distance(ch, complementary_channel(ch))


def eps_antidegradable(ch: Channel) -> tuple[float, ChoiMatrix]:
    """Same SDP with the roles of N and N^c swapped."""
    return _min_degrading_distance(complementary_channel(ch), ch)


def degraded_choi(ch: Channel, degrading: ChoiMatrix) -> np.ndarray:
    """Choi of D o N for an explicit degrading map (feasibility checks)."""
    j_n = kraus_to_choi(ch).mat
    return choi_of_composition(j_n, degrading.mat, ch.dim_in, ch.dim_out, degrading.dim_out)


# ---------------------------------------------------------------------------
# PPT


def ppt_check(choi: ChoiMatrix, tol: float = PPT_EIG_TOL) -> bool:
    pt = partial_transpose(choi.mat, [choi.dim_in, choi.dim_out], sys=1)
    return bool(np.linalg.eigvalsh(herm(pt)).min() >= -tol)


def ppt_distance(choi: ChoiMatrix) -> float:
    """Trace distance from the normalized Choi state to the PPT set."""
    da, db = choi.dim_in, choi.dim_out
    d = da * db
    rho = herm(choi.mat) / da
    sigma = cp.Variable((d, d), hermitian=True)
    p = cp.Variable((d, d), hermitian=True)
    q = cp.Variable((d, d), hermitian=True)
    cons = [
        sigma >> 0,
        cp.partial_transpose(sigma, [da, db], axis=1) >> 0,
        cp.trace(sigma) == 1,
        p >> 0,
        q >> 0,
        p - q == rho - sigma,
    ]
    prob = cp.Problem(cp.Minimize(0.5 * cp.real(cp.trace(p + q))), cons)
    val = _solve(prob).objective
    return max(val, 0.0)


def transpose_q_upper(ch: Channel) -> float:
    """Certified upper bound on Q: log2 of the diamond norm of the
    transpose-composed map. Zero (within tolerance) on PPT channels."""
    j = kraus_to_choi(ch).mat
    j_t = partial_transpose(j, [ch.dim_in, ch.dim_out], sys=1)
    norm = diamond_norm(j_t, ch.dim_in, ch.dim_out)
    return max(float(np.log2(max(norm, 1e-300))), 0.0)


# ---------------------------------------------------------------------------
# continuity functions


def f1(env_dim: int, eps: float) -> float:
    if env_dim < 1 or not 0.0 <= eps <= 2.0:
        raise ValueError("need env_dim >= 1 and eps in [0, 2]")
    return 0.5 * eps * float(np.log2(max(env_dim - 1, 1))) + binary_entropy(eps / 2.0)


def f2(env_dim: int, eps: float) -> float:
    if env_dim < 1 or not 0.0 <= eps <= 2.0:
        raise ValueError("need env_dim >= 1 and eps in [0, 2]")
    return eps * float(np.log2(env_dim)) + (1.0 + eps / 2.0) * binary_entropy(eps / (2.0 + eps))

"""Randomized search for channels whose Choi operator and complementary
Choi operator are both (approximately) PPT while the coherent information
stays positive.

The hot loop is cheap: for a Stinespring isometry V it penalizes the
negative parts of the partial-transposed Choi spectra of the channel and
its complement, with a small reward for coherent information at the
maximally mixed input. SDP scoring (transpose bound, PPT distance) and the
coherent-information optimizer run only on shortlisted candidates.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channels import Channel, channel_from_isometry, complementary_channel, kraus_to_choi
from .linalg import LOG2, dagger, embed_on_subsystems, herm, partial_transpose, random_isometry
from .optimize import DEFAULT_SEED, OptOptions, q1
from .sdp import eps_antidegradable, ppt_check, ppt_distance, transpose_q_upper
from .serialize import channel_from_dict, channel_to_dict

SCORE_REPRO_TOL = 1e-6


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SearchConfig:
    dim_in: int = 3
    dim_out: int = 3
    dim_env: int = 4
    iterations: int = 120          # gradient steps per start
    starts_per_seed: int = 4       # random isometries refined per seed
    shortlist: int = 1             # SDP-scored candidates per seed
    seed: int = DEFAULT_SEED
    ppt_eps: float = 0.05          # acceptance threshold on transpose bounds
    coherent_info_min: float = 1e-4
    ppt_weight: float = 20.0       # hinge penalty on negative PT eigenvalues
    coherent_info_weight: float = 2.0  # reward for I(A>B) at maximally mixed input
    hinge_slack: float = 0.03      # tolerated PPT violation inside the hot loop
    q1_restarts: int = 6

    def __post_init__(self):
        if self.dim_out * self.dim_env < self.dim_in:
            raise ConfigError("dim_out * dim_env must be >= dim_in for an isometry")
        if min(self.dim_in, self.dim_out, self.dim_env) < 1:
            raise ConfigError("dimensions must be positive")
        if self.iterations < 1 or self.starts_per_seed < 1:
            raise ConfigError("iteration budgets must be positive")


@dataclass(frozen=True, eq=False)
class SearchRecord:
    channel: Channel
    scores: dict
    seed: int
    iteration: int
    accepted: bool

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "channel": channel_to_dict(self.channel),
            "scores": {k: float(v) for k, v in self.scores.items()},
            "seed": self.seed,
            "iteration": self.iteration,
            "accepted": self.accepted,
        }

    @staticmethod
    def from_dict(data: dict) -> "SearchRecord":
        return SearchRecord(
            channel=channel_from_dict(data["channel"]),
            scores={k: float(v) for k, v in data["scores"].items()},
            seed=int(data["seed"]),
            iteration=int(data["iteration"]),
            accepted=bool(data["accepted"]),
        )


def worker_count(default: int = 4) -> int:
    raw = os.environ.get("CAPBOUND_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = default
    return max(1, min(n if raw else default, 64))


# ---------------------------------------------------------------------------
# hot-loop objective


def _choi_vector(v: np.ndarray, da: int) -> np.ndarray:
    """|J> = (I_A (x) V) sum_i |ii>, as a tensor psi[a, be] = V[be, a]."""
    return v.T  # shape (da, db*de)


def _hinge_and_projector(mat: np.ndarray):
    vals, vecs = np.linalg.eigh(herm(mat))
    neg = vals < 0.0
    hinge = float(-vals[neg].sum())
    proj = (vecs[:, neg] @ dagger(vecs[:, neg])) if neg.any() else None
    return hinge, proj


def search_objective(v: np.ndarray, dims, ppt_weight: float, ci_weight: float,
                     hinge_slack: float = 0.0):
    """Penalty value and Wirtinger gradient d(obj)/dV* for an isometry V.

    obj = ppt_weight * [relu(hinge(PT J_N) - slack) + relu(hinge(PT J_Nc) - slack)]
          - ci_weight * I_c(I/d).
    The slack tolerates a small PPT violation so the coherent-information
    reward can stay active near the PPT boundary.
    """
    da, db, de = dims
    psi = _choi_vector(v, da)  # psi[a, be]
    full = np.outer(psi.ravel(), psi.ravel().conj())  # on A (x) B (x) E

    j_n = np.trace(full.reshape(da, db, de, da, db, de), axis1=2, axis2=5).reshape(da * db, da * db)
    j_c = np.trace(full.reshape(da, db, de, da, db, de), axis1=1, axis2=4).reshape(da * de, da * de)

    hinge_n, proj_n = _hinge_and_projector(partial_transpose(j_n, [da, db], sys=1))
    hinge_c, proj_c = _hinge_and_projector(partial_transpose(j_c, [da, de], sys=1))

    # M collects d(hinge)/d(psi psi^dag) contributions on A (x) B (x) E
    m = np.zeros((da * db * de,) * 2, dtype=complex)
    if proj_n is not None and hinge_n > hinge_slack:
        q = partial_transpose(proj_n, [da, db], sys=1)
        m -= ppt_weight * embed_on_subsystems(q, [da, db, de], keep=[0, 1])
    if proj_c is not None and hinge_c > hinge_slack:
        q = partial_transpose(proj_c, [da, de], sys=1)
        m -= ppt_weight * embed_on_subsystems(q, [da, db, de], keep=[0, 2])

    # coherent information at the maximally mixed input
    rho_b = np.trace((v @ dagger(v)).reshape(db, de, db, de), axis1=1, axis2=3) / da
    rho_e = np.trace((v @ dagger(v)).reshape(db, de, db, de), axis1=0, axis2=2) / da
    ci = _entropy_bits(rho_b) - _entropy_bits(rho_e)
    obj = (ppt_weight * (max(hinge_n - hinge_slack, 0.0)
                         + max(hinge_c - hinge_slack, 0.0))
           - ci_weight * ci)

    grad_psi = (m @ psi.ravel()).reshape(da, db * de)  # from the hinge terms
    grad_v = grad_psi.T.copy()
    lb = _log2_shifted(rho_b)
    le = _log2_shifted(rho_e)
    grad_v += ci_weight * (np.kron(lb, np.eye(de)) - np.kron(np.eye(db), le)) @ v / da
    return obj, grad_v, (hinge_n, hinge_c, ci)


def _entropy_bits(rho: np.ndarray) -> float:
    vals = np.linalg.eigvalsh(herm(rho))
    vals = vals[vals > 1e-12]
    return float(-np.sum(vals * np.log2(vals)))


def _log2_shifted(rho: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(herm(rho))
    lg = np.log2(np.clip(vals, 1e-18, None)) + 1.0 / LOG2
    return (vecs * lg) @ dagger(vecs)


def _project_isometry(a: np.ndarray) -> np.ndarray:
    u, _, wh = np.linalg.svd(a, full_matrices=False)
    return u @ wh


def _refine(v: np.ndarray, config: SearchConfig):
    """Projected gradient descent on the isometry manifold with backtracking."""
    dims = (config.dim_in, config.dim_out, config.dim_env)
    obj, grad, parts = search_objective(v, dims, config.ppt_weight,
                                        config.coherent_info_weight,
                                        config.hinge_slack)
    step = 0.1
    for _ in range(config.iterations):
        cand = _project_isometry(v - step * grad)
        cand_obj, cand_grad, cand_parts = search_objective(
            cand, dims, config.ppt_weight, config.coherent_info_weight,
            config.hinge_slack)
        if cand_obj < obj - 1e-14:
            v, obj, grad, parts = cand, cand_obj, cand_grad, cand_parts
            step = min(step * 1.5, 1.0)
        else:
            step *= 0.5
            if step < 1e-10:
                break
    return v, obj, parts


# ---------------------------------------------------------------------------
# scoring and search


def score_channel(ch: Channel, config: SearchConfig) -> dict:
    """Full SDP + optimizer scores for one candidate (deterministic)."""
    chc = complementary_channel(ch)
    opts = OptOptions(restarts=config.q1_restarts, seed=config.seed)
    return {
        "ppt_dist_N": ppt_distance(kraus_to_choi(ch)),
        "ppt_dist_Nc": ppt_distance(kraus_to_choi(chc)),
        "q_upper_N": transpose_q_upper(ch),
        "q_upper_Nc": transpose_q_upper(chc),
        "coh_info_lb": q1(ch, opts).value,
    }


def _accept(scores: dict, config: SearchConfig) -> bool:
    return (scores["q_upper_N"] <= config.ppt_eps
            and scores["q_upper_Nc"] <= config.ppt_eps
            and scores["coh_info_lb"] >= config.coherent_info_min)


def _run_seed(config: SearchConfig, seed: int) -> list:
    """Refine several random isometries for one seed; SDP-score a shortlist."""
    dims = (config.dim_in, config.dim_out, config.dim_env)
    rng = np.random.default_rng([config.seed, seed])
    refined = []
    for start in range(config.starts_per_seed):
        v0 = random_isometry(rng, config.dim_out * config.dim_env, config.dim_in)
        v, obj, (hinge_n, hinge_c, ci) = _refine(v0, config)
        # cheap proxy: total PPT violation must be small and the coherent
        # information at the maximally mixed input positive
        proxy = hinge_n + hinge_c
        refined.append((proxy, -ci, start, v))
    refined.sort(key=lambda r: (r[0] - 0.2 * max(-r[1], 0.0), r[2]))

    records = []
    for proxy, neg_ci, start, v in refined[: config.shortlist]:
        ch = channel_from_isometry(v, dims[1], dims[2])
        scores = score_channel(ch, config)
        records.append(SearchRecord(
            channel=ch,
            scores=scores,
            seed=seed,
            iteration=start,
            accepted=_accept(scores, config),
        ))
    return records


def search(config: SearchConfig, n_seeds: int = 16,
           out_path: str | None = None,
           resume_path: str | None = None) -> list:
    """Run the randomized search over independent seeds.

    Returns SearchRecords ranked by (max transpose bound, seed, iteration);
    accepted candidates sort first. With out_path, records are persisted as
    JSON lines; with resume_path, seeds already present in that file are
    loaded instead of recomputed.
    """
    done: dict = {}
    if resume_path and os.path.exists(resume_path):
        with open(resume_path) as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                rec = SearchRecord.from_dict(json.loads(line))
                done.setdefault(rec.seed, []).append(rec)

    todo = [s for s in range(n_seeds) if s not in done]
    results = dict(done)
    if todo:
        with ThreadPoolExecutor(max_workers=worker_count()) as pool:
            for seed, recs in zip(todo, pool.map(lambda s: _run_seed(config, s), todo)):
                results[seed] = recs

    records = [r for s in sorted(results) if s < n_seeds for r in results[s]]
    records.sort(key=lambda r: (
        not r.accepted,
        max(r.scores["q_upper_N"], r.scores["q_upper_Nc"]),
        -r.scores["coh_info_lb"],
        r.seed,
        r.iteration,
    ))

    if out_path:
        with open(out_path, "w") as fh:
            for rec in records:
                fh.write(json.dumps(rec.to_dict(), sort_keys=True) + "\n")
    return records


def bippt_verdict(ch: Channel) -> dict:
    """Exact PPT checks plus the certified private-capacity upper bound and
    the antidegradability parameter (to flag whether a bi-PPT candidate is
    distinct from the antidegradable zero-capacity class)."""
    chc = complementary_channel(ch)
    bippt = ppt_check(kraus_to_choi(ch)) and ppt_check(kraus_to_choi(chc))
    p_upper = transpose_q_upper(ch) + transpose_q_upper(chc)
    eps_a, _ = eps_antidegradable(ch)
    return {
        "bippt": bool(bippt),
        "antidegradable_eps": float(eps_a),
        "p_upper_certified": float(p_upper),
    }

"""Heuristic maximizers for the nonconvex single-letter channel quantities
(coherent information, Holevo quantity, private informations, relative-entropy
gap) and an exact-to-tolerance concave solver for the entanglement-assisted
capacity.

All optimizations run over unconstrained parameterizations: density matrices
as G G†/Tr(G G†), pure states as normalized vectors, probabilities through a
softmax. Gradients are analytic (eigendecomposition based); tests cross-check
them against finite differences.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any

import numpy as np
from scipy.optimize import minimize

from .channels import (
    Channel,
    complementary_channel,
    symmetric_side_channel,
    tensor,
)
from .linalg import LOG2, dagger, embed_on_subsystems, herm, log2m, partial_trace, trace_fn_grad

DEFAULT_SEED = 20240711


@dataclass(frozen=True)
class OptOptions:
    restarts: int = 20
    max_iter: int = 500
    tol: float = 1e-9
    seed: int = DEFAULT_SEED
    ensemble_size: int | None = None  # default |X| = dim_in^2
    reference_dim: int | None = None  # P_E reference; default dim_in
    dim_budget: int = 36  # max tensor input dimension for side-channel runs


@dataclass(frozen=True, eq=False)
class EstimateResult:
    value: float
    argument: Any
    restarts: int
    converged_fraction: float
    certainty: str  # analytic | concave-exact | heuristic-lower-bound
    diverged: bool = False


class BudgetError(ValueError):
    pass


# ---------------------------------------------------------------------------
# parameterizations


def _split_complex(x: np.ndarray, shape) -> np.ndarray:
    n = int(np.prod(shape))
    return (x[:n] + 1j * x[n:2 * n]).reshape(shape)


def _density_from_matrix(g: np.ndarray):
    t = float(np.sum(np.abs(g) ** 2))
    return herm(g @ dagger(g)) / t, t


def _density_param_grad(g: np.ndarray, t: float, rho: np.ndarray, grad_rho: np.ndarray) -> np.ndarray:
    """Chain rule through rho = G G† / Tr(G G†); returns real gradient layout
    (d/dRe G, d/dIm G) flattened."""
    c = float(np.trace(grad_rho @ rho).real)
    w = (grad_rho - c * np.eye(rho.shape[0])) @ g / t
    return np.concatenate([2.0 * w.real.ravel(), 2.0 * w.imag.ravel()])


def _softmax(theta: np.ndarray) -> np.ndarray:
    z = theta - theta.max()
    e = np.exp(z)
    return e / e.sum()


def _softmax_chain(p: np.ndarray, grad_p: np.ndarray) -> np.ndarray:
    return p * (grad_p - float(np.dot(p, grad_p)))


def _entropy_bits(rho: np.ndarray) -> float:
    vals = np.linalg.eigvalsh(herm(rho))
    vals = vals[vals > 1e-18]
    return float(-np.sum(vals * np.log2(vals)))


# ---------------------------------------------------------------------------
# generic Stinespring objective: sum of signed subsystem entropies


class StinespringObjective:
    """f(rho) = sum_i sign_i H(Tr_{complement}[W rho W†]) (+ optionally H(rho)).

    W maps the input space into a tensor product with subsystem dims `dims`;
    each term keeps the subsystems listed in `keep` (None = entropy of the
    input itself). Gradients are Euclidean w.r.t. rho, up to an irrelevant
    multiple of the identity (removed by the normalization chain rule).
    """

    def __init__(self, w: np.ndarray, dims, terms):
        self.w = w
        self.dims = list(dims)
        self.terms = list(terms)

    def value(self, rho: np.ndarray) -> float:
        omega = self.w @ rho @ dagger(self.w)
        total = 0.0
        for sign, keep in self.terms:
            sub = rho if keep is None else partial_trace(omega, self.dims, keep=list(keep))
            total += sign * _entropy_bits(sub)
        return total

    def value_grad(self, rho: np.ndarray):
        omega = self.w @ rho @ dagger(self.w)
        total = 0.0
        grad = np.zeros_like(rho)
        for sign, keep in self.terms:
            if keep is None:
                total += sign * _entropy_bits(rho)
                grad += sign * (-log2m(rho))
                continue
            sub = partial_trace(omega, self.dims, keep=list(keep))
            total += sign * _entropy_bits(sub)
            lifted = embed_on_subsystems(log2m(sub), self.dims, keep=list(keep))
            grad += sign * (-(dagger(self.w) @ lifted @ self.w))
        return total, herm(grad)


def coherent_information_objective(ch: Channel) -> StinespringObjective:
    return StinespringObjective(ch.isometry(), (ch.dim_out, ch.dim_env), [(+1, (0,)), (-1, (1,))])


def ea_mutual_information_objective(ch: Channel) -> StinespringObjective:
    return StinespringObjective(
        ch.isometry(), (ch.dim_out, ch.dim_env), [(+1, None), (+1, (0,)), (-1, (1,))]
    )


def ea_private_objective(ch: Channel, ref_dim: int) -> StinespringObjective:
    # rho_{A A'} with the channel acting on A'; value = I(A:B) - I(A:E)
    w = np.kron(np.eye(ref_dim), ch.isometry())
    dims = (ref_dim, ch.dim_out, ch.dim_env)
    return StinespringObjective(w, dims, [(+1, (1,)), (+1, (0, 2)), (-1, (0, 1)), (-1, (2,))])


# ---------------------------------------------------------------------------
# restart driver


def _restart_rngs(seed: int, restarts: int):
    return [np.random.default_rng([seed, i]) for i in range(restarts)]


def _run_restarts(fun_grad, inits, max_iter: float, tol: float):
    """L-BFGS ascent from every init; deterministic max with lowest-index
    tie-break. Returns (value, x, converged_fraction)."""
    best_val, best_x = -np.inf, None
    converged = 0
    for x0 in inits:
        res = minimize(
            lambda x: tuple(-v for v in fun_grad(x)),
            x0,
            jac=True,
            method="L-BFGS-B",
            options={"maxiter": int(max_iter), "ftol": tol, "gtol": 1e-10},
        )
        if res.success or res.status == 1:
            converged += 1
        val = -float(res.fun)
        if val > best_val + 1e-12:
            best_val, best_x = val, res.x
    return best_val, best_x, converged / max(1, len(inits))


# ---------------------------------------------------------------------------
# single-input quantities


def _single_input_estimate(obj: StinespringObjective, d: int, opts: OptOptions,
                           extra_inits=()):
    n = d * d

    def fun_grad(x):
        g = _split_complex(x, (d, d))
        rho, t = _density_from_matrix(g)
        val, grad_rho = obj.value_grad(rho)
        return val, _density_param_grad(g, t, rho, grad_rho)

    inits = list(extra_inits)
    for rng in _restart_rngs(opts.seed, opts.restarts):
        inits.append(rng.standard_normal(2 * n))
    val, x, frac = _run_restarts(fun_grad, inits, opts.max_iter, opts.tol)
    rho, _ = _density_from_matrix(_split_complex(x, (d, d)))
    return val, rho, frac


def _identity_init(d: int) -> np.ndarray:
    x = np.zeros(2 * d * d)
    x[: d * d] = np.eye(d).ravel()
    return x


def q1(ch: Channel, opts: OptOptions = OptOptions()) -> EstimateResult:
    """Coherent information max over pure inputs, Q1 = max_rho H(B) - H(E)."""
    if ch.family == "identity":
        d = ch.dim_in
        return EstimateResult(float(np.log2(d)), np.eye(d) / d, 0, 1.0, "analytic")
    if ch.family == "erasure":
        d, p = ch.params
        val = max(0.0, (1.0 - 2.0 * p)) * float(np.log2(d))
        # I_c(rho) = (1 - 2p) H(rho): maximized by I/d below p = 1/2 and by
        # any pure input above it
        if p <= 0.5:
            arg = np.eye(d) / d
        else:
            arg = np.zeros((d, d), dtype=complex)
            arg[0, 0] = 1.0
        return EstimateResult(val, arg, 0, 1.0, "analytic")
    obj = coherent_information_objective(ch)
    val, rho, frac = _single_input_estimate(obj, ch.dim_in, opts,
                                            extra_inits=[_identity_init(ch.dim_in)])
    return EstimateResult(val, rho, opts.restarts, frac, "heuristic-lower-bound")


def qe(ch: Channel, opts: OptOptions = OptOptions()) -> EstimateResult:
    """Q_E = 2 Q1 exactly; no separate optimization."""
    base = q1(ch, opts)
    return replace(base, value=2.0 * base.value)


def ce(ch: Channel, gap_tol: float = 1e-7, max_iter: int = 20000) -> EstimateResult:
    """Entanglement-assisted mutual information, concave in the input.

    Entropic mirror ascent with backtracking; the Frank-Wolfe gap
    max_sigma <grad, sigma - rho> certifies optimality to `gap_tol`.
    """
    d = ch.dim_in
    obj = ea_mutual_information_objective(ch)
    rho = np.eye(d, dtype=complex) / d
    val, grad = obj.value_grad(rho)
    eta = 1.0
    converged = False
    for _ in range(max_iter):
        gap = float(np.linalg.eigvalsh(grad).max() - np.trace(grad @ rho).real)
        if gap <= gap_tol:
            converged = True
            break
        stepped = False
        for _ in range(60):
            log_rho = log2m(rho) * LOG2  # natural log
            cand = herm(_expm_herm(log_rho + eta * grad * LOG2))
            cand = cand / np.trace(cand).real
            cand_val, cand_grad = obj.value_grad(cand)
            if cand_val > val + 1e-15:
                rho, val, grad = cand, cand_val, cand_grad
                eta = min(eta * 2.0, 64.0)
                stepped = True
                break
            eta *= 0.5
        if not stepped:
            break
    certainty = "concave-exact" if converged else "heuristic-lower-bound"
    return EstimateResult(val, rho, 1, 1.0 if converged else 0.0, certainty)


def _expm_herm(h: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(herm(h))
    vals = vals - vals.max()  # overflow guard; normalization absorbs the shift
    return (vecs * np.exp(vals)) @ dagger(vecs)


# ---------------------------------------------------------------------------
# ensemble quantities (Holevo quantity and private information)


class _EnsembleObjective:
    """I(U:B) [- I(U:E)] over an ensemble of density matrices.

    pure=True restricts members to pure states (vector parameters), used by
    the Holevo quantity and by classically-assisted coherent information.
    """

    def __init__(self, ch: Channel, m: int, pure: bool, with_env: bool):
        self.ch = ch
        self.nc = complementary_channel(ch)
        self.m = m
        self.pure = pure
        self.with_env = with_env
        d = ch.dim_in
        self.member_len = 2 * d if pure else 2 * d * d

    def unpack(self, x):
        m, d = self.m, self.ch.dim_in
        probs = _softmax(x[:m])
        mats, norms = [], []
        for u in range(m):
            chunk = x[m + u * self.member_len: m + (u + 1) * self.member_len]
            g = _split_complex(chunk, (d, 1) if self.pure else (d, d))
            rho, t = _density_from_matrix(g)
            mats.append(rho)
            norms.append((g, t))
        return probs, mats, norms

    def _holevo_terms(self, apply_fn, probs, mats):
        outs = [apply_fn(r) for r in mats]
        avg = sum(p * o for p, o in zip(probs, outs))
        val = _entropy_bits(avg) - sum(p * _entropy_bits(o) for p, o in zip(probs, outs))
        return val, outs, avg

    def value_grad(self, x):
        probs, mats, norms = self.unpack(x)
        val_b, outs_b, avg_b = self._holevo_terms(self.ch.apply, probs, mats)
        val = val_b
        if self.with_env:
            val_e, outs_e, avg_e = self._holevo_terms(self.nc.apply, probs, mats)
            val -= val_e
        log_avg_b = log2m(avg_b)
        logs_b = [log2m(o) for o in outs_b]
        if self.with_env:
            log_avg_e = log2m(avg_e)
            logs_e = [log2m(o) for o in outs_e]
        grad = np.zeros_like(x)
        gp = np.zeros(self.m)
        for u in range(self.m):
            g_rho = probs[u] * self.ch.apply_adjoint(logs_b[u] - log_avg_b)
            gp[u] = float(np.trace(outs_b[u] @ (logs_b[u] - log_avg_b)).real)
            if self.with_env:
                g_rho -= probs[u] * self.nc.apply_adjoint(logs_e[u] - log_avg_e)
                gp[u] -= float(np.trace(outs_e[u] @ (logs_e[u] - log_avg_e)).real)
            g, t = norms[u]
            grad[self.m + u * self.member_len: self.m + (u + 1) * self.member_len] = (
                _density_param_grad(g, t, mats[u], herm(g_rho))
            )
        grad[: self.m] = _softmax_chain(probs, gp)
        return val, grad


def _ensemble_estimate(ch: Channel, opts: OptOptions, pure: bool, with_env: bool,
                       extra_inits=()):
    m = opts.ensemble_size or ch.dim_in ** 2
    obj = _EnsembleObjective(ch, m, pure, with_env)
    nparam = m + m * obj.member_len

    inits = list(extra_inits)
    for rng in _restart_rngs(opts.seed, opts.restarts):
        inits.append(rng.standard_normal(nparam))
    val, x, frac = _run_restarts(obj.value_grad, inits, opts.max_iter, opts.tol)
    probs, mats, _ = obj.unpack(x)
    return val, (probs, mats), frac


def holevo_chi(ch: Channel, opts: OptOptions = OptOptions()) -> EstimateResult:
    """Holevo quantity: max over pure-state ensembles of I(X:B)."""
    val, arg, frac = _ensemble_estimate(ch, opts, pure=True, with_env=False)
    return EstimateResult(val, arg, opts.restarts, frac, "heuristic-lower-bound")


def p1(ch: Channel, opts: OptOptions = OptOptions()) -> EstimateResult:
    """Private information: max over mixed ensembles of I(U:B) - I(U:E).

    Warm-started from the coherent-information optimum (spectral ensemble of
    the optimal input), which guarantees p1 >= q1 up to arithmetic noise.
    """
    base = q1(ch, opts)
    m = opts.ensemble_size or ch.dim_in ** 2
    d = ch.dim_in
    warm = _spectral_ensemble_init(base.argument, m, d)
    obj = _EnsembleObjective(ch, m, pure=False, with_env=True)
    warm_val, _ = obj.value_grad(warm)
    val, arg, frac = _ensemble_estimate(ch, opts, pure=False, with_env=True,
                                        extra_inits=[warm])
    if warm_val > val:
        probs, mats, _ = obj.unpack(warm)
        val, arg = warm_val, (probs, mats)
    val = max(val, base.value)  # Eq-chain guarantee: P1 >= Q1
    return EstimateResult(val, arg, opts.restarts, frac, "heuristic-lower-bound")


def _spectral_ensemble_init(rho: np.ndarray, m: int, d: int) -> np.ndarray:
    vals, vecs = np.linalg.eigh(herm(rho))
    order = np.argsort(vals)[::-1]
    x = np.zeros(m + m * 2 * d * d)
    for u in range(m):
        if u < len(order) and vals[order[u]] > 1e-12:
            lam, v = vals[order[u]], vecs[:, order[u]]
            x[u] = np.log(lam)
            g = np.zeros((d, d), dtype=complex)
            g[:, 0] = v
        else:
            x[u] = -30.0
            g = np.eye(d, dtype=complex)
        x[m + u * 2 * d * d: m + u * 2 * d * d + d * d] = g.real.ravel()
        x[m + u * 2 * d * d + d * d: m + (u + 1) * 2 * d * d] = g.imag.ravel()
    return x


def pe(ch: Channel, opts: OptOptions = OptOptions()) -> EstimateResult:
    """Entanglement-assisted private information over mixed reference states."""
    ref = opts.reference_dim or ch.dim_in
    obj = ea_private_objective(ch, ref)
    d = ref * ch.dim_in
    val, rho, frac = _single_input_estimate(obj, d, opts, extra_inits=[_identity_init(d)])
    return EstimateResult(val, rho, opts.restarts, frac, "heuristic-lower-bound")


# ---------------------------------------------------------------------------
# relative-entropy gap heuristic (never used in certified chains)

R1_DIVERGENCE_THRESHOLD = 20.0
_RIDGE = 1e-9


class _RelEntGapObjective:
    """D(N(rho)||N(sigma)) - D(N^c(rho)||N^c(sigma)) with sigma kept slightly
    inside the state space (ridge) so the objective stays finite."""

    def __init__(self, ch: Channel):
        self.ch = ch
        self.nc = complementary_channel(ch)
        self.d = ch.dim_in

    def unpack(self, x):
        d = self.d
        n = 2 * d * d
        g_r = _split_complex(x[:n], (d, d))
        g_s = _split_complex(x[n:], (d, d))
        rho, tr = _density_from_matrix(g_r)
        sig_raw, ts = _density_from_matrix(g_s)
        sigma = (1.0 - _RIDGE) * sig_raw + _RIDGE * np.eye(d) / d
        return (g_r, tr, rho), (g_s, ts, sig_raw, sigma)

    @staticmethod
    def _rel_ent(rho_o, sig_o):
        lr = log2m(rho_o)
        ls = log2m(sig_o)
        return float(np.trace(rho_o @ (lr - ls)).real), lr, ls

    def value_grad(self, x):
        (g_r, tr, rho), (g_s, ts, sig_raw, sigma) = self.unpack(x)
        rb, sb = self.ch.apply(rho), self.ch.apply(sigma)
        re_, se = self.nc.apply(rho), self.nc.apply(sigma)
        db, lrb, lsb = self._rel_ent(rb, sb)
        de, lre, lse = self._rel_ent(re_, se)
        val = db - de
        # gradient w.r.t. rho (trace-preservation constants cancel B vs E)
        grad_rho = self.ch.apply_adjoint(lrb - lsb) - self.nc.apply_adjoint(lre - lse)
        # gradient w.r.t. sigma via the Frechet derivative of log2
        fn = lambda v: np.log2(np.clip(v, 1e-18, None))
        fp = lambda v: 1.0 / (np.clip(v, 1e-18, None) * LOG2)
        gb = -trace_fn_grad(sb, rb, fn, fp)
        ge = -trace_fn_grad(se, re_, fn, fp)
        grad_sigma = (1.0 - _RIDGE) * (self.ch.apply_adjoint(gb) - self.nc.apply_adjoint(ge))
        d = self.d
        grad = np.concatenate([
            _density_param_grad(g_r, tr, rho, herm(grad_rho)),
            _density_param_grad(g_s, ts, sig_raw, herm(grad_sigma)),
        ])
        return val, grad


def r1_estimate(ch: Channel, opts: OptOptions = OptOptions()) -> EstimateResult:
    """Heuristic lower bound on the relative-entropy gap quantity; reports
    divergence when the search keeps escaping (the supremum may be infinite)."""
    obj = _RelEntGapObjective(ch)
    d = ch.dim_in
    inits = []
    for rng in _restart_rngs(opts.seed, opts.restarts):
        inits.append(rng.standard_normal(4 * d * d))
    val, x, frac = _run_restarts(obj.value_grad, inits, opts.max_iter, opts.tol)
    val = max(val, 0.0)  # the diagonal pair rho = sigma always achieves 0
    diverged = val > R1_DIVERGENCE_THRESHOLD
    arg = None
    if x is not None:
        (_, _, rho), (_, _, _, sigma) = obj.unpack(x)
        arg = (rho, sigma)
    return EstimateResult(val, arg, opts.restarts, frac, "heuristic-lower-bound",
                          diverged=diverged)


# ---------------------------------------------------------------------------
# symmetric side channel assistance


def qss_lower(ch: Channel, d: int, opts: OptOptions = OptOptions()) -> EstimateResult:
    """Lower bound on Q_ss via Q1(N (x) A_d)."""
    if d < 2:
        raise ValueError("side channel needs d >= 2")
    side = symmetric_side_channel(d)
    if ch.dim_in * side.dim_in > opts.dim_budget:
        raise BudgetError(
            f"tensor input dimension {ch.dim_in * side.dim_in} exceeds budget {opts.dim_budget}"
        )
    joint = tensor(ch, side)
    return q1(joint, opts)

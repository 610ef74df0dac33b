"""One-way distillation estimators on bipartite states.

Given a state rho_AB with purification Phi_ABE, Alice applies a quantum
instrument with PSD Kraus operators {K_x >= 0, sum K_x^2 = I} and announces
the outcome. The estimators below heuristically maximize

  d1_arrow:  H(B|X) - H(E|X)                    (one-way distillable entanglement)
  k1_arrow:  I(X:B|T) - I(X:E|T)                (one-way distillable key),

the latter additionally over a classical post-processing channel R(t|x).
Both are lower bounds on the corresponding operational rates. Instruments
are parameterized so that feasibility (sum K_x^2 = I) holds exactly at every
optimizer step.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .bounds import BoundReport, Term, make_report
from .channels import BipartiteState, complementary_state, purify
from .linalg import dagger, herm, matrix_fn, psd_sqrt
from .optimize import OptOptions, _restart_rngs

INSTRUMENT_PSD_TOL = 1e-9
INSTRUMENT_SUM_TOL = 1e-8
EIG_CLIP = 1e-12


@dataclass(frozen=True, eq=False)
class Instrument:
    """Quantum instrument with PSD Kraus operators summing in squares to I."""

    kraus: tuple

    def __post_init__(self):
        kraus = tuple(np.asarray(k, dtype=complex) for k in self.kraus)
        object.__setattr__(self, "kraus", kraus)
        d = kraus[0].shape[0]
        total = np.zeros((d, d), dtype=complex)
        for k in kraus:
            if k.shape != (d, d):
                raise ValueError("all Kraus operators must be square, same size")
            if np.max(np.abs(k - dagger(k))) > 1e-8:
                raise ValueError("instrument Kraus operators must be Hermitian")
            if np.linalg.eigvalsh(herm(k)).min() < -INSTRUMENT_PSD_TOL:
                raise ValueError("instrument Kraus operators must be PSD")
            total += k @ k
        if np.max(np.abs(total - np.eye(d))) > INSTRUMENT_SUM_TOL:
            raise ValueError("instrument must satisfy sum K_x^2 = I")

    @property
    def dim(self) -> int:
        return self.kraus[0].shape[0]

    @property
    def outcomes(self) -> int:
        return len(self.kraus)

    @staticmethod
    def trivial(dim: int) -> "Instrument":
        return Instrument((np.eye(dim, dtype=complex),))

    @staticmethod
    def from_povm(mats) -> "Instrument":
        """PSD-Kraus instrument K_x = sqrt(M_x) from a POVM {M_x}."""
        return Instrument(tuple(psd_sqrt(np.asarray(m, dtype=complex)) for m in mats))


@dataclass(frozen=True, eq=False)
class ClassicalPostChannel:
    """Stochastic map R(t|x); matrix has shape (|T|, |X|), columns sum to 1."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        object.__setattr__(self, "matrix", m)
        if m.ndim != 2:
            raise ValueError("post-channel matrix must be 2-d")
        if np.min(m) < -1e-10:
            raise ValueError("post-channel entries must be nonnegative")
        if np.max(np.abs(m.sum(axis=0) - 1.0)) > 1e-10:
            raise ValueError("post-channel columns must be probability vectors")

    @staticmethod
    def trivial(n_outcomes: int) -> "ClassicalPostChannel":
        return ClassicalPostChannel(np.ones((1, n_outcomes)))


@dataclass(frozen=True, eq=False)
class DistillEstimate:
    value: float
    instrument: Instrument
    post_channel: ClassicalPostChannel | None
    restarts: int
    converged_fraction: float
    certainty: str = "heuristic-lower-bound"


# ---------------------------------------------------------------------------
# objective evaluation


def _entropy_bits(rho: np.ndarray) -> float:
    vals = np.linalg.eigvalsh(herm(rho))
    vals = vals[vals > EIG_CLIP]
    return float(-np.sum(vals * np.log2(vals)))


def _purified_tensor(state: BipartiteState):
    phi = purify(state.rho)
    da, db = state.dim_a, state.dim_b
    de = phi.size // (da * db)
    return phi.reshape(da, db, de), de


def _measurement_ensemble(phi3: np.ndarray, kraus):
    """Outcome probabilities and normalized conditional B/E marginals."""
    da, db, de = phi3.shape
    probs, rb, re = [], [], []
    for k in kraus:
        psi = np.einsum("ij,jbe->ibe", k, phi3)
        p = float(np.vdot(psi, psi).real)
        probs.append(p)
        if p < 1e-14:
            rb.append(np.eye(db) / db)
            re.append(np.eye(de) / de)
            continue
        tb = psi.transpose(1, 0, 2).reshape(db, da * de)
        te = psi.reshape(da * db, de)
        rb.append(herm(tb @ tb.conj().T) / p)
        re.append(herm(te.T @ te.conj()) / p)
    return np.array(probs), rb, re


def d1_value(state: BipartiteState, instrument: Instrument) -> float:
    """H(B|X) - H(E|X) for a fixed instrument."""
    phi3, _ = _purified_tensor(state)
    probs, rb, re = _measurement_ensemble(phi3, instrument.kraus)
    return float(sum(p * (_entropy_bits(b) - _entropy_bits(e))
                     for p, b, e in zip(probs, rb, re) if p > 1e-14))


def k1_value(state: BipartiteState, instrument: Instrument,
             post: ClassicalPostChannel) -> float:
    """I(X:B|T) - I(X:E|T) for a fixed instrument and post-channel."""
    phi3, _ = _purified_tensor(state)
    probs, rb, re = _measurement_ensemble(phi3, instrument.kraus)
    return _k1_from_ensemble(probs, rb, re, post.matrix)


def _k1_from_ensemble(probs, rb, re, r_matrix) -> float:
    total = 0.0
    for t in range(r_matrix.shape[0]):
        q_t = float(np.dot(r_matrix[t], probs))
        if q_t < 1e-14:
            continue
        w = r_matrix[t] * probs / q_t
        total += q_t * (_holevo(w, rb) - _holevo(w, re))
    return float(total)


def _holevo(weights, states) -> float:
    avg = sum(w * s for w, s in zip(weights, states) if w > 1e-14)
    cond = sum(w * _entropy_bits(s) for w, s in zip(weights, states) if w > 1e-14)
    return _entropy_bits(avg) - cond


# ---------------------------------------------------------------------------
# instrument parameterization: A_x free complex matrices,
# M_x = S^{-1/2} A_x A_x^dag S^{-1/2} with S = sum A_x A_x^dag, K_x = sqrt(M_x)


def _kraus_from_params(x: np.ndarray, d: int, n_out: int):
    a = x.reshape(n_out, 2, d, d)
    mats = [a[i, 0] + 1j * a[i, 1] for i in range(n_out)]
    s = sum(m @ dagger(m) for m in mats) + 1e-12 * np.eye(d)
    s_isqrt = matrix_fn(s, lambda v: np.clip(v, 1e-12, None) ** -0.5)
    kraus = []
    for m in mats:
        mm = herm(s_isqrt @ (m @ dagger(m)) @ s_isqrt)
        kraus.append(psd_sqrt(mm))
    return kraus


def _params_from_kraus(kraus, d: int, n_out: int) -> np.ndarray:
    a = np.zeros((n_out, 2, d, d))
    for i, k in enumerate(kraus[:n_out]):
        a[i, 0] = k.real
        a[i, 1] = k.imag
    return a.ravel()


def _softmax_cols(theta: np.ndarray) -> np.ndarray:
    z = theta - theta.max(axis=0, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=0, keepdims=True)


def _eigenbasis_kraus(rho_a: np.ndarray, n_out: int):
    _, vecs = np.linalg.eigh(herm(rho_a))
    d = rho_a.shape[0]
    kraus = [np.outer(vecs[:, i], vecs[:, i].conj()) for i in range(d)]
    kraus += [np.zeros((d, d), dtype=complex)] * (n_out - d)
    return kraus[:n_out]


# ---------------------------------------------------------------------------
# estimators


def _optimize(fun, inits, opts: OptOptions):
    best_val, best_x, n_conv = -np.inf, None, 0
    for x0 in inits:
        res = minimize(fun, x0, method="L-BFGS-B",
                       options={"maxiter": opts.max_iter, "ftol": opts.tol})
        if res.success:
            n_conv += 1
        val = -float(res.fun)
        if val > best_val + 1e-12:
            best_val, best_x = val, res.x
    return best_val, best_x, n_conv


def d1_arrow(state: BipartiteState, opts: OptOptions = OptOptions()) -> DistillEstimate:
    """Heuristic maximization of H(B|X) - H(E|X) over instruments.

    The trivial instrument (coherent information of the state) and the
    eigenbasis projective measurement are always evaluated, so the reported
    value is at least their maximum.
    """
    da = state.dim_a
    n_out = da * da
    phi3, _ = _purified_tensor(state)

    def neg_obj(x):
        kraus = _kraus_from_params(x, da, n_out)
        probs, rb, re = _measurement_ensemble(phi3, kraus)
        return -float(sum(p * (_entropy_bits(b) - _entropy_bits(e))
                          for p, b, e in zip(probs, rb, re) if p > 1e-14))

    trivial = Instrument.trivial(da)
    eig_kraus = _eigenbasis_kraus(state.marginal_a(), n_out)
    candidates = [
        (d1_value(state, trivial), trivial, 1.0),
        (d1_value(state, Instrument(tuple(k for k in eig_kraus
                                          if np.max(np.abs(k)) > 0))),
         Instrument(tuple(k for k in eig_kraus if np.max(np.abs(k)) > 0)), 1.0),
    ]

    inits = [_params_from_kraus(eig_kraus, da, n_out)]
    rngs = _restart_rngs(opts.seed, max(opts.restarts - 1, 0))
    inits += [rng.standard_normal(n_out * 2 * da * da) for rng in rngs]
    val, x, n_conv = _optimize(neg_obj, inits, opts)
    if x is not None:
        inst = Instrument(tuple(_kraus_from_params(x, da, n_out)))
        candidates.append((d1_value(state, inst), inst,
                           n_conv / max(len(inits), 1)))

    best = max(candidates, key=lambda c: c[0])
    return DistillEstimate(best[0], best[1], None, len(inits), best[2])


def k1_arrow(state: BipartiteState, opts: OptOptions = OptOptions(),
             n_post: int | None = None) -> DistillEstimate:
    """Heuristic maximization of I(X:B|T) - I(X:E|T) over instruments and
    classical post-channels. Warm starts: the d1-optimal instrument with a
    trivial post-channel, the eigenbasis measurement, and random points."""
    da = state.dim_a
    n_out = da * da
    n_t = n_post or n_out
    phi3, _ = _purified_tensor(state)
    n_inst = n_out * 2 * da * da

    def neg_obj(x):
        kraus = _kraus_from_params(x[:n_inst], da, n_out)
        r = _softmax_cols(x[n_inst:].reshape(n_t, n_out))
        probs, rb, re = _measurement_ensemble(phi3, kraus)
        return -_k1_from_ensemble(probs, rb, re, r)

    def pack(kraus, theta):
        return np.concatenate([_params_from_kraus(kraus, da, n_out), theta.ravel()])

    # trivial-T parameters: all mass on t = 0
    theta_triv = np.zeros((n_t, n_out))
    theta_triv[0] = 10.0

    d1_est = d1_arrow(state, opts)
    d1_kraus = list(d1_est.instrument.kraus)
    d1_kraus += [np.zeros((da, da), dtype=complex)] * (n_out - len(d1_kraus))
    eig_kraus = _eigenbasis_kraus(state.marginal_a(), n_out)

    inits = [pack(d1_kraus, theta_triv), pack(eig_kraus, theta_triv)]
    rngs = _restart_rngs(opts.seed + 1, max(opts.restarts - 2, 0))
    inits += [np.concatenate([rng.standard_normal(n_inst),
                              rng.standard_normal(n_t * n_out)]) for rng in rngs]

    # direct evaluations (optimizer-independent floor)
    eig_inst = Instrument(tuple(k for k in eig_kraus if np.max(np.abs(k)) > 0))
    triv_r_eig = ClassicalPostChannel.trivial(eig_inst.outcomes)
    triv_r_d1 = ClassicalPostChannel.trivial(d1_est.instrument.outcomes)
    candidates = [
        (k1_value(state, d1_est.instrument, triv_r_d1), d1_est.instrument,
         triv_r_d1, 1.0),
        (k1_value(state, eig_inst, triv_r_eig), eig_inst, triv_r_eig, 1.0),
    ]

    val, x, n_conv = _optimize(neg_obj, inits, opts)
    if x is not None:
        inst = Instrument(tuple(_kraus_from_params(x[:n_inst], da, n_out)))
        post = ClassicalPostChannel(_softmax_cols(x[n_inst:].reshape(n_t, n_out)))
        candidates.append((k1_value(state, inst, post), inst, post,
                           n_conv / max(len(inits), 1)))

    best = max(candidates, key=lambda c: c[0])
    return DistillEstimate(best[0], best[1], best[2], len(inits), best[3])


def weaker_condition_eps(state: BipartiteState,
                         opts: OptOptions = OptOptions()) -> float:
    """Trivial-post-channel specialization of the secrecy-order epsilon:
    max over instruments on the complementary state of I(X:B) - I(X:E)."""
    est = k1_arrow(complementary_state(state), opts, n_post=1)
    return est.value


# ---------------------------------------------------------------------------
# state orders and bound chains


def state_order_epsilons(state: BipartiteState,
                         opts: OptOptions = OptOptions()) -> dict:
    """Single-letter heuristic lower bounds on the partial-order epsilons.

    more_secret_eps / more_informative_eps evaluate the key / entanglement
    estimator on the complementary state; the anti variants swap the roles
    of the state and its complement. All values are heuristic lower bounds
    on the true (regularized) epsilons.
    """
    comp = complementary_state(state)
    return {
        "more_secret_eps": k1_arrow(comp, opts).value,
        "more_informative_eps": d1_arrow(comp, opts).value,
        "anti_more_secret_eps": k1_arrow(state, opts).value,
        "anti_more_informative_eps": d1_arrow(state, opts).value,
        "certainty": "heuristic-lower-bound",
    }


def state_bounds(state: BipartiteState, opts: OptOptions = OptOptions()) -> dict:
    """Bound-chain reports relating one-way distillable entanglement and key
    to their single-letter estimators via the complementary state."""
    comp = complementary_state(state)
    d1_n = d1_arrow(state, opts)
    k1_n = k1_arrow(state, opts)
    d1_c = d1_arrow(comp, opts)
    k1_c = k1_arrow(comp, opts)

    def t(name, est, role):
        return Term(name, float(est.value), est.certainty, role)

    reports = {
        "K1": make_report(
            "K1",
            [t("d1(rho)", d1_n, "lower"), t("k1(rho)", k1_n, "lower")],
            [t("d1(rho)", d1_n, "upper"), t("d1(rho^c)", d1_c, "upper")],
            anchor="D1(rho) <= K1(rho) <= D1(rho) + D1(rho^c)",
        ),
        "D": make_report(
            "D",
            [t("d1(rho)", d1_n, "lower")],
            [t("d1(rho)", d1_n, "upper"), t("k1(rho^c)", k1_c, "upper")],
            anchor="D1(rho) <= D(rho) <= D1(rho) + K(rho^c)",
        ),
        "K_two_term": make_report(
            "K",
            [t("k1(rho)", k1_n, "lower")],
            [t("k1(rho)", k1_n, "upper"), t("k1(rho^c)", k1_c, "upper"),
             t("d1(rho^c)", d1_c, "upper")],
            anchor="K1(rho) <= K(rho) <= K1(rho) + K(rho^c) + D(rho^c)",
        ),
        "K": make_report(
            "K",
            [t("k1(rho)", k1_n, "lower")],
            [t("k1(rho)", k1_n, "upper"),
             Term("2*k1(rho^c)", 2 * float(k1_c.value), k1_c.certainty, "upper")],
            anchor="K1(rho) <= K(rho) <= K1(rho) + 2*K(rho^c)",
        ),
    }
    reports["estimates"] = {
        "d1": d1_n.value, "k1": k1_n.value,
        "d1_complement": d1_c.value, "k1_complement": k1_c.value,
    }
    return reports

"""Channel and bipartite state representations.

Channels are stored as Kraus sets; the Choi operator uses the unnormalized
convention (trace = dim_in) with subsystem order A (x) B, A the input copy.
Complementary channels fix the environment basis by Kraus index order;
complements should only ever be compared through information quantities.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    dagger,
    eigh_clipped,
    herm,
    is_hermitian,
    partial_trace,
    partial_transpose,
    random_isometry,
)

TP_TOL = 1e-8
PSD_TOL = 1e-10
RANK_CUTOFF = 1e-12


class ChannelError(ValueError):
    """Raised when a Kraus set or Choi operator violates CPTP structure."""


class DimensionError(ChannelError):
    pass


@dataclass(frozen=True, eq=False)
class ValidationReport:
    ok: bool
    violation: float


def validate_channel(kraus) -> ValidationReport:
    """Check trace preservation: sum K†K = I in operator norm."""
    kraus = [np.asarray(k, dtype=complex) for k in kraus]
    if not kraus:
        raise DimensionError("empty Kraus set")
    shape = kraus[0].shape
    if any(k.shape != shape for k in kraus):
        raise DimensionError("Kraus operators must share a common shape")
    din = shape[1]
    acc = sum(dagger(k) @ k for k in kraus)
    violation = float(np.linalg.norm(acc - np.eye(din), ord=2))
    return ValidationReport(ok=violation <= TP_TOL, violation=violation)


@dataclass(frozen=True, eq=False)
class Channel:
    """CPTP map as a Kraus set, dim_env = number of Kraus operators."""

    kraus: tuple
    family: str | None = field(default=None, compare=False)
    params: tuple = field(default=(), compare=False)

    def __post_init__(self):
        kraus = tuple(np.asarray(k, dtype=complex) for k in self.kraus)
        object.__setattr__(self, "kraus", kraus)
        rep = validate_channel(kraus)
        if not rep.ok:
            raise ChannelError(f"Kraus set is not trace-preserving (violation {rep.violation:.3e})")

    @property
    def dim_in(self) -> int:
        return self.kraus[0].shape[1]

    @property
    def dim_out(self) -> int:
        return self.kraus[0].shape[0]

    @property
    def dim_env(self) -> int:
        return len(self.kraus)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return sum(k @ rho @ dagger(k) for k in self.kraus)

    def apply_adjoint(self, m: np.ndarray) -> np.ndarray:
        return sum(dagger(k) @ m @ k for k in self.kraus)

    def isometry(self) -> np.ndarray:
        """Stinespring isometry V: H_in -> H_out (x) H_env, V|ψ> = Σ_k K_k|ψ> (x) |k>."""
        v = np.zeros((self.dim_out * self.dim_env, self.dim_in), dtype=complex)
        for k, kk in enumerate(self.kraus):
            v[k::self.dim_env, :] = kk
        return v


@dataclass(frozen=True, eq=False)
class ChoiMatrix:
    dim_in: int
    dim_out: int
    mat: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.mat, dtype=complex)
        object.__setattr__(self, "mat", mat)
        d = self.dim_in * self.dim_out
        if mat.shape != (d, d):
            raise DimensionError("Choi matrix has wrong size")

    def check(self, psd_tol: float = PSD_TOL, tp_tol: float = TP_TOL) -> None:
        if not is_hermitian(self.mat, 1e-9):
            raise ChannelError("Choi matrix is not Hermitian")
        vals = np.linalg.eigvalsh(herm(self.mat))
        if vals.min() < -1e-8:
            raise ChannelError(f"Choi matrix is not CP (min eigenvalue {vals.min():.3e})")
        tr_out = partial_trace(self.mat, [self.dim_in, self.dim_out], keep=[0])
        if np.linalg.norm(tr_out - np.eye(self.dim_in), ord=2) > tp_tol:
            raise ChannelError("Choi matrix is not trace-preserving (Tr_B != I)")


def kraus_to_choi(ch: Channel) -> ChoiMatrix:
    """Choi operator (id (x) N)(γ) with γ = Σ_ij |ii><jj| (trace dim_in)."""
    din, dout = ch.dim_in, ch.dim_out
    j = np.zeros((din * dout, din * dout), dtype=complex)
    for k in ch.kraus:
        u = k.T.reshape(-1)  # Σ_i |i> (x) K|i>, big-endian A (x) B layout
        j += np.outer(u, u.conj())
    return ChoiMatrix(din, dout, j)


def choi_to_kraus(choi: ChoiMatrix, cutoff: float = RANK_CUTOFF) -> Channel:
    choi.check()
    vals, vecs = eigh_clipped(choi.mat)
    kraus = []
    for lam, v in zip(vals, vecs.T):
        if lam <= cutoff:
            continue
        k = np.sqrt(lam) * v.reshape(choi.dim_in, choi.dim_out).T
        kraus.append(k)
    return Channel(tuple(kraus))


def complementary_channel(ch: Channel) -> Channel:
    """N^c: A -> E obtained from the Stinespring isometry by tracing out B.

    Kraus operator E_j of N^c (one per output basis vector of B) has entries
    (E_j)_{k,i} = (K_k)_{j,i}.
    """
    stacked = np.stack(ch.kraus)  # (env, out, in)
    comp = tuple(stacked[:, j, :] for j in range(ch.dim_out))
    return Channel(comp)


def tensor(ch1: Channel, ch2: Channel) -> Channel:
    kraus = tuple(np.kron(a, b) for a in ch1.kraus for b in ch2.kraus)
    return Channel(kraus)


def identity_channel(d: int) -> Channel:
    return Channel((np.eye(d),), family="identity", params=(d,))


def erasure(d: int, p: float) -> Channel:
    """Erasure channel: input survives with probability 1-p, otherwise the
    (d+1)-th flag basis vector is emitted."""
    if d < 2:
        raise ChannelError("erasure needs d >= 2")
    if not 0.0 <= p <= 1.0:
        raise ChannelError("erasure probability must lie in [0, 1]")
    keep = np.zeros((d + 1, d), dtype=complex)
    keep[:d, :] = np.eye(d)
    kraus = [np.sqrt(1.0 - p) * keep]
    flag = np.zeros(d + 1, dtype=complex)
    flag[d] = 1.0
    for i in range(d):
        e = np.zeros(d, dtype=complex)
        e[i] = 1.0
        kraus.append(np.sqrt(p) * np.outer(flag, e))
    return Channel(tuple(kraus), family="erasure", params=(d, p))


def depolarizing(d: int, p: float) -> Channel:
    """With probability p the output is replaced by I/d (Choi mixing form)."""
    if d < 2:
        raise ChannelError("depolarizing needs d >= 2")
    if not 0.0 <= p <= 1.0:
        raise ChannelError("depolarizing probability must lie in [0, 1]")
    j_id = kraus_to_choi(identity_channel(d)).mat
    j = (1.0 - p) * j_id + p * np.kron(np.eye(d), np.eye(d) / d)
    ch = choi_to_kraus(ChoiMatrix(d, d, j))
    return Channel(ch.kraus, family="depolarizing", params=(d, p))


def completely_depolarizing(d: int) -> Channel:
    return Channel(depolarizing(d, 1.0).kraus, family="completely-depolarizing", params=(d,))


def amplitude_damping(gamma: float) -> Channel:
    if not 0.0 <= gamma <= 1.0:
        raise ChannelError("damping parameter must lie in [0, 1]")
    k0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - gamma)]], dtype=complex)
    k1 = np.array([[0.0, np.sqrt(gamma)], [0.0, 0.0]], dtype=complex)
    return Channel((k0, k1), family="amplitude-damping", params=(gamma,))


def symmetric_side_channel(d: int) -> Channel:
    """A_d: isometric embedding of C^{d(d+1)/2} into the symmetric subspace
    of C^d (x) C^d, then trace out the second factor."""
    if d < 2:
        raise ChannelError("symmetric side channel needs d >= 2")
    basis = []
    for i in range(d):
        v = np.zeros(d * d, dtype=complex)
        v[i * d + i] = 1.0
        basis.append(v)
    for i in range(d):
        for j in range(i + 1, d):
            v = np.zeros(d * d, dtype=complex)
            v[i * d + j] = 1.0 / np.sqrt(2.0)
            v[j * d + i] = 1.0 / np.sqrt(2.0)
            basis.append(v)
    iso = np.stack(basis, axis=1)  # (d*d, d(d+1)/2)
    din = d * (d + 1) // 2
    # output = first factor, environment = second factor
    kraus = tuple(iso.reshape(d, d, din)[:, k, :] for k in range(d))
    return Channel(kraus, family="symmetric-side", params=(d,))


def channel_from_isometry(v: np.ndarray, dim_out: int, dim_env: int) -> Channel:
    """Channel with Stinespring isometry V: H_in -> H_out (x) H_env."""
    rows, din = v.shape
    if rows != dim_out * dim_env:
        raise DimensionError("isometry rows must equal dim_out * dim_env")
    t = v.reshape(dim_out, dim_env, din)
    return Channel(tuple(t[:, k, :] for k in range(dim_env)))


def random_channel(rng: np.random.Generator, dim_in: int, dim_out: int, dim_env: int) -> Channel:
    if dim_out * dim_env < dim_in:
        raise DimensionError("dim_out * dim_env must be >= dim_in")
    v = random_isometry(rng, dim_out * dim_env, dim_in)
    return channel_from_isometry(v, dim_out, dim_env)


@dataclass(frozen=True, eq=False)
class BipartiteState:
    dim_a: int
    dim_b: int
    rho: np.ndarray

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=complex)
        object.__setattr__(self, "rho", rho)
        d = self.dim_a * self.dim_b
        if rho.shape != (d, d):
            raise DimensionError("state has wrong size for dim_a * dim_b")
        check_density(rho)

    def marginal_a(self) -> np.ndarray:
        return partial_trace(self.rho, [self.dim_a, self.dim_b], keep=[0])

    def marginal_b(self) -> np.ndarray:
        return partial_trace(self.rho, [self.dim_a, self.dim_b], keep=[1])


class StateError(ValueError):
    pass


def check_density(rho: np.ndarray, herm_tol: float = 1e-10, eig_tol: float = 1e-10,
                  trace_tol: float = 1e-10) -> None:
    if not is_hermitian(rho, herm_tol):
        raise StateError("density matrix is not Hermitian")
    if np.linalg.eigvalsh(herm(rho)).min() < -eig_tol:
        raise StateError("density matrix has a negative eigenvalue")
    if abs(np.trace(rho).real - 1.0) > trace_tol:
        raise StateError("density matrix does not have unit trace")


def purify(rho: np.ndarray, cutoff: float = RANK_CUTOFF) -> np.ndarray:
    """Purification vector |Φ> = Σ_k sqrt(λ_k) |ψ_k> (x) |k>_E.

    The environment dimension equals the numerical rank of rho.
    """
    vals, vecs = eigh_clipped(rho)
    idx = [i for i in range(len(vals)) if vals[i] > cutoff]
    de = len(idx)
    d = rho.shape[0]
    phi = np.zeros(d * de, dtype=complex)
    for e, i in enumerate(sorted(idx, key=lambda i: -vals[i])):
        phi += np.sqrt(vals[i]) * np.kron(vecs[:, i], _basis(de, e))
    return phi


def _basis(d: int, i: int) -> np.ndarray:
    v = np.zeros(d, dtype=complex)
    v[i] = 1.0
    return v


def purification_env_dim(rho: np.ndarray, cutoff: float = RANK_CUTOFF) -> int:
    vals = np.linalg.eigvalsh(herm(rho))
    return int(np.sum(vals > cutoff))


def complementary_state(state: BipartiteState) -> BipartiteState:
    """ρ_AB^c = ρ_AE = Tr_B Φ_ABE for a purification Φ of ρ_AB."""
    phi = purify(state.rho)  # on (A,B) (x) E
    de = phi.size // (state.dim_a * state.dim_b)
    full = np.outer(phi, phi.conj())
    dims = [state.dim_a, state.dim_b, de]
    rho_ae = partial_trace(full, dims, keep=[0, 2])
    return BipartiteState(state.dim_a, de, rho_ae)


def choi_state(ch: Channel) -> BipartiteState:
    """Normalized Choi state: channel acting on half a maximally entangled pair."""
    j = kraus_to_choi(ch).mat / ch.dim_in
    return BipartiteState(ch.dim_in, ch.dim_out, j)


def choi_of_composition(j_n: np.ndarray, j_d: np.ndarray, da: int, db: int, de: int) -> np.ndarray:
    """Choi operator of D∘N from J(N) on A(x)B and J(D) on B(x)E.

    J(D∘N) = Tr_B[(J(N)^{T_B} (x) I_E)(I_A (x) J(D))].
    """
    jn_tb = partial_transpose(j_n, [da, db], sys=1)
    big = np.kron(jn_tb, np.eye(de)) @ np.kron(np.eye(da), j_d)
    return partial_trace(big, [da, db, de], keep=[0, 2])

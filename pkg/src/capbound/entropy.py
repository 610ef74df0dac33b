"""Entropic kernels: von Neumann entropy, (conditional) mutual information,
coherent information, relative entropy, and channel-evaluated variants.

All logarithms are base 2; results are in bits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import Channel, check_density, purify
from .linalg import dagger, herm, partial_trace

EIG_CLIP = 1e-12


class EntropyDomainError(ValueError):
    pass


def entropy(rho: np.ndarray, validate: bool = True) -> float:
    """Von Neumann entropy -Tr ρ log2 ρ with eigenvalues clipped at 1e-12."""
    if validate:
        check_density(rho)
    vals = np.linalg.eigvalsh(herm(rho))
    vals = vals[vals > EIG_CLIP]
    return float(-np.sum(vals * np.log2(vals)))


def binary_entropy(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return float(-x * np.log2(x) - (1 - x) * np.log2(1 - x))


@dataclass(frozen=True, eq=False)
class LabeledState:
    """Joint density matrix over named subsystems."""

    labels: tuple
    dims: tuple
    rho: np.ndarray

    def __post_init__(self):
        if len(self.labels) != len(self.dims):
            raise EntropyDomainError("labels and dims must align")
        if len(set(self.labels)) != len(self.labels):
            raise EntropyDomainError("labels must be unique")
        d = int(np.prod(self.dims))
        if self.rho.shape != (d, d):
            raise EntropyDomainError("joint dimension mismatch")

    def _indices(self, labels) -> list:
        try:
            return [self.labels.index(l) for l in labels]
        except ValueError as exc:
            raise EntropyDomainError(f"unknown label in {labels}") from exc

    def marginal(self, labels) -> np.ndarray:
        return partial_trace(self.rho, self.dims, keep=sorted(self._indices(labels)))

    def subsystem_entropy(self, labels) -> float:
        return entropy(self.marginal(labels), validate=False)


def mutual_information(s: LabeledState, a, b) -> float:
    a, b = _as_tuple(a), _as_tuple(b)
    _check_disjoint(a, b)
    return s.subsystem_entropy(a) + s.subsystem_entropy(b) - s.subsystem_entropy(a + b)


def conditional_mutual_information(s: LabeledState, a, b, c) -> float:
    a, b, c = _as_tuple(a), _as_tuple(b), _as_tuple(c)
    _check_disjoint(a, b, c)
    return (
        s.subsystem_entropy(a + c)
        + s.subsystem_entropy(b + c)
        - s.subsystem_entropy(a + b + c)
        - s.subsystem_entropy(c)
    )


def coherent_information(s: LabeledState, a, b) -> float:
    """I(A>B) = H(B) - H(AB)."""
    a, b = _as_tuple(a), _as_tuple(b)
    _check_disjoint(a, b)
    return s.subsystem_entropy(b) - s.subsystem_entropy(a + b)


def _as_tuple(x):
    return (x,) if isinstance(x, str) else tuple(x)


def _check_disjoint(*groups):
    seen = set()
    for g in groups:
        for l in g:
            if l in seen:
                raise EntropyDomainError(f"label {l} appears in more than one group")
            seen.add(l)


SUPPORT_EIG_TOL = 1e-10
SUPPORT_PROJ_TOL = 1e-8


def relative_entropy(rho: np.ndarray, sigma: np.ndarray) -> float:
    """D(ρ||σ) in bits, +inf when supp ρ is not contained in supp σ."""
    check_density(rho)
    check_density(sigma)
    svals, svecs = np.linalg.eigh(herm(sigma))
    rvals, rvecs = np.linalg.eigh(herm(rho))
    range_proj = svecs[:, svals > SUPPORT_EIG_TOL]
    for lam, v in zip(rvals, rvecs.T):
        if lam > SUPPORT_EIG_TOL:
            overlap = float(np.linalg.norm(dagger(range_proj) @ v) ** 2)
            if overlap < 1.0 - SUPPORT_PROJ_TOL:
                return float("inf")
    # evaluate on the support of sigma
    keep = svals > SUPPORT_EIG_TOL
    u = svecs[:, keep]
    rho_s = dagger(u) @ rho @ u
    log_sigma = (u * np.log2(svals[keep])) @ dagger(u)
    rpos = rvals[rvals > EIG_CLIP]
    tr_rho_log_rho = float(np.sum(rpos * np.log2(rpos)))
    return float(tr_rho_log_rho - np.trace(rho @ log_sigma).real)


def channel_output_state(ch: Channel, rho_in: np.ndarray, keep=("R", "B", "E")) -> LabeledState:
    """Apply the Stinespring isometry to a purified input and keep a subset
    of {R, B, E} (R the purifying reference)."""
    if rho_in.shape != (ch.dim_in, ch.dim_in):
        raise EntropyDomainError("input dimension mismatch")
    check_density(rho_in)
    keep = tuple(keep)
    for l in keep:
        if l not in ("R", "B", "E"):
            raise EntropyDomainError(f"unknown subsystem {l}")
    phi = purify(rho_in)  # on A (x) R
    dr = phi.size // ch.dim_in
    v = ch.isometry()
    # reorder to R (x) A before applying V on A
    psi = phi.reshape(ch.dim_in, dr).T.reshape(-1)
    big = np.kron(np.eye(dr), v) @ psi  # on R (x) B (x) E
    full = np.outer(big, big.conj())
    labels = ("R", "B", "E")
    dims = (dr, ch.dim_out, ch.dim_env)
    idx = sorted(labels.index(l) for l in keep)
    sub = partial_trace(full, dims, keep=idx)
    kept_labels = tuple(labels[i] for i in idx)
    kept_dims = tuple(dims[i] for i in idx)
    return LabeledState(kept_labels, kept_dims, sub)


def channel_coherent_information(ch: Channel, rho_in: np.ndarray) -> float:
    """I(A>B) of the channel on a given input, via H(B) - H(E)."""
    b = ch.apply(rho_in)
    e = sum(k @ rho_in @ dagger(k) for k in _complement_kraus(ch))
    return entropy(b, validate=False) - entropy(e, validate=False)


def _complement_kraus(ch: Channel):
    stacked = np.stack(ch.kraus)
    return [stacked[:, j, :] for j in range(ch.dim_out)]

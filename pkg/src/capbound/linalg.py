"""Dense complex linear algebra helpers shared by all modules.

Everything operates on plain numpy arrays (complex128). Subsystem
conventions: a multipartite operator on H_1 (x) ... (x) H_n is stored as a
(D, D) matrix with D = prod(dims), row/column indices in lexicographic
(big-endian) order, i.e. kron(A_1, ..., A_n) ordering.
"""

from __future__ import annotations

import numpy as np

LOG2 = np.log(2.0)


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def is_hermitian(a: np.ndarray, tol: float = 1e-10) -> bool:
    return bool(np.max(np.abs(a - dagger(a))) <= tol)


def herm(a: np.ndarray) -> np.ndarray:
    """Hermitian part (A + A†)/2; projects away numerical asymmetry."""
    return 0.5 * (a + dagger(a))


def kron_all(mats) -> np.ndarray:
    out = np.array([[1.0 + 0j]])
    for m in mats:
        out = np.kron(out, m)
    return out


def partial_trace(rho: np.ndarray, dims, keep) -> np.ndarray:
    """Trace out all subsystems not in `keep`.

    dims: sequence of subsystem dimensions, keep: sorted indices into dims.
    The kept subsystems stay in their original relative order.
    """
    dims = list(dims)
    n = len(dims)
    keep = sorted(keep)
    traced = [i for i in range(n) if i not in keep]
    t = rho.reshape(dims + dims)
    m = n
    # trace from the highest index so lower subsystem axes keep their positions
    for i in reversed(traced):
        t = np.trace(t, axis1=i, axis2=i + m)
        m -= 1
    d_keep = int(np.prod([dims[i] for i in keep])) if keep else 1
    return t.reshape(d_keep, d_keep)


def embed_on_subsystems(op: np.ndarray, dims, keep) -> np.ndarray:
    """Adjoint of partial_trace: place `op` on subsystems `keep`, identity
    elsewhere, then permute back to the canonical subsystem order."""
    dims = list(dims)
    n = len(dims)
    keep = sorted(keep)
    rest = [i for i in range(n) if i not in keep]
    d_rest = int(np.prod([dims[i] for i in rest])) if rest else 1
    big = np.kron(op, np.eye(d_rest))
    # big lives on the order keep + rest; permute to 0..n-1
    order = keep + rest
    perm = [order.index(i) for i in range(n)]
    return permute_subsystems(big, [dims[i] for i in order], perm)


def permute_subsystems(rho: np.ndarray, dims, perm) -> np.ndarray:
    """Reorder subsystems: output subsystem i is input subsystem perm[i]."""
    dims = list(dims)
    n = len(dims)
    t = rho.reshape(dims + dims)
    axes = list(perm) + [p + n for p in perm]
    t = np.transpose(t, axes)
    d = int(np.prod(dims))
    return t.reshape(d, d)


def partial_transpose(rho: np.ndarray, dims, sys: int) -> np.ndarray:
    """Transpose subsystem `sys` of a bipartite/multipartite operator."""
    dims = list(dims)
    n = len(dims)
    t = rho.reshape(dims + dims)
    t = np.swapaxes(t, sys, sys + n)
    d = int(np.prod(dims))
    return t.reshape(d, d)


def eigh_clipped(rho: np.ndarray, floor: float = 0.0):
    vals, vecs = np.linalg.eigh(herm(rho))
    if floor:
        vals = np.clip(vals, floor, None)
    return vals, vecs


def matrix_fn(a: np.ndarray, fn) -> np.ndarray:
    vals, vecs = np.linalg.eigh(herm(a))
    return (vecs * fn(vals)) @ dagger(vecs)


def psd_sqrt(a: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(herm(a))
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ dagger(vecs)


def safe_log2(vals: np.ndarray, floor: float = 1e-18) -> np.ndarray:
    return np.log2(np.clip(vals, floor, None))


def log2m(a: np.ndarray, floor: float = 1e-18) -> np.ndarray:
    """Matrix log base 2 with eigenvalue floor (keeps gradients finite)."""
    vals, vecs = np.linalg.eigh(herm(a))
    return (vecs * safe_log2(vals, floor)) @ dagger(vecs)


def trace_fn_grad(sigma: np.ndarray, rho: np.ndarray, fn, fprime) -> np.ndarray:
    """Gradient of sigma -> Tr[rho * fn(sigma)] for Hermitian sigma.

    Uses the eigendecomposition (divided differences / Daleckii-Krein)
    formula: grad = U (D ∘ U† rho U) U† with D_ij the divided difference of
    fn at the eigenvalues.
    """
    vals, vecs = np.linalg.eigh(herm(sigma))
    f = fn(vals)
    fp = fprime(vals)
    dl = vals[:, None] - vals[None, :]
    df = f[:, None] - f[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        dd = np.where(np.abs(dl) > 1e-12, df / np.where(dl == 0, 1.0, dl), 0.0)
    # near-degenerate pairs get the mean derivative instead
    mask = np.abs(dl) <= 1e-12
    fpavg = 0.5 * (fp[:, None] + fp[None, :])
    dd = np.where(mask, fpavg, dd)
    inner = dagger(vecs) @ rho @ vecs
    return herm(vecs @ (dd * inner) @ dagger(vecs))


def random_complex_matrix(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_density(rng: np.random.Generator, dim: int, rank: int | None = None) -> np.ndarray:
    r = rank or dim
    g = random_complex_matrix(rng, dim, r)
    rho = g @ dagger(g)
    return rho / np.trace(rho).real


def random_pure(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = random_complex_matrix(rng, dim, 1)[:, 0]
    return v / np.linalg.norm(v)


def random_isometry(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    """Haar-ish isometry via QR of a Gaussian matrix; rows >= cols."""
    if rows < cols:
        raise ValueError("isometry needs rows >= cols")
    g = random_complex_matrix(rng, rows, cols)
    q, r = np.linalg.qr(g)
    # fix phases for determinism across LAPACK variants
    ph = np.diag(r).copy()
    ph = ph / np.abs(ph)
    return q * ph.conj()

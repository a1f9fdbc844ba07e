"""Dense complex linear-algebra kernel.

Everything downstream (seminorms, numerical radii, orthogonality decisions)
reduces to Hermitian eigenproblems of small dense complex matrices.  This
module owns that reduction: a cyclic complex Jacobi eigensolver (single and
batched), an SVD built on it, the Moore-Penrose pseudoinverse, the PSD square
root, and tolerance-aware rank.  No LAPACK decompositions are used; numpy is
array plumbing only.

Sizes are desk scale (n up to ~128); Jacobi is simple, accurate there, and
gives orthonormal vectors for free.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimMismatch, NoConvergence, NotHermitian, NotPSD

DEFAULT_TOL = 1e-9
DEFAULT_RANK_TOL = 1e-10

_SWEEP_CAP = 100
_OFF_TOL = 1e-13  # converged when off-diagonal Frobenius mass < _OFF_TOL * ||H||_F


def as_cmatrix(m, name: str = "matrix") -> np.ndarray:
    """Coerce to a 2-d complex128 array, rejecting NaN/Inf entries."""
    arr = np.array(m, dtype=np.complex128, copy=True)
    if arr.ndim != 2:
        raise DimMismatch(f"{name}: expected a 2-d array, got ndim={arr.ndim}")
    if not (np.isfinite(arr.real).all() and np.isfinite(arr.imag).all()):
        raise ValueError(f"{name}: entries must all be finite")
    return arr


def fro(m: np.ndarray) -> float:
    return float(np.sqrt(np.sum(np.abs(m) ** 2)))


def hermitian_part(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.conj().T)


@dataclass(frozen=True)
class EigDecomp:
    """Hermitian eigendecomposition, eigenvalues descending, columns orthonormal."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


@dataclass(frozen=True)
class Svd:
    """Thin SVD M = U diag(s) V*, singular values descending and nonnegative."""

    u: np.ndarray
    s: np.ndarray
    v: np.ndarray


# ---------------------------------------------------------------------------
# cyclic complex Jacobi, batched over a leading stack axis
# ---------------------------------------------------------------------------

def _off_fro(H):
    """Frobenius mass of the off-diagonal part, free of cancellation."""
    a2 = np.abs(H) ** 2
    n = H.shape[-1]
    a2[:, np.arange(n), np.arange(n)] = 0.0
    return np.sqrt(np.sum(a2, axis=(1, 2)))


def _jacobi_sweeps(H, V, thresh):
    """Run cyclic Jacobi sweeps in place on stack H (and accumulate into V).

    H: (B, n, n) complex, assumed Hermitian.  thresh: (B,) absolute
    off-diagonal convergence thresholds.  Returns True on convergence.
    """
    B, n, _ = H.shape
    idx = np.arange(B)
    for _ in range(_SWEEP_CAP):
        if np.all(_off_fro(H) <= thresh):
            return True
        for p in range(n - 1):
            for q in range(p + 1, n):
                beta = H[:, p, q]
                ab = np.abs(beta)
                act = ab > 1e-3 * thresh / max(n, 1)
                if not act.any():
                    continue
                safe = np.where(ab > 0, ab, 1.0)
                eiphi = np.where(ab > 0, beta / safe, 1.0 + 0.0j)
                app = H[:, p, p].real
                aqq = H[:, q, q].real
                tau = (aqq - app) / (2.0 * safe)
                t = np.where(
                    tau == 0.0,
                    1.0,
                    np.sign(tau) / (np.abs(tau) + np.sqrt(1.0 + tau * tau)),
                )
                t = np.where(act, t, 0.0)
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # Unitary U = diag(1, conj(eiphi)) @ [[c, s], [-s, c]] zeroes H_pq.
                u11 = c.astype(np.complex128)
                u12 = s.astype(np.complex128)
                u21 = -s * np.conj(eiphi)
                u22 = c * np.conj(eiphi)
                colp = H[:, :, p].copy()
                colq = H[:, :, q].copy()
                H[:, :, p] = colp * u11[:, None] + colq * u21[:, None]
                H[:, :, q] = colp * u12[:, None] + colq * u22[:, None]
                rowp = H[:, p, :].copy()
                rowq = H[:, q, :].copy()
                H[:, p, :] = np.conj(u11)[:, None] * rowp + np.conj(u21)[:, None] * rowq
                H[:, q, :] = np.conj(u12)[:, None] * rowp + np.conj(u22)[:, None] * rowq
                # exact zeros on the annihilated pair keep sweeps tidy
                H[idx[act], p, q] = 0.0
                H[idx[act], q, p] = 0.0
                if V is not None:
                    vp = V[:, :, p].copy()
                    vq = V[:, :, q].copy()
                    V[:, :, p] = vp * u11[:, None] + vq * u21[:, None]
                    V[:, :, q] = vp * u12[:, None] + vq * u22[:, None]
    return bool(np.all(_off_fro(H) <= thresh))


def eigvalsh_stack(Hs: np.ndarray) -> np.ndarray:
    """Eigenvalues (descending) of a stack of Hermitian matrices, values only."""
    H = np.array(Hs, dtype=np.complex128, copy=True)
    if H.ndim != 3 or H.shape[1] != H.shape[2]:
        raise DimMismatch("expected a (B, n, n) stack")
    B, n, _ = H.shape
    if n == 1:
        return H[:, 0, 0].real.reshape(B, 1)
    H = 0.5 * (H + np.conj(np.swapaxes(H, 1, 2)))
    scale = np.sqrt(np.sum(np.abs(H) ** 2, axis=(1, 2)))
    ok = _jacobi_sweeps(H, None, _OFF_TOL * np.maximum(scale, 1e-300))
    if not ok:
        raise NoConvergence("batched Jacobi exceeded %d sweeps" % _SWEEP_CAP)
    w = np.einsum("bii->bi", H).real.copy()
    w.sort(axis=1)
    return w[:, ::-1]


def lam_max_stack(Hs: np.ndarray) -> np.ndarray:
    """Largest eigenvalue of each Hermitian matrix in a stack.

    Closed forms for n = 1, 2; batched Jacobi otherwise.
    """
    H = np.asarray(Hs, dtype=np.complex128)
    n = H.shape[-1]
    if n == 1:
        return H[:, 0, 0].real.copy()
    if n == 2:
        a = H[:, 0, 0].real
        d = H[:, 1, 1].real
        b = 0.5 * (H[:, 0, 1] + np.conj(H[:, 1, 0]))
        return 0.5 * (a + d) + np.sqrt(0.25 * (a - d) ** 2 + np.abs(b) ** 2)
    return eigvalsh_stack(H)[:, 0]


def lam_min_stack(Hs: np.ndarray) -> np.ndarray:
    return -lam_max_stack(-np.asarray(Hs, dtype=np.complex128))


def sigma_max_stack(Ms: np.ndarray) -> np.ndarray:
    """Largest singular value of each matrix in a stack, via the Gram matrix."""
    M = np.asarray(Ms, dtype=np.complex128)
    grams = np.einsum("bji,bjk->bik", np.conj(M), M)
    return np.sqrt(np.maximum(lam_max_stack(grams), 0.0))


# ---------------------------------------------------------------------------
# public single-matrix operations
# ---------------------------------------------------------------------------

def herm_eig(H, tol: float = DEFAULT_TOL) -> EigDecomp:
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi.

    Raises NotHermitian when ||H - H*||_F > tol * ||H||_F, NoConvergence past
    the sweep cap.  Eigenvalues are returned descending with matching
    orthonormal eigenvector columns.
    """
    H = as_cmatrix(H, "H")
    n, m = H.shape
    if n != m:
        raise DimMismatch("herm_eig requires a square matrix")
    nh = fro(H)
    if fro(H - H.conj().T) > tol * max(nh, 1.0):
        raise NotHermitian("matrix is not Hermitian within tolerance")
    Hs = hermitian_part(H)[None, :, :].copy()
    V = np.eye(n, dtype=np.complex128)[None, :, :].copy()
    if n > 1:
        ok = _jacobi_sweeps(Hs, V, np.array([_OFF_TOL * max(nh, 1e-300)]))
        if not ok:
            raise NoConvergence("Jacobi exceeded %d sweeps" % _SWEEP_CAP)
    w = np.einsum("bii->bi", Hs).real[0]
    order = np.argsort(w)[::-1]
    return EigDecomp(eigenvalues=w[order].copy(), eigenvectors=V[0][:, order].copy())


def _orthonormal_completion(Q: np.ndarray, total: int) -> np.ndarray:
    """Extend orthonormal columns Q (d x j) to d x total, deterministically."""
    d, j = Q.shape
    cols = [Q[:, i] for i in range(j)]
    for i in range(d):
        if len(cols) >= total:
            break
        e = np.zeros(d, dtype=np.complex128)
        e[i] = 1.0
        for _ in range(2):  # twice-is-enough re-orthogonalization
            for c in cols:
                e = e - c * np.vdot(c, e)
        nrm = np.linalg.norm(e)
        if nrm > 0.5:
            cols.append(e / nrm)
    if len(cols) < total:
        # pathological cancellation: brute-force over remaining basis vectors
        for i in range(d):
            if len(cols) >= total:
                break
            e = np.zeros(d, dtype=np.complex128)
            e[i] = 1.0
            for _ in range(2):
                for c in cols:
                    e = e - c * np.vdot(c, e)
            nrm = np.linalg.norm(e)
            if nrm > 1e-8:
                cols.append(e / nrm)
    return np.stack(cols[:total], axis=1)


def svd(M, tol: float = DEFAULT_TOL) -> Svd:
    """SVD via herm_eig of the (smaller-side) Gram matrix plus column recovery.

    Singular values are re-evaluated as ||M v_i|| (the Gram square root alone
    only resolves them to sqrt(eps) * s_max).  Recovered singular-vector
    columns are re-orthonormalized; directions for (near-)zero singular values
    come from a deterministic orthonormal completion, not a pseudo-inverse.
    """
    M = as_cmatrix(M, "M")
    m, n = M.shape
    k = min(m, n)
    if m >= n:
        V = herm_eig(M.conj().T @ M, tol).eigenvectors
        s = np.linalg.norm(M @ V, axis=0)
        order = np.argsort(s)[::-1]
        s, V = s[order], V[:, order]
        U = _recover_side(M, V, s)
        return Svd(u=U[:, :k], s=s[:k], v=V[:, :k])
    U = herm_eig(M @ M.conj().T, tol).eigenvectors
    s = np.linalg.norm(M.conj().T @ U, axis=0)
    order = np.argsort(s)[::-1]
    s, U = s[order], U[:, order]
    V = _recover_side(M.conj().T, U, s)
    return Svd(u=U[:, :k], s=s[:k], v=V[:, :k])


def _recover_side(M: np.ndarray, V: np.ndarray, s: np.ndarray) -> np.ndarray:
    """Columns u_i = M v_i / s_i with Gram-Schmidt cleanup and null completion."""
    m = M.shape[0]
    smax = s[0] if s.size else 0.0
    cut = max(smax, 1.0) * 1e-13
    cols = []
    for i in range(min(V.shape[1], m)):
        if s[i] > cut:
            u = M @ V[:, i] / s[i]
            for c in cols:
                u = u - c * np.vdot(c, u)
            nrm = np.linalg.norm(u)
            if nrm > 0.1:
                cols.append(u / nrm)
                continue
        break
    Q = np.stack(cols, axis=1) if cols else np.zeros((m, 0), dtype=np.complex128)
    return _orthonormal_completion(Q, m)


def pinv(M, rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Moore-Penrose pseudoinverse; singular values below rank_tol * s_max drop."""
    M = as_cmatrix(M, "M")
    d = svd(M)
    s = d.s
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((M.shape[1], M.shape[0]), dtype=np.complex128)
    inv = np.where(s > rank_tol * s[0], 1.0 / np.where(s > 0, s, 1.0), 0.0)
    return (d.v * inv[None, :]) @ d.u.conj().T


def psd_sqrt(P, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Hermitian PSD square root.  Negative dust within -tol * ||P|| clamps to 0."""
    P = as_cmatrix(P, "P")
    if P.shape[0] != P.shape[1]:
        raise DimMismatch("psd_sqrt requires a square matrix")
    eig = herm_eig(P, tol)
    w = eig.eigenvalues
    bound = tol * max(np.abs(w).max() if w.size else 0.0, 0.0)
    if w.size and w.min() < -bound:
        raise NotPSD(f"eigenvalue {w.min():.3e} below -tol*||P|| = {-bound:.3e}")
    w = np.maximum(w, 0.0)
    V = eig.eigenvectors
    return (V * np.sqrt(w)[None, :]) @ V.conj().T


def rank_of(M, rank_tol: float = DEFAULT_RANK_TOL) -> int:
    """Number of singular values above rank_tol * s_max (0 for the zero matrix)."""
    M = as_cmatrix(M, "M")
    s = svd(M).s
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > rank_tol * s[0]))

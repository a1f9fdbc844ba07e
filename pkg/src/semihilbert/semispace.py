"""Semi-inner-product structure induced by a positive semidefinite weight A.

The weight induces <x, y>_A = <A x, y> (linear in the first argument,
conjugate-linear in the second) and the seminorm ||x||_A = sqrt(<x, x>_A),
which vanishes on ker(A).  An AContext packages A together with its square
root, the pseudoinverse of the root, the orthogonal projector onto range(A),
and the tolerance policy; every downstream computation routes through it.

Operator-class membership (bounded / adjointable / positive relative to A) is
decided by exact algebraic conditions on kernel invariance and range
inclusion; the ratio-sup definitions survive only as test oracles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import densela as dl
from .errors import (
    DimMismatch,
    NotAdjointable,
    NotHermitian,
    NotPSD,
    ZeroA,
)


@dataclass(frozen=True)
class AContext:
    """Validated weight matrix with precomputed transform machinery.

    Immutable after construction; all fields are plain arrays so instances are
    safe to share across threads.
    """

    dim: int
    a: np.ndarray
    a_half: np.ndarray
    a_half_pinv: np.ndarray
    p_a: np.ndarray
    range_basis: np.ndarray
    rank: int
    rank_tol: float
    tol: float


@dataclass(frozen=True)
class OperatorClass:
    a_bounded: bool
    a_adjointable: bool
    a_positive: bool


def make_context(
    A,
    rank_tol: float = dl.DEFAULT_RANK_TOL,
    tol: float = dl.DEFAULT_TOL,
) -> AContext:
    """Validate A (Hermitian, PSD up to clamped dust, nonzero) and precompute.

    Eigenvalues of A in [-rank_tol * ||A||, 0) are clamped to zero; anything
    more negative raises NotPSD.  Eigenvalues above rank_tol * lam_max count
    toward the rank and the range basis.
    """
    A = dl.as_cmatrix(A, "A")
    n, m = A.shape
    if n != m:
        raise DimMismatch("A must be square")
    if dl.fro(A - A.conj().T) > tol * max(dl.fro(A), 1e-300):
        raise NotHermitian("A is not Hermitian within tolerance")
    eig = dl.herm_eig(dl.hermitian_part(A), tol)
    w = eig.eigenvalues
    lam_max = float(w[0]) if w.size else 0.0
    if lam_max <= 0.0:
        raise ZeroA("A must be a nonzero positive matrix")
    if float(w[-1]) < -rank_tol * lam_max:
        raise NotPSD(
            f"A has eigenvalue {w[-1]:.3e} below the clamp band "
            f"{-rank_tol * lam_max:.3e}"
        )
    w = np.maximum(w, 0.0)
    keep = w > rank_tol * lam_max
    rank = int(np.sum(keep))
    if rank == 0:
        raise ZeroA("A is numerically zero at this rank tolerance")
    V = eig.eigenvectors
    vr = V[:, keep]
    sq = np.sqrt(w[keep])
    a_half = (vr * sq[None, :]) @ vr.conj().T
    a_half_pinv = (vr / sq[None, :]) @ vr.conj().T
    p_a = vr @ vr.conj().T
    return AContext(
        dim=n,
        a=A,
        a_half=a_half,
        a_half_pinv=a_half_pinv,
        p_a=p_a,
        range_basis=vr,
        rank=rank,
        rank_tol=rank_tol,
        tol=tol,
    )


def _check_vec(ctx: AContext, x, name: str) -> np.ndarray:
    v = np.asarray(x, dtype=np.complex128).reshape(-1)
    if v.shape[0] != ctx.dim:
        raise DimMismatch(f"{name}: expected length {ctx.dim}, got {v.shape[0]}")
    return v


def _check_op(ctx: AContext, T, name: str = "T") -> np.ndarray:
    M = dl.as_cmatrix(T, name)
    if M.shape != (ctx.dim, ctx.dim):
        raise DimMismatch(f"{name}: expected shape {(ctx.dim, ctx.dim)}, got {M.shape}")
    return M


def inner_a(ctx: AContext, x, y) -> complex:
    """<x, y>_A = <A x, y>, linear in x and conjugate-linear in y."""
    xv = _check_vec(ctx, x, "x")
    yv = _check_vec(ctx, y, "y")
    return complex(np.vdot(yv, ctx.a @ xv))


def seminorm_vec(ctx: AContext, x) -> float:
    """||x||_A = ||A^{1/2} x||_2 (zero exactly on directions A kills)."""
    xv = _check_vec(ctx, x, "x")
    return float(np.linalg.norm(ctx.a_half @ xv))


def classify(ctx: AContext, T) -> OperatorClass:
    """Membership flags for T relative to A.

    bounded:     A^{1/2} T (I - P_A) = 0   (kernel directions stay killed)
    adjointable: (I - P_A) T* A = 0        (range(T* A) inside range(A))
    positive:    A T Hermitian PSD within tolerance

    The implications positive => adjointable => bounded are enforced on the
    flags so tolerance dust cannot produce an inconsistent record.
    """
    T = _check_op(ctx, T)
    n = ctx.dim
    eye = np.eye(n)
    at = ctx.a_half @ T
    bounded = dl.fro(at @ (eye - ctx.p_a)) <= ctx.tol * (1.0 + dl.fro(at))
    ta = T.conj().T @ ctx.a
    adjointable = dl.fro((eye - ctx.p_a) @ ta) <= ctx.tol * (1.0 + dl.fro(ta))
    prod = ctx.a @ T
    scale = 1.0 + dl.fro(prod)
    positive = False
    if dl.fro(prod - prod.conj().T) <= ctx.tol * scale:
        w = dl.herm_eig(dl.hermitian_part(prod), ctx.tol).eigenvalues
        positive = bool(w[-1] >= -ctx.tol * scale)
    adjointable = adjointable or positive
    bounded = bounded or adjointable
    return OperatorClass(
        a_bounded=bool(bounded),
        a_adjointable=bool(adjointable),
        a_positive=bool(positive),
    )


def sharp_adjoint(ctx: AContext, T) -> np.ndarray:
    """Reduced solution of A X = T* A: the closed form A^+ T* A.

    Douglas' factorization guarantees a unique solution with range inside
    range(A); both defining properties are verified post hoc here rather than
    assumed.
    """
    T = _check_op(ctx, T)
    if not classify(ctx, T).a_adjointable:
        raise NotAdjointable("range(T* A) is not contained in range(A)")
    a_pinv = ctx.a_half_pinv @ ctx.a_half_pinv
    X = a_pinv @ T.conj().T @ ctx.a
    scale = 1.0 + dl.fro(T.conj().T @ ctx.a)
    resid = dl.fro(ctx.a @ X - T.conj().T @ ctx.a)
    if resid > 100.0 * ctx.tol * scale:
        raise NotAdjointable(f"adjoint residual {resid:.3e} exceeds tolerance")
    return X


def project_pa(ctx: AContext, T) -> np.ndarray:
    """Left-multiply by the orthogonal projector onto range(A)."""
    T = _check_op(ctx, T)
    return ctx.p_a @ T

"""Operator gauges relative to A: seminorm, numerical radius, attainment.

The central device is the half-transform M = A^{1/2} T (A^{1/2})^+.  For
A-bounded T it turns both gauges into ordinary matrix quantities on range(A):

    ||T||_A   = sigma_max(M)
    omega_A(T) = max_theta lam_max(Re(e^{-i theta} C)),  C = V* M V,

with V an orthonormal basis of range(A) and Re(X) = (X + X*)/2.  The angle
scan runs on a uniform grid and is tightened by golden-section refinement of
every grid cell that the Lipschitz bound (constant ||C||_2) cannot exclude,
so the reported maximum is a genuine global one up to the refinement width.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import densela as dl
from .errors import NotABounded, ZeroSeminorm
from .semispace import AContext, OperatorClass, _check_op, classify

THETA_GRID = 1024
CLUSTER_TOL = 1e-8
_REFINE_WIDTH = 1e-12


@dataclass(frozen=True)
class TildeOp:
    """Half-transform of an A-bounded operator, supported on range(A)."""

    m: np.ndarray
    domain_basis: np.ndarray


@dataclass(frozen=True)
class GaugeReport:
    """||T||_A, omega_A(T), attainment data and classification for one operator."""

    op_seminorm: float
    num_radius: float
    attain_basis: np.ndarray
    radius_argmax: np.ndarray
    op_class: OperatorClass


def tilde(ctx: AContext, T) -> TildeOp:
    """Half-transform M = A^{1/2} T (A^{1/2})^+; requires an A-bounded operator."""
    T = _check_op(ctx, T)
    if not classify(ctx, T).a_bounded:
        raise NotABounded("operator has no finite A-seminorm")
    m = ctx.a_half @ T @ ctx.a_half_pinv
    return TildeOp(m=m, domain_basis=ctx.range_basis)


def _zero_gauge_threshold(ctx: AContext, T: np.ndarray) -> float:
    """Absolute level below which a transformed gauge counts as zero.

    Scaled by the roundoff amplification of forming A^{1/2} T (A^{1/2})^+,
    so operators supported in ker(A) register as A-zero despite eigensolver
    dust in the factors.
    """
    amp = dl.fro(ctx.a_half) * dl.fro(ctx.a_half_pinv)
    return ctx.rank_tol * max(1.0, amp * dl.fro(T))


def op_seminorm(ctx: AContext, T) -> float:
    """||T||_A = sup ||Tx||_A over A-unit x = sigma_max of the half-transform."""
    top = tilde(ctx, T)
    return float(dl.svd(top.m).s[0])


# ---------------------------------------------------------------------------
# angle scans of theta -> lam_max(Re(e^{-i theta} C))
# ---------------------------------------------------------------------------

def rotated_hermitian_stack(C: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    """Stack of Hermitian parts Re(e^{-i theta} C) over the given angles."""
    ph = np.exp(-1j * thetas)
    return 0.5 * (ph[:, None, None] * C[None, :, :]
                  + np.conj(ph)[:, None, None] * C.conj().T[None, :, :])


def support_values(C: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    """h(theta) = lam_max(Re(e^{-i theta} C)) on a batch of angles."""
    return dl.lam_max_stack(rotated_hermitian_stack(C, thetas))


def _lam_max_at(C: np.ndarray, theta: float) -> float:
    H = 0.5 * (np.exp(-1j * theta) * C + np.exp(1j * theta) * C.conj().T)
    return float(dl.lam_max_stack(H[None, :, :])[0])


def _golden_max(f, a: float, b: float, width: float = _REFINE_WIDTH):
    gr = 0.5 * (np.sqrt(5.0) - 1.0)
    c = b - gr * (b - a)
    d = a + gr * (b - a)
    fc, fd = f(c), f(d)
    while b - a > width:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - gr * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + gr * (b - a)
            fd = f(d)
    if fc >= fd:
        return fc, c
    return fd, d


def _candidate_cells(values: np.ndarray, slack: float, cap: int = 64) -> np.ndarray:
    """Grid indices whose cells could still contain the global maximum."""
    best = values.max()
    idx = np.flatnonzero(values >= best - slack)
    if idx.size > cap:
        stride = int(np.ceil(idx.size / cap))
        idx = idx[::stride]
    return idx

def _spectral_bound(C: np.ndarray) -> float:
    """2-norm of C: Lipschitz constant of theta -> lam_max(Re(e^{-i theta} C))."""
    return float(dl.sigma_max_stack(C[None, :, :])[0])


def max_support_scan(C: np.ndarray, n_grid: int = THETA_GRID):
    """Global maximum of h(theta) over [0, 2pi): returns (value, theta*).

    Grid scan, Lipschitz pruning, then golden refinement of each surviving
    cell (per-cell brackets of width 2 * grid step).
    """
    k = C.shape[0]
    if k == 1:
        c = complex(C[0, 0])
        return abs(c), float(np.angle(c) % (2.0 * np.pi))
    thetas = 2.0 * np.pi * np.arange(n_grid) / n_grid
    vals = support_values(C, thetas)
    lip = _spectral_bound(C)
    dth = 2.0 * np.pi / n_grid
    best_val = float(vals.max())
    best_th = float(thetas[int(vals.argmax())])
    for i in _candidate_cells(vals, 2.0 * lip * dth):
        v, t = _golden_max(lambda t: _lam_max_at(C, t),
                           thetas[i] - dth, thetas[i] + dth)
        if v > best_val:
            best_val, best_th = v, t % (2.0 * np.pi)
    return best_val, best_th


def min_support_scan(C: np.ndarray, n_grid: int = THETA_GRID):
    """Global minimum of h(theta) over [0, 2pi): returns (value, theta*)."""
    k = C.shape[0]
    if k == 1:
        c = complex(C[0, 0])
        return -abs(c), float((np.angle(c) + np.pi) % (2.0 * np.pi))
    thetas = 2.0 * np.pi * np.arange(n_grid) / n_grid
    vals = support_values(C, thetas)
    lip = _spectral_bound(C)
    dth = 2.0 * np.pi / n_grid
    best_val = float(vals.min())
    best_th = float(thetas[int(vals.argmin())])
    for i in _candidate_cells(-vals, 2.0 * lip * dth):
        v, t = _golden_max(lambda t: -_lam_max_at(C, t),
                           thetas[i] - dth, thetas[i] + dth)
        if -v < best_val:
            best_val, best_th = -v, t % (2.0 * np.pi)
    return best_val, best_th


# ---------------------------------------------------------------------------
# numerical radius and attainment
# ---------------------------------------------------------------------------

def _range_compression(ctx: AContext, m: np.ndarray) -> np.ndarray:
    V = ctx.range_basis
    return V.conj().T @ m @ V


def _num_radius_full(C: np.ndarray, n_grid: int = THETA_GRID):
    """(omega, theta*, top eigenvector u at theta*) for the compressed matrix."""
    k = C.shape[0]
    if k == 1:
        c = complex(C[0, 0])
        return abs(c), float(np.angle(c) % (2.0 * np.pi)), np.ones(1, dtype=complex)
    val, th = max_support_scan(C, n_grid)
    H = 0.5 * (np.exp(-1j * th) * C + np.exp(1j * th) * C.conj().T)
    eig = dl.herm_eig(H)
    return val, th, eig.eigenvectors[:, 0]


def num_radius(ctx: AContext, T) -> float:
    """omega_A(T) = sup |<Tx, x>_A| over A-unit x, via the compressed scan."""
    top = tilde(ctx, T)
    C = _range_compression(ctx, top.m)
    return _num_radius_full(C)[0]


def attain_basis(ctx: AContext, T, cluster_tol: float = CLUSTER_TOL) -> np.ndarray:
    """Orthonormal basis (inside range(A)) of the seminorm-attaining directions.

    Columns span the right-singular subspace of the half-transform for
    singular values within (1 - cluster_tol) of sigma_max; near-ties widen the
    subspace rather than pick a single vector.
    """
    top = tilde(ctx, T)
    d = dl.svd(top.m)
    smax = float(d.s[0]) if d.s.size else 0.0
    if smax <= _zero_gauge_threshold(ctx, T):
        raise ZeroSeminorm("operator has zero A-seminorm; no attaining directions")
    keep = d.s >= (1.0 - cluster_tol) * smax
    V = d.v[:, keep]
    # dust cleanup: the attaining subspace lives inside range(A)
    V = ctx.p_a @ V
    q = []
    for j in range(V.shape[1]):
        col = V[:, j]
        for c in q:
            col = col - c * np.vdot(c, col)
        nrm = np.linalg.norm(col)
        if nrm > 1e-8:
            q.append(col / nrm)
    return np.stack(q, axis=1)


def gauge_report(ctx: AContext, T) -> GaugeReport:
    """Aggregate gauges for one operator (seminorm, radius, attainment, class)."""
    T = _check_op(ctx, T)
    oc = classify(ctx, T)
    if not oc.a_bounded:
        raise NotABounded("operator has no finite A-seminorm")
    top = tilde(ctx, T)
    norm = float(dl.svd(top.m).s[0])
    C = _range_compression(ctx, top.m)
    omega, _, u = _num_radius_full(C)
    argmax = ctx.range_basis @ u
    if norm <= _zero_gauge_threshold(ctx, T):
        basis = np.zeros((ctx.dim, 0), dtype=complex)
    else:
        basis = attain_basis(ctx, T)
    return GaugeReport(
        op_seminorm=norm,
        num_radius=float(omega),
        attain_basis=basis,
        radius_argmax=argmax,
        op_class=oc,
    )


# ---------------------------------------------------------------------------
# attainment cells of the numerical radius
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OmegaCell:
    """One angle at which omega is attained, with its eigenvector cluster.

    Every unit vector of the cluster attains |<Cy, y>| = omega with value
    omega * e^{i theta} up to the recorded dust level.
    """

    theta: float
    basis: np.ndarray
    dust: float


def omega_attaining_cells(
    C: np.ndarray,
    cluster_tol: float = CLUSTER_TOL,
    n_grid: int = THETA_GRID,
):
    """(omega, cells) where cells cover all angles attaining the radius.

    Within each cell the top-eigenvalue cluster of Re(e^{-i theta*} C) is an
    attaining subspace: on it the rotated imaginary part must vanish (else
    some unit vector would beat omega), so every unit cluster vector attains.
    The dust field bounds |<Cy,y> - omega e^{i theta*}| for unit cluster y.
    """
    k = C.shape[0]
    if k == 1:
        c = complex(C[0, 0])
        th = float(np.angle(c) % (2.0 * np.pi))
        return abs(c), [OmegaCell(theta=th, basis=np.ones((1, 1), dtype=complex),
                                  dust=0.0)]
    omega, _ = max_support_scan(C, n_grid)
    if omega <= 0.0:
        # numerical range degenerate at the origin
        return max(omega, 0.0), [OmegaCell(theta=0.0,
                                           basis=np.eye(k, dtype=complex), dust=0.0)]
    thetas = 2.0 * np.pi * np.arange(n_grid) / n_grid
    vals = support_values(C, thetas)
    dth = 2.0 * np.pi / n_grid
    near = np.flatnonzero(vals >= omega - max(2.0 * dl.fro(C) * dth,
                                              cluster_tol * omega))
    # merge contiguous runs (with wraparound) and refine one angle per run
    runs = []
    if near.size:
        gaps = np.flatnonzero(np.diff(near) > 1)
        pieces = np.split(near, gaps + 1)
        if len(pieces) > 1 and pieces[0][0] == 0 and pieces[-1][-1] == n_grid - 1:
            pieces[0] = np.concatenate([pieces[-1] - n_grid, pieces[0]])
            pieces.pop()
        runs = pieces
    cells = []
    for run in runs:
        lo = thetas[run[0] % n_grid] - dth if run[0] < 0 else thetas[run[0]] - dth
        hi = lo + dth * (run[-1] - run[0] + 2)
        v, th = _golden_max(lambda t: _lam_max_at(C, t), lo, hi)
        if v < omega * (1.0 - cluster_tol) - 1e-15:
            continue
        H = 0.5 * (np.exp(-1j * th) * C + np.exp(1j * th) * C.conj().T)
        eig = dl.herm_eig(H)
        w = eig.eigenvalues
        cluster = w >= w[0] - cluster_tol * max(abs(w[0]), 1e-300)
        Q = eig.eigenvectors[:, cluster]
        spread = float(w[0] - w[cluster].min()) + 1e-15 * max(omega, 1.0)
        rel = spread / max(omega, 1e-300)
        dust = (rel + np.sqrt(2.0 * rel)) * omega
        cells.append(OmegaCell(theta=float(th % (2.0 * np.pi)), basis=Q,
                               dust=float(dust)))
    if not cells:
        # fall back to the single refined maximizer
        val, th = max_support_scan(C, n_grid)
        H = 0.5 * (np.exp(-1j * th) * C + np.exp(1j * th) * C.conj().T)
        eig = dl.herm_eig(H)
        cells = [OmegaCell(theta=float(th), basis=eig.eigenvectors[:, :1],
                           dust=1e-14 * max(omega, 1.0))]
    return omega, cells

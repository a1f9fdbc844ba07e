import numpy as np
import pytest

from semihilbert import densela as dl
from semihilbert.errors import NoConvergence, NotHermitian, NotPSD


def rand_complex(rng, *shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def rand_hermitian(rng, n):
    A = rand_complex(rng, n, n)
    return 0.5 * (A + A.conj().T)


# --- independent oracle: characteristic-polynomial root finding -------------

def _det(M):
    """Determinant by Gaussian elimination with partial pivoting (self-contained)."""
    A = np.array(M, dtype=np.complex128)
    n = A.shape[0]
    det = 1.0 + 0.0j
    for k in range(n):
        piv = k + int(np.argmax(np.abs(A[k:, k])))
        if abs(A[piv, k]) == 0.0:
            return 0.0 + 0.0j
        if piv != k:
            A[[k, piv]] = A[[piv, k]]
            det = -det
        det *= A[k, k]
        A[k + 1:, k:] = A[k + 1:, k:] - np.outer(A[k + 1:, k] / A[k, k], A[k, k:])
    return det


def charpoly_roots(H, tol=1e-13):
    """All eigenvalues of Hermitian H by bisection on det(H - x I) sign changes,
    scanning the Gershgorin interval.  Assumes distinct eigenvalues."""
    n = H.shape[0]
    radii = np.sum(np.abs(H), axis=1) - np.abs(np.diag(H))
    lo = float(np.min(np.diag(H).real - radii)) - 1e-6
    hi = float(np.max(np.diag(H).real + radii)) + 1e-6
    xs = np.linspace(lo, hi, 4001)
    vals = np.array([_det(H - x * np.eye(n)).real for x in xs])
    roots = []
    for i in range(len(xs) - 1):
        a, b = xs[i], xs[i + 1]
        fa, fb = vals[i], vals[i + 1]
        if fa == 0.0:
            roots.append(a)
            continue
        if fa * fb < 0:
            for _ in range(200):
                m = 0.5 * (a + b)
                fm = _det(H - m * np.eye(n)).real
                if fa * fm <= 0:
                    b, fb = m, fm
                else:
                    a, fa = m, fm
                if b - a < tol * max(1.0, abs(m)):
                    break
            roots.append(0.5 * (a + b))
    return np.array(sorted(roots, reverse=True))


# --- herm_eig ----------------------------------------------------------------

def test_herm_eig_diagonal():
    d = dl.herm_eig(np.diag([3.0, 1.0, 2.0]))
    assert np.allclose(d.eigenvalues, [3.0, 2.0, 1.0])
    # eigenvector columns are a permutation of identity columns
    P = np.abs(d.eigenvectors)
    assert np.allclose(np.sort(P, axis=0)[-1], 1.0)
    assert np.allclose(P.sum(axis=0), 1.0)


def test_herm_eig_symmetry_forced():
    d = dl.herm_eig(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert np.allclose(d.eigenvalues, [1.0, -1.0])
    v0 = d.eigenvectors[:, 0]
    v1 = d.eigenvectors[:, 1]
    assert abs(abs(np.vdot(v0, np.array([1, 1]) / np.sqrt(2))) - 1) < 1e-12
    assert abs(abs(np.vdot(v1, np.array([1, -1]) / np.sqrt(2))) - 1) < 1e-12


def test_herm_eig_matches_charpoly_oracle():
    rng = np.random.default_rng(7)
    H = rand_hermitian(rng, 5)
    d = dl.herm_eig(H)
    expected = charpoly_roots(H)
    assert expected.shape == (5,)
    assert np.abs(d.eigenvalues - expected).max() < 1e-9


@pytest.mark.parametrize("n", [2, 3, 4, 6, 9])
def test_herm_eig_reconstruction_and_orthonormality(n):
    rng = np.random.default_rng(100 + n)
    for _ in range(20):
        H = rand_hermitian(rng, n)
        d = dl.herm_eig(H)
        rec = (d.eigenvectors * d.eigenvalues[None, :]) @ d.eigenvectors.conj().T
        assert dl.fro(rec - H) <= 1e-12 * max(dl.fro(H), 1.0)
        gram = d.eigenvectors.conj().T @ d.eigenvectors
        assert dl.fro(gram - np.eye(n)) < 1e-12
        assert np.all(np.diff(d.eigenvalues) <= 1e-14)


def test_herm_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        dl.herm_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))


# --- svd ----------------------------------------------------------------------

def test_svd_identity_and_diag():
    assert np.allclose(dl.svd(np.eye(3)).s, 1.0)
    d = dl.svd(np.diag([2.0, 0.0]))
    assert np.allclose(d.s, [2.0, 0.0])


def test_svd_gram_oracle_rect():
    rng = np.random.default_rng(11)
    M = rand_complex(rng, 4, 3)
    d = dl.svd(M)
    lam = dl.herm_eig(M.conj().T @ M).eigenvalues
    assert np.abs(np.sort(d.s ** 2) - np.sort(lam)).max() < 1e-9


@pytest.mark.parametrize("shape", [(3, 3), (4, 3), (3, 5), (6, 6), (2, 2)])
def test_svd_reconstruction(shape):
    rng = np.random.default_rng(sum(shape))
    for k in range(15):
        M = rand_complex(rng, *shape)
        if k % 3 == 0:  # exercise rank deficiency
            M[:, 0] = M[:, -1] if shape[1] > 1 else 0.0
        d = dl.svd(M)
        rec = (d.u * d.s[None, :]) @ d.v.conj().T
        assert dl.fro(rec - M) <= 1e-10 * max(dl.fro(M), 1.0)
        ku = d.u.conj().T @ d.u
        kv = d.v.conj().T @ d.v
        assert dl.fro(ku - np.eye(ku.shape[0])) < 1e-11
        assert dl.fro(kv - np.eye(kv.shape[0])) < 1e-11
        assert np.all(d.s >= 0) and np.all(np.diff(d.s) <= 1e-14)


def test_svd_herm_eig_agree_on_psd():
    rng = np.random.default_rng(21)
    B = rand_complex(rng, 4, 4)
    P = B.conj().T @ B
    s = dl.svd(P).s
    lam = dl.herm_eig(P).eigenvalues
    assert np.abs(s - lam).max() < 1e-9 * max(1.0, lam[0])


# --- pinv ----------------------------------------------------------------------

def test_pinv_diag():
    assert np.allclose(dl.pinv(np.diag([2.0, 0.0])), np.diag([0.5, 0.0]))


def test_pinv_invertible():
    rng = np.random.default_rng(31)
    M = rand_complex(rng, 4, 4)
    assert dl.fro(dl.pinv(M) @ M - np.eye(4)) < 1e-10


def test_pinv_rank_one_symbolic():
    # For J = ones(2), the Penrose identities force J^+ = J / 4.
    J = np.ones((2, 2), dtype=complex)
    assert np.allclose(dl.pinv(J), J / 4.0, atol=1e-12)


@pytest.mark.parametrize("shape", [(3, 3), (4, 3), (3, 5)])
def test_pinv_penrose_identities(shape):
    rng = np.random.default_rng(41)
    for k in range(10):
        M = rand_complex(rng, *shape)
        if k % 2 == 0 and shape[1] > 1:
            M[:, 0] = 2.0 * M[:, -1]
        P = dl.pinv(M)
        scale = max(dl.fro(M), 1.0)
        assert dl.fro(M @ P @ M - M) < 1e-9 * scale
        assert dl.fro(P @ M @ P - P) < 1e-9 * max(dl.fro(P), 1.0)
        assert dl.fro(M @ P - (M @ P).conj().T) < 1e-9
        assert dl.fro(P @ M - (P @ M).conj().T) < 1e-9


def test_pinv_involution():
    rng = np.random.default_rng(51)
    for shape in [(3, 3), (4, 3), (2, 5)]:
        M = rand_complex(rng, *shape)
        assert dl.fro(dl.pinv(dl.pinv(M)) - M) < 1e-9 * max(dl.fro(M), 1.0)


# --- psd_sqrt -------------------------------------------------------------------

def test_psd_sqrt_diag_and_identity():
    assert np.allclose(dl.psd_sqrt(np.diag([4.0, 0.0])), np.diag([2.0, 0.0]))
    assert np.allclose(dl.psd_sqrt(np.eye(3)), np.eye(3))


def test_psd_sqrt_squares_back():
    rng = np.random.default_rng(61)
    B = rand_complex(rng, 4, 4)
    P = B.conj().T @ B
    R = dl.psd_sqrt(P)
    assert dl.fro(R @ R - P) < 1e-9 * dl.fro(P)
    assert dl.fro(R - R.conj().T) < 1e-11 * dl.fro(R)


def test_psd_sqrt_congruence_scaling():
    rng = np.random.default_rng(71)
    B = rand_complex(rng, 3, 3)
    P = B.conj().T @ B
    c = 2.75
    assert dl.fro(dl.psd_sqrt(c * c * P) - c * dl.psd_sqrt(P)) < 1e-9 * dl.fro(P)


def test_psd_sqrt_rejects_indefinite():
    with pytest.raises(NotPSD):
        dl.psd_sqrt(np.diag([1.0, -0.5]))


def test_psd_sqrt_clamps_dust():
    R = dl.psd_sqrt(np.diag([1.0, -1e-14]))
    assert np.allclose(R, np.diag([1.0, 0.0]), atol=1e-7)


# --- rank_of --------------------------------------------------------------------

def test_rank_cases():
    assert dl.rank_of(np.zeros((3, 3))) == 0
    assert dl.rank_of(np.diag([1.0, 1.0, 0.0])) == 2
    rng = np.random.default_rng(81)
    u = rand_complex(rng, 4)
    v = rand_complex(rng, 4)
    assert dl.rank_of(np.outer(u, v.conj())) == 1


# --- batched kernels -------------------------------------------------------------

@pytest.mark.parametrize("n", [1, 2, 3, 4, 6])
def test_stack_eigvals_match_single(n):
    rng = np.random.default_rng(90 + n)
    Hs = np.stack([rand_hermitian(rng, n) for _ in range(40)])
    w = dl.eigvalsh_stack(Hs)
    for i in range(Hs.shape[0]):
        ref = dl.herm_eig(Hs[i]).eigenvalues
        assert np.abs(w[i] - ref).max() < 1e-11 * max(1.0, np.abs(ref).max())


def test_lam_and_sigma_stacks():
    rng = np.random.default_rng(97)
    Hs = np.stack([rand_hermitian(rng, 2) for _ in range(30)])
    lm = dl.lam_max_stack(Hs)
    ln = dl.lam_min_stack(Hs)
    for i in range(30):
        w = dl.herm_eig(Hs[i]).eigenvalues
        assert abs(lm[i] - w[0]) < 1e-12
        assert abs(ln[i] - w[-1]) < 1e-12
    Ms = rand_complex(rng, 25, 3, 4)
    sm = dl.sigma_max_stack(Ms)
    for i in range(25):
        assert abs(sm[i] - dl.svd(Ms[i]).s[0]) < 1e-10

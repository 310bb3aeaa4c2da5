"""Small dense symmetric linear algebra and seeded random matrices.

Everything here works on ``numpy.ndarray`` in float64. Problem sizes are
desk scale (n <= 100), so clarity wins over speed except in
:func:`sym_inv_sqrt`, which sits in the inner loop of every simulation.
"""

import numpy as np

from .errors import ContractError, ConvergenceError, SingularMatrixError

SYMMETRY_RTOL = 1e-10
JACOBI_MAX_SWEEPS = 100


def make_rng(seed=None):
    """Return a deterministic ``numpy.random.Generator`` for ``seed``.

    Passing an existing generator returns it unchanged so callers can share
    one stream.
    """
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def check_symmetric(M, name="matrix", rtol=SYMMETRY_RTOL):
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ContractError(f"{name} must be square, got shape {M.shape}")
    scale = max(np.linalg.norm(M), 1.0)
    if np.linalg.norm(M - M.T) > rtol * scale:
        raise ContractError(f"{name} is not symmetric within {rtol:g} relative")
    return M


def _offdiag_norm(A):
    return np.linalg.norm(A - np.diag(np.diag(A)))


def sym_eigen(M, tol=1e-13):
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    M : (n, n) array_like
        Symmetric matrix.
    tol : float
        Sweeps stop once the off-diagonal Frobenius norm drops below
        ``tol * ||M||_F``.

    Returns
    -------
    eigenvalues : (n,) ndarray
        Sorted in descending order.
    eigenvectors : (n, n) ndarray
        Orthogonal; column ``i`` belongs to ``eigenvalues[i]``.
    """
    if tol <= 0:
        raise ContractError("tol must be positive")
    A = check_symmetric(M, "M").copy()
    A = 0.5 * (A + A.T)
    n = A.shape[0]
    V = np.eye(n)
    threshold = tol * np.linalg.norm(A)

    for _ in range(JACOBI_MAX_SWEEPS):
        if _offdiag_norm(A) <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                diff = A[q, q] - A[p, p]
                if abs(apq) < 1e-150 * abs(diff):
                    A[p, q] = A[q, p] = 0.0
                    continue
                theta = diff / (2.0 * apq)
                t = 1.0 / (abs(theta) + np.hypot(1.0, theta))
                if theta < 0:
                    t = -t
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                ap = A[:, p].copy()
                aq = A[:, q]
                A[:, p] = c * ap - s * aq
                A[:, q] = s * ap + c * aq
                ap = A[p, :].copy()
                aq = A[q, :]
                A[p, :] = c * ap - s * aq
                A[q, :] = s * ap + c * aq
                A[p, q] = A[q, p] = 0.0
                vp = V[:, p].copy()
                vq = V[:, q]
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    else:
        if _offdiag_norm(A) > threshold:
            raise ConvergenceError(
                f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps "
                f"(off-diagonal norm {_offdiag_norm(A):.3e})"
            )

    evals = np.diag(A).copy()
    order = np.argsort(-evals, kind="stable")
    return evals[order], V[:, order]


def sym_inv_sqrt(M, min_eig=1e-12):
    """Inverse square root of a symmetric positive definite matrix.

    Uses LAPACK ``eigh``; the result ``R`` is symmetric with ``R M R = I``.
    Raises :class:`SingularMatrixError` if the smallest eigenvalue is not
    above ``min_eig``.
    """
    M = np.asarray(M, dtype=float)
    evals, evecs = np.linalg.eigh(M)
    if not evals[0] > min_eig:
        raise SingularMatrixError(
            f"smallest eigenvalue {evals[0]:.3e} <= {min_eig:g}"
        )
    R = (evecs / np.sqrt(evals)) @ evecs.T
    return 0.5 * (R + R.T)


def _haar_qr(Z):
    Q, R = np.linalg.qr(Z)
    signs = np.sign(np.diag(R))
    signs[signs == 0] = 1.0
    return Q * signs


def random_orthogonal(n, rng):
    """Haar-distributed ``n x n`` orthogonal matrix (QR of a Gaussian matrix)."""
    if n < 1:
        raise ContractError("n must be >= 1")
    rng = make_rng(rng)
    return _haar_qr(rng.standard_normal((n, n)))


def random_stiefel(n, m, rng):
    """Uniformly distributed ``n x m`` matrix with orthonormal columns."""
    if not 1 <= m <= n:
        raise ContractError(f"need 1 <= m <= n, got n={n}, m={m}")
    rng = make_rng(rng)
    return _haar_qr(rng.standard_normal((n, m)))

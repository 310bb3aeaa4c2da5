"""Error measures for eigenvector estimates.

``e1`` measures distance from the identity, ``e2`` checks that every column
has a unit-magnitude dominant entry, and ``e2_prime`` applies that check to
columns and rows so that many-to-one matches are penalised.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ContractError


@dataclass(frozen=True)
class ErrorReport:
    e_o: float
    e_p: float


def _square(X):
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise ContractError(f"expected a square matrix, got shape {X.shape}")
    return X


def e1(X):
    X = _square(X)
    m = X.shape[0]
    return float(np.sum(np.abs(X - np.eye(m)))) / m**2


def e2(X):
    X = _square(X)
    return float(np.mean(np.abs(np.max(np.abs(X), axis=0) - 1.0)))


def e2_prime(X):
    X = _square(X)
    return 0.5 * (e2(X) + e2(X.T))


def orthonormality_error(W):
    """``e1(W^T W)``; zero iff ``W`` has orthonormal columns."""
    W = np.asarray(W, dtype=float)
    return e1(W.T @ W)


def projection_error(W, Vhat):
    """``e2'(Vhat^T W)``; zero iff the columns of ``W`` match the columns of
    ``Vhat`` one-to-one up to sign, in any order."""
    W = np.asarray(W, dtype=float)
    Vhat = np.asarray(Vhat, dtype=float)
    if W.shape != Vhat.shape:
        raise ContractError(f"shape mismatch: W {W.shape} vs Vhat {Vhat.shape}")
    return e2_prime(Vhat.T @ W)


def error_report(W, Vhat):
    return ErrorReport(e_o=orthonormality_error(W), e_p=projection_error(W, Vhat))


def eigenvalue_estimates(W, C):
    """Rayleigh quotients ``w_j^T C w_j`` in column order."""
    W = np.asarray(W, dtype=float)
    C = np.asarray(C, dtype=float)
    if W.ndim != 2 or C.shape != (W.shape[0], W.shape[0]):
        raise ContractError(f"shape mismatch: W {W.shape} vs C {C.shape}")
    return [float(v) for v in np.einsum("ij,ij->j", W, C @ W)]

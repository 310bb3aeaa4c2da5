"""Fixed-point and stability analysis of the M2S rule.

Three tools live here:

* block constraints ``S D = D S`` and ``T [(1+a) D - a S] = 0`` evaluated
  for a candidate fixed point, using ``Q^T Lambda Q = [[S, T^T], [T, U]]``
  where ``Q`` extends the eigenbasis coordinates of the fixed point to an
  orthogonal matrix;
* the determinant of ``D'_alpha`` over a grid of ``alpha``, which flags
  where non-zero ``T`` solutions (extra fixed points) become possible;
* second-order predictions of the objective change near a fixed point,
  checked against the measured change along explicit perturbations.
"""

from dataclasses import dataclass

import numpy as np

from .dynamics import exact_backprojection
from .errors import ContractError
from .model import check_selection, complement
from .rules import objective_modified

MANIFOLD_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class ConstraintBlocks:
    S: np.ndarray
    T: np.ndarray
    U: np.ndarray


@dataclass(frozen=True, eq=False)
class SweepResult:
    alphas: np.ndarray
    dets: np.ndarray
    zero_crossings: list


@dataclass(frozen=True, eq=False)
class StabilityProbe:
    """Perturbation direction around a fixed point.

    ``step_a`` (skew-symmetric ``m x m``) rotates within the selected
    eigenspace, ``step_b`` (``(n-m) x m``) tilts towards the complement.
    Each is either zero or of unit Frobenius norm; ``epsilon`` scales both.
    """

    selection: tuple
    step_a: np.ndarray
    step_b: np.ndarray
    epsilon: float
    alpha: float = 0.0

    def __post_init__(self):
        A = np.asarray(self.step_a, dtype=float)
        B = np.asarray(self.step_b, dtype=float)
        m = len(self.selection)
        if A.shape != (m, m) or B.ndim != 2 or B.shape[1] != m:
            raise ContractError(f"probe shapes {A.shape}, {B.shape} do not fit m={m}")
        if np.any(A + A.T != 0):
            raise ContractError("step_a must be exactly skew-symmetric")
        for name, X in (("step_a", A), ("step_b", B)):
            norm = np.linalg.norm(X)
            if norm != 0 and abs(norm - 1.0) > 1e-12:
                raise ContractError(f"{name} must be zero or unit norm, got {norm}")
        if not 0 <= self.epsilon <= 1e-2:
            raise ContractError(f"epsilon must lie in [0, 1e-2], got {self.epsilon}")
        object.__setattr__(self, "selection", tuple(int(i) for i in self.selection))
        object.__setattr__(self, "step_a", A)
        object.__setattr__(self, "step_b", B)

    @property
    def A(self):
        return self.epsilon * self.step_a

    @property
    def B(self):
        return self.epsilon * self.step_b


def random_probe(selection, n, rng, epsilon, alpha=0.0, parts="ab"):
    """Random unit probe; ``parts`` picks which of A and B are non-zero."""
    m = len(selection)
    A = np.zeros((m, m))
    B = np.zeros((n - m, m))
    if "a" in parts and m > 1:
        X = rng.standard_normal((m, m))
        A = X - X.T
        A /= np.linalg.norm(A)
    if "b" in parts and n > m:
        B = rng.standard_normal((n - m, m))
        B /= np.linalg.norm(B)
    return StabilityProbe(tuple(selection), A, B, epsilon, alpha)


def orthogonal_completion(Abar):
    """Columns completing the orthonormal ``Abar`` (``n x m``) to an orthogonal
    matrix, by Gram-Schmidt on canonical basis vectors with pivoting."""
    n, m = Abar.shape
    basis = [Abar[:, j] for j in range(m)]
    extra = []
    for _ in range(n - m):
        Qb = np.column_stack(basis)
        R = np.eye(n) - Qb @ Qb.T
        R -= Qb @ (Qb.T @ R)
        k = int(np.argmax(np.linalg.norm(R, axis=0)))
        v = R[:, k]
        v = v - Qb @ (Qb.T @ v)
        v /= np.linalg.norm(v)
        basis.append(v)
        extra.append(v)
    if not extra:
        return np.zeros((n, 0))
    return np.column_stack(extra)


def constraint_blocks(Wbar, model, tol=MANIFOLD_TOL):
    """Blocks ``S``, ``T``, ``U`` of ``Q^T Lambda Q`` for a semi-orthogonal ``Wbar``."""
    Wbar = np.asarray(Wbar, dtype=float)
    m = Wbar.shape[1]
    if np.max(np.abs(Wbar.T @ Wbar - np.eye(m))) > tol:
        raise ContractError("Wbar is not semi-orthogonal")
    lam = model.lambdas
    Abar = model.V.T @ Wbar
    Qc = orthogonal_completion(Abar)
    S = Abar.T @ (lam[:, None] * Abar)
    S = 0.5 * (S + S.T)
    T = Qc.T @ (lam[:, None] * Abar)
    U = Qc.T @ (lam[:, None] * Qc)
    return ConstraintBlocks(S=S, T=T, U=0.5 * (U + U.T))


def check_fixed_point_constraints(blocks, alpha):
    """Frobenius residuals ``||S D - D S||`` and ``||T [(1+a) D - a S]||``
    with ``D = dg(S)``."""
    S, T = blocks.S, blocks.T
    D = np.diag(np.diag(S))
    sd = float(np.linalg.norm(S @ D - D @ S))
    t = float(np.linalg.norm(T @ ((1.0 + alpha) * D - alpha * S)))
    return sd, t


def dprime_bar(Abar, lambdas, alpha):
    K = Abar.T @ (np.asarray(lambdas, dtype=float)[:, None] * Abar)
    return (1.0 + alpha) * np.diag(np.diag(K)) - alpha * K


def det_sweep(Abar, lambdas, alpha_grid):
    """``det D'_alpha`` for every ``alpha`` in the grid, with sign-change brackets."""
    Abar = np.asarray(Abar, dtype=float)
    m = Abar.shape[1]
    if np.max(np.abs(Abar.T @ Abar - np.eye(m))) > MANIFOLD_TOL:
        raise ContractError("Abar is not semi-orthogonal")
    alphas = np.asarray(alpha_grid, dtype=float)
    if np.any(np.diff(alphas) <= 0):
        raise ContractError("alpha grid must be strictly increasing")
    dets = np.array([np.linalg.det(dprime_bar(Abar, lambdas, a)) for a in alphas])
    signs = np.sign(dets)
    crossings = [
        (float(alphas[i]), float(alphas[i + 1]))
        for i in range(len(alphas) - 1)
        if signs[i] * signs[i + 1] < 0 or (signs[i] != 0 and signs[i + 1] == 0)
    ]
    return SweepResult(alphas=alphas, dets=dets, zero_crossings=crossings)


def perturbed_point(model, selection, probe):
    """Point near the fixed point ``V[:, selection]`` along ``probe``.

    ``W = Vsel F + Vrest B`` with ``F = I + A - (A^T A + B^T B) / 2``, then
    exactly back-projected. ``W^T C W`` then equals ``F^T H F + B^T L B``
    (``H`` the selected, ``L`` the remaining eigenvalues) up to third order.
    """
    sel = check_selection(selection, model.n)
    if tuple(sel) != probe.selection:
        raise ContractError("probe was built for a different selection")
    rest = complement(sel, model.n)
    A, B = probe.A, probe.B
    m = len(sel)
    F = np.eye(m) + A - 0.5 * (A.T @ A + B.T @ B)
    W = model.V[:, sel] @ F + model.V[:, rest] @ B
    return exact_backprojection(W)


def delta_j_measured(W, Wbar, C, alpha):
    """``J(W) - J(Wbar)`` for the modified objective."""
    return objective_modified(W, C, alpha) - objective_modified(Wbar, C, alpha)


def delta_j_predicted_special(lambdas_hat, lambdas_check, step_a, step_b, epsilon, alpha):
    """Second-order objective change at a fixed point with distinct eigenvalues.

    The in-subspace part is scaled by ``1 + alpha``; the part coupling to the
    complement does not depend on ``alpha``.
    """
    lh = np.asarray(lambdas_hat, dtype=float)
    lc = np.asarray(lambdas_check, dtype=float)
    A = epsilon * np.asarray(step_a, dtype=float)
    B = epsilon * np.asarray(step_b, dtype=float)
    a_part = np.sum(lh * np.diag(A.T @ (lh[:, None] * A)) - lh**2 * np.diag(A.T @ A))
    b_part = np.sum(lh * np.diag(B.T @ (lc[:, None] * B)) - lh**2 * np.diag(B.T @ B))
    return 0.5 * (1.0 + alpha) * float(a_part) + 0.5 * float(b_part)


def delta_j2_general(H, lambdas_check, step_b, epsilon):
    """Second-order change of the (sign-flipped) off-diagonal penalty term,
    ``(tr(H^2 B^T B) - tr(H B^T L B)) / 2``; independent of the in-subspace step."""
    H = np.asarray(H, dtype=float)
    B = epsilon * np.asarray(step_b, dtype=float)
    lc = np.asarray(lambdas_check, dtype=float)
    BtB = B.T @ B
    BtLB = B.T @ (lc[:, None] * B)
    return 0.5 * float(np.trace(H @ H @ BtB) - np.trace(H @ BtLB))

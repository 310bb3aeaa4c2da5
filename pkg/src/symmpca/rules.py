"""Objective functions and learning-rule right-hand sides.

All rules return ``dW/dt`` with unit time constant; the integrator applies
the learning rate. ``W`` is ``n x m`` (one eigenvector estimate per
column), ``C`` the symmetric ``n x n`` covariance matrix.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, ContractError
from .linalg import check_symmetric

RULE_KINDS = ("twj2s", "n2s", "m2s", "oja", "nl", "nse")


def default_theta(m):
    """Fixed weight factors ``diag(j/m)``, j = 1..m."""
    return np.arange(1, m + 1, dtype=float) / m


@dataclass(frozen=True)
class RuleSpec:
    """Which learning rule to integrate.

    ``alpha`` is only read by M2S, ``theta`` only by TwJ2S (``None`` selects
    ``diag(j/m)`` at evaluation time).
    """

    kind: str
    alpha: float = 0.0
    theta: tuple = field(default=None)

    def __post_init__(self):
        kind = self.kind.lower()
        if kind not in RULE_KINDS:
            raise ConfigurationError(
                f"unknown rule {self.kind!r} (choose from {', '.join(RULE_KINDS)})"
            )
        object.__setattr__(self, "kind", kind)
        if not self.alpha >= 0:
            raise ContractError(f"alpha must be >= 0, got {self.alpha}")
        if self.theta is not None:
            theta = tuple(float(t) for t in self.theta)
            if any(t <= 0 for t in theta) or any(
                b <= a for a, b in zip(theta, theta[1:])
            ):
                raise ContractError("theta must be positive and strictly increasing")
            object.__setattr__(self, "theta", theta)

    @property
    def label(self):
        if self.kind == "m2s":
            return f"m2s_alpha{self.alpha:g}"
        return self.kind


@dataclass(frozen=True, eq=False)
class DiagonalFactors:
    D: np.ndarray
    Dstar: np.ndarray
    Dprime: np.ndarray


def _check(W, C):
    W = np.asarray(W, dtype=float)
    C = check_symmetric(C, "C")
    if W.ndim != 2 or W.shape[0] != C.shape[0]:
        raise ContractError(
            f"W must be n x m with n={C.shape[0]}, got shape {W.shape}"
        )
    return W, C


def objective_original(W, C):
    """``1/4 sum_j (w_j^T C w_j)^2``."""
    W, C = _check(W, C)
    d = np.einsum("ij,ij->j", W, C @ W)
    return 0.25 * float(np.sum(d**2))


def objective_modified(W, C, alpha):
    """Original objective plus a penalty on off-diagonal ``W^T C W``.

    Diagonal terms ``(w_j^T C w_j)^2`` carry weight 1, off-diagonal terms
    weight ``-alpha``.
    """
    W, C = _check(W, C)
    K = W.T @ C @ W
    diag_sq = float(np.sum(np.diag(K) ** 2))
    return 0.25 * ((1.0 + alpha) * diag_sq - alpha * float(np.sum(K * K)))


def grad_modified(W, C, alpha):
    """Euclidean gradient ``(1+a) C W D - a C W W^T C W`` of the modified objective."""
    W, C = _check(W, C)
    CW = C @ W
    d = np.einsum("ij,ij->j", W, CW)
    return (1.0 + alpha) * CW * d - alpha * CW @ (W.T @ CW)


def compute_factors(W, C, alpha=0.0):
    """The diagonal factors ``D``, ``D*`` and the symmetric ``D'_alpha``."""
    W, C = _check(W, C)
    K = W.T @ C @ W
    K = 0.5 * (K + K.T)
    D = np.diag(np.diag(K))
    Dstar = np.diag(np.diag(K @ (W.T @ W)))
    Dprime = (1.0 + alpha) * D - alpha * K
    return DiagonalFactors(D=D, Dstar=Dstar, Dprime=Dprime)


def _n2s(W, C):
    CW = C @ W
    K = W.T @ CW
    d = np.diag(K)
    return CW * d - (W * d) @ K


def _m2s(W, C, alpha):
    CW = C @ W
    K = W.T @ CW
    Dp = (1.0 + alpha) * np.diag(np.diag(K)) - alpha * K
    return CW @ Dp - W @ Dp @ K


def _twj2s(W, C, theta):
    CW = C @ W
    return CW * theta - (W * theta) @ (W.T @ CW)


def _oja(W, C):
    CW = C @ W
    return CW - W @ (W.T @ CW)


def _nse(W, C):
    CW = C @ W
    K = W.T @ CW
    d = np.diag(K)
    return 2.0 * CW * d - W @ (K * d) - (W * d) @ K


def _nl(W, C):
    CW = C @ W
    K = W.T @ CW
    G = W.T @ W
    d = np.diag(K)
    dstar = np.diag(K @ G)
    CWD = CW * d
    return (
        5.0 * CWD
        - W @ (K * d)
        - (W * d) @ K
        - CWD @ G
        - CW * dstar
        - CW @ (G * d)
    )


def rhs_unchecked(spec, W, C):
    """Rule right-hand side without argument validation (integrator hot path)."""
    kind = spec.kind
    if kind == "n2s":
        return _n2s(W, C)
    if kind == "m2s":
        return _m2s(W, C, spec.alpha)
    if kind == "twj2s":
        theta = default_theta(W.shape[1]) if spec.theta is None else np.asarray(spec.theta)
        return _twj2s(W, C, theta)
    if kind == "oja":
        return _oja(W, C)
    if kind == "nse":
        return _nse(W, C)
    return _nl(W, C)


def rule_rhs(spec, W, C):
    """``dW/dt`` (unit time constant) for the rule described by ``spec``.

    ==========  =====================================================
    twj2s       C W Th - W Th W^T C W, Th fixed diagonal
    n2s         C W D - W D W^T C W, D = dg(W^T C W)
    m2s         C W D' - W D' W^T C W, D' = (1+a) D - a W^T C W
    oja         C W - W W^T C W
    nl          5CWD - WW^TCWD - WDW^TCW - CWDW^TW - CWD* - CWW^TWD
    nse         2CWD - WW^TCWD - WDW^TCW
    ==========  =====================================================
    """
    W, C = _check(W, C)
    if spec.kind == "twj2s" and spec.theta is not None and len(spec.theta) != W.shape[1]:
        raise ContractError(f"theta has {len(spec.theta)} entries but W has {W.shape[1]} columns")
    return rhs_unchecked(spec, W, C)


def m2s_form1_rhs(W, C, alpha):
    """M2S grouped by weight: ``(1+a) N2S(W) - a (C W - W W^T C W) W^T C W``.

    Algebraically identical to ``rule_rhs(RuleSpec("m2s", alpha), W, C)``;
    the second factor is Oja's subspace rule.
    """
    W, C = _check(W, C)
    CW = C @ W
    K = W.T @ CW
    return (1.0 + alpha) * _n2s(W, C) - alpha * (CW - W @ K) @ K

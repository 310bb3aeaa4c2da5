"""Covariance models with a known spectrum and their desired fixed points."""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, ContractError
from .linalg import make_rng, random_orthogonal

PRESETS = {
    "spaced": (1.0, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1),
    "nearby": (0.91, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1),
}


@dataclass(frozen=True, eq=False)
class CovarianceModel:
    """Ground-truth spectrum and covariance ``C = V diag(lambdas) V^T``."""

    V: np.ndarray
    lambdas: np.ndarray
    C: np.ndarray

    @property
    def n(self):
        return self.C.shape[0]

    def principal(self, m):
        """The ``m`` principal eigenvectors as an ``n x m`` matrix."""
        return self.V[:, :m]


def preset_eigenvalues(name, values=None):
    """Eigenvalue list for a named preset.

    ``"custom"`` passes ``values`` through unchanged.
    """
    if name == "custom":
        if values is None:
            raise ConfigurationError("custom preset needs explicit eigenvalues")
        return [float(v) for v in values]
    try:
        return list(PRESETS[name])
    except KeyError:
        raise ConfigurationError(
            f"unknown eigenvalue preset {name!r} (choose from "
            f"{', '.join(sorted(PRESETS))}, custom)"
        ) from None


def _check_lambdas(lambdas):
    lam = np.asarray(lambdas, dtype=float)
    if lam.ndim != 1 or lam.size < 1:
        raise ContractError("eigenvalues must be a non-empty 1-d list")
    if not np.all(np.isfinite(lam)) or np.any(lam <= 0):
        raise ContractError("eigenvalues must be finite and positive")
    if np.any(np.diff(lam) >= 0):
        raise ContractError("eigenvalues must be distinct and strictly descending")
    return lam


def make_covariance(lambdas, rng=None, eigenvectors=None):
    """Build a covariance model from descending distinct positive eigenvalues.

    The eigenvector basis is a Haar-random orthogonal matrix drawn from
    ``rng`` unless ``eigenvectors`` is given explicitly.
    """
    lam = _check_lambdas(lambdas)
    n = lam.size
    if eigenvectors is None:
        V = random_orthogonal(n, make_rng(rng))
    else:
        V = np.array(eigenvectors, dtype=float)
        if V.shape != (n, n):
            raise ContractError(f"eigenvectors must be {n}x{n}")
    C = (V * lam) @ V.T
    C = 0.5 * (C + C.T)
    return CovarianceModel(V=V, lambdas=lam, C=C)


def check_selection(selection, n):
    sel = [int(i) for i in selection]
    if len(set(sel)) != len(sel):
        raise ContractError(f"duplicate eigenvector index in {sel}")
    if not sel or any(i < 0 or i >= n for i in sel):
        raise ContractError(f"selection {sel} out of range for n={n}")
    return sel


def desired_fixed_point(model, selection):
    """Fixed point whose columns are the selected true eigenvectors.

    ``selection`` holds zero-based eigenvector indices; their order is the
    column order, so it plays the role of the permutation.
    """
    sel = check_selection(selection, model.n)
    return model.V[:, sel].copy()


def complement(selection, n):
    """Indices not in ``selection``, ascending."""
    chosen = set(int(i) for i in selection)
    return [i for i in range(n) if i not in chosen]

"""Euler integration of learning rules with optional back-projection."""

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, ContractError, DivergenceError, SingularMatrixError
from .linalg import make_rng, random_stiefel, sym_inv_sqrt
from .metrics import orthonormality_error, projection_error
from .model import make_covariance
from .rules import RuleSpec, rhs_unchecked, rule_rhs


class BackProjection(enum.Enum):
    EXACT = "exact"
    APPROX = "approx"
    NONE = "none"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ConfigurationError(
                f"unknown back-projection mode {value!r} (choose from exact, approx, none)"
            ) from None


@dataclass(frozen=True)
class TraceRow:
    step: int
    e_o: float
    e_p: float


@dataclass(eq=False)
class SimConfig:
    model: object
    spec: RuleSpec
    m: int = 4
    gamma: float = 1.0
    steps: int = 20000
    subsample: int = 100
    backprojection: BackProjection = BackProjection.EXACT
    seed: int = 0
    initial: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        self.backprojection = BackProjection.parse(self.backprojection)
        if not self.gamma > 0:
            raise ContractError(f"gamma must be positive, got {self.gamma}")
        if self.subsample < 1:
            raise ContractError("subsample must be >= 1")
        if self.steps < 0:
            raise ContractError("steps must be >= 0")
        if not 1 <= self.m <= self.model.n:
            raise ContractError(f"need 1 <= m <= n, got m={self.m}, n={self.model.n}")

    def initial_estimate(self):
        if self.initial is not None:
            W0 = np.array(self.initial, dtype=float)
            if W0.shape != (self.model.n, self.m):
                raise ContractError(f"initial W must be {self.model.n}x{self.m}")
            return W0
        return initial_estimate(self.model.n, self.m, self.seed)


@dataclass(eq=False)
class SimResult:
    rows: list
    W: np.ndarray


def model_from_seed(lambdas, seed):
    """Covariance model whose eigenvector basis comes from ``seed``.

    The model and the initial estimate use separate streams of the same seed,
    so all rules run with one seed share both ``C`` and ``W0``.
    """
    return make_covariance(lambdas, make_rng([seed, 0]))


def initial_estimate(n, m, seed):
    return random_stiefel(n, m, make_rng([seed, 1]))


def exact_backprojection(Wp, step=None):
    """Map ``W'`` to ``W' (W'^T W')^{-1/2}``, the nearest semi-orthogonal matrix."""
    Wp = np.asarray(Wp, dtype=float)
    if not np.isfinite(Wp).all():
        raise DivergenceError("non-finite entries in W", step)
    try:
        return Wp @ sym_inv_sqrt(Wp.T @ Wp)
    except SingularMatrixError as exc:
        raise DivergenceError(f"singular Gram matrix in back-projection ({exc})", step) from exc


def approx_backprojection(Wp, W_t, Wdot_t):
    """``W' - 1/2 W_t Wdot_t^T Wdot_t``.

    ``Wdot_t`` is the step actually added to ``W_t`` (already scaled by the
    learning rate).
    """
    Wp = np.asarray(Wp, dtype=float)
    W_t = np.asarray(W_t, dtype=float)
    Wdot_t = np.asarray(Wdot_t, dtype=float)
    if not Wp.shape == W_t.shape == Wdot_t.shape:
        raise ContractError(
            f"shape mismatch: {Wp.shape}, {W_t.shape}, {Wdot_t.shape}"
        )
    return Wp - 0.5 * W_t @ (Wdot_t.T @ Wdot_t)


def _advance(W, C, spec, gamma, mode, step):
    delta = gamma * rhs_unchecked(spec, W, C)
    Wp = W + delta
    if mode is BackProjection.EXACT:
        Wn = exact_backprojection(Wp, step)
    elif mode is BackProjection.APPROX:
        Wn = Wp - 0.5 * W @ (delta.T @ delta)
    else:
        Wn = Wp
    if not np.isfinite(Wn).all():
        raise DivergenceError("non-finite entries in W", step)
    return Wn


def euler_step(W_t, config, step=None, gamma=None):
    """One Euler step ``W_t + gamma * rhs(W_t)`` followed by the configured
    back-projection.

    ``gamma`` overrides ``config.gamma`` (zero is allowed here).
    """
    W_t = np.asarray(W_t, dtype=float)
    if not np.isfinite(W_t).all():
        raise DivergenceError("non-finite entries in W", step)
    rule_rhs(config.spec, W_t, config.model.C)
    gamma = config.gamma if gamma is None else gamma
    with np.errstate(over="ignore", invalid="ignore"):
        return _advance(W_t, config.model.C, config.spec, gamma,
                        config.backprojection, step)


def integrate(config):
    """Run ``config.steps`` Euler steps, sampling errors every ``subsample``
    steps plus step 0 and the final step."""
    C = config.model.C
    Vhat = config.model.principal(config.m)
    W = config.initial_estimate()
    rule_rhs(config.spec, W, C)
    spec, gamma, mode = config.spec, config.gamma, config.backprojection
    every, steps = config.subsample, config.steps

    def sample(t):
        return TraceRow(t, orthonormality_error(W), projection_error(W, Vhat))

    rows = [sample(0)]
    with np.errstate(over="ignore", invalid="ignore"):
        for t in range(1, steps + 1):
            W = _advance(W, C, spec, gamma, mode, t)
            if t % every == 0 or t == steps:
                rows.append(sample(t))
    return SimResult(rows=rows, W=W)


def run_simulation(config):
    return integrate(config).rows

import numpy as np
import pytest

from symmpca.dynamics import (
    BackProjection,
    SimConfig,
    approx_backprojection,
    euler_step,
    exact_backprojection,
    initial_estimate,
    integrate,
    model_from_seed,
    run_simulation,
)
from symmpca.errors import ConfigurationError, ContractError, DivergenceError
from symmpca.linalg import make_rng, random_stiefel
from symmpca.model import desired_fixed_point, preset_eigenvalues
from symmpca.rules import RuleSpec, rule_rhs


def gram_error(W):
    return np.linalg.norm(W.T @ W - np.eye(W.shape[1]))


def test_exact_backprojection_orthonormal(rng):
    Wp = rng.standard_normal((10, 4))
    W = exact_backprojection(Wp)
    assert gram_error(W) <= 1e-14
    # same column space, and the polar factor is the closest semi-orthogonal matrix
    P = W @ W.T
    np.testing.assert_allclose(P @ Wp, Wp, atol=1e-12)
    U, _, Vt = np.linalg.svd(Wp, full_matrices=False)
    np.testing.assert_allclose(W, U @ Vt, atol=1e-13)


def test_exact_backprojection_idempotent(rng):
    W = random_stiefel(8, 3, rng)
    np.testing.assert_allclose(exact_backprojection(W), W, atol=1e-14)


def test_exact_backprojection_singular():
    Wp = np.zeros((5, 2))
    Wp[0, 0] = Wp[0, 1] = 1.0
    with pytest.raises(DivergenceError):
        exact_backprojection(Wp, step=7)


def test_approx_backprojection_formula(rng):
    W = rng.standard_normal((6, 3))
    d = rng.standard_normal((6, 3))
    out = approx_backprojection(W + d, W, d)
    np.testing.assert_allclose(out, W + d - 0.5 * W @ d.T @ d)
    with pytest.raises(ContractError):
        approx_backprojection(W, W, d[:, :2])


def _one_step_error(spaced_model, mode, gamma):
    config = SimConfig(spaced_model, RuleSpec("m2s", 5.0), backprojection=mode)
    W0 = initial_estimate(10, 4, 3)
    return gram_error(euler_step(W0, config, gamma=gamma))


def test_approx_backprojection_removes_second_order(spaced_model):
    gammas = [0.08, 0.04, 0.02, 0.01]
    approx = [_one_step_error(spaced_model, "approx", g) for g in gammas]
    none = [_one_step_error(spaced_model, "none", g) for g in gammas]
    for i in range(len(gammas) - 1):
        assert 6.0 <= approx[i] / approx[i + 1] <= 10.0
        assert 3.5 <= none[i] / none[i + 1] <= 4.5
        assert approx[i] < none[i]


def test_approx_matches_exact_for_small_step(spaced_model):
    W0 = initial_estimate(10, 4, 3)
    cfg = {m: SimConfig(spaced_model, RuleSpec("n2s"), backprojection=m) for m in ("exact", "approx")}
    diff = np.linalg.norm(euler_step(W0, cfg["exact"], gamma=1e-4) - euler_step(W0, cfg["approx"], gamma=1e-4))
    assert diff <= 1e-12


@pytest.mark.parametrize("mode", ["exact", "approx", "none"])
def test_zero_step_is_identity(spaced_model, mode):
    config = SimConfig(spaced_model, RuleSpec("nl"), backprojection=mode)
    W0 = initial_estimate(10, 4, 1)
    np.testing.assert_allclose(euler_step(W0, config, gamma=0.0), W0, atol=1e-15)


@pytest.mark.parametrize("mode", ["exact", "approx", "none"])
@pytest.mark.parametrize("kind", ["n2s", "m2s", "twj2s", "oja", "nl", "nse"])
def test_fixed_point_is_stationary(spaced_model, mode, kind):
    config = SimConfig(spaced_model, RuleSpec(kind, 2.0), backprojection=mode)
    W = desired_fixed_point(spaced_model, (2, 0, 3, 1))
    assert np.linalg.norm(euler_step(W, config) - W) <= 1e-10


def test_n2s_step_composition(spaced_model):
    C = spaced_model.C
    W = initial_estimate(10, 4, 2)
    K = W.T @ C @ W
    D = np.diag(np.diag(K))
    Wp = W + 0.5 * (C @ W @ D - W @ D @ K)
    evals, evecs = np.linalg.eigh(Wp.T @ Wp)
    expected = Wp @ evecs @ np.diag(evals**-0.5) @ evecs.T
    config = SimConfig(spaced_model, RuleSpec("n2s"), gamma=0.5)
    np.testing.assert_allclose(euler_step(W, config), expected, atol=1e-14)


def test_divergence_reports_step(spaced_model):
    config = SimConfig(spaced_model, RuleSpec("n2s"), gamma=1e6, steps=100,
                       backprojection="none")
    with pytest.raises(DivergenceError) as info:
        run_simulation(config)
    assert info.value.step is not None and 1 <= info.value.step <= 100
    assert str(info.value).startswith(f"step {info.value.step}:")


def test_sample_schedule(spaced_model):
    rows = run_simulation(SimConfig(spaced_model, RuleSpec("n2s"), steps=250, subsample=100))
    assert [r.step for r in rows] == [0, 100, 200, 250]
    rows = run_simulation(SimConfig(spaced_model, RuleSpec("n2s"), steps=0))
    assert [r.step for r in rows] == [0]


def test_row_count_default_schedule(spaced_model):
    rows = run_simulation(SimConfig(spaced_model, RuleSpec("oja"), steps=2000, subsample=100))
    assert len(rows) == 21


def test_deterministic(spaced_model):
    cfg = SimConfig(spaced_model, RuleSpec("m2s", 5.0), steps=500, seed=4)
    a, b = integrate(cfg), integrate(cfg)
    np.testing.assert_array_equal(a.W, b.W)
    assert a.rows == b.rows


def test_seed_shares_model_and_start():
    lam = preset_eigenvalues("spaced")
    np.testing.assert_array_equal(model_from_seed(lam, 9).C, model_from_seed(lam, 9).C)
    assert not np.array_equal(model_from_seed(lam, 9).C, model_from_seed(lam, 10).C)
    np.testing.assert_array_equal(initial_estimate(10, 4, 9), initial_estimate(10, 4, 9))


def test_exact_mode_stays_on_manifold(spaced_model):
    rows = run_simulation(SimConfig(spaced_model, RuleSpec("nl"), steps=1000, subsample=50))
    assert max(r.e_o for r in rows) <= 1e-9


def test_explicit_initial(spaced_model):
    W0 = random_stiefel(10, 2, make_rng(1))
    cfg = SimConfig(spaced_model, RuleSpec("n2s"), m=2, steps=10, initial=W0)
    np.testing.assert_array_equal(cfg.initial_estimate(), W0)
    with pytest.raises(ContractError):
        SimConfig(spaced_model, RuleSpec("n2s"), m=3, initial=W0).initial_estimate()


@pytest.mark.parametrize("kwargs", [
    {"gamma": 0.0}, {"gamma": -1.0}, {"subsample": 0}, {"steps": -1}, {"m": 0}, {"m": 11},
])
def test_config_validation(spaced_model, kwargs):
    with pytest.raises(ContractError):
        SimConfig(spaced_model, RuleSpec("n2s"), **kwargs)


def test_unknown_backprojection(spaced_model):
    with pytest.raises(ConfigurationError):
        SimConfig(spaced_model, RuleSpec("n2s"), backprojection="polar")
    assert BackProjection.parse("APPROX") is BackProjection.APPROX


def test_step_rejects_nonfinite(spaced_model):
    W = initial_estimate(10, 4, 0)
    W[0, 0] = np.nan
    with pytest.raises(DivergenceError):
        euler_step(W, SimConfig(spaced_model, RuleSpec("n2s")))


def test_rhs_contract_checked_before_step(spaced_model):
    with pytest.raises(ContractError):
        euler_step(np.ones((9, 4)), SimConfig(spaced_model, RuleSpec("n2s")))

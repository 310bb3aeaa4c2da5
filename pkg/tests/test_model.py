import numpy as np
import pytest

from symmpca.errors import ConfigurationError, ContractError
from symmpca.linalg import make_rng, sym_eigen
from symmpca.model import desired_fixed_point, make_covariance, preset_eigenvalues


def test_spaced_preset():
    assert preset_eigenvalues("spaced") == [1.0, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1]


def test_nearby_preset():
    assert preset_eigenvalues("nearby") == [0.91, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1]


def test_custom_passthrough():
    assert preset_eigenvalues("custom", [2, 1]) == [2.0, 1.0]


def test_unknown_preset():
    with pytest.raises(ConfigurationError):
        preset_eigenvalues("clustered")


def test_scalar_model():
    model = make_covariance([1.0], make_rng(0))
    np.testing.assert_allclose(model.C, [[1.0]])


def test_round_trip_through_eigensolver(spaced_model):
    evals, _ = sym_eigen(spaced_model.C)
    np.testing.assert_allclose(evals, preset_eigenvalues("spaced"), atol=1e-9)
    V, lam = spaced_model.V, spaced_model.lambdas
    assert np.linalg.norm((V * lam) @ V.T - spaced_model.C) <= 1e-12
    np.testing.assert_array_equal(spaced_model.C, spaced_model.C.T)


def test_forced_identity_basis():
    model = make_covariance([3.0, 2.0, 1.0], eigenvectors=np.eye(3))
    np.testing.assert_array_equal(model.C, np.diag([3.0, 2.0, 1.0]))


@pytest.mark.parametrize("lambdas", [[1.0, 1.0], [1.0, 2.0], [1.0, -1.0], []])
def test_rejects_bad_spectra(lambdas):
    with pytest.raises(ContractError):
        make_covariance(lambdas, make_rng(0))


def test_fixed_point_canonical_basis():
    model = make_covariance([4.0, 3.0, 2.0, 1.0], eigenvectors=np.eye(4))
    np.testing.assert_array_equal(desired_fixed_point(model, [0, 1]), np.eye(4)[:, :2])


def test_fixed_point_is_diagonalising(spaced_model):
    W = desired_fixed_point(spaced_model, (0, 1, 2, 3))
    assert np.max(np.abs(W.T @ W - np.eye(4))) <= 1e-12
    np.testing.assert_allclose(W.T @ spaced_model.C @ W, np.diag([1.0, 0.9, 0.8, 0.7]), atol=1e-10)


def test_permuted_selection(spaced_model):
    W = desired_fixed_point(spaced_model, (0, 1, 2, 3))
    Wp = desired_fixed_point(spaced_model, (3, 1, 0, 2))
    np.testing.assert_allclose(Wp @ Wp.T, W @ W.T, atol=1e-12)
    np.testing.assert_allclose(Wp.T @ spaced_model.C @ Wp, np.diag([0.7, 0.9, 1.0, 0.8]), atol=1e-10)


@pytest.mark.parametrize("selection", [(0, 0), (0, 10), ()])
def test_rejects_bad_selection(spaced_model, selection):
    with pytest.raises(ContractError):
        desired_fixed_point(spaced_model, selection)

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cvhac.errors import ConfigError, DataError, SingularMatrixError
from cvhac.varfit import (AdjustmentReport, burg_path, burg_var, companion, eigen_adjust, fit_var,
                          fit_var_path, ols_var, spectral_radius, theoretical_A, theoretical_eigenvalues,
                          theoretical_singular_values, var_residuals)


def simulate_var(coefs, n, rng, burn=200):
    q, k, _ = coefs.shape
    x = np.zeros((n + burn, k))
    e = rng.normal(size=(n + burn, k))
    for t in range(q, n + burn):
        x[t] = e[t] + sum(coefs[i] @ x[t - 1 - i] for i in range(q))
    return x[burn:]


def test_ols_var_matches_lstsq():
    rng = np.random.default_rng(0)
    V = rng.normal(size=(60, 3))
    model = ols_var(V, 2)
    Z = np.hstack([V[1:-1], V[:-2]])
    B = np.linalg.lstsq(Z, V[2:], rcond=None)[0]
    np.testing.assert_allclose(model.coefs[0], B[:3].T, atol=1e-10)
    np.testing.assert_allclose(model.coefs[1], B[3:].T, atol=1e-10)
    np.testing.assert_allclose(model.residuals, V[2:] - Z @ B, atol=1e-10)


def test_scalar_burg_is_geometric_lattice():
    # scalar lattice coefficient: sum f b / sqrt(sum f^2 sum b^2)
    x = np.random.default_rng(1).normal(size=200).cumsum() * 0.1
    f, b = x[1:], x[:-1]
    expected = f @ b / np.sqrt((f @ f) * (b @ b))
    assert burg_var(x[:, None], 1).coefs[0, 0, 0] == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("method", ["ols", "burg"])
def test_recovers_var_coefficients(method):
    A = np.array([[[0.5, 0.1], [0.0, 0.3]], [[-0.2, 0.0], [0.1, 0.2]]])
    V = simulate_var(A, 20_000, np.random.default_rng(2))
    model = fit_var(V, 2, method)
    np.testing.assert_allclose(model.coefs, A, atol=0.03)


def test_burg_path_prefix_consistency():
    V = np.random.default_rng(3).normal(size=(80, 2))
    path = burg_path(V, 3)
    assert [m.order for m in path] == [1, 2, 3]
    np.testing.assert_allclose(path[1].coefs, burg_var(V, 2).coefs)
    for m in path:
        np.testing.assert_allclose(m.residuals, var_residuals(V, m.coefs))
    ols_path = fit_var_path(V, 2, "ols")
    np.testing.assert_allclose(ols_path[1].coefs, ols_var(V, 2).coefs)


@given(st.integers(0, 10_000), st.integers(1, 3), st.integers(1, 4))
@settings(max_examples=60, deadline=None)
def test_burg_always_stationary(seed, q, k):
    rng = np.random.default_rng(seed)
    n = rng.integers(k * q + q + 5, 150)
    # random walks are the hardest case for stationarity
    V = rng.normal(size=(n, k)).cumsum(axis=0) if seed % 2 else rng.normal(size=(n, k))
    assert burg_var(V, q).spectral_radius() < 1


def test_companion_and_spectral_radius_oracle():
    # AR(2) scalar: eigenvalues of the companion are inverse roots of 1 - a1 z - a2 z^2
    a1, a2 = 0.5, 0.3
    B = companion(np.array([[[a1]], [[a2]]]))
    np.testing.assert_allclose(B, [[a1, a2], [1, 0]])
    inv_roots = 1 / np.abs(np.roots([-a2, -a1, 1]))
    assert spectral_radius(B) == pytest.approx(inv_roots.max())
    assert companion(np.eye(2) * 0.5).shape == (2, 2)


def test_input_validation():
    with pytest.raises(DataError):
        ols_var(np.ones((3, 2)), 1)
    with pytest.raises(ConfigError):
        fit_var(np.ones((40, 1)), 0)
    with pytest.raises(ConfigError):
        fit_var(np.ones((40, 1)), 1, "yw")
    with pytest.raises(DataError):
        burg_var(np.zeros((40, 2)), 1)
    with pytest.raises(SingularMatrixError):
        ols_var(np.zeros((40, 2)), 1)
    with pytest.raises(DataError):
        ols_var(np.r_[np.full((1, 2), np.nan), np.ones((39, 2))], 1)


@pytest.mark.parametrize("phi,alpha,distortion", [(0.3, 2, 0.0), (0.5, 2, 0.1529), (0.7, 2, 0.4149),
                                                  (0.9, 2, 0.5637)])
def test_eigen_adjust_population(phi, alpha, distortion):
    report = eigen_adjust(theoretical_A(phi, alpha))
    assert report.distortion == pytest.approx(distortion, abs=5e-5)
    assert report.triggered == (distortion > 0)


@given(st.integers(0, 10_000), st.integers(1, 4), st.floats(0.1, 4))
@settings(max_examples=80, deadline=None)
def test_eigen_adjust_clamp_and_idempotence(seed, k, scale):
    A = np.random.default_rng(seed).normal(size=(k, k)) * scale
    report = eigen_adjust(A)
    assert isinstance(report, AdjustmentReport)
    s = np.linalg.svd(report.adjusted, compute_uv=False)
    assert s.max() <= 0.97 + 1e-12
    assert np.all(report.adjusted_eigenvalues <= 0.97 + 1e-12)
    again = eigen_adjust(report.adjusted)
    np.testing.assert_allclose(again.adjusted, report.adjusted, atol=1e-12)
    assert again.distortion == pytest.approx(0, abs=1e-12) or not again.triggered
    if not report.triggered:
        np.testing.assert_array_equal(report.adjusted, A)


@given(st.floats(-0.99, 0.99), st.floats(-5, 5), st.integers(1, 4))
@settings(max_examples=100, deadline=None)
def test_theoretical_closed_forms(phi, alpha, d):
    A = theoretical_A(phi, alpha, d)
    np.testing.assert_allclose(np.linalg.svd(A, compute_uv=False), theoretical_singular_values(phi, alpha, d),
                               atol=1e-10)
    np.testing.assert_allclose(np.sort(np.abs(np.linalg.eigvals(A)))[::-1], theoretical_eigenvalues(phi, d),
                               atol=1e-10)


def test_theoretical_requires_regressor():
    with pytest.raises(ConfigError):
        theoretical_A(0.5, 1.0, 0)

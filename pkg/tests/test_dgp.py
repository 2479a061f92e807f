import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cvhac.dgp import (ArSpec, MaSpec, RegressionDataset, acvf, acvf_ar, acvf_ma, gamma_v_oracle,
                       make_dataset, regressor_acvf, simulate)
from cvhac.errors import ConfigError, DataError, StationarityError


def psi_weights(phi, count):
    """MA(infinity) weights of an AR(p) by direct recursion."""
    psi = np.zeros(count)
    psi[0] = 1.0
    for j in range(1, count):
        psi[j] = sum(phi[i] * psi[j - 1 - i] for i in range(len(phi)) if j - 1 - i >= 0)
    return psi


@pytest.mark.parametrize("phi", [(0.5,), (0.45, 0.45), (0.3, 0.3, 0.3), (-0.6, 0.2)])
def test_acvf_ar_matches_psi_weight_sums(phi):
    # independent oracle: gamma(r) = sum_j psi_j psi_{j+r}
    psi = psi_weights(phi, 4000)
    expected = [psi[: len(psi) - r] @ psi[r:] for r in range(6)]
    np.testing.assert_allclose(acvf_ar(ArSpec(phi), 5), expected, rtol=1e-10)


def test_acvf_ar1_closed_form():
    g = acvf_ar(ArSpec((0.6,), innovation_sd=2.0), 3)
    np.testing.assert_allclose(g, 4 / (1 - 0.36) * 0.6 ** np.arange(4))


def test_acvf_ma2():
    g = acvf_ma(MaSpec((0.5, 0.6)), 4)
    np.testing.assert_allclose(g, [1 + 0.25 + 0.36, 0.5 + 0.3, 0.6, 0, 0])


def test_white_noise_acvf():
    np.testing.assert_allclose(acvf(ArSpec(()), 2), [1, 0, 0])


def test_nonstationary_spec_rejected():
    assert not ArSpec((1.0,)).is_stationary()
    with pytest.raises(StationarityError):
        ArSpec((0.6, 0.5)).check_stationary()
    with pytest.raises(StationarityError):
        acvf_ar(ArSpec((1.1,)), 2)


def test_spec_validation():
    with pytest.raises(ConfigError):
        ArSpec((0.5,), innovation_sd=0)
    with pytest.raises(ConfigError):
        MaSpec((0.1, 0.2, 0.3))
    with pytest.raises(ConfigError):
        ArSpec((np.nan,))


def test_ar_mean():
    assert ArSpec((0.5,), intercept=2.0).mean == pytest.approx(4.0)
    assert MaSpec((0.1, 0.2), intercept=3.0).mean == 3.0


@pytest.mark.parametrize("spec", [ArSpec((0.7,), 1.0), ArSpec((0.3, 0.3)), MaSpec((0.4, 0.6), -1.0)])
def test_simulation_moments(spec):
    x = simulate(spec, 200_000, np.random.default_rng(5))
    g = acvf(spec, 2)
    assert abs(x.mean() - spec.mean) < 5 * np.sqrt(g[0] / 200_000 * 20)
    xc = x - x.mean()
    emp = [xc[r:] @ xc[: len(xc) - r] / len(xc) for r in range(3)]
    np.testing.assert_allclose(emp, g, atol=0.05 * g[0])


def test_make_dataset_shapes_and_determinism():
    specs = [ArSpec((0.5,), 1.0)] * 3
    a = make_dataset(specs, ArSpec((0.5,)), 50, np.random.default_rng(1))
    b = make_dataset(specs, ArSpec((0.5,)), 50, np.random.default_rng(1))
    assert a.X.shape == (50, 4) and a.y.shape == (50,)
    assert np.all(a.X[:, 0] == 1)
    np.testing.assert_array_equal(a.y, b.y)
    np.testing.assert_array_equal(a.true_beta, np.zeros(4))


def test_make_dataset_beta():
    beta = np.array([1.0, -2.0])
    data = make_dataset([ArSpec(())], ArSpec(()), 30, np.random.default_rng(0), beta)
    u = data.y - data.X @ beta
    assert np.all(np.isfinite(u))
    with pytest.raises(ConfigError):
        make_dataset([ArSpec(())], ArSpec(()), 30, np.random.default_rng(0), [1.0])


def test_dataset_validation():
    X = np.column_stack([np.ones(5), np.arange(5.0)])
    with pytest.raises(DataError):
        RegressionDataset(y=np.zeros(5), X=X[:, ::-1])
    with pytest.raises(DataError):
        RegressionDataset(y=np.zeros(2), X=X[:2])
    with pytest.raises(DataError):
        RegressionDataset(y=np.r_[np.nan, np.zeros(4)], X=X)


def test_regressor_acvf_layout():
    g, mu = regressor_acvf([ArSpec((0.5,), 2.0), MaSpec((0.0, 0.6))], 2)
    assert g.shape == (3, 3, 3)
    np.testing.assert_allclose(mu, [1, 4, 0])
    assert np.all(g[:, 0, :] == 0) and g[0, 1, 2] == 0
    assert g[2, 2, 2] == pytest.approx(0.6)


@given(st.floats(-0.9, 0.9), st.floats(-3, 3), st.integers(0, 5))
@settings(max_examples=50, deadline=None)
def test_gamma_v_oracle_symmetry(phi, alpha, r):
    spec = ArSpec((phi,), alpha)
    gu = acvf(ArSpec((phi,)), 6)
    gX, mu = regressor_acvf([spec], 6)
    np.testing.assert_allclose(gamma_v_oracle(gu, gX, mu, -r), gamma_v_oracle(gu, gX, mu, r).T)
    g0 = gamma_v_oracle(gu, gX, mu, 0)
    assert np.all(np.linalg.eigvalsh(g0) >= -1e-9 * np.abs(g0).max())


def test_gamma_v_oracle_errors():
    gX, mu = regressor_acvf([ArSpec((0.5,))], 2)
    with pytest.raises(ConfigError):
        gamma_v_oracle(np.ones(3), gX, mu, 3)
    with pytest.raises(ConfigError):
        gamma_v_oracle(np.ones(3), gX, np.ones(3), 0)


def test_roots_are_polynomial_roots():
    spec = ArSpec((0.5, 0.3))
    np.testing.assert_allclose(np.sort(np.abs(spec.roots())), np.sort(np.abs(np.roots([-0.3, -0.5, 1]))))
    assert ArSpec((1e-320,)).is_stationary()

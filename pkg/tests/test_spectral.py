import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from cvhac.errors import ConfigError, NumericalError
from cvhac.spectral import (DEMEANED, STANDARD, dft, fourier_frequencies, idft, idft_real,
                            leave_one_out, leave_one_out_series, periodogram)


def direct_dft(V):
    """O(n^2) transform by explicit summation."""
    n = V.shape[0]
    t = np.arange(n)
    E = np.exp(-2j * np.pi * np.outer(t, t) / n)
    return E @ V / n


series = arrays(np.float64, st.tuples(st.integers(4, 40), st.integers(1, 4)),
                elements=st.floats(-1e3, 1e3, allow_nan=False))


@given(series)
@settings(max_examples=60, deadline=None)
def test_dft_matches_direct_sum(V):
    np.testing.assert_allclose(dft(V), direct_dft(V), atol=1e-9 * (1 + np.abs(V).max()))


@given(series)
@settings(max_examples=60, deadline=None)
def test_round_trip(V):
    np.testing.assert_allclose(idft_real(dft(V)), V, atol=1e-10 * (1 + np.abs(V).max()))


def test_zero_frequency_is_mean():
    V = np.random.default_rng(0).normal(size=(30, 3))
    np.testing.assert_allclose(dft(V)[0], V.mean(axis=0))


def test_fourier_frequencies():
    np.testing.assert_allclose(fourier_frequencies(4), [0, np.pi / 2, np.pi, 3 * np.pi / 2])


def test_periodogram_rank_one_psd():
    V = np.random.default_rng(1).normal(size=(16, 3))
    J = dft(V)
    I = periodogram(J)
    assert I.shape == (16, 3, 3)
    for j in range(16):
        np.testing.assert_allclose(I[j], I[j].conj().T)
        ev = np.linalg.eigvalsh(I[j])
        assert ev.min() > -1e-12
        assert np.sum(ev > 1e-10 * ev.max()) <= 1
    # Parseval: (2 pi / n) sum_j tr I_j = sum_t |V_t|^2 / n
    assert (2 * np.pi / 16) * np.trace(I.sum(axis=0)).real == pytest.approx((V ** 2).sum() / 16)


@given(series, st.data())
@settings(max_examples=80, deadline=None)
def test_leave_one_out_stays_real(V, data):
    n = V.shape[0]
    j = data.draw(st.integers(1, n - 1))
    for variant in (STANDARD, DEMEANED):
        out = idft(leave_one_out(dft(V), j, variant))
        assert np.max(np.abs(out.imag)) <= 1e-10 * (1 + np.abs(V).max())


def test_leave_one_out_standard_rule():
    V = np.random.default_rng(2).normal(size=(10, 2))
    J = dft(V)
    out = leave_one_out(J, 3)
    np.testing.assert_allclose(out[3], (J[2] + J[4]) / 2)
    np.testing.assert_allclose(out[7], (J[6] + J[8]) / 2)
    np.testing.assert_allclose(out[7], out[3].conj())
    untouched = [i for i in range(10) if i not in (3, 7)]
    np.testing.assert_array_equal(out[untouched], J[untouched])
    # j = 1 averages with the zero frequency
    np.testing.assert_allclose(leave_one_out(J, 1)[1], (J[0] + J[2]) / 2)


def test_leave_one_out_demeaned_edges():
    V = np.random.default_rng(3).normal(size=(9, 2))
    J = dft(V)
    out = leave_one_out(J, 1, DEMEANED)
    np.testing.assert_allclose(out[1], J[2])
    np.testing.assert_allclose(out[8], J[7])
    np.testing.assert_allclose(leave_one_out(J, 4, DEMEANED), leave_one_out(J, 4, STANDARD))


def test_leave_one_out_nyquist():
    V = np.random.default_rng(4).normal(size=(8, 1))
    J = dft(V)
    out = leave_one_out(J, 4)
    np.testing.assert_allclose(out[4], (J[3] + J[5]) / 2)
    assert abs(out[4].imag).max() < 1e-14


def test_leave_one_out_series_and_errors():
    V = np.random.default_rng(5).normal(size=(12, 2))
    J = dft(V)
    s = leave_one_out_series(J, 2)
    assert s.shape == V.shape and s.dtype == float
    for bad in (0, 12, -1):
        with pytest.raises(ConfigError):
            leave_one_out(J, bad)
    with pytest.raises(ConfigError):
        leave_one_out(J, 2, "other")
    with pytest.raises(ConfigError):
        dft(np.ones((1, 2)))


def test_idft_real_rejects_asymmetric():
    J = np.zeros((6, 1), dtype=complex)
    J[1] = 1j
    with pytest.raises(NumericalError):
        idft_real(J)
